#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace holonomy {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to (-pi, pi].
inline double canonical_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // lands in [-pi, pi]
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

// A point of U(1) stored as an unreduced angle accumulator. Keeping the raw
// sum of transition arguments and form integrals lets closed-surface flux
// computations recover integer winding (Chern) numbers; canonical() gives
// the group element.
class Phase {
 public:
  Phase() = default;
  static Phase from_angle(double a) {
    Phase p;
    p.angle_ = a;
    return p;
  }

  double accumulated() const { return angle_; }
  double canonical() const { return canonical_angle(angle_); }
  std::complex<double> unit() const {
    return {std::cos(angle_), std::sin(angle_)};
  }

  Phase& operator+=(const Phase& o) {
    angle_ += o.angle_;
    return *this;
  }
  Phase& operator-=(const Phase& o) {
    angle_ -= o.angle_;
    return *this;
  }
  friend Phase operator+(Phase a, const Phase& b) { return a += b; }
  friend Phase operator-(Phase a, const Phase& b) { return a -= b; }
  friend Phase operator-(Phase a) {
    a.angle_ = -a.angle_;
    return a;
  }

 private:
  double angle_ = 0.0;
};

// |canonical difference| between two phases, the U(1) distance in radians.
inline double phase_defect(const Phase& a, const Phase& b) {
  return std::abs(canonical_angle(a.accumulated() - b.accumulated()));
}

inline double phase_defect(const Phase& a, double b_angle) {
  return std::abs(canonical_angle(a.accumulated() - b_angle));
}

}  // namespace holonomy
