#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace holonomy {

// Small fixed-capacity ambient vector. Ambient spaces in this library are
// R^2 (circle), R^3 (sphere, box) and R^4 (flat torus), so capacity 4.
class Vec {
 public:
  static constexpr int kMaxDim = 4;

  Vec() = default;
  explicit Vec(int dim) : n_(dim) { assert(dim >= 0 && dim <= kMaxDim); }
  Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
    assert(n_ <= kMaxDim);
    int i = 0;
    for (double x : xs) x_[i++] = x;
  }

  static Vec zero(int dim) { return Vec(dim); }
  static Vec axis(int dim, int d, double s = 1.0) {
    Vec v(dim);
    v[d] = s;
    return v;
  }

  int dim() const { return n_; }
  double operator[](int i) const { return x_[i]; }
  double& operator[](int i) { return x_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n_; ++i) x_[i] += o.x_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n_; ++i) x_[i] -= o.x_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n_; ++i) x_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += x_[i] * o.x_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec normalized() const { return *this / norm(); }

  double dist(const Vec& o) const { return (*this - o).norm(); }

 private:
  std::array<double, kMaxDim> x_{};
  int n_ = 0;
};

}  // namespace holonomy
