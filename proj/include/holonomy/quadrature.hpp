#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "holonomy/errors.hpp"
#include "holonomy/vec.hpp"

namespace holonomy {

struct QuadConfig {
  int order_1d = 16;  // Gauss-Legendre points per segment
  int order_2d = 8;   // per axis on 2-D cells
  int order_3d = 5;   // per axis on 3-D bricks
  double tol = 1e-10;
  int max_depth = 12;
  bool adaptive = true;

  QuadConfig with_tol(double t) const {
    QuadConfig q = *this;
    q.tol = t;
    return q;
  }
  static QuadConfig fixed(int o1, int o2 = 8, int o3 = 5) {
    QuadConfig q;
    q.order_1d = o1;
    q.order_2d = o2;
    q.order_3d = o3;
    q.adaptive = false;
    return q;
  }
};

struct IntegralResult {
  double value = 0;
  double error_estimate = 0;

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    return *this;
  }
};

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes/weights on [-1,1], Newton on the recurrence.
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> x, w;
};

inline const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double z1, pp = 0;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > 1e-15);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace detail {

template <class F>
double gl_sum_1d(const F& f, double a, double b, int order) {
  const GaussRule& r = gauss_legendre(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < order; ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

// below this, refinement chases round-off (or finite-difference noise in
// reconstructed integrands) rather than truncation error
inline constexpr double kAdaptiveFloor = 1e-12;

template <class F>
IntegralResult adapt_1d(const F& f, double a, double b, double coarse,
                        double tol, int depth, const QuadConfig& cfg) {
  double m = 0.5 * (a + b);
  double left = gl_sum_1d(f, a, m, cfg.order_1d);
  double right = gl_sum_1d(f, m, b, cfg.order_1d);
  double fine = left + right;
  double err = std::abs(fine - coarse);
  if (err <= std::max(tol, kAdaptiveFloor * (1 + std::abs(fine)))) return {fine, err};
  if (depth >= cfg.max_depth)
    throw QuadratureNotConverged("1-D integral, residual " + std::to_string(err));
  IntegralResult out = adapt_1d(f, a, m, left, 0.5 * tol, depth + 1, cfg);
  out += adapt_1d(f, m, b, right, 0.5 * tol, depth + 1, cfg);
  return out;
}

}  // namespace detail

template <class F>
IntegralResult integrate_1d(const F& f, double a, double b, const QuadConfig& cfg) {
  double coarse = detail::gl_sum_1d(f, a, b, cfg.order_1d);
  if (!cfg.adaptive) return {coarse, 0};
  return detail::adapt_1d(f, a, b, coarse, cfg.tol, 0, cfg);
}

// ---------------------------------------------------------------------------
// Numeric derivatives of user maps: 4th-order central stencils, step scaled
// to the parameter range (maps expose point evaluation only).
// ---------------------------------------------------------------------------

inline constexpr double kMapDerivStep = 1e-5;

template <class C>
Vec curve_tangent(const C& c, double t, double step) {
  Vec f1 = c(t + step), f_1 = c(t - step);
  Vec f2 = c(t + 2 * step), f_2 = c(t - 2 * step);
  return (8.0 * (f1 - f_1) - (f2 - f_2)) / (12.0 * step);
}

// first derivative of a scalar family, 4th order
template <class F>
double scalar_deriv(const F& f, double t, double step) {
  return (8.0 * (f(t + step) - f(t - step)) - (f(t + 2 * step) - f(t - 2 * step))) /
         (12.0 * step);
}

template <class F>
double central_diff(const F& f, double t0, double h) {
  return (f(t0 + h) - f(t0 - h)) / (2.0 * h);
}

// 4-point second mixed difference d^2/dt du at (0,0)
template <class F2>
double central_diff_mixed(const F2& f, double ht, double hu) {
  return (f(ht, hu) - f(ht, -hu) - f(-ht, hu) + f(-ht, -hu)) / (4.0 * ht * hu);
}

// ---------------------------------------------------------------------------
// Pullback integrals. Forms are callables on ambient points and vectors;
// curves/patches/blocks are parameter -> ambient maps.
// ---------------------------------------------------------------------------

using Form1 = std::function<double(const Vec&, const Vec&)>;
using Form2 = std::function<double(const Vec&, const Vec&, const Vec&)>;
using Form3 = std::function<double(const Vec&, const Vec&, const Vec&, const Vec&)>;

template <class Curve>
IntegralResult integrate_pullback_1form(const Form1& form, const Curve& curve,
                                        double t0, double t1, const QuadConfig& cfg,
                                        double deriv_scale = 0) {
  double scale = deriv_scale > 0 ? deriv_scale : std::abs(t1 - t0);
  double step = kMapDerivStep * (scale > 0 ? scale : 1.0);
  auto f = [&](double t) {
    Vec p = curve(t);
    Vec v = curve_tangent(curve, t, step);
    return form(p, v);
  };
  return integrate_1d(f, t0, t1, cfg);
}

namespace detail {

template <class Patch>
double gl_sum_rect(const Form2& form, const Patch& X, double u0, double u1,
                   double v0, double v1, int order, double su, double sv) {
  const GaussRule& r = gauss_legendre(order);
  double um = 0.5 * (u0 + u1), uh = 0.5 * (u1 - u0);
  double vm = 0.5 * (v0 + v1), vh = 0.5 * (v1 - v0);
  double s = 0;
  for (int i = 0; i < order; ++i) {
    double u = um + uh * r.x[i];
    for (int j = 0; j < order; ++j) {
      double v = vm + vh * r.x[j];
      Vec p = X(u, v);
      Vec xu = curve_tangent([&](double t) { return X(t, v); }, u, su);
      Vec xv = curve_tangent([&](double t) { return X(u, t); }, v, sv);
      s += r.w[i] * r.w[j] * form(p, xu, xv);
    }
  }
  return s * uh * vh;
}

template <class Patch>
IntegralResult adapt_rect(const Form2& form, const Patch& X, double u0, double u1,
                          double v0, double v1, double coarse, double tol,
                          int depth, const QuadConfig& cfg, double su, double sv) {
  double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
  double q[4] = {
      gl_sum_rect(form, X, u0, um, v0, vm, cfg.order_2d, su, sv),
      gl_sum_rect(form, X, um, u1, v0, vm, cfg.order_2d, su, sv),
      gl_sum_rect(form, X, u0, um, vm, v1, cfg.order_2d, su, sv),
      gl_sum_rect(form, X, um, u1, vm, v1, cfg.order_2d, su, sv)};
  double fine = q[0] + q[1] + q[2] + q[3];
  double err = std::abs(fine - coarse);
  if (err <= std::max(tol, kAdaptiveFloor * (1 + std::abs(fine)))) return {fine, err};
  if (depth >= cfg.max_depth)
    throw QuadratureNotConverged("2-D cell integral, residual " + std::to_string(err));
  IntegralResult out;
  out += adapt_rect(form, X, u0, um, v0, vm, q[0], 0.25 * tol, depth + 1, cfg, su, sv);
  out += adapt_rect(form, X, um, u1, v0, vm, q[1], 0.25 * tol, depth + 1, cfg, su, sv);
  out += adapt_rect(form, X, u0, um, vm, v1, q[2], 0.25 * tol, depth + 1, cfg, su, sv);
  out += adapt_rect(form, X, um, u1, vm, v1, q[3], 0.25 * tol, depth + 1, cfg, su, sv);
  return out;
}

}  // namespace detail

template <class Patch>
IntegralResult integrate_pullback_2form(const Form2& form, const Patch& X,
                                        double u0, double u1, double v0, double v1,
                                        const QuadConfig& cfg,
                                        double deriv_scale_u = 0,
                                        double deriv_scale_v = 0) {
  double su = kMapDerivStep * (deriv_scale_u > 0 ? deriv_scale_u : std::abs(u1 - u0));
  double sv = kMapDerivStep * (deriv_scale_v > 0 ? deriv_scale_v : std::abs(v1 - v0));
  double coarse = detail::gl_sum_rect(form, X, u0, u1, v0, v1, cfg.order_2d, su, sv);
  if (!cfg.adaptive) return {coarse, 0};
  return detail::adapt_rect(form, X, u0, u1, v0, v1, coarse, cfg.tol, 0, cfg, su, sv);
}

// Triangle in parameter space, Duffy transform from the unit square. The
// signed parameter-area keeps the orientation of the (u,v) polygon.
template <class Patch>
IntegralResult integrate_pullback_2form_tri(const Form2& form, const Patch& X,
                                            const double p0[2], const double p1[2],
                                            const double p2[2], const QuadConfig& cfg,
                                            double deriv_scale_u,
                                            double deriv_scale_v, int depth = 0) {
  double e1u = p1[0] - p0[0], e1v = p1[1] - p0[1];
  double e2u = p2[0] - p1[0], e2v = p2[1] - p1[1];
  double signed_area2 = e1u * (p2[1] - p0[1]) - e1v * (p2[0] - p0[0]);
  double su = kMapDerivStep * deriv_scale_u;
  double sv = kMapDerivStep * deriv_scale_v;

  auto sample = [&](int order) {
    const GaussRule& r = gauss_legendre(order);
    double s = 0;
    for (int i = 0; i < order; ++i) {
      double x = 0.5 * (1 + r.x[i]);
      for (int j = 0; j < order; ++j) {
        double y = 0.5 * (1 + r.x[j]);
        double u = p0[0] + x * (e1u + y * e2u);
        double v = p0[1] + x * (e1v + y * e2v);
        Vec p = X(u, v);
        Vec xu = curve_tangent([&](double t) { return X(t, v); }, u, su);
        Vec xv = curve_tangent([&](double t) { return X(u, t); }, v, sv);
        s += 0.25 * r.w[i] * r.w[j] * x * signed_area2 * form(p, xu, xv);
      }
    }
    return s;
  };

  double coarse = sample(cfg.order_2d);
  if (!cfg.adaptive) return {coarse, 0};
  double fine = sample(cfg.order_2d + 4);
  double err = std::abs(fine - coarse);
  double accept = std::max(cfg.tol, detail::kAdaptiveFloor * (1 + std::abs(fine)));
  if (err <= accept || depth >= cfg.max_depth) {
    if (err > accept)
      throw QuadratureNotConverged("triangle integral, residual " + std::to_string(err));
    return {fine, err};
  }
  // midpoint 4-split
  double m01[2] = {0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])};
  double m12[2] = {0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1])};
  double m20[2] = {0.5 * (p2[0] + p0[0]), 0.5 * (p2[1] + p0[1])};
  QuadConfig sub = cfg.with_tol(0.25 * cfg.tol);
  IntegralResult out;
  out += integrate_pullback_2form_tri(form, X, p0, m01, m20, sub, deriv_scale_u, deriv_scale_v, depth + 1);
  out += integrate_pullback_2form_tri(form, X, m01, p1, m12, sub, deriv_scale_u, deriv_scale_v, depth + 1);
  out += integrate_pullback_2form_tri(form, X, m20, m12, p2, sub, deriv_scale_u, deriv_scale_v, depth + 1);
  out += integrate_pullback_2form_tri(form, X, m12, m20, m01, sub, deriv_scale_u, deriv_scale_v, depth + 1);
  return out;
}

namespace detail {

template <class Block>
double gl_sum_box(const Form3& form, const Block& X, const double lo[3],
                  const double hi[3], int order, const double step[3]) {
  const GaussRule& r = gauss_legendre(order);
  double m[3], h[3];
  for (int d = 0; d < 3; ++d) {
    m[d] = 0.5 * (lo[d] + hi[d]);
    h[d] = 0.5 * (hi[d] - lo[d]);
  }
  double s = 0;
  for (int i = 0; i < order; ++i) {
    double u = m[0] + h[0] * r.x[i];
    for (int j = 0; j < order; ++j) {
      double v = m[1] + h[1] * r.x[j];
      for (int k = 0; k < order; ++k) {
        double w = m[2] + h[2] * r.x[k];
        Vec p = X(u, v, w);
        Vec xu = curve_tangent([&](double t) { return X(t, v, w); }, u, step[0]);
        Vec xv = curve_tangent([&](double t) { return X(u, t, w); }, v, step[1]);
        Vec xw = curve_tangent([&](double t) { return X(u, v, t); }, w, step[2]);
        s += r.w[i] * r.w[j] * r.w[k] * form(p, xu, xv, xw);
      }
    }
  }
  return s * h[0] * h[1] * h[2];
}

template <class Block>
IntegralResult adapt_box(const Form3& form, const Block& X, const double lo[3],
                         const double hi[3], double coarse, double tol, int depth,
                         const QuadConfig& cfg, const double step[3]) {
  double mid[3] = {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
  double parts[8];
  double fine = 0;
  double sub_lo[8][3], sub_hi[8][3];
  for (int c = 0; c < 8; ++c) {
    for (int d = 0; d < 3; ++d) {
      bool upper = (c >> d) & 1;
      sub_lo[c][d] = upper ? mid[d] : lo[d];
      sub_hi[c][d] = upper ? hi[d] : mid[d];
    }
    parts[c] = gl_sum_box(form, X, sub_lo[c], sub_hi[c], cfg.order_3d, step);
    fine += parts[c];
  }
  double err = std::abs(fine - coarse);
  if (err <= std::max(tol, kAdaptiveFloor * (1 + std::abs(fine)))) return {fine, err};
  if (depth >= cfg.max_depth)
    throw QuadratureNotConverged("3-D cell integral, residual " + std::to_string(err));
  IntegralResult out;
  for (int c = 0; c < 8; ++c)
    out += adapt_box(form, X, sub_lo[c], sub_hi[c], parts[c], tol / 8, depth + 1, cfg, step);
  return out;
}

}  // namespace detail

template <class Block>
IntegralResult integrate_pullback_3form(const Form3& form, const Block& X,
                                        const double lo[3], const double hi[3],
                                        const QuadConfig& cfg,
                                        const double* deriv_scales = nullptr) {
  double step[3];
  for (int d = 0; d < 3; ++d) {
    double s = deriv_scales ? deriv_scales[d] : std::abs(hi[d] - lo[d]);
    step[d] = kMapDerivStep * (s > 0 ? s : 1.0);
  }
  double coarse = detail::gl_sum_box(form, X, lo, hi, cfg.order_3d, step);
  if (!cfg.adaptive) return {coarse, 0};
  return detail::adapt_box(form, X, lo, hi, coarse, cfg.tol, 0, cfg, step);
}

}  // namespace holonomy
