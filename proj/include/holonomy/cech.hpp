#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/errors.hpp"
#include "holonomy/parallel.hpp"
#include "holonomy/phase.hpp"
#include "holonomy/quadrature.hpp"
#include "holonomy/vec.hpp"

namespace holonomy {

// ---------------------------------------------------------------------------
// Chart covers. Charts are presented through an ambient embedding with a
// signed-margin membership function (>0 inside). The cover also carries the
// geometry's retraction ambient -> manifold, used by finite-difference
// checks and by reconstruction short paths. Contractibility of the finite
// intersections is a modeling obligation on the geometry author; it is not
// verified here.
// ---------------------------------------------------------------------------

struct Chart {
  std::function<double(const Vec&)> membership;  // signed margin
  std::vector<Vec> samples;                      // points with positive margin
};

struct ChartCover {
  int ambient_dim = 0;
  int manifold_dim = 0;
  std::vector<Chart> charts;
  std::function<Vec(const Vec&)> projection;  // retraction onto M; identity if unset
  // Pairs whose overlap is promised nonempty; checkers fail hard when a
  // declared pair has no shared sample.
  std::vector<std::pair<int, int>> declared_pairs;

  int size() const { return static_cast<int>(charts.size()); }

  double margin(int i, const Vec& y) const { return charts[i].membership(y); }
  bool inside(int i, const Vec& y) const { return margin(i, y) > 0; }

  Vec project(const Vec& y) const { return projection ? projection(y) : y; }

  // chart with maximal margin, ties to the smallest index; -1 if none positive
  int best_chart(const Vec& y) const {
    int best = -1;
    double bm = 0;
    for (int i = 0; i < size(); ++i) {
      double m = margin(i, y);
      if (m > bm) {
        bm = m;
        best = i;
      }
    }
    return best;
  }

  std::vector<Vec> all_samples() const {
    std::vector<Vec> out;
    for (const Chart& c : charts) out.insert(out.end(), c.samples.begin(), c.samples.end());
    return out;
  }

  // samples lying in every chart of `idx` (with strictly positive margin)
  std::vector<Vec> overlap_samples(const std::vector<int>& idx) const {
    std::vector<Vec> out;
    for (int holder : idx) {
      for (const Vec& y : charts[holder].samples) {
        bool ok = true;
        for (int i : idx)
          if (!inside(i, y)) {
            ok = false;
            break;
          }
        if (ok) out.push_back(y);
      }
    }
    // de-duplicate points contributed by several holders
    std::vector<Vec> dedup;
    for (const Vec& y : out) {
      bool seen = false;
      for (const Vec& z : dedup)
        if (y.dist(z) < 1e-12) {
          seen = true;
          break;
        }
      if (!seen) dedup.push_back(y);
    }
    return dedup;
  }
};

// ---------------------------------------------------------------------------
// Cech data packages. Forms are real-valued; the factor i from the
// connection convention is applied inside the transport evaluators.
// ---------------------------------------------------------------------------

inline constexpr double kUnitTol = 1e-6;     // |g| drift that trips NonUnitTransition
inline constexpr double kDefaultFdStep = 1e-4;
inline constexpr double kDefaultCocycleTol = 1e-6;

struct BundleData {
  ChartCover cover;
  // g(i, j, y): transition function on U_ij, unit complex
  std::function<std::complex<double>(int, int, const Vec&)> g;
  // A(j, y, v): local connection 1-form, linear in v
  std::function<double(int, const Vec&, const Vec&)> A;
  // optional analytic curvature F(k, y, u, v) = dA_k(u, v)
  std::function<double(int, const Vec&, const Vec&, const Vec&)> F_analytic;

  double arg_g(int i, int j, const Vec& y) const {
    if (i == j) return 0.0;
    std::complex<double> z = g(i, j, y);
    double mag = std::abs(z);
    if (std::abs(mag - 1.0) > kUnitTol)
      throw NonUnitTransition("chart pair (" + std::to_string(i) + "," + std::to_string(j) +
                              "), |g| = " + std::to_string(mag));
    return std::arg(z);  // renormalized to the unit circle by construction
  }
};

struct GerbeData {
  ChartCover cover;
  // g3(i, j, k, y): transition function on U_ijk
  std::function<std::complex<double>(int, int, int, const Vec&)> g3;
  // A2(j, k, y, v): overlap connection 1-form, antisymmetric in (j, k)
  std::function<double(int, int, const Vec&, const Vec&)> A2;
  // F(k, y, u, v): local curving 2-form, antisymmetric in (u, v)
  std::function<double(int, const Vec&, const Vec&, const Vec&)> F;
  // optional analytic curvature G(k, y, u, v, w) = dF_k
  std::function<double(int, const Vec&, const Vec&, const Vec&, const Vec&)> G_analytic;

  // G1 short-circuit: repeated indices contribute exactly zero phase.
  double arg_g3(int i, int j, int k, const Vec& y) const {
    if (i == j || j == k || i == k) return 0.0;
    std::complex<double> z = g3(i, j, k, y);
    double mag = std::abs(z);
    if (std::abs(mag - 1.0) > kUnitTol)
      throw NonUnitTransition("chart triple (" + std::to_string(i) + "," + std::to_string(j) +
                              "," + std::to_string(k) + "), |g3| = " + std::to_string(mag));
    return std::arg(z);
  }
};

// ---------------------------------------------------------------------------
// Residual reports
// ---------------------------------------------------------------------------

struct BundleCocycleReport {
  double b1_max = 0;   // |g_ij g_jk - g_ik|, plus g_ii = 1 and g_ji = 1/g_ij
  double b2_max = 0;   // |(A_k - A_j)(v) - d arg g_jk(v)|
  bool pass = false;
  std::vector<std::string> notes;  // degenerate overlaps etc.
};

struct GerbeCocycleReport {
  double g1_max = 0;
  double g2_max = 0;
  double g3_max = 0;
  double g4_max = 0;
  bool pass = false;
  std::vector<std::string> notes;
};

namespace detail {

// Discrete frame near y: push ambient coordinate axes through the retraction.
// These are the pushforwards of commuting coordinate fields, so finite
// differences along them approximate exterior derivatives to O(h^2).
inline std::vector<Vec> projected_frame(const ChartCover& cover, const Vec& y, double h) {
  std::vector<Vec> frame;
  int n = cover.ambient_dim;
  for (int d = 0; d < n; ++d) {
    Vec e = Vec::axis(n, d);
    Vec t = (cover.project(y + h * e) - cover.project(y - h * e)) / (2 * h);
    frame.push_back(t);
  }
  return frame;
}

// directional derivative of a scalar field along the projected line y +- h e_d
template <class F>
double proj_dir_deriv(const ChartCover& cover, const F& f, const Vec& y, int d, double h) {
  Vec e = Vec::axis(cover.ambient_dim, d);
  return (f(cover.project(y + h * e)) - f(cover.project(y - h * e))) / (2 * h);
}

// same, with angle unwrapping across the stencil
template <class F>
double proj_dir_deriv_angle(const ChartCover& cover, const F& arg_f, const Vec& y, int d,
                            double h) {
  Vec e = Vec::axis(cover.ambient_dim, d);
  double plus = arg_f(cover.project(y + h * e));
  double minus = arg_f(cover.project(y - h * e));
  return canonical_angle(plus - minus) / (2 * h);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// check_bundle_cocycle: B1 on triple overlaps, B2 = i(A_k - A_j) = d log g_jk
// on pair overlaps with d log by central differences on the argument.
// ---------------------------------------------------------------------------

inline BundleCocycleReport check_bundle_cocycle(const BundleData& data, double tol = kDefaultCocycleTol,
                                                double h = kDefaultFdStep, int threads = 1) {
  const ChartCover& cover = data.cover;
  int n = cover.size();
  BundleCocycleReport rep;

  // identity and antisymmetry, folded into the B1 residual
  for (int i = 0; i < n; ++i)
    for (const Vec& y : cover.charts[i].samples)
      rep.b1_max = std::max(rep.b1_max, std::abs(data.g(i, i, y) - 1.0));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto ys = cover.overlap_samples({i, j});
      if (ys.empty()) {
        bool declared = false;
        for (auto& p : cover.declared_pairs)
          declared |= (p.first == i && p.second == j) || (p.first == j && p.second == i);
        if (declared)
          throw EmptyOverlapSamples("declared overlap (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") has no sample point");
        rep.notes.push_back("degenerate overlap (" + std::to_string(i) + "," +
                            std::to_string(j) + "): no samples");
        continue;
      }
      for (const Vec& y : ys)
        rep.b1_max = std::max(rep.b1_max, std::abs(data.g(i, j, y) * data.g(j, i, y) - 1.0));
    }

  // B1 proper on distinct triples
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        for (const Vec& y : cover.overlap_samples({i, j, k}))
          rep.b1_max = std::max(rep.b1_max,
                                std::abs(data.g(i, j, y) * data.g(j, k, y) - data.g(i, k, y)));
      }

  // B2 on ordered pairs
  struct Task {
    int j, k;
    Vec y;
  };
  std::vector<Task> tasks;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      for (const Vec& y : cover.overlap_samples({j, k}))
        if (cover.margin(j, y) > 2 * h && cover.margin(k, y) > 2 * h)
          tasks.push_back({j, k, y});
    }
  std::vector<double> res(tasks.size(), 0.0);
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int t) {
    const Task& task = tasks[t];
    auto frame = detail::projected_frame(cover, task.y, h);
    double worst = 0;
    for (int d = 0; d < cover.ambient_dim; ++d) {
      double lhs = data.A(task.k, task.y, frame[d]) - data.A(task.j, task.y, frame[d]);
      double rhs = detail::proj_dir_deriv_angle(
          cover, [&](const Vec& p) { return data.arg_g(task.j, task.k, p); }, task.y, d, h);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    res[t] = worst;
  });
  for (double r : res) rep.b2_max = std::max(rep.b2_max, r);

  rep.pass = rep.b1_max <= tol && rep.b2_max <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// check_gerbe_cocycle: G1 on repeated-index triples, G2 on quadruples
// (repeated-index quadruples encode cyclic consistency), G3 with d log g3 by
// finite differences, G4 with dA2 by differences of the 1-form on the
// projected coordinate 2-frame.
// ---------------------------------------------------------------------------

inline GerbeCocycleReport check_gerbe_cocycle(const GerbeData& data, double tol = kDefaultCocycleTol,
                                              double h = kDefaultFdStep, int threads = 1) {
  const ChartCover& cover = data.cover;
  int n = cover.size();
  GerbeCocycleReport rep;

  // G1: repeated indices give exactly 1
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      auto ys = (i == k) ? cover.charts[i].samples : cover.overlap_samples({i, k});
      for (const Vec& y : ys) {
        rep.g1_max = std::max(rep.g1_max, std::abs(data.g3(i, i, k, y) - 1.0));
        rep.g1_max = std::max(rep.g1_max, std::abs(data.g3(i, k, i, y) - 1.0));
        rep.g1_max = std::max(rep.g1_max, std::abs(data.g3(k, i, i, y) - 1.0));
      }
    }

  // G2 over all quadruples (repeated indices included; with G1 they encode
  // the cyclic/inversion behavior of g3)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          std::vector<int> idx = {i, j, k, l};
          std::sort(idx.begin(), idx.end());
          idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
          if (idx.size() <= 1) continue;
          for (const Vec& y : cover.overlap_samples(idx)) {
            std::complex<double> lhs = data.g3(i, j, k, y) * data.g3(i, k, l, y);
            std::complex<double> rhs = data.g3(j, k, l, y) * data.g3(i, j, l, y);
            rep.g2_max = std::max(rep.g2_max, std::abs(lhs - rhs));
          }
        }

  // G3: i(A_jk + A_kl + A_lj) = -d log g_jkl, all ordered triples
  struct T3 {
    int j, k, l;
    Vec y;
  };
  std::vector<T3> t3;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        if (j == k && k == l) {
          for (const Vec& y : cover.charts[j].samples)
            if (cover.margin(j, y) > 2 * h) t3.push_back({j, k, l, y});
          continue;
        }
        std::vector<int> idx = {j, k, l};
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        for (const Vec& y : cover.overlap_samples(idx)) {
          bool deep = true;
          for (int c : idx) deep &= cover.margin(c, y) > 2 * h;
          if (deep) t3.push_back({j, k, l, y});
        }
      }
  std::vector<double> res3(t3.size(), 0.0);
  parallel_for(static_cast<int>(t3.size()), threads, [&](int t) {
    const T3& task = t3[t];
    auto frame = detail::projected_frame(cover, task.y, h);
    double worst = 0;
    for (int d = 0; d < cover.ambient_dim; ++d) {
      double lhs = data.A2(task.j, task.k, task.y, frame[d]) +
                   data.A2(task.k, task.l, task.y, frame[d]) +
                   data.A2(task.l, task.j, task.y, frame[d]);
      double rhs = -detail::proj_dir_deriv_angle(
          cover, [&](const Vec& p) { return data.arg_g3(task.j, task.k, task.l, p); },
          task.y, d, h);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    res3[t] = worst;
  });
  for (double r : res3) rep.g3_max = std::max(rep.g3_max, r);

  // G4: F_k - F_j = dA_jk on pair overlaps
  struct T4 {
    int j, k;
    Vec y;
  };
  std::vector<T4> t4;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      for (const Vec& y : cover.overlap_samples({j, k}))
        if (cover.margin(j, y) > 2 * h && cover.margin(k, y) > 2 * h) t4.push_back({j, k, y});
    }
  std::vector<double> res4(t4.size(), 0.0);
  parallel_for(static_cast<int>(t4.size()), threads, [&](int t) {
    const T4& task = t4[t];
    // tangent frame fixed at the base point; extending tangent vectors
    // through the retraction gives commuting fields to O(h^2)
    auto frame = detail::projected_frame(cover, task.y, h);
    auto push = [&](const Vec& p, const Vec& w) {
      return (cover.project(p + h * w) - cover.project(p - h * w)) / (2 * h);
    };
    auto dir = [&](const Vec& w, auto&& f) {
      return (f(cover.project(task.y + h * w)) - f(cover.project(task.y - h * w))) /
             (2 * h);
    };
    int n_amb = cover.ambient_dim;
    double worst = 0;
    for (int d1 = 0; d1 < n_amb; ++d1)
      for (int d2 = d1 + 1; d2 < n_amb; ++d2) {
        const Vec& w1 = frame[d1];
        const Vec& w2 = frame[d2];
        auto a_of = [&](const Vec& w) {
          return [&, w](const Vec& p) { return data.A2(task.j, task.k, p, push(p, w)); };
        };
        double d_a = dir(w1, a_of(w2)) - dir(w2, a_of(w1));
        double lhs = data.F(task.k, task.y, w1, w2) - data.F(task.j, task.y, w1, w2);
        worst = std::max(worst, std::abs(lhs - d_a));
      }
    res4[t] = worst;
  });
  for (double r : res4) rep.g4_max = std::max(rep.g4_max, r);

  rep.pass = rep.g1_max <= tol && rep.g2_max <= tol && rep.g3_max <= tol && rep.g4_max <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Curvature by central finite differences. The frame vectors are pushed
// through the retraction so the difference quotients live on M.
// ---------------------------------------------------------------------------

inline double bundle_curvature(const BundleData& data, int chart, const Vec& y,
                               const Vec& u, const Vec& v, double h = kDefaultFdStep) {
  const ChartCover& cover = data.cover;
  double scale = std::max(u.norm(), v.norm());
  if (cover.margin(chart, y) <= h * scale)
    throw PointOutsideChart("bundle_curvature: margin too small in chart " +
                            std::to_string(chart));
  auto push = [&](const Vec& p, const Vec& w) {
    return (cover.project(p + h * w) - cover.project(p - h * w)) / (2 * h);
  };
  auto a_of = [&](const Vec& w) {
    return [&, w](const Vec& p) { return data.A(chart, p, push(p, w)); };
  };
  auto dir = [&](const Vec& w, auto&& f) {
    return (f(cover.project(y + h * w)) - f(cover.project(y - h * w))) / (2 * h);
  };
  return dir(u, a_of(v)) - dir(v, a_of(u));
}

inline double gerbe_curvature(const GerbeData& data, int chart, const Vec& y,
                              const Vec& u, const Vec& v, const Vec& w,
                              double h = kDefaultFdStep) {
  const ChartCover& cover = data.cover;
  double scale = std::max({u.norm(), v.norm(), w.norm()});
  if (cover.margin(chart, y) <= h * scale)
    throw PointOutsideChart("gerbe_curvature: margin too small in chart " +
                            std::to_string(chart));
  auto push = [&](const Vec& p, const Vec& t) {
    return (cover.project(p + h * t) - cover.project(p - h * t)) / (2 * h);
  };
  auto f_of = [&](const Vec& a, const Vec& b) {
    return [&, a, b](const Vec& p) { return data.F(chart, p, push(p, a), push(p, b)); };
  };
  auto dir = [&](const Vec& t, auto&& f) {
    return (f(cover.project(y + h * t)) - f(cover.project(y - h * t))) / (2 * h);
  };
  // dF(u,v,w) = u[F(v,w)] - v[F(u,w)] + w[F(u,v)] for commuting extensions
  return dir(u, f_of(v, w)) - dir(v, f_of(u, w)) + dir(w, f_of(u, v));
}

}  // namespace holonomy
