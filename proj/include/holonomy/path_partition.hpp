#pragma once

#include <functional>
#include <string>
#include <vector>

#include "holonomy/cech.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/phase.hpp"
#include "holonomy/vec.hpp"

namespace holonomy {

using PathFn = std::function<Vec(double)>;  // parameter -> ambient
using LoopFn = std::function<Vec(double)>;  // angle in [0, 2pi) -> ambient

// ---------------------------------------------------------------------------
// Labeled partition of an interval: breakpoints a = x_0 < ... < x_N = b with
// segment [x_{k}, x_{k+1}] labeled labels[k].
// ---------------------------------------------------------------------------

struct LabeledPathPartition {
  std::vector<double> breakpoints;
  std::vector<int> labels;

  int segments() const { return static_cast<int>(labels.size()); }
  double a() const { return breakpoints.front(); }
  double b() const { return breakpoints.back(); }

  void check_shape() const {
    if (labels.empty() || breakpoints.size() != labels.size() + 1)
      throw InvalidPartition("path partition shape");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (!(breakpoints[i] < breakpoints[i + 1]))
        throw InvalidPartition("breakpoints not strictly increasing");
  }

  LabeledPathPartition reversed() const {
    LabeledPathPartition r;
    double lo = a(), hi = b();
    for (auto it = breakpoints.rbegin(); it != breakpoints.rend(); ++it)
      r.breakpoints.push_back(lo + hi - *it);
    r.labels.assign(labels.rbegin(), labels.rend());
    return r;
  }
};

// Minimum membership margin of p over the partition, sampled at
// quadrature density plus a 4x denser audit grid.
inline double partition_min_margin(const PathFn& p, const LabeledPathPartition& T,
                                   const ChartCover& cover, int nodes_per_segment = 64) {
  T.check_shape();
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < T.segments(); ++s) {
    double x0 = T.breakpoints[s], x1 = T.breakpoints[s + 1];
    for (int q = 0; q <= nodes_per_segment; ++q) {
      double t = x0 + (x1 - x0) * q / nodes_per_segment;
      worst = std::min(worst, cover.margin(T.labels[s], p(t)));
    }
  }
  return worst;
}

inline bool partition_valid(const PathFn& p, const LabeledPathPartition& T,
                            const ChartCover& cover, int nodes_per_segment = 64) {
  return partition_min_margin(p, T, cover, nodes_per_segment) > 0;
}

namespace detail {

// The current chart's margin is positive at t_ok and non-positive at t_bad.
// Locate the crossing by bisection and back off toward t_ok until the
// breakpoint sits strictly inside both the outgoing and incoming charts.
template <class Curve>
double place_breakpoint(const Curve& c, const ChartCover& cover, int current, int next,
                        double t_ok, double t_bad) {
  double lo = t_ok, hi = t_bad;
  for (int it = 0; it < 50; ++it) {
    double mid = 0.5 * (lo + hi);
    (cover.margin(current, c(mid)) > 0 ? lo : hi) = mid;
  }
  double cut = 0.5 * (t_ok + lo);
  for (int it = 0; it < 60; ++it) {
    if (cover.margin(current, c(cut)) > 0 && cover.margin(next, c(cut)) > 0) return cut;
    cut = 0.5 * (cut + lo);  // creep toward the outgoing chart's boundary
  }
  return cut;  // post-hoc validity will reject if no strict point exists
}

}  // namespace detail

// Greedy sweep: keep the current label while its margin stays positive,
// break at margin crossings (bisected between the last valid and first
// invalid sample) and switch to the chart with maximal margin.
inline LabeledPathPartition build_path_partition(const PathFn& p, double a, double b,
                                                 const ChartCover& cover, int n_samples) {
  if (n_samples < 2) throw BadParameter("build_path_partition: n_samples >= 2 required");
  auto at = [&](int s) { return a + (b - a) * s / (n_samples - 1); };

  LabeledPathPartition T;
  int current = cover.best_chart(p(a));
  if (current < 0) throw NoCoveringChart("t = " + std::to_string(a));
  T.breakpoints.push_back(a);

  for (int s = 1; s < n_samples; ++s) {
    double t = at(s);
    Vec y = p(t);
    if (cover.margin(current, y) > 0) continue;
    int next = cover.best_chart(y);
    if (next < 0) throw NoCoveringChart("t = " + std::to_string(t));
    double cut = detail::place_breakpoint(p, cover, current, next, at(s - 1), t);
    T.breakpoints.push_back(cut);
    T.labels.push_back(current);
    current = next;
  }
  T.breakpoints.push_back(b);
  T.labels.push_back(current);

  if (!partition_valid(p, T, cover))
    throw ResolutionTooCoarse("build_path_partition: raise n_samples");
  return T;
}

// -------------------------- elementary moves -------------------------------

inline LabeledPathPartition refine_path(const LabeledPathPartition& T, int segment,
                                        double at = 0.5) {
  T.check_shape();
  if (segment < 0 || segment >= T.segments()) throw InvalidPartition("segment index");
  if (!(at > 0 && at < 1)) throw InvalidPartition("split fraction");
  LabeledPathPartition out = T;
  double cut = T.breakpoints[segment] +
               at * (T.breakpoints[segment + 1] - T.breakpoints[segment]);
  out.breakpoints.insert(out.breakpoints.begin() + segment + 1, cut);
  out.labels.insert(out.labels.begin() + segment, T.labels[segment]);
  return out;
}

inline LabeledPathPartition merge_path(const LabeledPathPartition& T, int segment) {
  T.check_shape();
  if (segment < 0 || segment + 1 >= T.segments()) throw InvalidPartition("segment index");
  if (T.labels[segment] != T.labels[segment + 1])
    throw InvalidPartition("merge_path requires equal adjacent labels");
  LabeledPathPartition out = T;
  out.breakpoints.erase(out.breakpoints.begin() + segment + 1);
  out.labels.erase(out.labels.begin() + segment);
  return out;
}

inline LabeledPathPartition relabel_path(const LabeledPathPartition& T, int segment,
                                         int new_label, const PathFn& p,
                                         const ChartCover& cover) {
  T.check_shape();
  if (segment < 0 || segment >= T.segments()) throw InvalidPartition("segment index");
  LabeledPathPartition out = T;
  out.labels[segment] = new_label;
  LabeledPathPartition probe;
  probe.breakpoints = {T.breakpoints[segment], T.breakpoints[segment + 1]};
  probe.labels = {new_label};
  if (!partition_valid(p, probe, cover))
    throw InvalidRelabel("segment image not inside chart " + std::to_string(new_label));
  return out;
}

inline LabeledPathPartition concat_partitions(const LabeledPathPartition& T,
                                              const LabeledPathPartition& T2) {
  T.check_shape();
  T2.check_shape();
  if (std::abs(T.b() - T2.a()) > 1e-12)
    throw InvalidPartition("concat_partitions: domains not adjacent");
  LabeledPathPartition out = T;
  out.breakpoints.insert(out.breakpoints.end(), T2.breakpoints.begin() + 1,
                         T2.breakpoints.end());
  out.labels.insert(out.labels.end(), T2.labels.begin(), T2.labels.end());
  return out;
}

// ---------------------------------------------------------------------------
// Labeled partition of the circle: cyclically ordered angles in [0, 2pi),
// arc k runs from angles[k] to angles[k+1 mod N] and carries labels[k].
// ---------------------------------------------------------------------------

struct LabeledLoopPartition {
  std::vector<double> angles;  // strictly increasing in [0, 2pi)
  std::vector<int> labels;     // label of the arc starting at angles[k]

  int arcs() const { return static_cast<int>(labels.size()); }

  void check_shape() const {
    if (labels.empty() || angles.size() != labels.size())
      throw InvalidPartition("loop partition shape");
    for (size_t i = 0; i + 1 < angles.size(); ++i)
      if (!(angles[i] < angles[i + 1]))
        throw InvalidPartition("loop angles not strictly increasing");
    if (!angles.empty() && (angles.front() < 0 || angles.back() >= kTwoPi))
      throw InvalidPartition("loop angles must lie in [0, 2pi)");
  }

  double arc_end(int k) const {
    return k + 1 < arcs() ? angles[k + 1] : angles[0] + kTwoPi;
  }

  int label_at(double angle) const {
    double a = angle - kTwoPi * std::floor(angle / kTwoPi);
    // arc containing a: last angles[k] <= a, wrapping below angles[0]
    int k = static_cast<int>(std::upper_bound(angles.begin(), angles.end(), a) -
                             angles.begin()) - 1;
    if (k < 0) k = arcs() - 1;
    return labels[k];
  }
};

inline double loop_partition_min_margin(const LoopFn& l, const LabeledLoopPartition& T,
                                        const ChartCover& cover, int nodes_per_arc = 64) {
  T.check_shape();
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < T.arcs(); ++k) {
    double a0 = T.angles[k], a1 = T.arc_end(k);
    for (int q = 0; q <= nodes_per_arc; ++q) {
      double t = a0 + (a1 - a0) * q / nodes_per_arc;
      worst = std::min(worst, cover.margin(T.labels[k], l(t)));
    }
  }
  return worst;
}

inline LabeledLoopPartition build_loop_partition(const LoopFn& l, const ChartCover& cover,
                                                 int n_samples) {
  if (n_samples < 2) throw BadParameter("build_loop_partition: n_samples >= 2 required");
  auto at = [&](int s) { return kTwoPi * s / n_samples; };

  std::vector<double> cuts;
  std::vector<int> labels;
  int current = cover.best_chart(l(0.0));
  if (current < 0) throw NoCoveringChart("angle 0");
  int first = current;
  cuts.push_back(0.0);
  labels.push_back(current);
  for (int s = 1; s <= n_samples; ++s) {
    double t = at(s);
    Vec y = l(t);
    if (cover.margin(current, y) > 0) continue;
    int next = cover.best_chart(y);
    if (next < 0) throw NoCoveringChart("angle " + std::to_string(t));
    double cut = detail::place_breakpoint(l, cover, current, next, at(s - 1), t);
    if (cut >= kTwoPi) cut -= kTwoPi;
    cuts.push_back(cut);
    labels.push_back(next);
    current = next;
  }

  LabeledLoopPartition T;
  if (current == first && labels.size() > 1 && cuts.size() > 1) {
    // wrapped back into the starting chart: drop the provisional cut at 0
    T.angles.assign(cuts.begin() + 1, cuts.end());
    T.labels.assign(labels.begin() + 1, labels.end());
  } else {
    T.angles = cuts;
    T.labels = labels;
  }
  // cuts past the wrap may break ordering; rotate into sorted order
  for (size_t i = 0; i + 1 < T.angles.size(); ++i)
    if (T.angles[i] >= T.angles[i + 1]) {
      std::rotate(T.angles.begin(), T.angles.begin() + i + 1, T.angles.end());
      std::rotate(T.labels.begin(), T.labels.begin() + i + 1, T.labels.end());
      break;
    }
  T.check_shape();
  if (loop_partition_min_margin(l, T, cover) <= 0)
    throw ResolutionTooCoarse("build_loop_partition: raise n_samples");
  return T;
}

// Cut a loop partition at angle `cut` (must not be interior to an arc label
// change) into a path partition on [cut, cut + 2pi].
inline LabeledPathPartition cut_loop_partition(const LabeledLoopPartition& T, double cut) {
  T.check_shape();
  LabeledPathPartition out;
  int n = T.arcs();
  // find the arc containing the cut
  int k0 = -1;
  for (int k = 0; k < n; ++k) {
    double a0 = T.angles[k], a1 = T.arc_end(k);
    double c = cut;
    if (c < a0) c += kTwoPi;
    if (c >= a0 && c < a1) {
      k0 = k;
      break;
    }
  }
  if (k0 < 0) throw InvalidPartition("cut angle not located");
  double base = cut;
  out.breakpoints.push_back(base);
  for (int s = 0; s < n; ++s) {
    int k = (k0 + s) % n;
    double end = T.arc_end(k);
    while (end <= base) end += kTwoPi;
    double stop = std::min(end, cut + kTwoPi);
    if (stop > base + 1e-15) {
      out.breakpoints.push_back(stop);
      out.labels.push_back(T.labels[k]);
      base = stop;
    }
  }
  if (std::abs(out.b() - (cut + kTwoPi)) > 1e-9)
    out.breakpoints.back() = cut + kTwoPi;
  return out;
}

}  // namespace holonomy
