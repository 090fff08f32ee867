#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "holonomy/catalog.hpp"
#include "holonomy/mesh_builders.hpp"
#include "holonomy/path_partition.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/transport_bundle.hpp"
#include "holonomy/transport_gerbe.hpp"

namespace holonomy {

struct AxiomReport {
  std::vector<std::pair<std::string, double>> defects;  // max defect per axiom
  std::vector<std::string> failures;                    // "axiom@trial"
  double tol = 0;

  void record(const std::string& axiom, double defect, int trial) {
    for (auto& [name, worst] : defects)
      if (name == axiom) {
        worst = std::max(worst, defect);
        if (defect > tol) failures.push_back(axiom + "@" + std::to_string(trial));
        return;
      }
    defects.push_back({axiom, defect});
    if (defect > tol) failures.push_back(axiom + "@" + std::to_string(trial));
  }
  double max_defect() const {
    double m = 0;
    for (auto& [name, worst] : defects) m = std::max(m, worst);
    return m;
  }
  double defect(const std::string& axiom) const {
    for (auto& [name, worst] : defects)
      if (name == axiom) return worst;
    return 0;
  }
  bool pass() const { return failures.empty(); }
};

// ---------------------------------------------------------------------------
// Random helpers
// ---------------------------------------------------------------------------

namespace detail {

// smooth increasing bijection of [a,b] fixing the endpoints
inline std::function<double(double)> random_reparametrization(Rng& rng, double a, double b) {
  double c1 = rng.uniform(-0.2, 0.2), c2 = rng.uniform(-0.1, 0.1), c3 = rng.uniform(-0.06, 0.06);
  return [a, b, c1, c2, c3](double x) {
    double s = (x - a) / (b - a);
    double bump = c1 * std::sin(std::numbers::pi * s) +
                  c2 * std::sin(2 * std::numbers::pi * s) +
                  c3 * std::sin(3 * std::numbers::pi * s);
    return x + (b - a) * bump / std::numbers::pi;
  };
}

inline double invert_monotone(const std::function<double(double)>& f, double y, double lo,
                              double hi) {
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline LabeledLoopPartition ensure_two_arcs(const LabeledLoopPartition& T) {
  if (T.arcs() >= 2) return T;
  LabeledLoopPartition out = T;
  double extra = T.angles[0] + std::numbers::pi;
  if (extra >= kTwoPi) extra -= kTwoPi;
  if (extra > T.angles[0]) {
    out.angles.push_back(extra);
    out.labels.push_back(T.labels[0]);
  } else {
    out.angles.insert(out.angles.begin(), extra);
    out.labels.insert(out.labels.begin(), T.labels[0]);
  }
  return out;
}

// random same-label refinements plus valid relabels of a loop partition
inline LabeledLoopPartition jitter_loop_partition(Rng& rng, const LoopFn& l,
                                                  const LabeledLoopPartition& T,
                                                  const ChartCover& cover) {
  LabeledLoopPartition out = ensure_two_arcs(T);
  for (int pass = 0; pass < 2; ++pass) {
    int k = rng.uniform_int(0, out.arcs() - 1);
    double a0 = out.angles[k], a1 = out.arc_end(k);
    double cut = a0 + (0.3 + 0.4 * rng.uniform()) * (a1 - a0);
    if (cut >= kTwoPi) cut -= kTwoPi;
    LabeledLoopPartition next;
    for (int i = 0; i < out.arcs(); ++i) {
      next.angles.push_back(out.angles[i]);
      next.labels.push_back(out.labels[i]);
      if (i == k && cut > out.angles[i]) {
        next.angles.push_back(cut);
        next.labels.push_back(out.labels[i]);
      }
    }
    if (cut < next.angles.front()) {
      next.angles.insert(next.angles.begin(), cut);
      next.labels.insert(next.labels.begin(), out.labels.back());
    }
    out = next;
  }
  // attempt a relabel on one arc
  int k = rng.uniform_int(0, out.arcs() - 1);
  int trial_label = rng.uniform_int(0, cover.size() - 1);
  LabeledLoopPartition relabeled = out;
  relabeled.labels[k] = trial_label;
  LabeledLoopPartition probe;
  probe.angles = {out.angles[k], out.arc_end(k) >= kTwoPi ? out.arc_end(k) - kTwoPi
                                                          : out.arc_end(k)};
  if (probe.angles[0] < probe.angles[1]) {
    probe.labels = {trial_label, trial_label};
    if (loop_partition_min_margin(l, probe, cover, 32) > 0) out = relabeled;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Realizations used by the 2-D axioms
// ---------------------------------------------------------------------------

// The annulus (L, T u T') of Prop 2 c): L(a, x) = l(a), inner decomposition T
// on the x > 1/2 side (the side on the left of the loop).
inline SurfaceObject annulus_transition_object(const LoopFn& l,
                                               const LabeledLoopPartition& T_inner,
                                               const LabeledLoopPartition& T_outer) {
  LabeledLoopPartition inner = detail::ensure_two_arcs(T_inner);
  LabeledLoopPartition outer = detail::ensure_two_arcs(T_outer);
  for (double& a : outer.angles)
    for (double b : inner.angles)
      if (std::abs(canonical_angle(a - b)) < 1e-12) {
        a += kGeneralPositionEps;
        if (a >= kTwoPi) a -= kTwoPi;
      }
  std::vector<size_t> order(outer.angles.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return outer.angles[x] < outer.angles[y]; });
  LabeledLoopPartition outer_sorted;
  for (size_t i : order) {
    outer_sorted.angles.push_back(outer.angles[i]);
    outer_sorted.labels.push_back(outer.labels[i]);
  }

  std::vector<BandSpec> bands;
  bands.push_back({0.0, 0.5, outer_sorted.angles, false});
  bands.push_back({0.5, 1.0, inner.angles, false});
  SurfacePartition mesh = build_banded_mesh(0, kTwoPi, true, bands, false);
  // faces are created band by band in break order
  int f = 0;
  for (int k = 0; k < outer_sorted.arcs(); ++k) mesh.faces[f++].label = outer_sorted.labels[k];
  for (int k = 0; k < inner.arcs(); ++k) mesh.faces[f++].label = inner.labels[k];

  SurfaceObject so;
  so.mesh = mesh;
  so.X = [l](int, double u, double) { return l(u); };
  return so;
}

// Product cylinder of Prop 2 b): one band of full-height strips.
inline SurfaceObject product_cylinder_object(const LoopFn& l, const LabeledLoopPartition& T) {
  LabeledLoopPartition strips = detail::ensure_two_arcs(T);
  std::vector<BandSpec> bands = {{0.0, 1.0, strips.angles, false}};
  SurfacePartition mesh = build_banded_mesh(0, kTwoPi, true, bands, false);
  for (int k = 0; k < strips.arcs(); ++k) mesh.faces[k].label = strips.labels[k];
  SurfaceObject so;
  so.mesh = mesh;
  so.X = [l](int, double u, double) { return l(u); };
  return so;
}

// ---------------------------------------------------------------------------
// Torus gluing pair: the same map evaluated on the closed torus and on the
// cut-open cylinder, plus the loop transition along the cut circle v = v_c.
// The inner partition is the side with v > v_c (left of the +u traversal).
// ---------------------------------------------------------------------------

struct TorusCutPair {
  SurfaceObject closed;    // torus mesh
  SurfaceObject cut_open;  // cylinder over [v_c, v_c + 2pi]
  LoopTransition seam;
};

inline TorusCutPair make_torus_cut_pair(const PatchMap& X, const ChartCover& cover, int nu,
                                        int nv, int cut_row) {
  if (nv % 2) ++nv;
  TorusCutPair pair;
  auto row_offset = [](int j) { return (j % 2) * 0.5; };
  double dv = kTwoPi / nv;
  double v_c = cut_row * dv;

  std::vector<BandSpec> closed_bands, open_bands;
  for (int j = 0; j < nv; ++j)
    closed_bands.push_back({j * dv, (j + 1) * dv,
                            staggered_breaks(0, kTwoPi, nu, row_offset(j), true), false});
  for (int s = 0; s < nv; ++s) {
    int j = (cut_row + s) % nv;
    open_bands.push_back({v_c + s * dv, v_c + (s + 1) * dv,
                          staggered_breaks(0, kTwoPi, nu, row_offset(j), true), false});
  }
  pair.closed.mesh = build_banded_mesh(0, kTwoPi, true, closed_bands, true);
  pair.closed.X = X;
  label_faces_greedy(pair.closed.mesh, pair.closed.X, cover);
  pair.cut_open.mesh = build_banded_mesh(0, kTwoPi, true, open_bands, false);
  pair.cut_open.X = X;
  label_faces_greedy(pair.cut_open.mesh, pair.cut_open.X, cover);

  // label partitions of the two sides of the cut, read off the open bands
  auto side_partition = [&](int band_row, int face_offset) {
    LabeledLoopPartition T;
    const BandSpec& band = open_bands[band_row];
    for (size_t k = 0; k < band.breaks.size(); ++k) {
      T.angles.push_back(band.breaks[k]);
      T.labels.push_back(pair.cut_open.mesh.faces[face_offset + static_cast<int>(k)].label);
    }
    return T;
  };
  int faces_per_row = nu;
  pair.seam.loop = [X, v_c](double a) { return X(0, a, v_c); };
  pair.seam.inner = side_partition(0, 0);  // v just above v_c
  int top_offset = faces_per_row * (nv - 1);
  pair.seam.outer = side_partition(nv - 1, top_offset);  // v just below v_c
  pair.seam.orientation = +1;
  return pair;
}

// ---------------------------------------------------------------------------
// axiom_suite_1d: Definition i)-iii), Proposition a)-d), the inverse law and
// reparametrization invariance, on random valid (p, T) over the geometry.
// ---------------------------------------------------------------------------

inline AxiomReport axiom_suite_1d(const TransportFunctor& Z, const CatalogEntry& geom,
                                  int trials, double tol, std::uint64_t seed) {
  AxiomReport rep;
  rep.tol = tol;
  Rng rng(seed);
  const ChartCover& cover = geom.cover;

  for (int trial = 0; trial < trials; ++trial) {
    // ---- subobject axioms at a random point
    int i = rng.uniform_int(0, cover.size() - 1);
    const auto& samples = cover.charts[i].samples;
    Vec y = samples[rng.uniform_int(0, static_cast<int>(samples.size()) - 1)];
    rep.record("prop_a", std::abs(Z.z_point(y, +1, i, i).canonical()), trial);

    int j = -1;
    for (int c = 0; c < cover.size(); ++c)
      if (c != i && cover.inside(c, y)) j = c;
    if (j >= 0) {
      double fwd = Z.z_point(y, +1, i, j).accumulated();
      double bwd = Z.z_point(y, +1, j, i).accumulated();
      double neg = Z.z_point(y, -1, i, j).accumulated();
      rep.record("i_cocycle", std::abs(canonical_angle(fwd + bwd)), trial);
      rep.record("prop_d", std::abs(canonical_angle(fwd + neg)), trial);
      for (int k = 0; k < cover.size(); ++k)
        if (k != i && k != j && cover.inside(k, y)) {
          double jk = Z.z_point(y, +1, j, k).accumulated();
          double ik = Z.z_point(y, +1, i, k).accumulated();
          rep.record("i_cocycle", std::abs(canonical_angle(fwd + jk - ik)), trial);
        }
      LabeledPathPartition Tc;
      Tc.breakpoints = {0.0, 0.5, 1.0};
      Tc.labels = {i, j};
      PathFn t_y = [y](double) { return y; };
      rep.record("prop_c",
                 phase_defect(Z.z_path(t_y, Tc), Z.z_point(y, +1, i, j)), trial);
    }
    {
      LabeledPathPartition Tb;
      double a = rng.uniform(-2, 0), b = rng.uniform(0.5, 3);
      Tb.breakpoints = {a, b};
      Tb.labels = {i};
      PathFn t_y = [y](double) { return y; };
      rep.record("prop_b", std::abs(Z.z_path(t_y, Tb).canonical()), trial);
    }

    // ---- path axioms
    auto [p, a, b] = geom.random_path(rng);
    LabeledPathPartition T = build_path_partition(p, a, b, cover, 600);
    Phase zp = Z.z_path(p, T);

    // reparametrization invariance (thin surrogate)
    auto sigma = detail::random_reparametrization(rng, a, b);
    PathFn p_sigma = [p, sigma](double x) { return p(sigma(x)); };
    LabeledPathPartition T_sigma = T;
    for (size_t k = 1; k + 1 < T.breakpoints.size(); ++k)
      T_sigma.breakpoints[k] =
          detail::invert_monotone(sigma, T.breakpoints[k], a, b);
    rep.record("reparametrization", phase_defect(Z.z_path(p_sigma, T_sigma), zp), trial);

    // inverse law
    PathFn p_rev = [p, a, b](double x) { return p(a + b - x); };
    rep.record("inverse",
               std::abs(canonical_angle(zp.accumulated() +
                                        Z.z_path(p_rev, T.reversed()).accumulated())),
               trial);

    // gluing at a breakpoint (exact) and at an interior point
    {
      int cut;
      double t_cut;
      LabeledPathPartition L, R;
      if (T.segments() >= 2) {
        cut = T.segments() / 2;
        t_cut = T.breakpoints[cut];
        L.breakpoints.assign(T.breakpoints.begin(), T.breakpoints.begin() + cut + 1);
        L.labels.assign(T.labels.begin(), T.labels.begin() + cut);
        R.breakpoints.assign(T.breakpoints.begin() + cut, T.breakpoints.end());
        R.labels.assign(T.labels.begin() + cut, T.labels.end());
        double glue = Z.z_path(p, L).accumulated() +
                      Z.z_point(p(t_cut), +1, L.labels.back(), R.labels.front()).accumulated() +
                      Z.z_path(p, R).accumulated();
        rep.record("iii_gluing_breakpoint",
                   std::abs(canonical_angle(glue - zp.accumulated())), trial);
      }
      int seg = T.segments() / 2;
      t_cut = 0.5 * (T.breakpoints[seg] + T.breakpoints[seg + 1]);
      L = T;
      R = T;
      L.breakpoints.erase(L.breakpoints.begin() + seg + 1, L.breakpoints.end());
      L.breakpoints.push_back(t_cut);
      L.labels.erase(L.labels.begin() + seg + 1, L.labels.end());
      R.breakpoints.erase(R.breakpoints.begin(), R.breakpoints.begin() + seg + 1);
      R.breakpoints.insert(R.breakpoints.begin(), t_cut);
      R.labels.erase(R.labels.begin(), R.labels.begin() + seg);
      double glue = Z.z_path(p, L).accumulated() +
                    Z.z_point(p(t_cut), +1, L.labels.back(), R.labels.front()).accumulated() +
                    Z.z_path(p, R).accumulated();
      rep.record("iii_gluing_interior",
                 std::abs(canonical_angle(glue - zp.accumulated())), trial);
    }

    // basic isomorphism with endpoint relabels (Definition ii)
    {
      double a2 = 0, b2 = 1;  // affine reparametrization onto [0,1]
      auto f_inv = [a, b, a2, b2](double x) { return a + (b - a) * (x - a2) / (b2 - a2); };
      PathFn p2 = [p, f_inv](double x) { return p(f_inv(x)); };
      LabeledPathPartition T2 = T;
      for (double& x : T2.breakpoints) x = a2 + (b2 - a2) * (x - a) / (b - a);
      int i1 = T.labels.front(), iN = T.labels.back();
      int i1p = i1, iNp = iN;
      for (int c = 0; c < cover.size(); ++c) {
        if (c == i1) continue;
        LabeledPathPartition probe;
        probe.breakpoints = {T.breakpoints[0], T.breakpoints[1]};
        probe.labels = {c};
        if (partition_valid(p, probe, cover, 32)) {
          i1p = c;
          break;
        }
      }
      for (int c = 0; c < cover.size(); ++c) {
        if (c == iN) continue;
        LabeledPathPartition probe;
        probe.breakpoints = {T.breakpoints[T.segments() - 1], T.breakpoints[T.segments()]};
        probe.labels = {c};
        if (partition_valid(p, probe, cover, 32)) {
          iNp = c;
          break;
        }
      }
      T2.labels.front() = i1p;
      T2.labels.back() = iNp;
      double lhs = Z.z_path(p2, T2).accumulated();
      double rhs = Z.z_point(p(a), -1, i1, i1p).accumulated() + zp.accumulated() +
                   Z.z_point(p(b), +1, iN, iNp).accumulated();
      rep.record("ii_isomorphism", std::abs(canonical_angle(lhs - rhs)), trial);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// axiom_suite_2d: Definition i)-iv), Proposition 2 a)-d), partition
// independence and reparametrization invariance, on random loops and surface
// objects over a torus-domain geometry.
// ---------------------------------------------------------------------------

inline AxiomReport axiom_suite_2d(const GerbeFunctor& Z, const CatalogEntry& geom,
                                  int trials, double tol, std::uint64_t seed) {
  AxiomReport rep;
  rep.tol = tol;
  Rng rng(seed);
  const ChartCover& cover = geom.cover;

  for (int trial = 0; trial < trials; ++trial) {
    // ---- loop transitions
    LoopFn l = geom.random_loop(rng);
    LabeledLoopPartition Ta = build_loop_partition(l, cover, 400);
    LabeledLoopPartition Tb = detail::jitter_loop_partition(rng, l, Ta, cover);
    LabeledLoopPartition Tc = detail::jitter_loop_partition(rng, l, Tb, cover);

    auto zprime = [&](const LabeledLoopPartition& A, const LabeledLoopPartition& B,
                      int orient) {
      LoopTransition lt;
      lt.loop = l;
      lt.inner = A;
      lt.outer = B;
      lt.orientation = orient;
      return Z.z_loop_transition(lt);
    };

    rep.record("prop2_a", std::abs(zprime(Ta, Ta, +1).canonical()), trial);
    rep.record("prop2_d",
               std::abs(canonical_angle(zprime(Ta, Tb, -1).accumulated() +
                                        zprime(Ta, Tb, +1).accumulated())),
               trial);
    rep.record("i_composition",
               std::abs(canonical_angle(zprime(Ta, Tb, +1).accumulated() +
                                        zprime(Tb, Tc, +1).accumulated() -
                                        zprime(Ta, Tc, +1).accumulated())),
               trial);
    rep.record("prop2_c",
               phase_defect(Z.z_surface(annulus_transition_object(l, Ta, Tb)),
                            zprime(Ta, Tb, +1)),
               trial);
    rep.record("prop2_b", std::abs(Z.z_surface(product_cylinder_object(l, Ta)).canonical()),
               trial);

    // ---- surface objects
    if (geom.random_surface) {
      SurfaceObject so = geom.random_surface(rng);
      Phase base = Z.z_surface(so);

      // partition independence on a closed surface (Definition ii with no boundary)
      {
        SurfaceObject so2;
        so2.X = so.X;
        so2.mesh = build_domain_mesh(Domain::kTorus, 8 + 2 * (trial % 2), 6);
        label_faces_greedy(so2.mesh, so2.X, cover);
        rep.record("ii_partition_independence", phase_defect(Z.z_surface(so2), base), trial);
      }

      // reparametrization invariance
      {
        double e1 = rng.uniform(-0.1, 0.1), e2 = rng.uniform(-0.1, 0.1);
        double d1 = rng.uniform(0, kTwoPi), d2 = rng.uniform(0, kTwoPi);
        PatchMap inner_x = so.X;
        PatchMap moved = [inner_x, e1, e2, d1, d2](int patch, double u, double v) {
          return inner_x(patch, u + e1 * std::sin(v + d1), v + e2 * std::sin(u + d2));
        };
        SurfaceObject so3;
        so3.X = moved;
        so3.mesh = build_domain_mesh(Domain::kTorus, 8, 6);
        label_faces_greedy(so3.mesh, so3.X, cover);
        rep.record("reparametrization", phase_defect(Z.z_surface(so3), base), trial);
      }

      // moves: refine / merge / relabel away from the boundary
      {
        SurfacePartition moved = so.mesh;
        int nf = static_cast<int>(moved.faces.size());
        int f = rng.uniform_int(0, nf - 1);
        moved = refine_face(moved, f, rng.uniform_int(0, 1), rng.uniform(0.35, 0.65));
        moved = merge_faces(moved, f, static_cast<int>(moved.faces.size()) - 1);
        int f2 = rng.uniform_int(0, nf - 1);
        for (int c = 0; c < cover.size(); ++c) {
          if (c == moved.faces[f2].label) continue;
          if (face_min_margin(moved, f2, c, so.X, cover, 12) > 0) {
            moved = relabel_face(moved, f2, c, so.X, cover);
            break;
          }
        }
        SurfaceObject so4;
        so4.X = so.X;
        so4.mesh = moved;
        rep.record("moves", phase_defect(Z.z_surface(so4), base), trial);
      }

      // gluing iii): closed torus vs cut-open cylinder times the seam factor
      {
        TorusCutPair pair = make_torus_cut_pair(so.X, cover, 8, 6, trial % 6);
        double lhs = Z.z_surface(pair.closed).accumulated();
        double rhs = Z.z_surface(pair.cut_open).accumulated() +
                     Z.z_loop_transition(pair.seam).accumulated();
        rep.record("iii_gluing", std::abs(canonical_angle(lhs - rhs)), trial);
      }

      // partial gluing iv): cut the cylinder along a row circle where the
      // labels agree across, then Z = Z_bottom + Z_top
      {
        TorusCutPair pair = make_torus_cut_pair(so.X, cover, 8, 6, 0);
        const SurfacePartition& mesh = pair.cut_open.mesh;
        int nu = 8, nv = 6;
        int rows = nv;
        int cut = rows / 2;
        // check labels match across the row boundary
        bool match = true;
        double v_cut = mesh.faces[cut * nu].v0;
        for (int k = 0; k < nu && match; ++k) {
          const MeshFace& upper = mesh.faces[cut * nu + k];
          double mid = 0.5 * (upper.u0 + upper.u1);
          for (int k2 = 0; k2 < nu; ++k2) {
            const MeshFace& lower = mesh.faces[(cut - 1) * nu + k2];
            double lo = lower.u0, hi = lower.u1;
            double m = mid - kTwoPi * std::floor((mid - lo) / kTwoPi);
            if (m >= lo - 1e-12 && m <= hi + 1e-12 && lower.label != upper.label)
              match = false;
          }
        }
        if (match) {
          std::vector<BandSpec> lower_bands, upper_bands;
          auto specs = mesh.to_specs();
          SurfaceObject bottom, top;
          std::vector<FaceSpec> bspec(specs.begin(), specs.begin() + cut * nu);
          std::vector<FaceSpec> tspec(specs.begin() + cut * nu, specs.end());
          int nverts = static_cast<int>(mesh.vertices.size());
          bottom.mesh = SurfacePartition::from_faces(nverts, bspec, mesh.orientation,
                                                     mesh.period_u, 0);
          top.mesh = SurfacePartition::from_faces(nverts, tspec, mesh.orientation,
                                                  mesh.period_u, 0);
          bottom.X = pair.cut_open.X;
          top.X = pair.cut_open.X;
          double whole = Z.z_surface(pair.cut_open).accumulated();
          double parts = Z.z_surface(bottom).accumulated() + Z.z_surface(top).accumulated();
          rep.record("iv_partial_gluing", std::abs(canonical_angle(whole - parts)), trial);
          (void)v_cut;
        }
      }
    }
  }
  return rep;
}

}  // namespace holonomy
