#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "holonomy/cech.hpp"
#include "holonomy/mesh_builders.hpp"
#include "holonomy/path_partition.hpp"
#include "holonomy/phase.hpp"
#include "holonomy/quadrature.hpp"
#include "holonomy/rng.hpp"
#include "holonomy/surface_mesh.hpp"

namespace holonomy {

struct Transported {
  Phase phase;
  double quad_error = 0;
};

// ---------------------------------------------------------------------------
// The rank-1 embedded 1-dimensional TQFT induced by a bundle with connection:
// Z' on point subobjects, Z on labeled paths and loops.
// ---------------------------------------------------------------------------

inline Phase z_point_from_bundle(const BundleData& data, const Vec& y, int orientation,
                                 int i, int j) {
  if (i != j && !(data.cover.inside(i, y) && data.cover.inside(j, y)))
    throw PointOutsideOverlap("charts (" + std::to_string(i) + "," + std::to_string(j) + ")");
  double a = data.arg_g(i, j, y);
  return Phase::from_angle(orientation >= 0 ? a : -a);
}

// Z(p,T) = exp i int p*(A_{i_1}) . g_{i_1 i_2}(p(x_1)) . exp i int p*(A_{i_2}) ...
inline Transported z_path_from_bundle(const BundleData& data, const PathFn& p,
                                      const LabeledPathPartition& T,
                                      const QuadConfig& quad, bool validate = true) {
  T.check_shape();
  if (validate && !partition_valid(p, T, data.cover, 32))
    throw InvalidPartition("labeled path partition not valid for the path");
  double angle = 0, err = 0;
  double scale = T.b() - T.a();
  for (int s = 0; s < T.segments(); ++s) {
    int label = T.labels[s];
    Form1 a_form = [&data, label](const Vec& y, const Vec& v) { return data.A(label, y, v); };
    IntegralResult r = integrate_pullback_1form(a_form, p, T.breakpoints[s],
                                                T.breakpoints[s + 1], quad, scale);
    angle += r.value;
    err += r.error_estimate;
  }
  for (int k = 1; k < T.segments(); ++k)
    angle += data.arg_g(T.labels[k - 1], T.labels[k], p(T.breakpoints[k]));
  return {Phase::from_angle(angle), err};
}

// Cyclic state sum for a closed curve: includes the transition factor at
// every breakpoint, which cutting the loop into a path would drop.
inline Transported z_loop_from_bundle(const BundleData& data, const LoopFn& l,
                                      const LabeledLoopPartition& T,
                                      const QuadConfig& quad, bool validate = true) {
  T.check_shape();
  if (validate && loop_partition_min_margin(l, T, data.cover, 32) <= 0)
    throw InvalidPartition("labeled loop partition not valid for the loop");
  double angle = 0, err = 0;
  int n = T.arcs();
  for (int k = 0; k < n; ++k) {
    int label = T.labels[k];
    Form1 a_form = [&data, label](const Vec& y, const Vec& v) { return data.A(label, y, v); };
    IntegralResult r =
        integrate_pullback_1form(a_form, l, T.angles[k], T.arc_end(k), quad, kTwoPi);
    angle += r.value;
    err += r.error_estimate;
  }
  for (int k = 0; k < n; ++k) {
    int before = T.labels[(k + n - 1) % n];
    angle += data.arg_g(before, T.labels[k], l(T.angles[k]));
  }
  return {Phase::from_angle(angle), err};
}

// Definition iii): Z(p o p', T o T') = Z(p,T) Z'(p(b)^+, i_N, i'_1) Z(p',T')
inline Transported glue_z_path(const BundleData& data, const PathFn& p,
                               const LabeledPathPartition& T, const PathFn& p2,
                               const LabeledPathPartition& T2, const QuadConfig& quad) {
  Vec seam_left = p(T.b()), seam_right = p2(T2.a());
  if (seam_left.dist(seam_right) > 1e-9)
    throw EndpointMismatch("paths disagree at the gluing point by " +
                           std::to_string(seam_left.dist(seam_right)));
  Transported left = z_path_from_bundle(data, p, T, quad);
  Transported right = z_path_from_bundle(data, p2, T2, quad);
  Phase seam = z_point_from_bundle(data, seam_left, +1, T.labels.back(), T2.labels.front());
  return {left.phase + seam + right.phase, left.quad_error + right.quad_error};
}

// ---------------------------------------------------------------------------
// Shared face/boundary machinery for surface objects
// ---------------------------------------------------------------------------

namespace detail {

// integral of a 1-form along the image of halfedge h
inline IntegralResult halfedge_pullback(const SurfacePartition& mesh, int h,
                                        const PatchMap& X, const Form1& form,
                                        const QuadConfig& quad) {
  const HalfEdge& he = mesh.halfedges[h];
  int patch = mesh.faces[he.face].patch;
  auto curve = [&](double t) {
    return X(patch, he.u + t * (he.u2 - he.u), he.v + t * (he.v2 - he.v));
  };
  return integrate_pullback_1form(form, curve, 0.0, 1.0, quad, 1.0);
}

// integral of a 2-form over face f (rect cells directly, polygons by fan)
inline IntegralResult face_pullback(const SurfacePartition& mesh, int f, const PatchMap& X,
                                    const Form2& form, const QuadConfig& quad) {
  const MeshFace& face = mesh.faces[f];
  auto patch_map = [&](double u, double v) { return X(face.patch, u, v); };
  if (face.is_rect)
    return integrate_pullback_2form(form, patch_map, face.u0, face.u1, face.v0, face.v1,
                                    quad);
  auto poly = mesh.face_polygon(f);
  double su = 0, sv = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    su = std::max(su, std::abs(poly[i].first - poly[0].first));
    sv = std::max(sv, std::abs(poly[i].second - poly[0].second));
  }
  su = su > 0 ? su : 1;
  sv = sv > 0 ? sv : 1;
  IntegralResult out;
  for (size_t c = 1; c + 1 < poly.size(); ++c) {
    double p0[2] = {poly[0].first, poly[0].second};
    double p1[2] = {poly[c].first, poly[c].second};
    double p2[2] = {poly[c + 1].first, poly[c + 1].second};
    out += integrate_pullback_2form_tri(form, patch_map, p0, p1, p2, quad, su, sv);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1-D Stokes check: boundary state sum of (dH, dT) against exp i int_S H*(F).
// ---------------------------------------------------------------------------

struct StokesReport {
  double boundary_accumulated = 0;
  double curvature_accumulated = 0;
  double defect = 0;  // |canonical(boundary - curvature)|
  double quad_error = 0;
};

// Boundary state sum over all boundary cycles, traversed in the induced
// orientation (surface on the left), before the orientation flag is applied.
inline Transported bundle_boundary_state_sum(const BundleData& data, const SurfaceObject& so,
                                             const QuadConfig& quad) {
  const SurfacePartition& mesh = so.mesh;
  double angle = 0, err = 0;
  for (int start : mesh.boundary_cycle_starts()) {
    int h = start;
    do {
      int label = mesh.faces[mesh.halfedges[h].face].label;
      Form1 a_form = [&data, label](const Vec& y, const Vec& v) {
        return data.A(label, y, v);
      };
      IntegralResult r = detail::halfedge_pullback(mesh, h, so.X, a_form, quad);
      angle += r.value;
      err += r.error_estimate;
      int h_next = mesh.next_boundary(h);
      int l0 = label;
      int l1 = mesh.faces[mesh.halfedges[h_next].face].label;
      if (l0 != l1) {
        const HalfEdge& he = mesh.halfedges[h];
        Vec corner = so.X(mesh.faces[he.face].patch, he.u2, he.v2);
        angle += data.arg_g(l0, l1, corner);
      }
      h = h_next;
    } while (h != start);
  }
  return {Phase::from_angle(angle), err};
}

inline Form2 bundle_curvature_form(const BundleData& data, int label, double h = kDefaultFdStep) {
  if (data.F_analytic)
    return [&data, label](const Vec& y, const Vec& u, const Vec& v) {
      return data.F_analytic(label, y, u, v);
    };
  return [&data, label, h](const Vec& y, const Vec& u, const Vec& v) {
    return bundle_curvature(data, label, y, u, v, h);
  };
}

inline StokesReport stokes_check_1d(const BundleData& data, const SurfaceObject& so,
                                    const QuadConfig& quad) {
  int sign = so.mesh.orientation;
  Transported boundary = bundle_boundary_state_sum(data, so, quad);
  double curv = 0, err = boundary.quad_error;
  for (int f = 0; f < static_cast<int>(so.mesh.faces.size()); ++f) {
    Form2 form = bundle_curvature_form(data, so.mesh.faces[f].label);
    IntegralResult r = detail::face_pullback(so.mesh, f, so.X, form, quad);
    curv += r.value;
    err += r.error_estimate;
  }
  StokesReport rep;
  rep.boundary_accumulated = sign * boundary.phase.accumulated();
  rep.curvature_accumulated = sign * curv;
  rep.defect = std::abs(canonical_angle(rep.boundary_accumulated - rep.curvature_accumulated));
  rep.quad_error = err;
  return rep;
}

// total flux of F through a closed surface object (Chern extraction)
inline double bundle_flux(const BundleData& data, const SurfaceObject& so,
                          const QuadConfig& quad) {
  double total = 0;
  for (int f = 0; f < static_cast<int>(so.mesh.faces.size()); ++f) {
    Form2 form = bundle_curvature_form(data, so.mesh.faces[f].label);
    total += detail::face_pullback(so.mesh, f, so.X, form, quad).value;
  }
  return so.mesh.orientation * total;
}

// ---------------------------------------------------------------------------
// Abstract transport functor and reconstruction of (g, A) from it.
// ---------------------------------------------------------------------------

struct TransportFunctor {
  std::function<Phase(const Vec&, int, int, int)> z_point;  // (y, orientation, i, j)
  std::function<Phase(const PathFn&, const LabeledPathPartition&)> z_path;
};

inline TransportFunctor bundle_functor(const BundleData& data, const QuadConfig& quad) {
  TransportFunctor F;
  F.z_point = [&data](const Vec& y, int orient, int i, int j) {
    return z_point_from_bundle(data, y, orient, i, j);
  };
  F.z_path = [&data, quad](const PathFn& p, const LabeledPathPartition& T) {
    return z_path_from_bundle(data, p, T, quad, false).phase;
  };
  return F;
}

// g_ij(y) = Z(t_y, ij), with t_y the constant path on [0,1] and the partition
// labeling [0,1/2] with i and [1/2,1] with j.
inline Phase reconstruct_g(const TransportFunctor& Z, const Vec& y, int i, int j) {
  LabeledPathPartition T;
  T.breakpoints = {0.0, 0.5, 1.0};
  T.labels = {i, j};
  PathFn t_y = [y](double) { return y; };
  return Z.z_path(t_y, T);
}

// i(A_j)_y(v) = d/dt log Z(q_t, j)|_{t=0}; q_t runs from y to the projected
// point y + t v along the cover's retraction.
inline double reconstruct_A(const TransportFunctor& Z, const ChartCover& cover, int j,
                            const Vec& y, const Vec& v, double h) {
  double margin = cover.margin(j, y);
  if (margin <= 0) throw PointOutsideChart("chart " + std::to_string(j));
  if (h * v.norm() > 0.5 * margin)
    throw StepTooLarge("h|v| exceeds half the chart margin");
  LabeledPathPartition T;
  T.breakpoints = {0.0, 1.0};
  T.labels = {j};
  auto phase_at = [&](double t) {
    PathFn q_t = [&cover, y, v, t](double s) { return cover.project(y + (t * s) * v); };
    return Z.z_path(q_t, T).accumulated();
  };
  return central_diff(phase_at, 0.0, h);
}

// Bundle data reconstructed from a functor; evaluations delegate to Z.
inline BundleData reconstructed_bundle(const TransportFunctor& Z, const ChartCover& cover,
                                       double h = kDefaultFdStep) {
  BundleData out;
  out.cover = cover;
  out.g = [Z](int i, int j, const Vec& y) {
    return Phase(reconstruct_g(Z, y, i, j)).unit();
  };
  out.A = [Z, cover, h](int j, const Vec& y, const Vec& v) {
    double n = v.norm();
    if (n < 1e-14) return 0.0;
    Vec unit = v / n;  // reconstruct along the unit direction, scale back
    return n * reconstruct_A(Z, cover, j, y, unit, h);
  };
  return out;
}

}  // namespace holonomy
