#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "holonomy/cech.hpp"
#include "holonomy/mesh_builders.hpp"
#include "holonomy/path_partition.hpp"
#include "holonomy/phase.hpp"
#include "holonomy/quadrature.hpp"
#include "holonomy/surface_mesh.hpp"
#include "holonomy/transport_bundle.hpp"
#include "holonomy/volume.hpp"

namespace holonomy {

// ---------------------------------------------------------------------------
// Loop transitions Z'(l^+-, T, T'). The inner partition T is the one on the
// LEFT of the oriented loop (in the annulus realization of Prop 2c the T-side
// faces the surface). General position of the combined breakpoints is forced
// by shifting coincident outer breakpoints 1e-9 of arc length forward; the
// shift is reported.
// ---------------------------------------------------------------------------

struct LoopTransition {
  LoopFn loop;
  LabeledLoopPartition inner;  // T
  LabeledLoopPartition outer;  // T'
  int orientation = +1;
};

struct LoopTransitionInfo {
  bool perturbed = false;
};

inline constexpr double kGeneralPositionEps = 1e-9;

inline Transported z_loop_transition(const GerbeData& data, const LoopTransition& lt,
                                     const QuadConfig& quad,
                                     LoopTransitionInfo* info = nullptr) {
  lt.inner.check_shape();
  lt.outer.check_shape();
  LabeledLoopPartition outer = lt.outer;

  // general position: move outer breakpoints off inner ones
  bool perturbed = false;
  for (double& a : outer.angles) {
    for (double b : lt.inner.angles) {
      double d = std::abs(canonical_angle(a - b));
      if (d < 1e-12) {
        a += kGeneralPositionEps;
        if (a >= kTwoPi) a -= kTwoPi;
        perturbed = true;
      }
    }
  }
  if (perturbed) {
    std::vector<int> order(outer.angles.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return outer.angles[x] < outer.angles[y]; });
    LabeledLoopPartition sorted;
    for (int i : order) {
      sorted.angles.push_back(outer.angles[i]);
      sorted.labels.push_back(outer.labels[i]);
    }
    outer = sorted;
    for (double b : lt.inner.angles)
      for (double a : outer.angles)
        if (std::abs(canonical_angle(a - b)) < 1e-12)
          throw GeneralPositionFailure("breakpoints remain coincident after perturbation");
  }
  if (info) info->perturbed = perturbed;

  struct Event {
    double angle;
    bool is_inner;
    int index;
  };
  std::vector<Event> events;
  for (int k = 0; k < lt.inner.arcs(); ++k) events.push_back({lt.inner.angles[k], true, k});
  for (int k = 0; k < outer.arcs(); ++k) events.push_back({outer.angles[k], false, k});
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.angle < b.angle; });

  double angle_sum = 0, err = 0;
  int m = static_cast<int>(events.size());
  for (int e = 0; e < m; ++e) {
    const Event& ev = events[e];
    double a0 = ev.angle;
    double a1 = (e + 1 < m) ? events[e + 1].angle : events[0].angle + kTwoPi;

    // vertex factor at the event
    if (ev.is_inner) {
      int n = lt.inner.arcs();
      int before = lt.inner.labels[(ev.index + n - 1) % n];
      int after = lt.inner.labels[ev.index];
      int out_here = outer.label_at(a0);
      angle_sum += data.arg_g3(before, out_here, after, lt.loop(a0));
    } else {
      int n = outer.arcs();
      int before = outer.labels[(ev.index + n - 1) % n];
      int after = outer.labels[ev.index];
      int in_here = lt.inner.label_at(a0);
      angle_sum += data.arg_g3(in_here, before, after, lt.loop(a0));
    }

    // arc factor up to the next event
    if (a1 - a0 < 1e-15) continue;
    double mid = 0.5 * (a0 + a1);
    int li = lt.inner.label_at(mid);
    int lo = outer.label_at(mid);
    for (int s = 0; s <= 8; ++s) {
      Vec p = lt.loop(a0 + (a1 - a0) * s / 8);
      if (!(data.cover.inside(li, p) && data.cover.inside(lo, p)))
        throw ArcOutsideOverlap("arc [" + std::to_string(a0) + "," + std::to_string(a1) +
                                ") not inside U_{" + std::to_string(li) + "," +
                                std::to_string(lo) + "}");
    }
    if (li != lo) {
      Form1 a2_form = [&data, li, lo](const Vec& y, const Vec& v) {
        return data.A2(li, lo, y, v);
      };
      IntegralResult r = integrate_pullback_1form(a2_form, lt.loop, a0, a1, quad, kTwoPi);
      angle_sum += r.value;
      err += r.error_estimate;
    }
  }
  if (lt.orientation < 0) angle_sum = -angle_sum;
  return {Phase::from_angle(angle_sum), err};
}

// ---------------------------------------------------------------------------
// Surface state sum Z(X,T): g3 over internal trivalent vertices (incident
// faces read anticlockwise), A2 over internal edges (first index = face on
// the left of the directed edge), F over faces.
// ---------------------------------------------------------------------------

namespace detail {

struct SurfaceSumParts {
  double vertices = 0;
  double edges = 0;
  double faces = 0;
  double err = 0;
};

// Vertex and edge contributions, optionally excluding a set of canonical
// seam halfedges and every vertex incident to them (used by cut evaluation).
inline SurfaceSumParts surface_state_sum(const GerbeData& data, const SurfaceObject& so,
                                         const QuadConfig& quad,
                                         const std::set<int>* excluded_seam = nullptr) {
  const SurfacePartition& mesh = so.mesh;
  SurfaceSumParts parts;

  std::set<int> seam_vertices;
  if (excluded_seam)
    for (int h : *excluded_seam) {
      seam_vertices.insert(mesh.halfedges[h].origin);
      seam_vertices.insert(mesh.dest(h));
    }

  for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
    if (mesh.vertices[v].out_halfedge < 0 || mesh.vertices[v].on_boundary) continue;
    if (excluded_seam && seam_vertices.count(v)) continue;
    auto sectors = mesh.vertex_sectors(v);
    if (sectors.size() < 3) continue;
    if (sectors.size() > 3)
      throw InvalidPartition("vertex with " + std::to_string(sectors.size()) +
                             " label sectors in the state sum");
    auto smallest = std::min_element(sectors.begin(), sectors.end());
    std::rotate(sectors.begin(), smallest, sectors.end());
    int h = mesh.vertices[v].out_halfedge;
    const HalfEdge& he = mesh.halfedges[h];
    Vec p = so.X(mesh.faces[he.face].patch, he.u, he.v);
    parts.vertices += data.arg_g3(sectors[0], sectors[1], sectors[2], p);
  }

  for (int h : mesh.canonical_internal_edges()) {
    if (excluded_seam && excluded_seam->count(h)) continue;
    int left = mesh.faces[mesh.halfedges[h].face].label;
    int right = mesh.faces[mesh.halfedges[mesh.halfedges[h].twin].face].label;
    if (left == right) continue;
    Form1 a2_form = [&data, left, right](const Vec& y, const Vec& v) {
      return data.A2(left, right, y, v);
    };
    IntegralResult r = halfedge_pullback(mesh, h, so.X, a2_form, quad);
    parts.edges += r.value;
    parts.err += r.error_estimate;
  }

  return parts;
}

}  // namespace detail

inline Transported z_surface(const GerbeData& data, const SurfaceObject& so,
                             const QuadConfig& quad, bool validate = false) {
  if (validate && !surface_partition_valid(so.mesh, so.X, data.cover))
    throw InvalidPartition("surface partition not valid for the map");
  detail::SurfaceSumParts parts = detail::surface_state_sum(data, so, quad);
  for (int f = 0; f < static_cast<int>(so.mesh.faces.size()); ++f) {
    int label = so.mesh.faces[f].label;
    Form2 f_form = [&data, label](const Vec& y, const Vec& u, const Vec& v) {
      return data.F(label, y, u, v);
    };
    IntegralResult r = detail::face_pullback(so.mesh, f, so.X, f_form, quad);
    parts.faces += r.value;
    parts.err += r.error_estimate;
  }
  double total = parts.vertices + parts.edges + parts.faces;
  return {Phase::from_angle(so.mesh.orientation * total), parts.err};
}

// ---------------------------------------------------------------------------
// Gluing along a closed horizontal cut circle v = v_c (a full circle of mesh
// edges; every brick-row boundary of a cylinder or torus mesh qualifies).
// Definition iii): Z(X',T') = Z'(X'|_C, T_L, T_R) Z(X,T), where the cut-open
// evaluation drops the seam contributions. The circle is traversed in +u, so
// the side v > v_c lies on its left and plays the inner role.
// ---------------------------------------------------------------------------

struct GlueReport {
  Transported direct;
  Transported cut_open;
  Transported seam_factor;
  double defect = 0;
  bool perturbed = false;
};

namespace detail {

inline std::set<int> seam_halfedges_at_v(const SurfacePartition& mesh, double v_c) {
  std::set<int> seam;
  auto on_seam = [&](double v) {
    double d = v - v_c;
    if (mesh.period_v > 0) d -= mesh.period_v * std::round(d / mesh.period_v);
    return std::abs(d) < 1e-9;
  };
  for (int h : mesh.canonical_internal_edges()) {
    const HalfEdge& he = mesh.halfedges[h];
    if (on_seam(he.v) && on_seam(he.v2) && std::abs(he.u2 - he.u) > 1e-12) seam.insert(h);
  }
  return seam;
}

}  // namespace detail

inline GlueReport glue_z_surface(const GerbeData& data, const SurfaceObject& so, double v_c,
                                 double u_lo, double u_hi, const QuadConfig& quad) {
  const SurfacePartition& mesh = so.mesh;
  std::set<int> seam = detail::seam_halfedges_at_v(mesh, v_c);
  if (seam.empty()) throw CutGeometryInvalid("no mesh edges on the cut circle");

  // upper/lower label partitions along the cut as functions of u
  struct Span {
    double u0, u1;
    int upper, lower;
  };
  double period = u_hi - u_lo;
  std::vector<Span> spans;
  for (int h : seam) {
    const HalfEdge& he = mesh.halfedges[h];
    int hf = he.face, tf = mesh.halfedges[he.twin].face;
    bool forward = he.u2 > he.u;
    double u0 = std::min(he.u, he.u2), u1 = std::max(he.u, he.u2);
    // face(h) is on the left of h: the upper side when h points in +u
    int upper = forward ? mesh.faces[hf].label : mesh.faces[tf].label;
    int lower = forward ? mesh.faces[tf].label : mesh.faces[hf].label;
    u0 -= period * std::floor((u0 - u_lo) / period);
    u1 = u0 + std::abs(he.u2 - he.u);
    if (u1 > u_hi + 1e-9) {  // split a span crossing the wrap
      spans.push_back({u0, u_hi, upper, lower});
      spans.push_back({u_lo, u1 - period, upper, lower});
    } else {
      spans.push_back({u0, u1, upper, lower});
    }
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.u0 < b.u0; });
  for (size_t i = 0; i + 1 < spans.size(); ++i)
    if (std::abs(spans[i].u1 - spans[i + 1].u0) > 1e-9)
      throw CutGeometryInvalid("cut circle is not contiguous");
  if (std::abs(spans.front().u0 - u_lo) > 1e-9 || std::abs(spans.back().u1 - u_hi) > 1e-9)
    throw CutGeometryInvalid("cut circle does not close over the stated u range");

  auto to_angle = [&](double u) { return kTwoPi * (u - u_lo) / period; };
  LabeledLoopPartition T_upper, T_lower;
  for (size_t i = 0; i < spans.size(); ++i) {
    size_t prev = (i + spans.size() - 1) % spans.size();
    if (spans[i].upper != spans[prev].upper || T_upper.angles.empty()) {
      T_upper.angles.push_back(to_angle(spans[i].u0));
      T_upper.labels.push_back(spans[i].upper);
    }
    if (spans[i].lower != spans[prev].lower || T_lower.angles.empty()) {
      T_lower.angles.push_back(to_angle(spans[i].u0));
      T_lower.labels.push_back(spans[i].lower);
    }
  }

  LoopTransition lt;
  int patch = mesh.faces[mesh.halfedges[*seam.begin()].face].patch;
  lt.loop = [&so, patch, v_c, u_lo, period](double a) {
    return so.X(patch, u_lo + period * a / kTwoPi, v_c);
  };
  lt.inner = T_upper;
  lt.outer = T_lower;
  lt.orientation = +1;

  GlueReport rep;
  rep.direct = z_surface(data, so, quad);
  detail::SurfaceSumParts cut_parts = detail::surface_state_sum(data, so, quad, &seam);
  double faces = 0, ferr = 0;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    int label = mesh.faces[f].label;
    Form2 f_form = [&data, label](const Vec& y, const Vec& u, const Vec& v) {
      return data.F(label, y, u, v);
    };
    IntegralResult r = detail::face_pullback(mesh, f, so.X, f_form, quad);
    faces += r.value;
    ferr += r.error_estimate;
  }
  rep.cut_open = {Phase::from_angle(mesh.orientation *
                                    (cut_parts.vertices + cut_parts.edges + faces)),
                  cut_parts.err + ferr};
  LoopTransitionInfo info;
  rep.seam_factor = z_loop_transition(data, lt, quad, &info);
  rep.perturbed = info.perturbed;
  rep.defect = phase_defect(rep.direct.phase, rep.cut_open.phase + rep.seam_factor.phase);
  return rep;
}

// ---------------------------------------------------------------------------
// Partial gluing: two objects sharing a boundary-to-boundary cut with
// identical labeled partitions across it. The seam contributes nothing, so
// Z(X',T') = Z(X_1,T_1) Z(X_2,T_2).
// ---------------------------------------------------------------------------

inline Transported partial_glue_z_surface(const GerbeData& data, const SurfaceObject& a,
                                          const SurfaceObject& b, const QuadConfig& quad) {
  // match boundary halfedges of a against b by ambient endpoints
  auto endpoints = [](const SurfaceObject& so, int h) {
    const HalfEdge& he = so.mesh.halfedges[h];
    int patch = so.mesh.faces[he.face].patch;
    return std::make_pair(so.X(patch, he.u, he.v), so.X(patch, he.u2, he.v2));
  };
  std::vector<int> bd_a = a.mesh.boundary_cycle_starts(), all_a, all_b;
  for (int start : bd_a) {
    int h = start;
    do {
      all_a.push_back(h);
      h = a.mesh.next_boundary(h);
    } while (h != start);
  }
  for (int start : b.mesh.boundary_cycle_starts()) {
    int h = start;
    do {
      all_b.push_back(h);
      h = b.mesh.next_boundary(h);
    } while (h != start);
  }
  int matched = 0;
  for (int ha : all_a) {
    auto [pa0, pa1] = endpoints(a, ha);
    for (int hb : all_b) {
      auto [pb0, pb1] = endpoints(b, hb);
      if (pa0.dist(pb1) < 1e-9 && pa1.dist(pb0) < 1e-9) {
        ++matched;
        int la = a.mesh.faces[a.mesh.halfedges[ha].face].label;
        int lb = b.mesh.faces[b.mesh.halfedges[hb].face].label;
        if (la != lb)
          throw SeamMismatch("labels " + std::to_string(la) + " vs " + std::to_string(lb) +
                             " across the cut");
      }
    }
  }
  if (matched == 0) throw SeamMismatch("no shared boundary segment found");
  Transported za = z_surface(data, a, quad);
  Transported zb = z_surface(data, b, quad);
  return {za.phase + zb.phase, za.quad_error + zb.quad_error};
}

// ---------------------------------------------------------------------------
// 2-D Stokes check: boundary surface state sum of (dH, dT) against
// exp i int_V H*(G) by per-cell 3-D quadrature.
// ---------------------------------------------------------------------------

inline Form3 gerbe_curvature_form(const GerbeData& data, int label, double h = kDefaultFdStep) {
  if (data.G_analytic)
    return [&data, label](const Vec& y, const Vec& u, const Vec& v, const Vec& w) {
      return data.G_analytic(label, y, u, v, w);
    };
  return [&data, label, h](const Vec& y, const Vec& u, const Vec& v, const Vec& w) {
    return gerbe_curvature(data, label, y, u, v, w, h);
  };
}

inline StokesReport stokes_check_2d(const GerbeData& data, const VolumeObject& vo,
                                    const QuadConfig& quad) {
  SurfaceObject boundary;
  boundary.mesh = vo.partition.boundary;
  boundary.X = [&vo](int wall, double r, double s) {
    return vo.H(VolumePartition::wall_point(wall, r, s));
  };
  Transported bd = z_surface(data, boundary, quad);

  double curv = 0, err = bd.quad_error;
  for (const VolumeCell& c : vo.partition.cells) {
    Form3 g_form = gerbe_curvature_form(data, c.label);
    auto block = [&vo](double x, double y, double z) { return vo.H(Vec{x, y, z}); };
    IntegralResult r = integrate_pullback_3form(g_form, block, c.lo, c.hi, quad);
    curv += r.value;
    err += r.error_estimate;
  }

  StokesReport rep;
  rep.boundary_accumulated = bd.phase.accumulated();
  rep.curvature_accumulated = curv;
  rep.defect = std::abs(canonical_angle(rep.boundary_accumulated - rep.curvature_accumulated));
  rep.quad_error = err;
  return rep;
}

// ---------------------------------------------------------------------------
// Abstract 2-D transport functor and gerbe reconstruction.
// ---------------------------------------------------------------------------

struct GerbeFunctor {
  std::function<Phase(const LoopTransition&)> z_loop_transition;
  std::function<Phase(const SurfaceObject&)> z_surface;
};

inline GerbeFunctor gerbe_functor(const GerbeData& data, const QuadConfig& quad) {
  GerbeFunctor F;
  F.z_loop_transition = [&data, quad](const LoopTransition& lt) {
    return holonomy::z_loop_transition(data, lt, quad).phase;
  };
  F.z_surface = [&data, quad](const SurfaceObject& so) {
    return holonomy::z_surface(data, so, quad).phase;
  };
  return F;
}

// Constant map from a 2-simplex with the three-face partition joining the
// edge midpoints to a central trivalent vertex; the faces labeled i, j, k
// read anticlockwise around the center.
inline SurfacePartition mercedes_mesh(int i, int j, int k) {
  const double s3 = std::sqrt(3.0);
  // vertices: 0..2 triangle corners, 3..5 edge midpoints, 6 center
  double pts[7][2] = {{0, 0},          {1, 0},           {0.5, s3 / 2},   {0.5, 0},
                      {0.75, s3 / 4},  {0.25, s3 / 4},   {0.5, s3 / 6}};
  auto corner = [&](int v) { return FaceSpec::Corner{v, pts[v][0], pts[v][1]}; };
  std::vector<FaceSpec> specs(3);
  specs[0].label = i;
  specs[0].corners = {corner(0), corner(3), corner(6), corner(5)};
  specs[1].label = j;
  specs[1].corners = {corner(1), corner(4), corner(6), corner(3)};
  specs[2].label = k;
  specs[2].corners = {corner(2), corner(5), corner(6), corner(4)};
  return SurfacePartition::from_faces(7, specs, +1);
}

// g_ijk(y) = Z(Delta_y, ijk)
inline Phase reconstruct_g3(const GerbeFunctor& Z, const Vec& y, int i, int j, int k) {
  SurfaceObject so;
  so.mesh = mercedes_mesh(i, j, k);
  so.X = [y](int, double, double) { return y; };
  return Z.z_surface(so);
}

namespace detail {

inline SurfacePartition half_strip_mesh(int j, int k) {
  // [0,1]_u x [0,1]_s, j on u < 1/2, k on u > 1/2
  std::vector<FaceSpec> specs(2);
  specs[0].label = j;
  specs[0].is_rect = true;
  specs[0].u0 = 0; specs[0].v0 = 0; specs[0].u1 = 0.5; specs[0].v1 = 1;
  specs[0].corners = {{0, 0, 0}, {1, 0.5, 0}, {2, 0.5, 1}, {3, 0, 1}};
  specs[1].label = k;
  specs[1].is_rect = true;
  specs[1].u0 = 0.5; specs[1].v0 = 0; specs[1].u1 = 1; specs[1].v1 = 1;
  specs[1].corners = {{1, 0.5, 0}, {4, 1, 0}, {5, 1, 1}, {2, 0.5, 1}};
  return SurfacePartition::from_faces(6, specs, +1);
}

inline SurfacePartition single_face_mesh(int j) {
  std::vector<FaceSpec> specs(1);
  specs[0].label = j;
  specs[0].is_rect = true;
  specs[0].u0 = 0; specs[0].v0 = 0; specs[0].u1 = 1; specs[0].v1 = 1;
  specs[0].corners = {{0, 0, 0}, {1, 1, 0}, {2, 1, 1}, {3, 0, 1}};
  return SurfacePartition::from_faces(4, specs, +1);
}

}  // namespace detail

// i(A_jk)_y(v) = d/dt log Z(Q_t, jk)|_{t=0}, Q_t independent of u
inline double reconstruct_A2(const GerbeFunctor& Z, const ChartCover& cover, int j, int k,
                             const Vec& y, const Vec& v, double h) {
  double mj = cover.margin(j, y), mk = cover.margin(k, y);
  if (mj <= 0 || mk <= 0) throw PointOutsideOverlap("reconstruct_A2 base point");
  if (h * v.norm() > 0.5 * std::min(mj, mk))
    throw StepTooLarge("h|v| exceeds half the overlap margin");
  SurfacePartition strip = detail::half_strip_mesh(j, k);
  auto phase_at = [&](double t) {
    SurfaceObject so;
    so.mesh = strip;
    so.X = [&cover, y, v, t](int, double, double s) { return cover.project(y + (t * s) * v); };
    return Z.z_surface(so).accumulated();
  };
  return central_diff(phase_at, 0.0, h);
}

// i(F_j)_y(v,w) = d^2/dt du log Z(Q_{t,u}, j)|_{(0,0)}
inline double reconstruct_F(const GerbeFunctor& Z, const ChartCover& cover, int j,
                            const Vec& y, const Vec& v, const Vec& w, double h) {
  double m = cover.margin(j, y);
  if (m <= 0) throw PointOutsideChart("reconstruct_F base point");
  if (h * (v.norm() + w.norm()) > 0.5 * m)
    throw StepTooLarge("h(|v|+|w|) exceeds half the chart margin");
  SurfacePartition square = detail::single_face_mesh(j);
  auto phase_at = [&](double t, double u) {
    SurfaceObject so;
    so.mesh = square;
    so.X = [&cover, y, v, w, t, u](int, double r, double s) {
      return cover.project(y + (r * t) * v + (s * u) * w);
    };
    return Z.z_surface(so).accumulated();
  };
  return central_diff_mixed(phase_at, h, h);
}

inline GerbeData reconstructed_gerbe(const GerbeFunctor& Z, const ChartCover& cover,
                                     double h = kDefaultFdStep) {
  GerbeData out;
  out.cover = cover;
  out.g3 = [Z](int i, int j, int k, const Vec& y) {
    if (i == j || j == k || i == k) return std::complex<double>(1, 0);
    return reconstruct_g3(Z, y, i, j, k).unit();
  };
  out.A2 = [Z, cover, h](int j, int k, const Vec& y, const Vec& v) {
    if (j == k) return 0.0;
    double n = v.norm();
    if (n < 1e-14) return 0.0;
    return n * reconstruct_A2(Z, cover, j, k, y, v / n, h);
  };
  out.F = [Z, cover, h](int k, const Vec& y, const Vec& u, const Vec& v) {
    double nu = u.norm(), nv = v.norm();
    if (nu < 1e-14 || nv < 1e-14) return 0.0;
    return nu * nv * reconstruct_F(Z, cover, k, y, u / nu, v / nv, h);
  };
  return out;
}

}  // namespace holonomy
