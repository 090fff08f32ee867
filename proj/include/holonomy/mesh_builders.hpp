#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "holonomy/cech.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/surface_mesh.hpp"

namespace holonomy {

// ---------------------------------------------------------------------------
// Brick-wall (running bond) banded meshes. Rows of cells offset by half a
// cell per row make every internal vertex trivalent by construction.
// ---------------------------------------------------------------------------

inline std::vector<double> staggered_breaks(double lo, double hi, int n, double offset01,
                                            bool periodic) {
  double s = (hi - lo) / n;
  std::vector<double> out;
  if (periodic) {
    for (int i = 0; i < n; ++i) out.push_back(lo + (i + offset01) * s);
  } else {
    out.push_back(lo);
    for (int i = 0; i < n; ++i) {
      double x = lo + (i + offset01) * s;
      if (x > lo + 1e-12 && x < hi - 1e-12) out.push_back(x);
    }
    out.push_back(hi);
  }
  return out;
}

struct BandSpec {
  double v0 = 0, v1 = 0;
  std::vector<double> breaks;  // sorted; canonical window for periodic u
  bool cap = false;            // single face; only legal as first or last band
};

namespace detail {

struct CircleVerts {
  std::vector<double> pos;  // sorted positions in the canonical window
  std::vector<int> ids;

  // vertices with lo <= pos <= hi, positions lifted into [lo, hi]
  void range(double lo, double hi, double period, std::vector<std::pair<double, int>>& out) const {
    out.clear();
    for (size_t i = 0; i < pos.size(); ++i) {
      double p = pos[i];
      if (period > 0) {
        while (p < lo - 1e-12) p += period;
        while (p - period >= lo - 1e-12) p -= period;
      }
      for (int rep = 0; rep < (period > 0 ? 2 : 1); ++rep, p += period) {
        if (p >= lo - 1e-12 && p <= hi + 1e-12) out.push_back({p, ids[i]});
        if (period <= 0) break;
      }
    }
    std::sort(out.begin(), out.end());
  }
};

inline std::vector<double> merge_positions(const std::vector<double>& a,
                                           const std::vector<double>& b, double period) {
  std::vector<double> all = a;
  all.insert(all.end(), b.begin(), b.end());
  for (double& x : all)
    if (period > 0) x -= period * std::floor(x / period);
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all)
    if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
  if (period > 0 && out.size() > 1 && (period - out.back()) + out.front() < 1e-12)
    out.pop_back();  // wrap duplicate
  return out;
}

}  // namespace detail

// Build an unlabeled banded brick mesh. Bands stack in v; brick breaks vary
// per band. Cap bands (single face closing a degenerate end, e.g. a polar
// cap or a disk center) are only legal as the first or last band.
inline SurfacePartition build_banded_mesh(double u_lo, double u_hi, bool periodic_u,
                                          const std::vector<BandSpec>& bands,
                                          bool periodic_v, int orientation = +1) {
  if (bands.empty()) throw InvalidPartition("no bands");
  int K = static_cast<int>(bands.size());
  double period_u = periodic_u ? (u_hi - u_lo) : 0;
  double period_v = periodic_v ? (bands.back().v1 - bands.front().v0) : 0;
  for (int j = 0; j < K; ++j) {
    if (bands[j].cap && j != 0 && j != K - 1)
      throw InvalidPartition("cap band must be first or last");
    if (bands[j].cap && periodic_v) throw InvalidPartition("cap band in periodic v");
    if (!bands[j].cap && bands[j].breaks.size() < (periodic_u ? 2u : 3u))
      throw InvalidPartition("band needs at least 2 cells");
  }

  // circle j sits between band j-1 and band j (0..K); periodic v identifies 0 and K
  int n_circles = K + 1;
  std::vector<detail::CircleVerts> circles(n_circles);
  int next_id = 0;
  auto band_breaks = [&](int j) -> const std::vector<double>* {
    if (periodic_v) j = (j % K + K) % K;
    if (j < 0 || j >= K || bands[j].cap) return nullptr;
    return &bands[j].breaks;
  };
  for (int c = 0; c < n_circles; ++c) {
    if (periodic_v && c == K) break;
    const std::vector<double>* below = band_breaks(c - 1);
    const std::vector<double>* above = band_breaks(c);
    std::vector<double> empty;
    auto pos = detail::merge_positions(below ? *below : empty, above ? *above : empty,
                                       period_u);
    circles[c].pos = pos;
    for (size_t i = 0; i < pos.size(); ++i) circles[c].ids.push_back(next_id++);
  }
  if (periodic_v) circles[K] = circles[0];

  std::vector<FaceSpec> specs;
  std::vector<std::pair<double, int>> lo_pts, hi_pts;
  for (int j = 0; j < K; ++j) {
    const BandSpec& band = bands[j];
    double v0 = band.v0, v1 = band.v1;
    if (band.cap) {
      FaceSpec s;
      s.is_rect = true;
      s.u0 = u_lo;
      s.u1 = u_hi;
      s.v0 = v0;
      s.v1 = v1;
      const detail::CircleVerts& circ = (j == 0) ? circles[1] : circles[K - 1];
      double v_ring = (j == 0) ? v1 : v0;
      if (j == 0) {
        // region below the ring: traverse in decreasing u, winding -1
        s.wind_u = -1;
        for (int i = static_cast<int>(circ.pos.size()) - 1; i >= 0; --i)
          s.corners.push_back({circ.ids[i], circ.pos[i], v_ring});
      } else {
        s.wind_u = +1;
        for (size_t i = 0; i < circ.pos.size(); ++i)
          s.corners.push_back({circ.ids[i], circ.pos[i], v_ring});
      }
      specs.push_back(std::move(s));
      continue;
    }
    int nb = static_cast<int>(band.breaks.size());
    int cells = periodic_u ? nb : nb - 1;
    for (int k = 0; k < cells; ++k) {
      double b0 = band.breaks[k];
      double b1 = (k + 1 < nb) ? band.breaks[k + 1] : band.breaks[0] + period_u;
      FaceSpec s;
      s.is_rect = true;
      s.u0 = b0;
      s.u1 = b1;
      s.v0 = v0;
      s.v1 = v1;
      circles[j].range(b0, b1, period_u, lo_pts);
      circles[j + 1].range(b0, b1, period_u, hi_pts);
      for (auto& [p, id] : lo_pts) s.corners.push_back({id, p, v0});
      for (auto it = hi_pts.rbegin(); it != hi_pts.rend(); ++it)
        s.corners.push_back({it->second, it->first, v1});
      specs.push_back(std::move(s));
    }
  }

  return SurfacePartition::from_faces(next_id, specs, orientation, period_u, period_v);
}

// ---------------------------------------------------------------------------
// Labeling: greedy maximal minimum margin, ties to the smallest chart.
// Validity is sampled (quadrature density plus a 4x denser audit grid).
// ---------------------------------------------------------------------------

inline void label_faces_greedy(SurfacePartition& mesh, const PatchMap& X,
                               const ChartCover& cover, int density = 3,
                               int audit_density = 12) {
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    int best = -1;
    double best_margin = 0;
    for (int c = 0; c < cover.size(); ++c) {
      double m = face_min_margin(mesh, f, c, X, cover, density);
      if (m > best_margin) {
        best_margin = m;
        best = c;
      }
    }
    if (best < 0) throw NoCoveringChart("face " + std::to_string(f));
    mesh.faces[f].label = best;
  }
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f)
    if (face_min_margin(mesh, f, mesh.faces[f].label, X, cover, audit_density) <= 0)
      throw ResolutionTooCoarse("face " + std::to_string(f) + " fails the audit grid");
}

inline bool surface_partition_valid(const SurfacePartition& mesh, const PatchMap& X,
                                    const ChartCover& cover, int audit_density = 12) {
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f)
    if (face_min_margin(mesh, f, mesh.faces[f].label, X, cover, audit_density) <= 0)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Canonical parameter domains
// ---------------------------------------------------------------------------

enum class Domain { kRectangle, kCylinder, kTorus, kDisk, kSphere };

inline Domain domain_from_name(const std::string& name) {
  if (name == "rectangle") return Domain::kRectangle;
  if (name == "cylinder") return Domain::kCylinder;
  if (name == "torus") return Domain::kTorus;
  if (name == "disk") return Domain::kDisk;
  if (name == "sphere") return Domain::kSphere;
  throw SchemaError("unknown domain " + name);
}

// rectangle: [0,1]^2; cylinder: [0,2pi) x [0,1]; torus: [0,2pi)^2;
// disk: angle x radius in [0,1]; sphere: u = azimuth, v = colatitude.
inline SurfacePartition build_domain_mesh(Domain d, int nu, int nv) {
  if (nu < 2 || nv < 2) throw BadParameter("resolution must be at least (2,2)");
  auto row_offset = [](int j) { return (j % 2) * 0.5; };
  std::vector<BandSpec> bands;
  switch (d) {
    case Domain::kRectangle: {
      for (int j = 0; j < nv; ++j)
        bands.push_back({static_cast<double>(j) / nv, static_cast<double>(j + 1) / nv,
                         staggered_breaks(0, 1, nu, row_offset(j), false), false});
      return build_banded_mesh(0, 1, false, bands, false);
    }
    case Domain::kCylinder: {
      for (int j = 0; j < nv; ++j)
        bands.push_back({static_cast<double>(j) / nv, static_cast<double>(j + 1) / nv,
                         staggered_breaks(0, kTwoPi, nu, row_offset(j), true), false});
      return build_banded_mesh(0, kTwoPi, true, bands, false);
    }
    case Domain::kTorus: {
      if (nv % 2) ++nv;  // row alternation must close up across the v-wrap
      for (int j = 0; j < nv; ++j)
        bands.push_back({kTwoPi * j / nv, kTwoPi * (j + 1) / nv,
                         staggered_breaks(0, kTwoPi, nu, row_offset(j), true), false});
      return build_banded_mesh(0, kTwoPi, true, bands, true);
    }
    case Domain::kDisk: {
      bands.push_back({0, 1.0 / nv, {}, true});
      for (int j = 1; j < nv; ++j)
        bands.push_back({static_cast<double>(j) / nv, static_cast<double>(j + 1) / nv,
                         staggered_breaks(0, kTwoPi, nu, row_offset(j), true), false});
      return build_banded_mesh(0, kTwoPi, true, bands, false);
    }
    case Domain::kSphere: {
      if (nv < 3) nv = 3;
      bands.push_back({0, std::numbers::pi / nv, {}, true});
      for (int j = 1; j + 1 < nv; ++j)
        bands.push_back({std::numbers::pi * j / nv, std::numbers::pi * (j + 1) / nv,
                         staggered_breaks(0, kTwoPi, nu, row_offset(j), true), false});
      bands.push_back({std::numbers::pi * (nv - 1) / nv, std::numbers::pi, {}, true});
      return build_banded_mesh(0, kTwoPi, true, bands, false);
    }
  }
  throw SchemaError("unreachable domain");
}

inline SurfacePartition build_surface_partition(const PatchMap& X, Domain domain,
                                                const ChartCover& cover, int nu, int nv) {
  SurfacePartition mesh = build_domain_mesh(domain, nu, nv);
  label_faces_greedy(mesh, X, cover);
  mesh.check_structure();
  return mesh;
}

// ---------------------------------------------------------------------------
// Elementary moves. Subdivision cuts a rectangular face by an axis-aligned
// chord whose endpoints are interior points of existing edges, preserving
// trivalence; merging is the inverse and dissolves the bivalent collinear
// vertices the cut introduced.
// ---------------------------------------------------------------------------

namespace detail {

inline int locate_cut_halfedge(const SurfacePartition& mesh, int f, double cu, double cv) {
  int h0 = mesh.faces[f].any_halfedge;
  int h = h0;
  do {
    const HalfEdge& he = mesh.halfedges[h];
    double du = he.u2 - he.u, dv = he.v2 - he.v;
    double len2 = du * du + dv * dv;
    double t = ((cu - he.u) * du + (cv - he.v) * dv) / len2;
    double px = he.u + t * du, py = he.v + t * dv;
    if (t > 1e-9 && t < 1 - 1e-9 && std::abs(px - cu) < 1e-9 && std::abs(py - cv) < 1e-9)
      return h;
    h = he.next;
  } while (h != h0);
  throw InvalidPartition("cut endpoint is not interior to an edge of the face");
}

// position of halfedge h inside its face's spec corner list
inline int halfedge_corner_index(const SurfacePartition& mesh, int h) {
  int f = mesh.halfedges[h].face;
  int idx = 0;
  int e = mesh.faces[f].any_halfedge;
  while (e != h) {
    e = mesh.halfedges[e].next;
    ++idx;
  }
  return idx;
}

inline std::vector<int> faces_containing_vertex(const std::vector<FaceSpec>& specs, int v) {
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(specs.size()); ++f)
    for (const auto& c : specs[f].corners)
      if (c.vertex == v) {
        out.push_back(f);
        break;
      }
  return out;
}

}  // namespace detail

// Split rectangular face f by the chord u = lerp(u0,u1,frac) (axis 0) or
// v = lerp(v0,v1,frac) (axis 1).
inline SurfacePartition refine_face(const SurfacePartition& mesh, int f, int axis,
                                    double frac = 0.5) {
  const MeshFace& face = mesh.faces[f];
  if (!face.is_rect) throw InvalidPartition("refine_face requires a rectangular face");
  if (!(frac > 0 && frac < 1)) throw InvalidPartition("split fraction");

  double cu0, cv0, cu1, cv1;  // chord endpoints (low side, high side)
  if (axis == 0) {
    double c = face.u0 + frac * (face.u1 - face.u0);
    cu0 = c; cv0 = face.v0; cu1 = c; cv1 = face.v1;
  } else {
    double c = face.v0 + frac * (face.v1 - face.v0);
    cu0 = face.u0; cv0 = c; cu1 = face.u1; cv1 = c;
  }

  int h_lo = detail::locate_cut_halfedge(mesh, f, cu0, cv0);
  int h_hi = detail::locate_cut_halfedge(mesh, f, cu1, cv1);

  auto specs = mesh.to_specs();
  int nv_id = 0;
  for (const auto& s : specs)
    for (const auto& c : s.corners) nv_id = std::max(nv_id, c.vertex + 1);
  int p_id = nv_id, q_id = nv_id + 1;

  // insert P and Q into face f's loop and into the neighbours across the cut edges
  auto insert_on = [&](int h, int new_vertex, double cu, double cv) {
    const HalfEdge& he = mesh.halfedges[h];
    int idx = detail::halfedge_corner_index(mesh, h);
    specs[f].corners.insert(specs[f].corners.begin() + idx + 1, {new_vertex, cu, cv});
    if (he.twin >= 0) {
      const HalfEdge& tw = mesh.halfedges[he.twin];
      int nf = tw.face;
      int tidx = detail::halfedge_corner_index(mesh, he.twin);
      double du = he.u2 - he.u, dv = he.v2 - he.v;
      double t = (std::abs(du) > std::abs(dv)) ? (cu - he.u) / du : (cv - he.v) / dv;
      double s = 1 - t;  // parameter along the twin
      FaceSpec::Corner c;
      c.vertex = new_vertex;
      c.u = tw.u + s * (tw.u2 - tw.u);
      c.v = tw.v + s * (tw.v2 - tw.v);
      specs[nf].corners.insert(specs[nf].corners.begin() + tidx + 1, c);
    }
  };
  // insert the later loop position first so the earlier index stays valid
  int i_lo = detail::halfedge_corner_index(mesh, h_lo);
  int i_hi = detail::halfedge_corner_index(mesh, h_hi);
  if (i_lo > i_hi) {
    insert_on(h_lo, p_id, cu0, cv0);
    insert_on(h_hi, q_id, cu1, cv1);
  } else {
    insert_on(h_hi, q_id, cu1, cv1);
    insert_on(h_lo, p_id, cu0, cv0);
  }

  // split face f's augmented loop at P..Q
  FaceSpec& old_spec = specs[f];
  int k = static_cast<int>(old_spec.corners.size());
  int ip = -1, iq = -1;
  for (int i = 0; i < k; ++i) {
    if (old_spec.corners[i].vertex == p_id) ip = i;
    if (old_spec.corners[i].vertex == q_id) iq = i;
  }
  auto take = [&](int from, int to) {  // inclusive cyclic range
    std::vector<FaceSpec::Corner> out;
    for (int i = from; ; i = (i + 1) % k) {
      out.push_back(old_spec.corners[i]);
      if (i == to) break;
    }
    return out;
  };
  FaceSpec a = old_spec, b = old_spec;
  a.corners = take(ip, iq);
  b.corners = take(iq, ip);
  auto set_rect = [&](FaceSpec& s) {
    double u0 = s.corners[0].u, u1 = u0, v0 = s.corners[0].v, v1 = v0;
    for (auto& c : s.corners) {
      u0 = std::min(u0, c.u); u1 = std::max(u1, c.u);
      v0 = std::min(v0, c.v); v1 = std::max(v1, c.v);
    }
    s.u0 = u0; s.u1 = u1; s.v0 = v0; s.v1 = v1;
    s.wind_u = 0;
  };
  set_rect(a);
  set_rect(b);
  specs[f] = a;
  specs.push_back(b);

  return SurfacePartition::from_faces(nv_id + 2, specs, mesh.orientation, mesh.period_u,
                                      mesh.period_v);
}

// Recombine two same-label rectangular faces whose union is a rectangle.
inline SurfacePartition merge_faces(const SurfacePartition& mesh, int f1, int f2) {
  const MeshFace& a = mesh.faces[f1];
  const MeshFace& b = mesh.faces[f2];
  if (a.label != b.label) throw InvalidPartition("merge_faces requires equal labels");
  if (!a.is_rect || !b.is_rect) throw InvalidPartition("merge_faces requires rectangles");
  bool share_u = std::abs(a.u0 - b.u0) < 1e-12 && std::abs(a.u1 - b.u1) < 1e-12 &&
                 (std::abs(a.v1 - b.v0) < 1e-12 || std::abs(b.v1 - a.v0) < 1e-12);
  bool share_v = std::abs(a.v0 - b.v0) < 1e-12 && std::abs(a.v1 - b.v1) < 1e-12 &&
                 (std::abs(a.u1 - b.u0) < 1e-12 || std::abs(b.u1 - a.u0) < 1e-12);
  if (!share_u && !share_v) throw InvalidPartition("faces do not tile a rectangle");

  auto specs = mesh.to_specs();
  double u0 = std::min(a.u0, b.u0), u1 = std::max(a.u1, b.u1);
  double v0 = std::min(a.v0, b.v0), v1 = std::max(a.v1, b.v1);

  // collect corners of both loops, drop those strictly inside the union
  // (the shared-side subdivision), and order them around the union perimeter
  std::vector<FaceSpec::Corner> all;
  for (int f : {f1, f2})
    for (auto& c : specs[f].corners) {
      bool inside_u = c.u > u0 + 1e-12 && c.u < u1 - 1e-12;
      bool inside_v = c.v > v0 + 1e-12 && c.v < v1 - 1e-12;
      bool on_perimeter = !(inside_u && inside_v);
      bool dup = false;
      for (auto& d : all) dup |= d.vertex == c.vertex;
      if (on_perimeter && !dup) all.push_back(c);
    }
  auto perimeter_pos = [&](const FaceSpec::Corner& c) {
    // CCW arc length from (u0, v0)
    if (std::abs(c.v - v0) < 1e-12) return c.u - u0;
    if (std::abs(c.u - u1) < 1e-12) return (u1 - u0) + (c.v - v0);
    if (std::abs(c.v - v1) < 1e-12) return (u1 - u0) + (v1 - v0) + (u1 - c.u);
    return 2 * (u1 - u0) + (v1 - v0) + (v1 - c.v);
  };
  std::sort(all.begin(), all.end(), [&](const auto& x, const auto& y) {
    return perimeter_pos(x) < perimeter_pos(y);
  });

  // dissolve bivalent collinear vertices introduced by an earlier refine:
  // strictly inside a union side and shared with exactly one other face
  std::vector<FaceSpec::Corner> loop;
  std::vector<std::pair<int, int>> dissolve_in;  // (face, vertex)
  for (auto& c : all) {
    bool is_corner = (std::abs(c.u - u0) < 1e-12 || std::abs(c.u - u1) < 1e-12) &&
                     (std::abs(c.v - v0) < 1e-12 || std::abs(c.v - v1) < 1e-12);
    if (is_corner) {
      loop.push_back(c);
      continue;
    }
    std::vector<int> owners = detail::faces_containing_vertex(specs, c.vertex);
    owners.erase(std::remove(owners.begin(), owners.end(), f1), owners.end());
    owners.erase(std::remove(owners.begin(), owners.end(), f2), owners.end());
    if (owners.size() == 1) {
      // collinear in the neighbour too?
      const FaceSpec& nb = specs[owners[0]];
      int k = static_cast<int>(nb.corners.size());
      for (int i = 0; i < k; ++i)
        if (nb.corners[i].vertex == c.vertex) {
          const auto& p = nb.corners[(i + k - 1) % k];
          const auto& q = nb.corners[(i + 1) % k];
          double cross = (nb.corners[i].u - p.u) * (q.v - p.v) -
                         (nb.corners[i].v - p.v) * (q.u - p.u);
          if (std::abs(cross) < 1e-9) {
            dissolve_in.push_back({owners[0], c.vertex});
          } else {
            loop.push_back(c);
          }
          break;
        }
    } else {
      loop.push_back(c);  // genuine T-junction, keep
    }
  }

  FaceSpec merged;
  merged.label = a.label;
  merged.patch = a.patch;
  merged.is_rect = true;
  merged.u0 = u0;
  merged.v0 = v0;
  merged.u1 = u1;
  merged.v1 = v1;
  merged.corners = loop;

  for (auto& [nf, vid] : dissolve_in) {
    auto& cs = specs[nf].corners;
    cs.erase(std::remove_if(cs.begin(), cs.end(),
                            [&](const FaceSpec::Corner& c) { return c.vertex == vid; }),
             cs.end());
  }

  std::vector<FaceSpec> out;
  for (int f = 0; f < static_cast<int>(specs.size()); ++f)
    if (f != f1 && f != f2) out.push_back(specs[f]);
  out.push_back(merged);

  int nv_id = 0;
  for (const auto& s : out)
    for (const auto& c : s.corners) nv_id = std::max(nv_id, c.vertex + 1);
  return SurfacePartition::from_faces(nv_id, out, mesh.orientation, mesh.period_u,
                                      mesh.period_v);
}

inline SurfacePartition relabel_face(const SurfacePartition& mesh, int f, int new_label,
                                     const PatchMap& X, const ChartCover& cover) {
  if (face_min_margin(mesh, f, new_label, X, cover, 12) <= 0)
    throw InvalidRelabel("face image not inside chart " + std::to_string(new_label));
  SurfacePartition out = mesh;
  out.faces[f].label = new_label;
  return out;
}

}  // namespace holonomy
