#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "holonomy/cech.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/vec.hpp"

namespace holonomy {

// Parameter-domain map of a surface object: (patch, u, v) -> ambient.
// Single-patch domains use patch 0; the cube boundary uses one patch per wall.
using PatchMap = std::function<Vec(int, double, double)>;

struct HalfEdge {
  int origin = -1;
  int twin = -1;  // -1 on boundary halfedges
  int next = -1;
  int face = -1;
  double u = 0, v = 0;    // origin corner coords in face's patch frame
  double u2 = 0, v2 = 0;  // dest corner coords, unwrapped consistently with (u, v)
};

struct MeshFace {
  int any_halfedge = -1;
  int label = -1;
  int patch = 0;
  bool is_rect = false;  // axis-aligned integration rectangle in patch coords
  double u0 = 0, v0 = 0, u1 = 0, v1 = 0;
  int wind_u = 0;  // winding of the loop across a periodic u (cap faces)
};

struct MeshVertex {
  int out_halfedge = -1;
  bool on_boundary = false;
};

struct FaceSpec {
  struct Corner {
    int vertex = -1;
    double u = 0, v = 0;
  };
  int label = -1;
  int patch = 0;
  std::vector<Corner> corners;  // CCW in patch coords w.r.t. the surface orientation
  bool is_rect = false;
  double u0 = 0, v0 = 0, u1 = 0, v1 = 0;
  int wind_u = 0;  // +-1 when the loop winds the u period (cap faces), else 0
};

// ---------------------------------------------------------------------------
// Half-edge mesh of the labeled surface partition. Orientation is a flag of
// S; faces are stored CCW for +1. Twins are resolved from undirected vertex
// pairs, disambiguated by edge midpoints (mod the domain periods) so that
// double edges (wrapping rows, digon-like caps) pair correctly.
// ---------------------------------------------------------------------------

class SurfacePartition {
 public:
  std::vector<MeshVertex> vertices;
  std::vector<HalfEdge> halfedges;
  std::vector<MeshFace> faces;
  int orientation = +1;
  double period_u = 0, period_v = 0;  // 0 = not periodic

  static SurfacePartition from_faces(int n_vertices, const std::vector<FaceSpec>& specs,
                                     int orientation, double period_u = 0,
                                     double period_v = 0) {
    SurfacePartition m;
    m.orientation = orientation;
    m.period_u = period_u;
    m.period_v = period_v;
    m.vertices.resize(n_vertices);

    for (const FaceSpec& spec : specs) {
      if (spec.corners.size() < 2) throw InvalidPartition("face with < 2 corners");
      int f = static_cast<int>(m.faces.size());
      MeshFace face;
      face.label = spec.label;
      face.patch = spec.patch;
      face.is_rect = spec.is_rect;
      face.u0 = spec.u0;
      face.v0 = spec.v0;
      face.u1 = spec.u1;
      face.v1 = spec.v1;
      face.wind_u = spec.wind_u;
      int base = static_cast<int>(m.halfedges.size());
      int k = static_cast<int>(spec.corners.size());
      for (int c = 0; c < k; ++c) {
        for (int c2 = c + 1; c2 < k; ++c2)
          if (spec.corners[c].vertex == spec.corners[c2].vertex)
            throw InvalidPartition("face loop repeats a vertex");
        HalfEdge h;
        h.origin = spec.corners[c].vertex;
        h.u = spec.corners[c].u;
        h.v = spec.corners[c].v;
        if (c + 1 < k) {
          h.u2 = spec.corners[c + 1].u;
          h.v2 = spec.corners[c + 1].v;
        } else {
          h.u2 = spec.corners[0].u + spec.wind_u * period_u;
          h.v2 = spec.corners[0].v;
        }
        h.face = f;
        h.next = base + (c + 1) % k;
        m.halfedges.push_back(h);
      }
      face.any_halfedge = base;
      m.faces.push_back(face);
    }
    m.link_twins();
    m.finalize_vertices();
    return m;
  }

  int prev(int h) const {
    int e = h;
    while (halfedges[e].next != h) e = halfedges[e].next;
    return e;
  }

  int dest(int h) const { return halfedges[halfedges[h].next].origin; }
  bool is_boundary(int h) const { return halfedges[h].twin < 0; }

  std::pair<double, double> corner_uv(int h) const { return {halfedges[h].u, halfedges[h].v}; }
  // dest coords in the SAME face frame as h
  std::pair<double, double> corner_uv_end(int h) const {
    return {halfedges[h].u2, halfedges[h].v2};
  }

  // Outgoing halfedges in CCW order around an internal vertex.
  std::vector<int> outgoing_ccw(int v) const {
    std::vector<int> out;
    int h0 = vertices[v].out_halfedge;
    int h = h0;
    do {
      out.push_back(h);
      int p = prev(h);
      if (halfedges[p].twin < 0)
        throw InvalidPartition("circulation through boundary at vertex " + std::to_string(v));
      h = halfedges[p].twin;
    } while (h != h0 && out.size() <= halfedges.size());
    if (h != h0) throw InvalidPartition("vertex circulation did not close");
    return out;
  }

  // CCW cycle of incident face labels with cyclically-consecutive duplicates
  // merged; the label-partition valence of the vertex is the sector count.
  std::vector<int> vertex_sectors(int v) const {
    std::vector<int> labels;
    for (int h : outgoing_ccw(v)) labels.push_back(faces[halfedges[h].face].label);
    if (labels.empty()) return labels;
    std::vector<int> sectors;
    for (int l : labels)
      if (sectors.empty() || sectors.back() != l) sectors.push_back(l);
    while (sectors.size() > 1 && sectors.front() == sectors.back()) sectors.pop_back();
    return sectors;
  }

  // CCW incident faces (ids) around an internal vertex, duplicates kept.
  std::vector<int> incident_faces_ccw(int v) const {
    std::vector<int> out;
    for (int h : outgoing_ccw(v)) out.push_back(halfedges[h].face);
    return out;
  }

  std::vector<int> canonical_internal_edges() const {
    std::vector<int> out;
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h)
      if (halfedges[h].twin >= 0 && h < halfedges[h].twin) out.push_back(h);
    return out;
  }

  int next_boundary(int h) const {
    int e = halfedges[h].next;
    while (halfedges[e].twin >= 0) e = halfedges[halfedges[e].twin].next;
    return e;
  }

  // one starting halfedge per boundary cycle
  std::vector<int> boundary_cycle_starts() const {
    std::vector<int> starts;
    std::vector<char> seen(halfedges.size(), 0);
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h) {
      if (halfedges[h].twin >= 0 || seen[h]) continue;
      starts.push_back(h);
      int e = h;
      do {
        seen[e] = 1;
        e = next_boundary(e);
      } while (e != h);
    }
    return starts;
  }

  std::vector<std::pair<double, double>> face_polygon(int f) const {
    std::vector<std::pair<double, double>> poly;
    int h0 = faces[f].any_halfedge;
    int h = h0;
    do {
      poly.push_back(corner_uv(h));
      h = halfedges[h].next;
    } while (h != h0);
    return poly;
  }

  void check_structure() const {
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h) {
      const HalfEdge& he = halfedges[h];
      if (he.twin >= 0) {
        if (halfedges[he.twin].twin != h) throw InvalidPartition("twin link broken");
        if (halfedges[he.twin].origin != dest(h) || he.origin != dest(he.twin))
          throw InvalidPartition("twin endpoints disagree");
      }
      if (halfedges[he.next].face != he.face) throw InvalidPartition("face loop broken");
    }
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
      if (vertices[v].out_halfedge < 0) continue;  // unused id
      if (vertices[v].on_boundary) continue;
      auto sectors = vertex_sectors(v);
      if (sectors.size() > 3)
        throw InvalidPartition("internal vertex " + std::to_string(v) + " has " +
                               std::to_string(sectors.size()) + " label sectors");
    }
  }

  // Rebuild the spec list (used by the elementary moves, which reconstruct).
  std::vector<FaceSpec> to_specs() const {
    std::vector<FaceSpec> specs;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      FaceSpec s;
      s.label = faces[f].label;
      s.patch = faces[f].patch;
      s.is_rect = faces[f].is_rect;
      s.u0 = faces[f].u0;
      s.v0 = faces[f].v0;
      s.u1 = faces[f].u1;
      s.v1 = faces[f].v1;
      s.wind_u = faces[f].wind_u;
      int h0 = faces[f].any_halfedge;
      int h = h0;
      do {
        s.corners.push_back({halfedges[h].origin, halfedges[h].u, halfedges[h].v});
        h = halfedges[h].next;
      } while (h != h0);
      specs.push_back(std::move(s));
    }
    return specs;
  }

 private:
  std::int64_t quantize(double x, double period) const {
    if (period > 0) {
      x -= period * std::floor(x / period);
      if (x > period - 5e-13) x = 0;  // wrap representatives of the same point
    }
    return std::llround(x * 1e12);
  }

  void link_twins() {
    // Group by the undirected vertex pair. Pairs carrying two distinct
    // geometric edges (digons of wrapped single-patch meshes) come in fours
    // and are split by the edge midpoint modulo the domain periods.
    std::map<std::pair<int, int>, std::vector<int>> groups;
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h) {
      int a = halfedges[h].origin, b = dest(h);
      groups[{std::min(a, b), std::max(a, b)}].push_back(h);
    }
    auto tie = [&](int h1, int h2) {
      if (halfedges[h1].origin == halfedges[h2].origin)
        throw InvalidPartition("twin halfedges run in the same direction");
      halfedges[h1].twin = h2;
      halfedges[h2].twin = h1;
    };
    auto midpoint_key = [&](int h) {
      auto [u0, v0] = corner_uv(h);
      auto [u1, v1] = corner_uv_end(h);
      return std::make_pair(quantize(0.5 * (u0 + u1), period_u),
                            quantize(0.5 * (v0 + v1), period_v));
    };
    for (auto& [key, hs] : groups) {
      if (hs.size() == 1) continue;  // boundary halfedge
      if (hs.size() == 2) {
        // two boundary arcs of one circle can share their vertex pair;
        // within a patch the midpoints tell them apart
        bool same_patch =
            faces[halfedges[hs[0]].face].patch == faces[halfedges[hs[1]].face].patch;
        if (same_patch && midpoint_key(hs[0]) != midpoint_key(hs[1])) continue;
        tie(hs[0], hs[1]);
        continue;
      }
      if (hs.size() == 4) {
        std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> by_mid;
        for (int h : hs) by_mid[midpoint_key(h)].push_back(h);
        if (by_mid.size() != 2) throw InvalidPartition("ambiguous double edge");
        for (auto& [mid, pair] : by_mid) {
          if (pair.size() != 2) throw InvalidPartition("ambiguous double edge");
          tie(pair[0], pair[1]);
        }
        continue;
      }
      throw InvalidPartition("edge shared by " + std::to_string(hs.size()) + " halfedges");
    }
  }

  void finalize_vertices() {
    for (int h = 0; h < static_cast<int>(halfedges.size()); ++h) {
      int v = halfedges[h].origin;
      if (vertices[v].out_halfedge < 0) vertices[v].out_halfedge = h;
      if (halfedges[h].twin < 0) {
        vertices[v].on_boundary = true;
        vertices[dest(h)].on_boundary = true;
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Face sampling for label assignment and validity audits.
// ---------------------------------------------------------------------------

inline std::vector<std::array<double, 3>> face_sample_params(const SurfacePartition& mesh,
                                                             int f, int density) {
  std::vector<std::array<double, 3>> pts;  // (u, v, patch implied by face)
  const MeshFace& face = mesh.faces[f];
  if (face.is_rect) {
    for (int i = 0; i <= density; ++i)
      for (int j = 0; j <= density; ++j) {
        double u = face.u0 + (face.u1 - face.u0) * i / density;
        double v = face.v0 + (face.v1 - face.v0) * j / density;
        pts.push_back({u, v, 0});
      }
    return pts;
  }
  auto poly = mesh.face_polygon(f);
  // corners, then barycentric fill of the fan triangles
  for (auto& [u, v] : poly) pts.push_back({u, v, 0});
  for (size_t c = 1; c + 1 < poly.size(); ++c) {
    for (int i = 0; i <= density; ++i)
      for (int j = 0; i + j <= density; ++j) {
        double l1 = static_cast<double>(i) / density;
        double l2 = static_cast<double>(j) / density;
        double l0 = 1.0 - l1 - l2;
        pts.push_back({l0 * poly[0].first + l1 * poly[c].first + l2 * poly[c + 1].first,
                       l0 * poly[0].second + l1 * poly[c].second + l2 * poly[c + 1].second,
                       0});
      }
  }
  return pts;
}

// Minimum margin of face f's image in chart `label`.
inline double face_min_margin(const SurfacePartition& mesh, int f, int label,
                              const PatchMap& X, const ChartCover& cover,
                              int density) {
  double worst = std::numeric_limits<double>::infinity();
  for (auto& p : face_sample_params(mesh, f, density))
    worst = std::min(worst, cover.margin(label, X(mesh.faces[f].patch, p[0], p[1])));
  return worst;
}

// A map from a partitioned parameter surface into the target manifold.
struct SurfaceObject {
  PatchMap X;
  SurfacePartition mesh;
};

}  // namespace holonomy
