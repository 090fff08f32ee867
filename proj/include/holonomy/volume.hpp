#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "holonomy/cech.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/surface_mesh.hpp"

namespace holonomy {

// ---------------------------------------------------------------------------
// Brick partition of the unit cube. Layers stack in z; rows and bricks carry
// per-layer offsets drawn from disjoint residue classes, so at most 4 regions
// meet at any internal vertex and the boundary restriction is a valid
// surface partition (cube-edge vertices see 4 mesh faces but at most 2
// distinct labels in cyclic order).
// ---------------------------------------------------------------------------

struct VolumeCell {
  double lo[3], hi[3];
  int label = -1;
};

struct VolumePartition {
  int nx = 0, ny = 0, nz = 0;
  std::vector<VolumeCell> cells;
  SurfacePartition boundary;            // outward-oriented restriction; labels follow cells
  std::vector<int> boundary_face_cell;  // owning cell per boundary face

  // parameter map of the boundary walls: (wall, r, s) -> point of [0,1]^3
  static Vec wall_point(int wall, double r, double s) {
    switch (wall) {
      case 0: return {0, s, r};  // x = 0
      case 1: return {1, r, s};  // x = 1
      case 2: return {r, 0, s};  // y = 0
      case 3: return {s, 1, r};  // y = 1
      case 4: return {s, r, 0};  // z = 0
      case 5: return {r, s, 1};  // z = 1
    }
    throw SchemaError("wall index");
  }

  // 3-manifold invariant: number of distinct cells incident to each internal
  // corner point; the partition promises <= 4.
  int max_internal_vertex_regions() const {
    std::map<std::array<long long, 3>, int> seen;
    auto key = [](double x, double y, double z) {
      return std::array<long long, 3>{std::llround(x * 1e10), std::llround(y * 1e10),
                                      std::llround(z * 1e10)};
    };
    int worst = 0;
    for (const VolumeCell& c : cells)
      for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < 2; ++cy)
          for (int cz = 0; cz < 2; ++cz) {
            double x = cx ? c.hi[0] : c.lo[0];
            double y = cy ? c.hi[1] : c.lo[1];
            double z = cz ? c.hi[2] : c.lo[2];
            if (x < 1e-12 || x > 1 - 1e-12 || y < 1e-12 || y > 1 - 1e-12 ||
                z < 1e-12 || z > 1 - 1e-12)
              continue;  // boundary vertex
            auto k = key(x, y, z);
            if (seen.count(k)) continue;
            int incident = 0;
            for (const VolumeCell& d : cells)
              if (x > d.lo[0] - 1e-12 && x < d.hi[0] + 1e-12 && y > d.lo[1] - 1e-12 &&
                  y < d.hi[1] + 1e-12 && z > d.lo[2] - 1e-12 && z < d.hi[2] + 1e-12)
                ++incident;
            seen[k] = incident;
            worst = std::max(worst, incident);
          }
    return worst;
  }
};

namespace detail {

inline std::vector<double> clamped_breaks(int n, double offset01) {
  std::vector<double> out;
  out.push_back(0);
  for (int i = 0; i < n; ++i) {
    double x = (i + offset01) / n;
    if (x > 1e-12 && x < 1 - 1e-12) out.push_back(x);
  }
  out.push_back(1);
  return out;
}

}  // namespace detail

inline VolumePartition build_volume_partition(int nx, int ny, int nz) {
  if (nx < 2 || ny < 2 || nz < 2) throw BadParameter("volume resolution must be >= 2^3");
  VolumePartition vp;
  vp.nx = nx;
  vp.ny = ny;
  vp.nz = nz;

  for (int k = 0; k < nz; ++k) {
    double z0 = static_cast<double>(k) / nz, z1 = static_cast<double>(k + 1) / nz;
    double rho = (k % 2) ? 0.6 : 0.3;   // row offsets, disjoint between layers
    double xi = (k % 2) ? 0.4 : 0.15;   // brick offsets, disjoint between layers
    auto rows = detail::clamped_breaks(ny, rho);
    for (size_t j = 0; j + 1 < rows.size(); ++j) {
      double off = xi + 0.5 * (j % 2);
      off -= std::floor(off);
      auto cols = detail::clamped_breaks(nx, off);
      for (size_t i = 0; i + 1 < cols.size(); ++i) {
        VolumeCell c;
        c.lo[0] = cols[i];
        c.hi[0] = cols[i + 1];
        c.lo[1] = rows[j];
        c.hi[1] = rows[j + 1];
        c.lo[2] = z0;
        c.hi[2] = z1;
        vp.cells.push_back(c);
      }
    }
  }

  // boundary restriction: one wall face per cell side on the cube boundary,
  // with corners inserted wherever a neighbouring face's subdivision meets a
  // side (the brick-wall T-junctions of each wall, and the cube edges)
  std::map<std::array<long long, 3>, int> vid;
  std::vector<Vec> vpoints;
  auto vertex_of = [&](const Vec& p) {
    std::array<long long, 3> k = {std::llround(p[0] * 1e10), std::llround(p[1] * 1e10),
                                  std::llround(p[2] * 1e10)};
    auto it = vid.find(k);
    if (it != vid.end()) return it->second;
    int id = static_cast<int>(vid.size());
    vid.emplace(k, id);
    vpoints.push_back(p);
    return id;
  };

  struct WallFace {
    int wall, cell;
    double r0, r1, s0, s1;
  };
  std::vector<WallFace> wfaces;
  auto add_wall_face = [&](int wall, int cell, double r0, double r1, double s0, double s1) {
    wfaces.push_back({wall, cell, r0, r1, s0, s1});
    vertex_of(VolumePartition::wall_point(wall, r0, s0));
    vertex_of(VolumePartition::wall_point(wall, r1, s0));
    vertex_of(VolumePartition::wall_point(wall, r1, s1));
    vertex_of(VolumePartition::wall_point(wall, r0, s1));
  };

  for (int c = 0; c < static_cast<int>(vp.cells.size()); ++c) {
    const VolumeCell& cell = vp.cells[c];
    if (cell.lo[0] < 1e-12) add_wall_face(0, c, cell.lo[2], cell.hi[2], cell.lo[1], cell.hi[1]);
    if (cell.hi[0] > 1 - 1e-12) add_wall_face(1, c, cell.lo[1], cell.hi[1], cell.lo[2], cell.hi[2]);
    if (cell.lo[1] < 1e-12) add_wall_face(2, c, cell.lo[0], cell.hi[0], cell.lo[2], cell.hi[2]);
    if (cell.hi[1] > 1 - 1e-12) add_wall_face(3, c, cell.lo[2], cell.hi[2], cell.lo[0], cell.hi[0]);
    if (cell.lo[2] < 1e-12) add_wall_face(4, c, cell.lo[1], cell.hi[1], cell.lo[0], cell.hi[0]);
    if (cell.hi[2] > 1 - 1e-12) add_wall_face(5, c, cell.lo[0], cell.hi[0], cell.lo[1], cell.hi[1]);
  }

  // wall coordinates of registered vertices, bucketed per wall plane
  auto wall_coords = [](int wall, const Vec& p, double& r, double& s) {
    switch (wall) {
      case 0: if (std::abs(p[0]) > 1e-9) return false; r = p[2]; s = p[1]; return true;
      case 1: if (std::abs(p[0] - 1) > 1e-9) return false; r = p[1]; s = p[2]; return true;
      case 2: if (std::abs(p[1]) > 1e-9) return false; r = p[0]; s = p[2]; return true;
      case 3: if (std::abs(p[1] - 1) > 1e-9) return false; r = p[2]; s = p[0]; return true;
      case 4: if (std::abs(p[2]) > 1e-9) return false; r = p[1]; s = p[0]; return true;
      case 5: if (std::abs(p[2] - 1) > 1e-9) return false; r = p[0]; s = p[1]; return true;
    }
    return false;
  };
  std::vector<std::vector<std::array<double, 3>>> per_wall(6);  // (r, s, id)
  for (int id = 0; id < static_cast<int>(vpoints.size()); ++id)
    for (int w = 0; w < 6; ++w) {
      double r, s;
      if (wall_coords(w, vpoints[id], r, s))
        per_wall[w].push_back({r, s, static_cast<double>(id)});
    }

  std::vector<FaceSpec> specs;
  for (const WallFace& wf : wfaces) {
    FaceSpec f;
    f.patch = wf.wall;
    f.label = 0;
    vp.boundary_face_cell.push_back(wf.cell);
    f.is_rect = true;
    f.u0 = wf.r0;
    f.v0 = wf.s0;
    f.u1 = wf.r1;
    f.v1 = wf.s1;
    // traversal: (r0,s0) -> (r1,s0) -> (r1,s1) -> (r0,s1), inserting interior
    // subdivision points side by side
    struct Side {
      double ar, as, br, bs;
    };
    Side sides[4] = {{wf.r0, wf.s0, wf.r1, wf.s0},
                     {wf.r1, wf.s0, wf.r1, wf.s1},
                     {wf.r1, wf.s1, wf.r0, wf.s1},
                     {wf.r0, wf.s1, wf.r0, wf.s0}};
    for (const Side& side : sides) {
      Vec a = VolumePartition::wall_point(wf.wall, side.ar, side.as);
      f.corners.push_back({vertex_of(a), side.ar, side.as});
      std::vector<std::pair<double, int>> inner;  // (t along side, id)
      for (auto& cand : per_wall[wf.wall]) {
        double cr = cand[0], cs = cand[1];
        double dr = side.br - side.ar, ds = side.bs - side.as;
        double len2 = dr * dr + ds * ds;
        double t = ((cr - side.ar) * dr + (cs - side.as) * ds) / len2;
        double pr = side.ar + t * dr, ps = side.as + t * ds;
        if (t > 1e-9 && t < 1 - 1e-9 && std::abs(pr - cr) < 1e-10 &&
            std::abs(ps - cs) < 1e-10)
          inner.push_back({t, static_cast<int>(cand[2])});
      }
      std::sort(inner.begin(), inner.end());
      for (auto& [t, id] : inner)
        f.corners.push_back({id, side.ar + t * (side.br - side.ar),
                             side.as + t * (side.bs - side.as)});
    }
    specs.push_back(std::move(f));
  }

  vp.boundary = SurfacePartition::from_faces(static_cast<int>(vid.size()), specs, +1);
  return vp;
}

// A map from the partitioned unit cube into the target manifold.
struct VolumeObject {
  std::function<Vec(const Vec&)> H;  // [0,1]^3 -> ambient
  VolumePartition partition;
};

// Greedy labels (maximal minimum margin) for cells, propagated to the
// boundary restriction, with a denser audit pass.
inline void label_volume(VolumePartition& vp, const std::function<Vec(const Vec&)>& H,
                         const ChartCover& cover, int density = 2, int audit_density = 5) {
  auto cell_min_margin = [&](const VolumeCell& c, int label, int d) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j)
        for (int k = 0; k <= d; ++k) {
          Vec p = {c.lo[0] + (c.hi[0] - c.lo[0]) * i / d,
                   c.lo[1] + (c.hi[1] - c.lo[1]) * j / d,
                   c.lo[2] + (c.hi[2] - c.lo[2]) * k / d};
          worst = std::min(worst, cover.margin(label, H(p)));
        }
    return worst;
  };
  for (VolumeCell& c : vp.cells) {
    int best = -1;
    double bm = 0;
    for (int l = 0; l < cover.size(); ++l) {
      double m = cell_min_margin(c, l, density);
      if (m > bm) {
        bm = m;
        best = l;
      }
    }
    if (best < 0) throw NoCoveringChart("volume cell");
    c.label = best;
  }
  for (VolumeCell& c : vp.cells)
    if (cell_min_margin(c, c.label, audit_density) <= 0)
      throw ResolutionTooCoarse("volume cell fails the audit grid");
  for (size_t f = 0; f < vp.boundary.faces.size(); ++f)
    vp.boundary.faces[f].label = vp.cells[vp.boundary_face_cell[f]].label;
}

}  // namespace holonomy
