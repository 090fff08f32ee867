#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "holonomy/catalog.hpp"
#include "holonomy/mesh_builders.hpp"
#include "holonomy/path_partition.hpp"
#include "holonomy/volume.hpp"

using namespace holonomy;

TEST_CASE("constant path partitions into a single segment", "[partitions]") {
  CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
  Vec y = sphere_point(0.4, 1.0);  // solidly in the north chart
  PathFn p = [y](double) { return y; };
  LabeledPathPartition T = build_path_partition(p, 0, 1, geom.cover, 50);
  REQUIRE(T.segments() == 1);
  REQUIRE(T.labels[0] == 0);
}

TEST_CASE("equator stays in one chart, meridian needs two", "[partitions]") {
  CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);

  PathFn equator = [](double t) { return sphere_point(std::numbers::pi / 2, t); };
  LabeledPathPartition Te = build_path_partition(equator, 0, kTwoPi, geom.cover, 500);
  REQUIRE(Te.segments() == 1);
  REQUIRE(partition_min_margin(equator, Te, geom.cover) > 0);

  PathFn meridian = [](double t) { return sphere_point(t, 0.3); };
  LabeledPathPartition Tm = build_path_partition(meridian, 0, std::numbers::pi,
                                                 geom.cover, 1000);
  REQUIRE(Tm.segments() == 2);
  REQUIRE(Tm.labels == std::vector<int>{0, 1});
  // the breakpoint must land in the overlap band: both margins positive
  Vec cut = meridian(Tm.breakpoints[1]);
  REQUIRE(geom.cover.margin(0, cut) > 0);
  REQUIRE(geom.cover.margin(1, cut) > 0);
}

TEST_CASE("path moves: refine, merge, relabel", "[partitions]") {
  CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
  PathFn equator = [](double t) { return sphere_point(std::numbers::pi / 2, t); };
  LabeledPathPartition T = build_path_partition(equator, 0, kTwoPi, geom.cover, 100);

  LabeledPathPartition refined = refine_path(T, 0, 0.4);
  REQUIRE(refined.segments() == T.segments() + 1);
  LabeledPathPartition back = merge_path(refined, 0);
  REQUIRE(back.breakpoints == T.breakpoints);
  REQUIRE(back.labels == T.labels);

  // the equator lies inside the overlap band: relabel to the south chart works
  LabeledPathPartition relabeled = relabel_path(T, 0, 1, equator, geom.cover);
  REQUIRE(relabeled.labels[0] == 1);

  // a polar cap path is not inside the south chart
  PathFn polar = [](double t) { return sphere_point(0.2 + 0.1 * t, 0.0); };
  LabeledPathPartition Tp = build_path_partition(polar, 0, 1, geom.cover, 50);
  REQUIRE_THROWS_AS(relabel_path(Tp, 0, 1, polar, geom.cover), InvalidRelabel);
}

TEST_CASE("concatenation of partitions", "[partitions]") {
  LabeledPathPartition A{{0.0, 1.0}, {0}};
  LabeledPathPartition B{{1.0, 2.0}, {1}};
  LabeledPathPartition AB = concat_partitions(A, B);
  REQUIRE(AB.breakpoints == std::vector<double>{0.0, 1.0, 2.0});
  REQUIRE(AB.labels == std::vector<int>{0, 1});

  LabeledPathPartition B_same{{1.0, 2.0}, {0}};
  REQUIRE(concat_partitions(A, B_same).segments() == 2);  // equal labels kept

  LabeledPathPartition C{{2.0, 3.5}, {1}};
  LabeledPathPartition left = concat_partitions(concat_partitions(A, B), C);
  LabeledPathPartition right = concat_partitions(A, concat_partitions(B, C));
  REQUIRE(left.breakpoints == right.breakpoints);
  REQUIRE(left.labels == right.labels);
}

TEST_CASE("loop partition of the equator and its cut", "[partitions]") {
  CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
  LoopFn equator = [](double a) { return sphere_point(std::numbers::pi / 2, a); };
  LabeledLoopPartition T = build_loop_partition(equator, geom.cover, 300);
  REQUIRE(T.arcs() == 1);

  LabeledPathPartition cut = cut_loop_partition(T, 1.0);
  REQUIRE(cut.a() == Catch::Approx(1.0));
  REQUIRE(cut.b() == Catch::Approx(1.0 + kTwoPi));
}

TEST_CASE("surface builder labels and validity", "[partitions]") {
  CatalogEntry torus = make_catalog_entry("torus_flat_gerbe", {{"omega", 1.0}}, false);
  PatchMap ident = [](int, double u, double v) { return torus4_point(u, v); };
  SurfacePartition mesh = build_surface_partition(ident, Domain::kTorus, torus.cover, 8, 8);
  REQUIRE(surface_partition_valid(mesh, ident, torus.cover));

  // constant map lands in a single chart
  CatalogEntry box = make_catalog_entry("box_gerbe", {}, false);
  PatchMap constant = [](int, double, double) { return Vec{0.5, 0.5, 0.5}; };
  SurfacePartition cmesh =
      build_surface_partition(constant, Domain::kRectangle, box.cover, 4, 4);
  for (const MeshFace& f : cmesh.faces) REQUIRE(f.label == 0);

  // sphere with the two-chart cover: north bricks 0, south bricks 1
  CatalogEntry sphere = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
  PatchMap emb = [](int, double u, double v) { return sphere_point(v, u); };
  SurfacePartition smesh = build_surface_partition(emb, Domain::kSphere, sphere.cover, 8, 8);
  bool saw_north = false, saw_south = false;
  for (const MeshFace& f : smesh.faces) {
    double v_mid = 0.5 * (f.v0 + f.v1);
    if (f.v1 < std::numbers::pi / 2 - 0.35) REQUIRE(f.label == 0);
    if (f.v0 > std::numbers::pi / 2 + 0.35) REQUIRE(f.label == 1);
    (v_mid < std::numbers::pi / 2 ? saw_north : saw_south) = true;
  }
  REQUIRE((saw_north && saw_south));
}

TEST_CASE("all internal vertices of built meshes are trivalent", "[partitions][property]") {
  for (Domain d : {Domain::kRectangle, Domain::kCylinder, Domain::kTorus, Domain::kDisk,
                   Domain::kSphere}) {
    for (int res : {4, 9, 16}) {
      SurfacePartition mesh = build_domain_mesh(d, res, res);
      mesh.check_structure();
      int internal = 0;
      for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
        if (mesh.vertices[v].out_halfedge < 0 || mesh.vertices[v].on_boundary) continue;
        REQUIRE(mesh.incident_faces_ccw(v).size() == 3);
        ++internal;
      }
      REQUIRE(internal > 0);
    }
  }
}

TEST_CASE("face moves: refine, merge, relabel", "[partitions]") {
  CatalogEntry torus = make_catalog_entry("torus_flat_gerbe", {{"omega", 1.0}}, false);
  PatchMap ident = [](int, double u, double v) { return torus4_point(u, v); };
  SurfacePartition mesh = build_surface_partition(ident, Domain::kTorus, torus.cover, 6, 6);
  size_t nf = mesh.faces.size();

  SurfacePartition refined = refine_face(mesh, 3, 0, 0.3);
  REQUIRE(refined.faces.size() == nf + 1);
  refined.check_structure();
  REQUIRE(surface_partition_valid(refined, ident, torus.cover));

  SurfacePartition back = merge_faces(refined, 3, static_cast<int>(refined.faces.size()) - 1);
  back.check_structure();
  REQUIRE(back.faces.size() == nf);
  std::multiset<std::array<double, 4>> before, after;
  for (const MeshFace& f : mesh.faces) before.insert({f.u0, f.v0, f.u1, f.v1});
  for (const MeshFace& f : back.faces) after.insert({f.u0, f.v0, f.u1, f.v1});
  REQUIRE(before == after);

  // relabel a face inside the overlap band
  int cand = -1, newlab = -1;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()) && cand < 0; ++f)
    for (int c = 0; c < torus.cover.size(); ++c) {
      if (c == mesh.faces[f].label) continue;
      if (face_min_margin(mesh, f, c, ident, torus.cover, 12) > 0) {
        cand = f;
        newlab = c;
        break;
      }
    }
  REQUIRE(cand >= 0);
  SurfacePartition relabeled = relabel_face(mesh, cand, newlab, ident, torus.cover);
  REQUIRE(relabeled.faces[cand].label == newlab);

  // relabeling a face deep inside another region must fail
  int deep = -1;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    double margin = face_min_margin(mesh, f, mesh.faces[f].label, ident, torus.cover, 4);
    bool movable = false;
    for (int c = 0; c < torus.cover.size(); ++c)
      if (c != mesh.faces[f].label &&
          face_min_margin(mesh, f, c, ident, torus.cover, 4) > 0)
        movable = true;
    if (margin > 0.2 && !movable) {
      deep = f;
      break;
    }
  }
  REQUIRE(deep >= 0);
  int other = (mesh.faces[deep].label + 1) % torus.cover.size();
  REQUIRE_THROWS_AS(relabel_face(mesh, deep, other, ident, torus.cover), InvalidRelabel);
}

TEST_CASE("volume partition invariants", "[partitions]") {
  VolumePartition vp = build_volume_partition(4, 4, 4);
  REQUIRE(vp.max_internal_vertex_regions() <= 4);

  CatalogEntry box = make_catalog_entry("box_gerbe", {{"charts", 2.0}}, false);
  label_volume(vp, [](const Vec& p) { return p; }, box.cover);
  vp.boundary.check_structure();
  // boundary faces carry their owning cell's label
  for (size_t f = 0; f < vp.boundary.faces.size(); ++f)
    REQUIRE(vp.boundary.faces[f].label == vp.cells[vp.boundary_face_cell[f]].label);
  // closed surface: no boundary halfedges
  REQUIRE(vp.boundary.boundary_cycle_starts().empty());
}

TEST_CASE("builders reject impossible requests", "[partitions]") {
  CatalogEntry box = make_catalog_entry("box_gerbe", {}, false);
  PathFn escaping = [](double t) { return Vec{0.5 + 4 * t, 0.5, 0.5}; };
  REQUIRE_THROWS_AS(build_path_partition(escaping, 0, 1, box.cover, 200), NoCoveringChart);
  REQUIRE_THROWS_AS(build_domain_mesh(Domain::kTorus, 1, 4), BadParameter);
}
