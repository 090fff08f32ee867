// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "holonomy/holonomy.hpp"

using namespace holonomy;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("[%s] C%d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const QuadConfig kQuad;

// ---------------------------------------------------------------------------
// C1: monopole holonomies against closed forms, runtime < 1 s each
// ---------------------------------------------------------------------------

void criterion_1() {
  bool pass = true;
  char buf[160];
  double worst_eq = 0, worst_lat = 0, worst_time = 0;
  for (int n : {1, 2, 3}) {
    CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", double(n)}}, false);
    auto t0 = std::chrono::steady_clock::now();
    LoopFn equator = [](double a) { return sphere_point(std::numbers::pi / 2, a); };
    LabeledLoopPartition T = build_loop_partition(equator, geom.cover, 400);
    double phase = z_loop_from_bundle(*geom.bundle, equator, T, kQuad).phase.accumulated();
    double defect = std::abs(canonical_angle(phase - n * std::numbers::pi));
    worst_eq = std::max(worst_eq, defect);
    pass = pass && defect <= 1e-6;
    worst_time = std::max(worst_time, seconds_since(t0));

    for (double theta0 : {0.6, 1.3, 2.4}) {
      t0 = std::chrono::steady_clock::now();
      LoopFn lat = [theta0](double a) { return sphere_point(theta0, a); };
      LabeledLoopPartition Tl = build_loop_partition(lat, geom.cover, 400);
      double ph = z_loop_from_bundle(*geom.bundle, lat, Tl, kQuad).phase.accumulated();
      double expect = n * std::numbers::pi * (1 - std::cos(theta0));
      double d = std::abs(canonical_angle(ph - expect));
      worst_lat = std::max(worst_lat, d);
      pass = pass && d <= 1e-5;
      worst_time = std::max(worst_time, seconds_since(t0));
    }
  }
  pass = pass && worst_time < 1.0;
  std::snprintf(buf, sizeof buf,
                "monopole holonomy: equator defect %.2e (tol 1e-6), latitude defect "
                "%.2e (tol 1e-5), slowest %.2f s (< 1 s)",
                worst_eq, worst_lat, worst_time);
  report(1, pass, buf);
}

// ---------------------------------------------------------------------------
// C2: Chern extraction from accumulated boundary phases and from the flux
// ---------------------------------------------------------------------------

void criterion_2() {
  bool pass = true;
  char buf[160];
  double worst_sum = 0, worst_flux = 0;
  for (int n : {1, 2, 3}) {
    CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", double(n)}}, false);
    double theta0 = 1.5;  // inside the overlap band
    auto north = geom.maps.at("cap").make_surface({{"theta0", theta0}}, 10, 4);
    auto south = geom.maps.at("cap_south").make_surface({{"theta0", theta0}}, 10, 4);
    double total = stokes_check_1d(*geom.bundle, north, kQuad).boundary_accumulated +
                   stokes_check_1d(*geom.bundle, south, kQuad).boundary_accumulated;
    worst_sum = std::max(worst_sum, std::abs(total - kTwoPi * n));

    auto sphere = geom.maps.at("sphere_identity").make_surface({}, 12, 8);
    double chern = bundle_flux(*geom.bundle, sphere, kQuad) / kTwoPi;
    worst_flux = std::max(worst_flux, std::abs(chern - n));
  }
  pass = worst_sum <= 1e-5 && worst_flux <= 1e-6;
  std::snprintf(buf, sizeof buf,
                "Chern extraction: two-cap boundary sum defect %.2e (tol 1e-5), "
                "flux/2pi defect %.2e (tol 1e-6)",
                worst_sum, worst_flux);
  report(2, pass, buf);
}

// ---------------------------------------------------------------------------
// C3: 1-D Stokes defect on random caps/annuli + order of convergence
// ---------------------------------------------------------------------------

void criterion_3() {
  CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
  const BundleData& data = *geom.bundle;
  Rng rng(0);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    bool cap = t % 2 == 0;
    double ta = rng.uniform(0.5, 1.2), tb = rng.uniform(1.8, 2.6);
    double wiggle = rng.uniform(-0.15, 0.15), shift = rng.uniform(0, kTwoPi);
    SurfaceObject so;
    if (cap) {
      double t0 = rng.uniform(0.6, 2.4);
      so.X = [t0, wiggle, shift](int, double u, double v) {
        return sphere_point(t0 * v * (1 + 0.2 * wiggle * v * std::sin(u + shift)), u);
      };
      so.mesh = build_domain_mesh(Domain::kDisk, 10, 4);
      so.mesh.orientation = -1;
    } else {
      so.X = [ta, tb, wiggle, shift](int, double u, double v) {
        return sphere_point(ta + (tb - ta) * v + wiggle * std::sin(u + shift) * v * (1 - v),
                            u);
      };
      so.mesh = build_domain_mesh(Domain::kCylinder, 10, 4);
      so.mesh.orientation = -1;
    }
    label_faces_greedy(so.mesh, so.X, geom.cover);
    worst = std::max(worst, stokes_check_1d(data, so, kQuad).defect);
  }
  bool pass = worst <= 1e-5;

  // convergence: fixed low-order rules, boundary segment count doubling
  QuadConfig lowq = QuadConfig::fixed(2, 2);
  double defects[3];
  int idx = 0;
  for (int nu : {6, 12, 24}) {
    SurfaceObject cap = geom.maps.at("cap").make_surface({{"theta0", 1.1}}, nu, nu / 2);
    defects[idx++] = stokes_check_1d(data, cap, lowq).defect;
  }
  bool order_ok = defects[1] <= defects[0] / 3.0 + 5e-13 &&
                  defects[2] <= defects[1] / 3.0 + 5e-13;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "1-D Stokes: worst defect %.2e over 20 random maps (tol 1e-5); "
                "low-order defects %.2e -> %.2e -> %.2e under doubling (>= 2nd order)",
                worst, defects[0], defects[1], defects[2]);
  report(3, pass && order_ok, buf);
}

// ---------------------------------------------------------------------------
// C4: 2-D Stokes on the box + order of convergence across 4^3/8^3/16^3
// ---------------------------------------------------------------------------

void criterion_4() {
  CatalogEntry geom = make_catalog_entry("box_gerbe", {}, false);
  auto vo = geom.maps.at("cube").make_volume({}, 8, 8, 8);
  StokesReport rep = stokes_check_2d(*geom.gerbe, vo, kQuad);
  bool pass = rep.defect <= 1e-5 && std::abs(rep.boundary_accumulated - 1.0) <= 1e-5;

  // order study: midpoint rules on a warped cube so the error is
  // resolution-limited rather than exact
  auto warp = [](const Vec& p) {
    return Vec{p[0] + 0.08 * std::sin(std::numbers::pi * p[1]) * std::sin(2 * p[2]),
               p[1] + 0.06 * std::sin(std::numbers::pi * p[2]) * std::cos(p[0]),
               p[2] + 0.07 * std::sin(std::numbers::pi * p[0]) * std::sin(p[1])};
  };
  QuadConfig lowq = QuadConfig::fixed(2, 1, 1);
  double defects[3];
  int idx = 0;
  for (int n : {4, 8, 16}) {
    VolumeObject wv;
    wv.H = warp;
    wv.partition = build_volume_partition(n, n, n);
    label_volume(wv.partition, wv.H, geom.cover);
    defects[idx++] = stokes_check_2d(*geom.gerbe, wv, lowq).defect;
  }
  bool order_ok = defects[1] <= defects[0] / 3.0 + 5e-13 &&
                  defects[2] <= defects[1] / 3.0 + 5e-13;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "2-D Stokes: cube boundary %.9f rad, defect %.2e at 8^3 (tol 1e-5); "
                "warped-cube low-order defects %.2e -> %.2e -> %.2e (>= 2nd order)",
                rep.boundary_accumulated, rep.defect, defects[0], defects[1], defects[2]);
  report(4, pass && order_ok, buf);
}

// ---------------------------------------------------------------------------
// C5: axiom suites on catalog data; injected-defect mutants detected
// ---------------------------------------------------------------------------

void criterion_5() {
  bool pass = true;
  char buf[240];
  double d1a, d1b, d2a, d2b;
  {
    CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
    AxiomReport rep = axiom_suite_1d(bundle_functor(*geom.bundle, kQuad), geom, 50, 1e-5, 0);
    d1a = rep.max_defect();
    pass = pass && rep.pass();
  }
  {
    CatalogEntry geom = make_catalog_entry("circle_flat", {}, false);
    AxiomReport rep = axiom_suite_1d(bundle_functor(*geom.bundle, kQuad), geom, 50, 1e-5, 0);
    d1b = rep.max_defect();
    pass = pass && rep.pass();
  }
  {
    CatalogEntry geom = make_catalog_entry(
        "torus_flat_gerbe", {{"omega", 1.0}, {"a", 0.4}, {"b", -0.7}}, false);
    AxiomReport rep = axiom_suite_2d(gerbe_functor(*geom.gerbe, kQuad), geom, 30, 1e-5, 0);
    d2a = rep.max_defect();
    pass = pass && rep.pass();
  }
  {
    CatalogEntry geom = make_catalog_entry("torus_global_B", {{"theta", 1.3}}, false);
    AxiomReport rep = axiom_suite_2d(gerbe_functor(*geom.gerbe, kQuad), geom, 30, 1e-5, 0);
    d2b = rep.max_defect();
    pass = pass && rep.pass();
  }

  // mutant A: dropped transition factor in the path evaluator
  double mutant1;
  {
    CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
    const BundleData data = *geom.bundle;
    TransportFunctor broken = bundle_functor(data, kQuad);
    broken.z_path = [data](const PathFn& p, const LabeledPathPartition& T) {
      Phase honest = z_path_from_bundle(data, p, T, kQuad, false).phase;
      if (T.segments() >= 2)
        honest -=
            z_point_from_bundle(data, p(T.breakpoints[1]), +1, T.labels[0], T.labels[1]);
      return honest;
    };
    AxiomReport rep = axiom_suite_1d(broken, geom, 50, 1e-5, 0);
    mutant1 = std::max(rep.defect("iii_gluing_breakpoint"), rep.defect("prop_c"));
    pass = pass && mutant1 >= 1e-2;
  }
  // mutant B: flipped edge orientation in the surface evaluator
  double mutant2;
  {
    CatalogEntry geom = make_catalog_entry(
        "torus_flat_gerbe", {{"omega", 1.0}, {"a", 0.4}, {"b", -0.7}}, false);
    GerbeData flipped = *geom.gerbe;
    auto a2 = geom.gerbe->A2;
    flipped.A2 = [a2](int j, int k, const Vec& p, const Vec& w) { return a2(k, j, p, w); };
    GerbeFunctor broken = gerbe_functor(*geom.gerbe, kQuad);
    broken.z_surface = [flipped](const SurfaceObject& so) {
      return z_surface(flipped, so, kQuad).phase;
    };
    AxiomReport rep = axiom_suite_2d(broken, geom, 10, 1e-5, 0);
    mutant2 = rep.defect("iii_gluing");
    pass = pass && mutant2 >= 1e-2;
  }
  std::snprintf(buf, sizeof buf,
                "axiom suites: 1d defects %.2e / %.2e, 2d defects %.2e / %.2e "
                "(tol 1e-5); mutants detected at %.2e / %.2e (>= 1e-2)",
                d1a, d1b, d2a, d2b, mutant1, mutant2);
  report(5, pass, buf);
}

// ---------------------------------------------------------------------------
// C6: gluing exactness, 10 path cases and 10 partial-gluing surface cases
// ---------------------------------------------------------------------------

void criterion_6() {
  double worst_path = 0;
  {
    CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
    const BundleData& data = *geom.bundle;
    Rng rng(0);
    for (int t = 0; t < 10; ++t) {
      auto [p, a, b] = geom.random_path(rng);
      LabeledPathPartition T = build_path_partition(p, a, b, geom.cover, 600);
      double direct = z_path_from_bundle(data, p, T, kQuad).phase.accumulated();
      // split at a breakpoint when one exists, else inside a segment
      double cut;
      LabeledPathPartition L, R;
      if (T.segments() >= 2) {
        int m = T.segments() / 2;
        cut = T.breakpoints[m];
        L.breakpoints.assign(T.breakpoints.begin(), T.breakpoints.begin() + m + 1);
        L.labels.assign(T.labels.begin(), T.labels.begin() + m);
        R.breakpoints.assign(T.breakpoints.begin() + m, T.breakpoints.end());
        R.labels.assign(T.labels.begin() + m, T.labels.end());
      } else {
        cut = a + (b - a) * rng.uniform(0.3, 0.7);
        L.breakpoints = {a, cut};
        L.labels = {T.labels[0]};
        R.breakpoints = {cut, b};
        R.labels = {T.labels[0]};
      }
      double glued = glue_z_path(data, p, L, p, R, kQuad).phase.accumulated();
      worst_path = std::max(worst_path, std::abs(canonical_angle(glued - direct)));
    }
  }

  double worst_surf = 0;
  {
    Rng rng(1);
    for (int t = 0; t < 10; ++t) {
      CatalogEntry geom =
          t % 2 == 0
              ? make_catalog_entry("torus_global_B", {{"theta", 1.0 + 0.2 * t}}, false)
              : make_catalog_entry("torus_flat_gerbe",
                                   {{"omega", 0.8}, {"a", 0.3}, {"b", -0.5}}, false);
      SurfaceObject so = geom.random_surface(rng);
      const SurfacePartition& mesh = so.mesh;
      int nu = 0;
      for (const MeshFace& f : mesh.faces) nu += std::abs(f.v0 - mesh.faces[0].v0) < 1e-12;
      int rows = static_cast<int>(mesh.faces.size()) / nu;
      // find a row boundary with matching labels across it
      int cut = -1;
      for (int r = 1; r < rows && cut < 0; ++r) {
        bool match = true;
        for (int k = 0; k < nu && match; ++k) {
          const MeshFace& up = mesh.faces[r * nu + k];
          double mid = 0.5 * (up.u0 + up.u1);
          for (int k2 = 0; k2 < nu; ++k2) {
            const MeshFace& lo = mesh.faces[(r - 1) * nu + k2];
            double m = mid - kTwoPi * std::floor((mid - lo.u0) / kTwoPi);
            if (m >= lo.u0 - 1e-12 && m <= lo.u1 + 1e-12 && lo.label != up.label)
              match = false;
          }
        }
        if (match) cut = r;
      }
      if (cut < 0) continue;
      // cut the torus open at row 0, then partially glue the two halves
      PatchMap X = so.X;
      TorusCutPair pair = make_torus_cut_pair(X, geom.cover, nu, rows, 0);
      auto specs = pair.cut_open.mesh.to_specs();
      std::vector<FaceSpec> bot(specs.begin(), specs.begin() + cut * nu);
      std::vector<FaceSpec> top(specs.begin() + cut * nu, specs.end());
      int nverts = static_cast<int>(pair.cut_open.mesh.vertices.size());
      SurfaceObject h1{X, SurfacePartition::from_faces(nverts, bot, +1, kTwoPi, 0)};
      SurfaceObject h2{X, SurfacePartition::from_faces(nverts, top, +1, kTwoPi, 0)};
      double whole = z_surface(*geom.gerbe, pair.cut_open, kQuad).phase.accumulated();
      double parts =
          partial_glue_z_surface(*geom.gerbe, h1, h2, kQuad).phase.accumulated();
      worst_surf = std::max(worst_surf, std::abs(canonical_angle(whole - parts)));
    }
  }
  bool pass = worst_path <= 1e-9 && worst_surf <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "gluing exactness: path composite defect %.2e, partial-gluing "
                "defect %.2e (tol 1e-9)",
                worst_path, worst_surf);
  report(6, pass, buf);
}

// ---------------------------------------------------------------------------
// C7: reconstruction round trips, total < 60 s
// ---------------------------------------------------------------------------

void criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;

  // bundle -> functor -> bundle
  double g_worst = 0, a_worst = 0;
  CatalogEntry sphere = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
  {
    const BundleData& data = *sphere.bundle;
    TransportFunctor Z = bundle_functor(data, kQuad);
    Rng rng(0);
    for (int t = 0; t < 100; ++t) {
      Vec y = sphere_point(rng.uniform(std::numbers::pi / 2 - 0.3,
                                       std::numbers::pi / 2 + 0.3),
                           rng.uniform(0, kTwoPi));
      g_worst = std::max(g_worst,
                         std::abs(reconstruct_g(Z, y, 0, 1).unit() - data.g(0, 1, y)));
    }
    for (int t = 0; t < 10; ++t) {
      double th = rng.uniform(1.3, 1.9), ph = rng.uniform(0, kTwoPi);
      Vec y = sphere_point(th, ph);
      Vec v = {-std::sin(ph), std::cos(ph), 0};
      int chart = t % 2;
      a_worst = std::max(a_worst, std::abs(reconstruct_A(Z, sphere.cover, chart, y, v, 1e-4) -
                                           data.A(chart, y, v)));
    }
    pass = pass && g_worst <= 1e-9 && a_worst <= 1e-4;
  }

  // gerbe -> functor -> gerbe
  double g3_worst = 0, a2_worst = 0, f_worst = 0;
  CatalogEntry torus = make_catalog_entry(
      "torus_flat_gerbe", {{"omega", 1.3}, {"a", 0.6}, {"b", -0.25}}, false);
  CatalogEntry global = make_catalog_entry("torus_global_B", {{"theta", 0.9}}, false);
  {
    GerbeFunctor Z = gerbe_functor(*torus.gerbe, QuadConfig::fixed(12, 12));
    Rng rng(1);
    const double pi = std::numbers::pi;
    for (int t = 0; t < 20; ++t) {
      // points in the triple-overlap components (hot and cold)
      double cu = (t % 4 < 2) ? 0.0 : pi;
      double cv = (t % 2 == 0) ? pi : 0.0;
      Vec y = torus4_point(cu + rng.uniform(-0.15, 0.15), cv + rng.uniform(-0.15, 0.15));
      g3_worst = std::max(
          g3_worst, std::abs(reconstruct_g3(Z, y, 0, 1, 2).unit() -
                             torus.gerbe->g3(0, 1, 2, y)));
    }
    for (int t = 0; t < 10; ++t) {
      Vec y = torus4_point(rng.uniform(-0.2, 0.2), pi + rng.uniform(-0.2, 0.2));
      Vec v = {-y[1], y[0], 0, 0};
      a2_worst = std::max(a2_worst,
                          std::abs(reconstruct_A2(Z, torus.cover, 0, 1, y, v, 1e-4) -
                                   torus.gerbe->A2(0, 1, y, v)));
    }
    GerbeFunctor Zg = gerbe_functor(*global.gerbe, QuadConfig::fixed(12, 12));
    for (int t = 0; t < 10; ++t) {
      Vec q = torus4_point(rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi));
      Vec qu = {-q[1], q[0], 0, 0}, qv = {0, 0, -q[3], q[2]};
      f_worst = std::max(f_worst,
                         std::abs(reconstruct_F(Zg, global.cover, 0, q, qu, qv, 1e-4) -
                                  global.gerbe->F(0, q, qu, qv)));
    }
    pass = pass && g3_worst <= 1e-9 && a2_worst <= 1e-3 && f_worst <= 1e-3;
  }

  // functor -> data -> functor
  double path_worst = 0, surf_worst = 0;
  {
    TransportFunctor Z = bundle_functor(*sphere.bundle, kQuad);
    BundleData rebuilt = reconstructed_bundle(Z, sphere.cover, 1e-4);
    TransportFunctor Z2 = bundle_functor(rebuilt, QuadConfig::fixed(24));
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
      auto [p, a, b] = sphere.random_path(rng);
      LabeledPathPartition T = build_path_partition(p, a, b, sphere.cover, 500);
      path_worst = std::max(path_worst,
                            std::abs(canonical_angle(Z.z_path(p, T).accumulated() -
                                                     Z2.z_path(p, T).accumulated())));
    }
    pass = pass && path_worst <= 1e-4;
  }
  {
    Rng rng(3);
    for (int g = 0; g < 2; ++g) {
      const CatalogEntry& geom = g == 0 ? torus : global;
      GerbeFunctor Z = gerbe_functor(*geom.gerbe, QuadConfig::fixed(10, 8));
      GerbeData rebuilt = reconstructed_gerbe(Z, geom.cover, 1e-4);
      GerbeFunctor Z2 = gerbe_functor(rebuilt, QuadConfig::fixed(8, 6));
      for (int t = 0; t < 10; ++t) {
        SurfaceObject so = geom.random_surface(rng);
        surf_worst = std::max(surf_worst,
                              std::abs(canonical_angle(Z.z_surface(so).accumulated() -
                                                       Z2.z_surface(so).accumulated())));
      }
    }
    pass = pass && surf_worst <= 1e-3;
  }

  double elapsed = seconds_since(t0);
  pass = pass && elapsed < 60.0;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "round trips: g %.1e (1e-9), A %.1e (1e-4), g3 %.1e (1e-9), A2 %.1e, "
                "F %.1e (1e-3), paths %.1e (1e-4), surfaces %.1e (1e-3), %.1f s (< 60)",
                g_worst, a_worst, g3_worst, a2_worst, f_worst, path_worst, surf_worst,
                elapsed);
  report(7, pass, buf);
}

// ---------------------------------------------------------------------------
// C8: move and reparametrization invariance
// ---------------------------------------------------------------------------

void criterion_8() {
  double worst_path_moves = 0, worst_reparam = 0, worst_surf_moves = 0;
  CatalogEntry sphere = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
  const BundleData& data = *sphere.bundle;
  Rng rng(0);
  for (int t = 0; t < 20; ++t) {
    auto [p, a, b] = sphere.random_path(rng);
    LabeledPathPartition T = build_path_partition(p, a, b, sphere.cover, 600);
    double base = z_path_from_bundle(data, p, T, kQuad).phase.accumulated();

    LabeledPathPartition cur = T;
    for (int mv = 0; mv < 5; ++mv) {
      int kind = rng.uniform_int(0, 2);
      if (kind == 0) {
        cur = refine_path(cur, rng.uniform_int(0, cur.segments() - 1),
                          rng.uniform(0.25, 0.75));
      } else if (kind == 1) {
        bool merged = false;
        for (int s = 0; s + 1 < cur.segments(); ++s)
          if (cur.labels[s] == cur.labels[s + 1]) {
            cur = merge_path(cur, s);
            merged = true;
            break;
          }
        if (!merged) cur = refine_path(cur, 0, 0.5);
      } else if (cur.segments() >= 3) {
        int s = 1 + rng.uniform_int(0, cur.segments() - 3);
        int other = 1 - cur.labels[s];
        LabeledPathPartition probe{{cur.breakpoints[s], cur.breakpoints[s + 1]}, {other}};
        if (partition_valid(p, probe, sphere.cover, 64))
          cur = relabel_path(cur, s, other, p, sphere.cover);
      }
    }
    double moved = z_path_from_bundle(data, p, cur, kQuad).phase.accumulated();
    worst_path_moves = std::max(worst_path_moves, std::abs(canonical_angle(moved - base)));

    // endpoint-fixing reparametrization
    auto sigma = [&](double c1, double c2) {
      return [a = a, b = b, c1, c2](double x) {
        double s = (x - a) / (b - a);
        return x + (b - a) *
                       (c1 * std::sin(std::numbers::pi * s) +
                        c2 * std::sin(2 * std::numbers::pi * s)) /
                       std::numbers::pi;
      };
    };
    auto sig = sigma(rng.uniform(-0.2, 0.2), rng.uniform(-0.1, 0.1));
    PathFn p2 = [p = p, sig](double x) { return p(sig(x)); };
    LabeledPathPartition T2 = T;
    for (size_t k = 1; k + 1 < T.breakpoints.size(); ++k) {
      double lo = a, hi = b;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (sig(mid) < T.breakpoints[k] ? lo : hi) = mid;
      }
      T2.breakpoints[k] = 0.5 * (lo + hi);
    }
    double rep = z_path_from_bundle(data, p2, T2, kQuad).phase.accumulated();
    worst_reparam = std::max(worst_reparam, std::abs(canonical_angle(rep - base)));
  }

  CatalogEntry torus = make_catalog_entry(
      "torus_flat_gerbe", {{"omega", 1.0}, {"a", 0.4}, {"b", -0.7}}, false);
  Rng rng2(1);
  for (int t = 0; t < 10; ++t) {
    SurfaceObject so = torus.random_surface(rng2);
    double base = z_surface(*torus.gerbe, so, kQuad).phase.accumulated();
    SurfacePartition cur = so.mesh;
    for (int mv = 0; mv < 5; ++mv) {
      int kind = rng2.uniform_int(0, 2);
      int nf = static_cast<int>(cur.faces.size());
      if (kind == 0) {
        int f = rng2.uniform_int(0, nf - 1);
        if (cur.faces[f].is_rect)
          cur = refine_face(cur, f, rng2.uniform_int(0, 1), rng2.uniform(0.3, 0.45));
      } else if (kind == 1) {
        int f = rng2.uniform_int(0, nf - 1);
        if (cur.faces[f].is_rect) {
          SurfacePartition split =
              refine_face(cur, f, rng2.uniform_int(0, 1), rng2.uniform(0.55, 0.7));
          cur = merge_faces(split, f, static_cast<int>(split.faces.size()) - 1);
        }
      } else {
        int f = rng2.uniform_int(0, nf - 1);
        for (int c = 0; c < torus.cover.size(); ++c) {
          if (c == cur.faces[f].label) continue;
          if (face_min_margin(cur, f, c, so.X, torus.cover, 12) > 0) {
            cur = relabel_face(cur, f, c, so.X, torus.cover);
            break;
          }
        }
      }
    }
    SurfaceObject moved{so.X, cur};
    double got = z_surface(*torus.gerbe, moved, kQuad).phase.accumulated();
    worst_surf_moves = std::max(worst_surf_moves, std::abs(canonical_angle(got - base)));
  }

  bool pass = worst_path_moves <= 1e-6 && worst_surf_moves <= 1e-6 &&
              worst_reparam <= 1e-8;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "invariance: path moves %.2e, surface moves %.2e (tol 1e-6), "
                "reparametrizations %.2e (tol 1e-8)",
                worst_path_moves, worst_surf_moves, worst_reparam);
  report(8, pass, buf);
}

// ---------------------------------------------------------------------------
// C9: cocycle checkers pass the catalog and flag single-axiom mutants
// ---------------------------------------------------------------------------

void criterion_9() {
  bool pass = true;
  for (const std::string& name : catalog_names()) {
    CatalogEntry e = make_catalog_entry(name, {}, false);
    if (e.bundle) pass = pass && check_bundle_cocycle(*e.bundle, 1e-6).pass;
    if (e.gerbe) pass = pass && check_gerbe_cocycle(*e.gerbe, 1e-6).pass;
  }

  std::vector<std::pair<std::string, double>> flagged;

  // B1: three-arc circle cover with a broken constant cocycle
  {
    ChartCover cover;
    cover.ambient_dim = 2;
    cover.manifold_dim = 1;
    cover.projection = [](const Vec& p) { return p.normalized(); };
    const double w = 4.4;  // width > 4*pi/3: all three arcs share points
    for (int c = 0; c < 3; ++c) {
      double center = kTwoPi * c / 3;
      Chart chart;
      chart.membership = [center, w](const Vec& p) {
        return signed_arc_depth(std::atan2(p[1], p[0]), center - w / 2, center + w / 2);
      };
      for (int s = 0; s < 90; ++s) {
        Vec p = {std::cos(kTwoPi * s / 90), std::sin(kTwoPi * s / 90)};
        if (chart.membership(p) > 0.02) chart.samples.push_back(p);
      }
      cover.charts.push_back(chart);
    }
    BundleData bad;
    bad.cover = cover;
    bad.g = [](int i, int j, const Vec&) {
      auto base = [](int a, int b) {  // cocycle-exact except the (0,2) pair
        if (a == b) return 0.0;
        double alpha = 0;
        if ((a == 0 && b == 1) || (b == 0 && a == 1)) alpha = 0.4;
        if ((a == 1 && b == 2) || (b == 1 && a == 2)) alpha = 0.3;
        if ((a == 0 && b == 2) || (b == 0 && a == 2)) alpha = 0.7 + 0.005;
        return (a < b) ? alpha : -alpha;
      };
      return std::polar(1.0, base(i, j));
    };
    bad.A = [](int, const Vec&, const Vec&) { return 0.0; };
    BundleCocycleReport rep = check_bundle_cocycle(bad, 1e-6);
    flagged.push_back({"B1", rep.b1_max});
    pass = pass && !rep.pass && rep.b1_max >= 1e-3;
  }
  // B2: scaled monopole potential
  {
    CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", 1.0}}, false);
    BundleData bad = *geom.bundle;
    auto a0 = geom.bundle->A;
    bad.A = [a0](int c, const Vec& y, const Vec& v) { return 1.05 * a0(c, y, v); };
    BundleCocycleReport rep = check_bundle_cocycle(bad, 1e-6);
    flagged.push_back({"B2", rep.b2_max});
    pass = pass && !rep.pass && rep.b2_max >= 1e-3;
  }
  CatalogEntry torus = make_catalog_entry(
      "torus_flat_gerbe", {{"omega", 1.0}, {"a", 0.4}, {"b", -0.7}}, false);
  // G1: repeated indices no longer give 1
  {
    GerbeData bad = *torus.gerbe;
    auto g0 = torus.gerbe->g3;
    bad.g3 = [g0](int i, int j, int k, const Vec& y) {
      if (i == j) return std::polar(1.0, 0.01);
      return g0(i, j, k, y);
    };
    GerbeCocycleReport rep = check_gerbe_cocycle(bad, 1e-6);
    flagged.push_back({"G1", rep.g1_max});
    pass = pass && !rep.pass && rep.g1_max >= 1e-3;
  }
  // G2: cyclic consistency broken on one ordering
  {
    GerbeData bad = *torus.gerbe;
    auto g0 = torus.gerbe->g3;
    bad.g3 = [g0](int i, int j, int k, const Vec& y) {
      std::complex<double> v = g0(i, j, k, y);
      if (i == 1 && j == 2 && k == 0) v *= std::polar(1.0, 0.01);
      return v;
    };
    GerbeCocycleReport rep = check_gerbe_cocycle(bad, 1e-6);
    flagged.push_back({"G2", rep.g2_max});
    pass = pass && !rep.pass && rep.g2_max >= 1e-3;
  }
  // G3: antisymmetry of A2 broken
  {
    GerbeData bad = *torus.gerbe;
    auto a0 = torus.gerbe->A2;
    bad.A2 = [a0](int j, int k, const Vec& y, const Vec& v) {
      return std::abs(a0(j, k, y, v));
    };
    GerbeCocycleReport rep = check_gerbe_cocycle(bad, 1e-6);
    flagged.push_back({"G3", rep.g3_max});
    pass = pass && !rep.pass && rep.g3_max >= 1e-3;
  }
  // G4: one chart's curving perturbed
  {
    CatalogEntry box = make_catalog_entry("box_gerbe", {{"charts", 2.0}}, false);
    GerbeData bad = *box.gerbe;
    auto f0 = box.gerbe->F;
    bad.F = [f0](int k, const Vec& y, const Vec& u, const Vec& v) {
      double extra = k == 1 ? 0.01 * (u[1] * v[2] - u[2] * v[1]) : 0.0;
      return f0(k, y, u, v) + extra;
    };
    GerbeCocycleReport rep = check_gerbe_cocycle(bad, 1e-6);
    flagged.push_back({"G4", rep.g4_max});
    pass = pass && !rep.pass && rep.g4_max >= 1e-3;
  }

  std::string detail = "cocycle checkers: catalog passes at 1e-6; mutants";
  char piece[40];
  for (auto& [axiom, value] : flagged) {
    std::snprintf(piece, sizeof piece, " %s=%.1e", axiom.c_str(), value);
    detail += piece;
  }
  detail += " (>= 1e-3)";
  report(9, pass, detail);
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("acceptance: %d/9 criteria passed in %.1f s\n", 9 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
