// holonomy CLI: evaluates bundle/gerbe parallel transport as labeled state
// sums, runs the numerical axiom and Stokes checks, and reconstructs local
// data from transport functors. One JSON report per invocation on stdout.
//
// Exit codes: 0 ok, 2 schema error, 3 geometry error, 4 numerical
// non-convergence, 5 tolerance failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "holonomy/holonomy.hpp"

using json = nlohmann::ordered_json;
using namespace holonomy;

namespace {

struct SceneSpec {
  std::string command;
  std::string geometry;
  ParamMap params;
  std::string map_name;
  ParamMap map_params;
  std::vector<int> resolution;  // 1-3 entries, map kind dependent
  std::optional<std::vector<double>> breakpoints;  // explicit partition
  std::optional<std::vector<int>> labels;
  QuadConfig quad;
  double tol = -1;  // command-specific default when < 0
  double fd_step = 1e-4;
  int trials = -1;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: HOLONOMY_THREADS or 1
  int partition_samples = 1000;
};

ParamMap parse_kv(const std::vector<std::string>& kvs, const std::string& what) {
  ParamMap out;
  for (const std::string& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw SchemaError(what + " expects key=value, got '" + kv + "'");
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw SchemaError(what + ": cannot parse number in '" + kv + "'");
    }
  }
  return out;
}

void load_scene_file(SceneSpec& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scene file " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("scene file parse: ") + e.what());
  }
  if (j.contains("command")) s.command = j["command"].get<std::string>();
  if (j.contains("geometry")) s.geometry = j["geometry"].get<std::string>();
  if (j.contains("params"))
    for (auto& [k, v] : j["params"].items()) s.params[k] = v.get<double>();
  if (j.contains("map")) s.map_name = j["map"].get<std::string>();
  if (j.contains("map_params"))
    for (auto& [k, v] : j["map_params"].items()) s.map_params[k] = v.get<double>();
  if (j.contains("resolution")) s.resolution = j["resolution"].get<std::vector<int>>();
  if (j.contains("breakpoints"))
    s.breakpoints = j["breakpoints"].get<std::vector<double>>();
  if (j.contains("labels")) s.labels = j["labels"].get<std::vector<int>>();
  if (j.contains("quad")) {
    json q = j["quad"];
    if (q.contains("order_1d")) s.quad.order_1d = q["order_1d"].get<int>();
    if (q.contains("order_2d")) s.quad.order_2d = q["order_2d"].get<int>();
    if (q.contains("order_3d")) s.quad.order_3d = q["order_3d"].get<int>();
    if (q.contains("tol")) s.quad.tol = q["tol"].get<double>();
    if (q.contains("max_depth")) s.quad.max_depth = q["max_depth"].get<int>();
    if (q.contains("adaptive")) s.quad.adaptive = q["adaptive"].get<bool>();
  }
  if (j.contains("tol")) s.tol = j["tol"].get<double>();
  if (j.contains("fd_step")) s.fd_step = j["fd_step"].get<double>();
  if (j.contains("trials")) s.trials = j["trials"].get<int>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) s.threads = j["threads"].get<int>();
  if (j.contains("partition_samples"))
    s.partition_samples = j["partition_samples"].get<int>();
}

json scene_to_json(const SceneSpec& s) {
  json j;
  j["command"] = s.command;
  j["geometry"] = s.geometry;
  j["params"] = json::object();
  for (auto& [k, v] : s.params) j["params"][k] = v;
  j["map"] = s.map_name;
  j["map_params"] = json::object();
  for (auto& [k, v] : s.map_params) j["map_params"][k] = v;
  j["resolution"] = s.resolution;
  if (s.breakpoints) j["breakpoints"] = *s.breakpoints;
  if (s.labels) j["labels"] = *s.labels;
  j["quad"] = {{"order_1d", s.quad.order_1d}, {"order_2d", s.quad.order_2d},
               {"order_3d", s.quad.order_3d}, {"tol", s.quad.tol},
               {"max_depth", s.quad.max_depth}, {"adaptive", s.quad.adaptive}};
  j["tol"] = s.tol;
  j["fd_step"] = s.fd_step;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["threads"] = s.threads;
  j["partition_samples"] = s.partition_samples;
  return j;
}

json phase_json(const Phase& p) {
  return {{"phase_canonical", p.canonical()},
          {"phase_accumulated", p.accumulated()},
          {"value_re", p.unit().real()},
          {"value_im", p.unit().imag()}};
}

const MapEntry& find_map(const CatalogEntry& geom, const std::string& name,
                         const std::string& kind) {
  auto it = geom.maps.find(name);
  if (it == geom.maps.end())
    throw SchemaError("geometry " + geom.name + " has no map '" + name + "'");
  if (it->second.kind != kind)
    throw SchemaError("map '" + name + "' has kind " + it->second.kind + ", expected " +
                      kind);
  return it->second;
}

int res_at(const SceneSpec& s, size_t i, int fallback) {
  return i < s.resolution.size() ? s.resolution[i] : fallback;
}

// explicit breakpoint/label lists only make sense for path and loop objects
void reject_explicit_partition(const SceneSpec& s, const std::string& cmd) {
  if (s.breakpoints || s.labels)
    throw SchemaError("explicit partitions do not apply to " + cmd);
}

// ---------------------------------------------------------------------------

json cmd_check(const SceneSpec& s, bool& pass) {
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  double tol = s.tol > 0 ? s.tol : 1e-6;
  int threads = s.threads > 0 ? s.threads : default_threads();
  json out;
  pass = true;
  if (geom.bundle) {
    BundleCocycleReport rep = check_bundle_cocycle(*geom.bundle, tol, s.fd_step, threads);
    out["bundle"] = {{"b1_max", rep.b1_max}, {"b2_max", rep.b2_max},
                     {"pass", rep.pass}, {"notes", rep.notes}};
    pass = pass && rep.pass;
  } else {
    out["bundle"] = nullptr;
  }
  if (geom.gerbe) {
    GerbeCocycleReport rep = check_gerbe_cocycle(*geom.gerbe, tol, s.fd_step, threads);
    out["gerbe"] = {{"g1_max", rep.g1_max}, {"g2_max", rep.g2_max},
                    {"g3_max", rep.g3_max}, {"g4_max", rep.g4_max},
                    {"pass", rep.pass}, {"notes", rep.notes}};
    pass = pass && rep.pass;
  } else {
    out["gerbe"] = nullptr;
  }
  return out;
}

json cmd_transport(const SceneSpec& s, bool& pass) {
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.bundle) throw BadParameter(s.geometry + " carries no bundle data");
  auto it = geom.maps.find(s.map_name.empty() ? "constant" : s.map_name);
  if (it == geom.maps.end()) throw SchemaError("unknown map '" + s.map_name + "'");
  const MapEntry& map = it->second;

  json out;
  Transported z;
  if (map.kind == "loop") {
    LoopFn loop = map.make_loop(s.map_params);
    LabeledLoopPartition T;
    if (s.breakpoints && s.labels) {
      T.angles = *s.breakpoints;
      T.labels = *s.labels;
      T.check_shape();
    } else {
      T = build_loop_partition(loop, geom.cover, s.partition_samples);
    }
    z = z_loop_from_bundle(*geom.bundle, loop, T, s.quad);
    out["partition"] = {{"closed", true}, {"breakpoints", T.angles}, {"labels", T.labels}};
  } else if (map.kind == "path") {
    auto [p, a, b] = map.make_path(s.map_params);
    LabeledPathPartition T;
    if (s.breakpoints && s.labels) {
      T.breakpoints = *s.breakpoints;
      T.labels = *s.labels;
      T.check_shape();
    } else {
      T = build_path_partition(p, a, b, geom.cover, s.partition_samples);
    }
    z = z_path_from_bundle(*geom.bundle, p, T, s.quad);
    out["partition"] = {{"closed", false}, {"breakpoints", T.breakpoints},
                        {"labels", T.labels}};
  } else {
    throw SchemaError("transport expects a path or loop map");
  }
  out.update(phase_json(z.phase));
  out["quad_error_estimate"] = z.quad_error;
  pass = true;
  return out;
}

json cmd_surface(const SceneSpec& s, bool& pass) {
  reject_explicit_partition(s, "surface");
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.gerbe) throw BadParameter(s.geometry + " carries no gerbe data");
  const MapEntry& map =
      find_map(geom, s.map_name.empty() ? "identity" : s.map_name, "surface");
  SurfaceObject so = map.make_surface(s.map_params, res_at(s, 0, 8), res_at(s, 1, 8));
  Transported z = z_surface(*geom.gerbe, so, s.quad, true);
  json out = phase_json(z.phase);
  out["quad_error_estimate"] = z.quad_error;
  json faces = json::array();
  for (const MeshFace& f : so.mesh.faces)
    faces.push_back({{"label", f.label}, {"u0", f.u0}, {"v0", f.v0},
                     {"u1", f.u1}, {"v1", f.v1}});
  out["face_labels"] = faces;
  pass = true;
  return out;
}

json cmd_stokes(const SceneSpec& s, bool& pass) {
  reject_explicit_partition(s, "stokes");
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.bundle) throw BadParameter(s.geometry + " carries no bundle data");
  const MapEntry& map = find_map(geom, s.map_name.empty() ? "cap" : s.map_name, "surface");
  SurfaceObject so = map.make_surface(s.map_params, res_at(s, 0, 10), res_at(s, 1, 4));
  StokesReport rep = stokes_check_1d(*geom.bundle, so, s.quad);
  double tol = s.tol > 0 ? s.tol : 1e-5;
  pass = rep.defect <= tol;
  return {{"boundary_phase_accumulated", rep.boundary_accumulated},
          {"boundary_phase_canonical", canonical_angle(rep.boundary_accumulated)},
          {"curvature_phase_accumulated", rep.curvature_accumulated},
          {"defect", rep.defect},
          {"quad_error_estimate", rep.quad_error},
          {"resolution", {res_at(s, 0, 10), res_at(s, 1, 4)}},
          {"pass", pass}};
}

json cmd_stokes2(const SceneSpec& s, bool& pass) {
  reject_explicit_partition(s, "stokes2");
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.gerbe) throw BadParameter(s.geometry + " carries no gerbe data");
  const MapEntry& map = find_map(geom, s.map_name.empty() ? "cube" : s.map_name, "volume");
  int n = res_at(s, 0, 8);
  VolumeObject vo = map.make_volume(s.map_params, n, res_at(s, 1, n), res_at(s, 2, n));
  StokesReport rep = stokes_check_2d(*geom.gerbe, vo, s.quad);
  double tol = s.tol > 0 ? s.tol : 1e-5;
  pass = rep.defect <= tol;
  return {{"boundary_phase_accumulated", rep.boundary_accumulated},
          {"boundary_phase_canonical", canonical_angle(rep.boundary_accumulated)},
          {"curvature_phase_accumulated", rep.curvature_accumulated},
          {"defect", rep.defect},
          {"quad_error_estimate", rep.quad_error},
          {"resolution", {n, res_at(s, 1, n), res_at(s, 2, n)}},
          {"pass", pass}};
}

json cmd_reconstruct(const SceneSpec& s, bool& pass) {
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.bundle) throw BadParameter(s.geometry + " carries no bundle data");
  const BundleData& data = *geom.bundle;
  TransportFunctor Z = bundle_functor(data, s.quad);
  int points = s.trials > 0 ? s.trials : 20;
  double tol = s.tol > 0 ? s.tol : 1e-4;
  Rng rng(s.seed);

  double g_max = 0, a_max = 0;
  json samples = json::array();
  int tried = 0;
  while (tried < points) {
    int i = rng.uniform_int(0, geom.cover.size() - 1);
    const auto& pool = geom.cover.charts[i].samples;
    Vec y = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
    int j = -1;
    for (int c = 0; c < geom.cover.size(); ++c)
      if (c != i && geom.cover.margin(c, y) > 3 * s.fd_step) j = c;
    if (j < 0 || geom.cover.margin(i, y) < 3 * s.fd_step) continue;
    ++tried;
    std::complex<double> got = reconstruct_g(Z, y, i, j).unit();
    std::complex<double> want = data.g(i, j, y);
    double g_err = std::abs(got - want);
    g_max = std::max(g_max, g_err);

    Vec v(geom.cover.ambient_dim);
    for (int d = 0; d < v.dim(); ++d) v[d] = rng.uniform(-1, 1);
    v = (geom.cover.project(y + 0.1 * v) - y) * 10.0;  // tangent-ish direction
    double a_err = 0;
    if (v.norm() > 0.1) {
      v = v.normalized();
      a_err = std::abs(reconstruct_A(Z, geom.cover, i, y, v, s.fd_step) - data.A(i, y, v));
      a_max = std::max(a_max, a_err);
    }
    json pt = json::array();
    for (int d = 0; d < y.dim(); ++d) pt.push_back(y[d]);
    samples.push_back({{"point", pt}, {"i", i}, {"j", j},
                       {"g_re", got.real()}, {"g_im", got.imag()},
                       {"g_catalog_re", want.real()}, {"g_catalog_im", want.imag()},
                       {"g_error", g_err}, {"a_error", a_err}});
  }
  pass = g_max <= 1e-9 && a_max <= tol;
  return {{"g_max_error", g_max}, {"a_max_error", a_max},
          {"samples", samples}, {"pass", pass}};
}

json cmd_reconstruct_gerbe(const SceneSpec& s, bool& pass) {
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.gerbe) throw BadParameter(s.geometry + " carries no gerbe data");
  const GerbeData& data = *geom.gerbe;
  GerbeFunctor Z = gerbe_functor(data, QuadConfig::fixed(12, 12));
  int points = s.trials > 0 ? s.trials : 10;
  double tol = s.tol > 0 ? s.tol : 1e-3;
  Rng rng(s.seed);

  double g3_max = 0, a2_max = 0, f_max = 0;
  int n = geom.cover.size();
  for (int t = 0; t < points; ++t) {
    int i = rng.uniform_int(0, n - 1);
    const auto& pool = geom.cover.charts[i].samples;
    Vec y = pool[rng.uniform_int(0, static_cast<int>(pool.size()) - 1)];
    if (geom.cover.margin(i, y) < 3 * s.fd_step) continue;

    // F in the sample's own chart along a projected random frame
    Vec v(geom.cover.ambient_dim), w(geom.cover.ambient_dim);
    for (int d = 0; d < v.dim(); ++d) {
      v[d] = rng.uniform(-1, 1);
      w[d] = rng.uniform(-1, 1);
    }
    v = (geom.cover.project(y + 0.1 * v) - y) * 10.0;
    w = (geom.cover.project(y + 0.1 * w) - y) * 10.0;
    if (v.norm() > 0.1 && w.norm() > 0.1) {
      v = v.normalized();
      w = w.normalized();
      double got = reconstruct_F(Z, geom.cover, i, y, v, w, s.fd_step);
      f_max = std::max(f_max, std::abs(got - data.F(i, y, v, w)));
      int j = -1;
      for (int c = 0; c < n; ++c)
        if (c != i && geom.cover.margin(c, y) > 3 * s.fd_step) j = c;
      if (j >= 0) {
        double a2 = reconstruct_A2(Z, geom.cover, i, j, y, v, s.fd_step);
        a2_max = std::max(a2_max, std::abs(a2 - data.A2(i, j, y, v)));
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j || geom.cover.margin(k, y) <= 3 * s.fd_step) continue;
          std::complex<double> rec = reconstruct_g3(Z, y, i, j, k).unit();
          g3_max = std::max(g3_max, std::abs(rec - data.g3(i, j, k, y)));
        }
      }
    }
  }
  pass = g3_max <= 1e-9 && a2_max <= tol && f_max <= tol;
  return {{"g3_max_error", g3_max}, {"a2_max_error", a2_max}, {"f_max_error", f_max},
          {"pass", pass}};
}

json axiom_report_json(const AxiomReport& rep) {
  json defects = json::object();
  for (auto& [name, worst] : rep.defects) defects[name] = worst;
  return {{"defects", defects}, {"max_defect", rep.max_defect()},
          {"failures", rep.failures}, {"pass", rep.pass()}};
}

json cmd_axioms(const SceneSpec& s, bool& pass) {
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.bundle) throw BadParameter(s.geometry + " carries no bundle data");
  TransportFunctor Z = bundle_functor(*geom.bundle, s.quad);
  int trials = s.trials > 0 ? s.trials : 50;
  double tol = s.tol > 0 ? s.tol : 1e-5;
  AxiomReport rep = axiom_suite_1d(Z, geom, trials, tol, s.seed);
  pass = rep.pass();
  json out = axiom_report_json(rep);
  out["trials"] = trials;
  return out;
}

json cmd_axioms2(const SceneSpec& s, bool& pass) {
  CatalogEntry geom = make_catalog_entry(s.geometry, s.params, false);
  if (!geom.gerbe) throw BadParameter(s.geometry + " carries no gerbe data");
  GerbeFunctor Z = gerbe_functor(*geom.gerbe, s.quad);
  int trials = s.trials > 0 ? s.trials : 30;
  double tol = s.tol > 0 ? s.tol : 1e-5;
  AxiomReport rep = axiom_suite_2d(Z, geom, trials, tol, s.seed);
  pass = rep.pass();
  json out = axiom_report_json(rep);
  out["trials"] = trials;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"state-sum parallel transport for abelian bundles and gerbes"};
  app.require_subcommand(1);

  SceneSpec s;
  std::string scene_file, output_file;
  std::vector<std::string> param_kv, map_param_kv, resolution_str;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scene", scene_file, "JSON scene file; flags override its fields");
    cmd->add_option("--geometry", s.geometry, "catalog geometry name");
    cmd->add_option("--param", param_kv, "geometry parameter k=v (repeatable)");
    cmd->add_option("--map", s.map_name, "named map of the geometry");
    cmd->add_option("--map-param", map_param_kv, "map parameter k=v (repeatable)");
    cmd->add_option("--resolution", resolution_str, "mesh resolution (1-3 integers)");
    cmd->add_option("--breakpoints", s.breakpoints, "explicit partition breakpoints");
    cmd->add_option("--labels", s.labels, "explicit partition labels");
    cmd->add_option("--quad-order", s.quad.order_1d, "Gauss-Legendre points per segment");
    cmd->add_option("--quad-order-2d", s.quad.order_2d, "points per axis on 2-D cells");
    cmd->add_option("--quad-order-3d", s.quad.order_3d, "points per axis on 3-D bricks");
    cmd->add_option("--quad-tol", s.quad.tol, "adaptive quadrature tolerance");
    cmd->add_option("--quad-depth", s.quad.max_depth, "max adaptive refinement depth");
    cmd->add_flag_callback("--no-adaptive", [&] { s.quad.adaptive = false; },
                           "disable adaptive refinement");
    cmd->add_option("--tol", s.tol, "pass/fail tolerance");
    cmd->add_option("--fd-step", s.fd_step, "finite-difference step");
    cmd->add_option("--trials", s.trials, "trial or sample count");
    cmd->add_option("--seed", s.seed, "64-bit seed for random trials");
    cmd->add_option("--threads", s.threads, "worker cap (HOLONOMY_THREADS as fallback)");
    cmd->add_option("--partition-samples", s.partition_samples,
                    "sweep samples for automatic partitions");
    cmd->add_option("-o,--output", output_file, "write the report here instead of stdout");
  };

  for (const char* name : {"check", "transport", "surface", "stokes", "stokes2",
                           "reconstruct", "reconstruct-gerbe", "axioms", "axioms2"})
    add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::string sub = app.get_subcommands().front()->get_name();
    // scene file first, then flag overrides
    if (!scene_file.empty()) {
      SceneSpec base;
      load_scene_file(base, scene_file);
      base.command = sub;
      SceneSpec flag_values = s;
      s = base;
      CLI::App* cmd = app.get_subcommands().front();
      if (cmd->count("--geometry")) s.geometry = flag_values.geometry;
      if (cmd->count("--map")) s.map_name = flag_values.map_name;
      if (cmd->count("--breakpoints")) s.breakpoints = flag_values.breakpoints;
      if (cmd->count("--labels")) s.labels = flag_values.labels;
      if (cmd->count("--quad-order")) s.quad.order_1d = flag_values.quad.order_1d;
      if (cmd->count("--quad-order-2d")) s.quad.order_2d = flag_values.quad.order_2d;
      if (cmd->count("--quad-order-3d")) s.quad.order_3d = flag_values.quad.order_3d;
      if (cmd->count("--quad-tol")) s.quad.tol = flag_values.quad.tol;
      if (cmd->count("--quad-depth")) s.quad.max_depth = flag_values.quad.max_depth;
      if (cmd->count("--no-adaptive")) s.quad.adaptive = false;
      if (cmd->count("--tol")) s.tol = flag_values.tol;
      if (cmd->count("--fd-step")) s.fd_step = flag_values.fd_step;
      if (cmd->count("--trials")) s.trials = flag_values.trials;
      if (cmd->count("--seed")) s.seed = flag_values.seed;
      if (cmd->count("--threads")) s.threads = flag_values.threads;
      if (cmd->count("--partition-samples"))
        s.partition_samples = flag_values.partition_samples;
    }
    s.command = sub;
    for (auto& [k, v] : parse_kv(param_kv, "--param")) s.params[k] = v;
    for (auto& [k, v] : parse_kv(map_param_kv, "--map-param")) s.map_params[k] = v;
    for (const std::string& r : resolution_str) {
      try {
        s.resolution.push_back(std::stoi(r));
      } catch (const std::exception&) {
        throw SchemaError("--resolution expects integers");
      }
    }
    if (s.geometry.empty()) throw SchemaError("--geometry is required");

    bool pass = false;
    json body;
    if (sub == "check") body = cmd_check(s, pass);
    else if (sub == "transport") body = cmd_transport(s, pass);
    else if (sub == "surface") body = cmd_surface(s, pass);
    else if (sub == "stokes") body = cmd_stokes(s, pass);
    else if (sub == "stokes2") body = cmd_stokes2(s, pass);
    else if (sub == "reconstruct") body = cmd_reconstruct(s, pass);
    else if (sub == "reconstruct-gerbe") body = cmd_reconstruct_gerbe(s, pass);
    else if (sub == "axioms") body = cmd_axioms(s, pass);
    else if (sub == "axioms2") body = cmd_axioms2(s, pass);

    json report;
    report["command"] = sub;
    report["scene"] = scene_to_json(s);
    report.update(body);
    report["pass"] = pass;

    std::string text = report.dump(2);
    if (!output_file.empty()) {
      std::ofstream out(output_file);
      out << text << "\n";
    } else {
      std::cout << text << "\n";
    }
    return pass ? 0 : 5;
  } catch (const Error& e) {
    json err = {{"error", e.what()}};
    std::cout << err.dump(2) << "\n";
    switch (e.kind()) {
      case ErrorKind::kSchema: return 2;
      case ErrorKind::kGeometry: return 3;
      case ErrorKind::kNumerical: return 4;
      case ErrorKind::kTolerance: return 5;
    }
    return 2;
  } catch (const std::exception& e) {
    json err = {{"error", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 2;
  }
}
