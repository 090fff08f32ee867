#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "holonomy/cech.hpp"
#include "holonomy/mesh_builders.hpp"
#include "holonomy/path_partition.hpp"
#include "holonomy/surface_mesh.hpp"
#include "holonomy/transport_bundle.hpp"
#include "holonomy/transport_gerbe.hpp"
#include "holonomy/volume.hpp"

namespace holonomy {

using ParamMap = std::map<std::string, double>;

// signed depth of `theta` inside the circular arc [lo, hi] (width < 2pi)
inline double signed_arc_depth(double theta, double lo, double hi) {
  double mid = 0.5 * (lo + hi);
  double t = theta - kTwoPi * std::floor((theta - (mid - std::numbers::pi)) / kTwoPi);
  return std::min(t - lo, hi - t);
}

inline double sphere_colat(const Vec& p) {
  return std::atan2(std::hypot(p[0], p[1]), p[2]);
}
inline double sphere_lon(const Vec& p) { return std::atan2(p[1], p[0]); }

inline Vec sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

inline Vec torus4_point(double u, double v) {
  return {std::cos(u), std::sin(u), std::cos(v), std::sin(v)};
}
inline double torus4_u(const Vec& p) {
  double a = std::atan2(p[1], p[0]);
  return a < 0 ? a + kTwoPi : a;
}
inline double torus4_v(const Vec& p) {
  double a = std::atan2(p[3], p[2]);
  return a < 0 ? a + kTwoPi : a;
}

inline double det3(const Vec& a, const Vec& b, const Vec& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// ---------------------------------------------------------------------------
// Catalog entries: built-in target manifolds with covers, bundle/gerbe data,
// named maps and random object generators for the axiom suites.
// ---------------------------------------------------------------------------

struct MapEntry {
  std::string kind;  // path | loop | surface | volume | point
  std::function<std::tuple<PathFn, double, double>(const ParamMap&)> make_path;
  std::function<LoopFn(const ParamMap&)> make_loop;
  std::function<SurfaceObject(const ParamMap&, int, int)> make_surface;
  std::function<VolumeObject(const ParamMap&, int, int, int)> make_volume;
};

struct CatalogEntry {
  std::string name;
  ParamMap params;  // resolved (defaults filled in)
  ChartCover cover;
  std::optional<BundleData> bundle;
  std::optional<GerbeData> gerbe;
  std::map<std::string, MapEntry> maps;

  std::function<std::tuple<PathFn, double, double>(Rng&)> random_path;
  std::function<LoopFn(Rng&)> random_loop;
  std::function<SurfaceObject(Rng&)> random_surface;
};

inline std::vector<std::string> catalog_names() {
  return {"circle_flat", "sphere_monopole", "torus_global_B", "torus_flat_gerbe",
          "box_gerbe"};
}

inline double param_or(const ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace detail {

inline void check_known_params(const ParamMap& given, const std::vector<std::string>& known,
                               const std::string& entry) {
  for (auto& [k, v] : given) {
    bool ok = false;
    for (auto& name : known) ok |= (k == name);
    if (!ok) throw BadParameter("unknown parameter '" + k + "' for " + entry);
  }
}

// -------------------------- circle_flat ------------------------------------

inline CatalogEntry make_circle_flat(ParamMap params) {
  check_known_params(params, {"alpha_right", "alpha_left"}, "circle_flat");
  double alpha_right = param_or(params, "alpha_right", std::numbers::pi / 3);
  double alpha_left = param_or(params, "alpha_left", 0.0);
  const double band = 0.45;

  CatalogEntry e;
  e.name = "circle_flat";
  e.params = {{"alpha_right", alpha_right}, {"alpha_left", alpha_left}};

  ChartCover cover;
  cover.ambient_dim = 2;
  cover.manifold_dim = 1;
  cover.projection = [](const Vec& p) { return p.normalized(); };
  auto angle = [](const Vec& p) { return std::atan2(p[1], p[0]); };
  Chart lower, upper;
  lower.membership = [angle, band](const Vec& p) {
    return signed_arc_depth(angle(p), std::numbers::pi, kTwoPi) + band;
  };
  upper.membership = [angle, band](const Vec& p) {
    return signed_arc_depth(angle(p), 0.0, std::numbers::pi) + band;
  };
  for (int s = 0; s < 72; ++s) {
    double t = kTwoPi * s / 72;
    Vec p = {std::cos(t), std::sin(t)};
    if (lower.membership(p) > 0.02) lower.samples.push_back(p);
    if (upper.membership(p) > 0.02) upper.samples.push_back(p);
  }
  cover.charts = {lower, upper};  // chart 0 = lower arc, chart 1 = upper arc
  cover.declared_pairs = {{0, 1}};
  e.cover = cover;

  BundleData bundle;
  bundle.cover = cover;
  std::complex<double> lam_right = std::polar(1.0, alpha_right);
  std::complex<double> lam_left = std::polar(1.0, alpha_left);
  bundle.g = [lam_right, lam_left](int i, int j, const Vec& p) {
    if (i == j) return std::complex<double>(1, 0);
    std::complex<double> base = p[0] > 0 ? lam_right : lam_left;
    return i == 0 ? base : std::conj(base);
  };
  bundle.A = [](int, const Vec&, const Vec&) { return 0.0; };
  bundle.F_analytic = [](int, const Vec&, const Vec&, const Vec&) { return 0.0; };
  e.bundle = bundle;

  e.maps["full_loop"] = {"loop", {},
                         [](const ParamMap&) {
                           return LoopFn([](double a) {
                             return Vec{std::cos(a), std::sin(a)};
                           });
                         },
                         {}, {}};
  e.maps["arc"] = {"path",
                   [](const ParamMap& mp) {
                     double t0 = param_or(mp, "t0", 0.0);
                     double t1 = param_or(mp, "t1", std::numbers::pi);
                     PathFn p = [](double t) { return Vec{std::cos(t), std::sin(t)}; };
                     return std::make_tuple(p, t0, t1);
                   },
                   {}, {}, {}};
  e.maps["constant"] = {"path",
                        [](const ParamMap& mp) {
                          double t = param_or(mp, "theta", 1.0);
                          Vec y = {std::cos(t), std::sin(t)};
                          PathFn p = [y](double) { return y; };
                          return std::make_tuple(p, 0.0, 1.0);
                        },
                        {}, {}, {}};

  e.random_path = [](Rng& rng) {
    double psi0 = rng.uniform(0, kTwoPi);
    double w = rng.uniform(-3, 3);
    double s = rng.uniform(-0.5, 0.5);
    PathFn p = [psi0, w, s](double t) {
      double psi = psi0 + w * t + s * std::sin(kTwoPi * t);
      return Vec{std::cos(psi), std::sin(psi)};
    };
    return std::make_tuple(p, 0.0, 1.0);
  };
  e.random_loop = [](Rng& rng) {
    double s1 = rng.uniform(-0.3, 0.3), s2 = rng.uniform(-0.3, 0.3);
    double psi0 = rng.uniform(0, kTwoPi);
    return LoopFn([s1, s2, psi0](double a) {
      double psi = a + psi0 + s1 * std::sin(a) + s2 * std::cos(2 * a);
      return Vec{std::cos(psi), std::sin(psi)};
    });
  };
  return e;
}

// -------------------------- sphere_monopole --------------------------------

inline CatalogEntry make_sphere_monopole(ParamMap params) {
  check_known_params(params, {"n"}, "sphere_monopole");
  double n_real = param_or(params, "n", 1.0);
  if (std::abs(n_real - std::round(n_real)) > 1e-9)
    throw BadParameter("sphere_monopole: n must be an integer");
  int n = static_cast<int>(std::round(n_real));
  const double band = 0.35;

  CatalogEntry e;
  e.name = "sphere_monopole";
  e.params = {{"n", static_cast<double>(n)}};

  ChartCover cover;
  cover.ambient_dim = 3;
  cover.manifold_dim = 2;
  cover.projection = [](const Vec& p) { return p.normalized(); };
  Chart north, south;
  north.membership = [band](const Vec& p) {
    return (std::numbers::pi / 2 + band) - sphere_colat(p);
  };
  south.membership = [band](const Vec& p) {
    return sphere_colat(p) - (std::numbers::pi / 2 - band);
  };
  for (int i = 1; i < 16; ++i)
    for (int j = 0; j < 12; ++j) {
      Vec p = sphere_point(std::numbers::pi * i / 16, kTwoPi * j / 12);
      if (north.membership(p) > 0.02) north.samples.push_back(p);
      if (south.membership(p) > 0.02) south.samples.push_back(p);
    }
  north.samples.push_back(sphere_point(0, 0));
  south.samples.push_back(sphere_point(std::numbers::pi, 0));
  cover.charts = {north, south};  // chart 0 = north, chart 1 = south
  cover.declared_pairs = {{0, 1}};
  e.cover = cover;

  BundleData bundle;
  bundle.cover = cover;
  // B2 with A_N = (n/2)(1-cos t) dphi and A_S = -(n/2)(1+cos t) dphi forces
  // g_{NS} = e^{-in phi}; the flux over S^2 is +2 pi n.
  bundle.g = [n](int i, int j, const Vec& p) {
    if (i == j) return std::complex<double>(1, 0);
    double a = -n * sphere_lon(p);
    return i == 0 ? std::polar(1.0, a) : std::polar(1.0, -a);
  };
  bundle.A = [n](int chart, const Vec& p, const Vec& v) {
    double rho2 = p[0] * p[0] + p[1] * p[1];
    if (rho2 < 1e-30) return 0.0;
    double dphi = (p[0] * v[1] - p[1] * v[0]) / rho2;
    double c = p[2] / p.norm();
    return chart == 0 ? 0.5 * n * (1 - c) * dphi : -0.5 * n * (1 + c) * dphi;
  };
  bundle.F_analytic = [n](int, const Vec& p, const Vec& u, const Vec& v) {
    Vec r = p.normalized();
    return 0.5 * n * det3(r, u, v);
  };
  e.bundle = bundle;

  e.maps["equator"] = {"loop", {},
                       [](const ParamMap&) {
                         return LoopFn([](double a) { return sphere_point(std::numbers::pi / 2, a); });
                       },
                       {}, {}};
  e.maps["latitude"] = {"loop", {},
                        [](const ParamMap& mp) {
                          double t0 = param_or(mp, "theta0", 1.0);
                          return LoopFn([t0](double a) { return sphere_point(t0, a); });
                        },
                        {}, {}};
  e.maps["meridian"] = {"path",
                        [](const ParamMap& mp) {
                          double phi = param_or(mp, "phi", 0.0);
                          PathFn p = [phi](double t) { return sphere_point(t, phi); };
                          return std::make_tuple(p, 0.0, std::numbers::pi);
                        },
                        {}, {}, {}};
  e.maps["constant"] = {"path",
                        [](const ParamMap& mp) {
                          Vec y = sphere_point(param_or(mp, "theta", 1.0),
                                               param_or(mp, "phi", 0.0));
                          PathFn p = [y](double) { return y; };
                          return std::make_tuple(p, 0.0, 1.0);
                        },
                        {}, {}, {}};
  ChartCover cover_copy = cover;
  e.maps["cap"] = {"surface", {}, {},
                   [cover_copy](const ParamMap& mp, int nu, int nv) {
                     double t0 = param_or(mp, "theta0", 1.0);
                     SurfaceObject so;
                     so.X = [t0](int, double u, double v) { return sphere_point(t0 * v, u); };
                     so.mesh = build_domain_mesh(Domain::kDisk, nu, nv);
                     so.mesh.orientation = -1;  // outward-normal cap
                     label_faces_greedy(so.mesh, so.X, cover_copy);
                     return so;
                   },
                   {}};
  e.maps["cap_south"] = {"surface", {}, {},
                         [cover_copy](const ParamMap& mp, int nu, int nv) {
                           double t0 = param_or(mp, "theta0", 1.0);
                           SurfaceObject so;
                           so.X = [t0](int, double u, double v) {
                             return sphere_point(std::numbers::pi - (std::numbers::pi - t0) * v, u);
                           };
                           so.mesh = build_domain_mesh(Domain::kDisk, nu, nv);
                           so.mesh.orientation = +1;
                           label_faces_greedy(so.mesh, so.X, cover_copy);
                           return so;
                         },
                         {}};
  e.maps["annulus"] = {"surface", {}, {},
                       [cover_copy](const ParamMap& mp, int nu, int nv) {
                         double ta = param_or(mp, "theta_a", 0.8);
                         double tb = param_or(mp, "theta_b", 2.2);
                         SurfaceObject so;
                         so.X = [ta, tb](int, double u, double v) {
                           return sphere_point(ta + (tb - ta) * v, u);
                         };
                         so.mesh = build_domain_mesh(Domain::kCylinder, nu, nv);
                         so.mesh.orientation = -1;
                         label_faces_greedy(so.mesh, so.X, cover_copy);
                         return so;
                       },
                       {}};
  e.maps["sphere_identity"] = {"surface", {}, {},
                               [cover_copy](const ParamMap&, int nu, int nv) {
                                 SurfaceObject so;
                                 so.X = [](int, double u, double v) { return sphere_point(v, u); };
                                 so.mesh = build_domain_mesh(Domain::kSphere, nu, nv);
                                 so.mesh.orientation = -1;
                                 label_faces_greedy(so.mesh, so.X, cover_copy);
                                 return so;
                               },
                               {}};

  e.random_path = [](Rng& rng) {
    while (true) {
      Vec c0 = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      Vec c1 = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      Vec c2 = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      bool ok = true;
      for (int s = 0; s <= 40 && ok; ++s) {
        double t = s / 40.0;
        ok = (c0 + t * c1 + std::sin(std::numbers::pi * t) * c2).norm() > 0.35;
      }
      if (!ok) continue;
      PathFn p = [c0, c1, c2](double t) {
        return (c0 + t * c1 + std::sin(std::numbers::pi * t) * c2).normalized();
      };
      return std::make_tuple(p, 0.0, 1.0);
    }
  };
  e.random_loop = [](Rng& rng) {
    while (true) {
      Vec c0 = {rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
      Vec c1 = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      Vec c2 = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      Vec c3 = {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
      bool ok = true;
      for (int s = 0; s < 64 && ok; ++s) {
        double a = kTwoPi * s / 64;
        ok = (c0 + std::cos(a) * c1 + std::sin(a) * c2 + std::cos(2 * a) * c3).norm() > 0.35;
      }
      if (!ok) continue;
      return LoopFn([c0, c1, c2, c3](double a) {
        return (c0 + std::cos(a) * c1 + std::sin(a) * c2 + std::cos(2 * a) * c3).normalized();
      });
    }
  };
  return e;
}

// -------------------------- torus_global_B ---------------------------------

inline Vec torus4_project(const Vec& p) {
  double r1 = std::hypot(p[0], p[1]), r2 = std::hypot(p[2], p[3]);
  return {p[0] / r1, p[1] / r1, p[2] / r2, p[3] / r2};
}

inline double torus4_du(const Vec& p, const Vec& w) {
  double r2 = p[0] * p[0] + p[1] * p[1];
  return (p[0] * w[1] - p[1] * w[0]) / r2;
}
inline double torus4_dv(const Vec& p, const Vec& w) {
  double r2 = p[2] * p[2] + p[3] * p[3];
  return (p[2] * w[3] - p[3] * w[2]) / r2;
}

inline CatalogEntry make_torus_global_B(ParamMap params) {
  check_known_params(params, {"theta"}, "torus_global_B");
  double theta = param_or(params, "theta", 1.0);

  CatalogEntry e;
  e.name = "torus_global_B";
  e.params = {{"theta", theta}};

  ChartCover cover;
  cover.ambient_dim = 4;
  cover.manifold_dim = 2;
  cover.projection = torus4_project;
  Chart all;
  all.membership = [](const Vec&) { return 1.0; };
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      all.samples.push_back(torus4_point(kTwoPi * i / 12, kTwoPi * j / 12));
  cover.charts = {all};
  e.cover = cover;

  GerbeData g;
  g.cover = cover;
  g.g3 = [](int, int, int, const Vec&) { return std::complex<double>(1, 0); };
  g.A2 = [](int, int, const Vec&, const Vec&) { return 0.0; };
  double coeff = theta / (kTwoPi * kTwoPi);
  g.F = [coeff](int, const Vec& p, const Vec& a, const Vec& b) {
    return coeff * (torus4_du(p, a) * torus4_dv(p, b) - torus4_du(p, b) * torus4_dv(p, a));
  };
  g.G_analytic = [](int, const Vec&, const Vec&, const Vec&, const Vec&) { return 0.0; };
  e.gerbe = g;

  ChartCover cover_copy = cover;
  e.maps["identity"] = {"surface", {}, {},
                        [cover_copy](const ParamMap&, int nu, int nv) {
                          SurfaceObject so;
                          so.X = [](int, double u, double v) { return torus4_point(u, v); };
                          so.mesh = build_domain_mesh(Domain::kTorus, nu, nv);
                          label_faces_greedy(so.mesh, so.X, cover_copy);
                          return so;
                        },
                        {}};
  e.maps["u_loop"] = {"loop", {},
                      [](const ParamMap& mp) {
                        double v0 = param_or(mp, "v0", 1.0);
                        return LoopFn([v0](double a) { return torus4_point(a, v0); });
                      },
                      {}, {}};
  e.maps["constant"] = {"path",
                        [](const ParamMap& mp) {
                          Vec y = torus4_point(param_or(mp, "u", 1.0), param_or(mp, "v", 1.0));
                          PathFn p = [y](double) { return y; };
                          return std::make_tuple(p, 0.0, 1.0);
                        },
                        {}, {}, {}};

  e.random_surface = [cover_copy](Rng& rng) {
    double a = rng.uniform(-0.25, 0.25), b = rng.uniform(-0.25, 0.25);
    double c = rng.uniform(0, kTwoPi), d = rng.uniform(0, kTwoPi);
    SurfaceObject so;
    so.X = [a, b, c, d](int, double u, double v) {
      return torus4_point(u + a * std::sin(v + c), v + b * std::sin(u + d));
    };
    so.mesh = build_domain_mesh(Domain::kTorus, 6, 6);
    label_faces_greedy(so.mesh, so.X, cover_copy);
    return so;
  };
  e.random_loop = [](Rng& rng) {
    double u0 = rng.uniform(0, kTwoPi), v0 = rng.uniform(0, kTwoPi);
    int wu = rng.uniform_int(-1, 1), wv = rng.uniform_int(-1, 1);
    double s = rng.uniform(-0.4, 0.4);
    return LoopFn([u0, v0, wu, wv, s](double a) {
      return torus4_point(u0 + wu * a + s * std::sin(a), v0 + wv * a);
    });
  };
  return e;
}

// -------------------------- torus_flat_gerbe -------------------------------

inline CatalogEntry make_torus_flat_gerbe(ParamMap params) {
  check_known_params(params, {"omega", "a", "b"}, "torus_flat_gerbe");
  double omega = param_or(params, "omega", 1.0);
  double a_coef = param_or(params, "a", 0.0);
  double b_coef = param_or(params, "b", 0.0);
  // wide overlap bands keep greedy labeling solvable at brick resolution 4
  const double band = 0.8;
  const double pi = std::numbers::pi;

  CatalogEntry e;
  e.name = "torus_flat_gerbe";
  e.params = {{"omega", omega}, {"a", a_coef}, {"b", b_coef}};

  // three regions: a horizontal band and two squares above it, fattened
  ChartCover cover;
  cover.ambient_dim = 4;
  cover.manifold_dim = 2;
  cover.projection = torus4_project;
  Chart c0, c1, c2;
  c0.membership = [band](const Vec& p) {
    return signed_arc_depth(torus4_v(p), 0, std::numbers::pi) + band;
  };
  c1.membership = [band](const Vec& p) {
    return std::min(signed_arc_depth(torus4_v(p), std::numbers::pi, kTwoPi),
                    signed_arc_depth(torus4_u(p), 0, std::numbers::pi)) + band;
  };
  c2.membership = [band](const Vec& p) {
    return std::min(signed_arc_depth(torus4_v(p), std::numbers::pi, kTwoPi),
                    signed_arc_depth(torus4_u(p), std::numbers::pi, kTwoPi)) + band;
  };
  cover.charts = {c0, c1, c2};
  auto add_samples = [&](double u, double v) {
    Vec p = torus4_point(u, v);
    for (Chart& c : cover.charts)
      if (c.membership(p) > 0.02) c.samples.push_back(p);
  };
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) add_samples(kTwoPi * i / 16, kTwoPi * j / 16);
  // extra coverage of the four triple-overlap components
  for (double cu : {0.0, pi})
    for (double cv : {0.0, pi})
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
          add_samples(cu + 0.12 * i, cv + 0.12 * j);
  cover.declared_pairs = {{0, 1}, {0, 2}, {1, 2}};
  e.cover = cover;

  GerbeData g;
  g.cover = cover;
  // locally constant cocycle: e^{i omega sign(ijk)} on the triple-overlap
  // component near (u,v) = (0,pi), 1 on the other three components
  auto hot = [pi](const Vec& p) {
    double du = canonical_angle(torus4_u(p) - 0.0);
    double dv = canonical_angle(torus4_v(p) - pi);
    return std::hypot(du, dv) < 1.5;
  };
  g.g3 = [omega, hot](int i, int j, int k, const Vec& p) {
    if (i == j || j == k || i == k) return std::complex<double>(1, 0);
    if (!hot(p)) return std::complex<double>(1, 0);
    int sign = ((j - i) * (k - j) * (k - i) > 0) ? 1 : -1;  // parity of (i,j,k)
    return std::polar(1.0, sign * omega);
  };
  double c01 = a_coef, c12 = b_coef, c20 = -(a_coef + b_coef);
  g.A2 = [c01, c12, c20](int j, int k, const Vec& p, const Vec& w) {
    if (j == k) return 0.0;
    double c = 0;
    if ((j == 0 && k == 1) || (j == 1 && k == 0)) c = (j == 0) ? c01 : -c01;
    if ((j == 1 && k == 2) || (j == 2 && k == 1)) c = (j == 1) ? c12 : -c12;
    if ((j == 2 && k == 0) || (j == 0 && k == 2)) c = (j == 2) ? c20 : -c20;
    return c * torus4_du(p, w);
  };
  g.F = [](int, const Vec&, const Vec&, const Vec&) { return 0.0; };
  g.G_analytic = [](int, const Vec&, const Vec&, const Vec&, const Vec&) { return 0.0; };
  e.gerbe = g;

  ChartCover cover_copy = cover;
  e.maps["identity"] = {"surface", {}, {},
                        [cover_copy](const ParamMap&, int nu, int nv) {
                          SurfaceObject so;
                          so.X = [](int, double u, double v) { return torus4_point(u, v); };
                          so.mesh = build_domain_mesh(Domain::kTorus, nu, nv);
                          label_faces_greedy(so.mesh, so.X, cover_copy);
                          return so;
                        },
                        {}};
  e.maps["constant"] = {"path",
                        [](const ParamMap& mp) {
                          Vec y = torus4_point(param_or(mp, "u", 0.2), param_or(mp, "v", 2.9));
                          PathFn p = [y](double) { return y; };
                          return std::make_tuple(p, 0.0, 1.0);
                        },
                        {}, {}, {}};

  e.random_surface = [cover_copy](Rng& rng) {
    double a = rng.uniform(-0.12, 0.12), b = rng.uniform(-0.12, 0.12);
    double c = rng.uniform(0, kTwoPi), d = rng.uniform(0, kTwoPi);
    SurfaceObject so;
    so.X = [a, b, c, d](int, double u, double v) {
      return torus4_point(u + a * std::sin(v + c), v + b * std::sin(u + d));
    };
    so.mesh = build_domain_mesh(Domain::kTorus, 8, 8);
    label_faces_greedy(so.mesh, so.X, cover_copy);
    return so;
  };
  e.random_loop = [](Rng& rng) {
    double u0 = rng.uniform(0, kTwoPi), v0 = rng.uniform(0, kTwoPi);
    int wu = rng.uniform_int(-1, 1);
    double s = rng.uniform(-0.4, 0.4);
    return LoopFn([u0, v0, wu, s](double a) {
      return torus4_point(u0 + wu * a + s * std::sin(a), v0 + 0.3 * std::sin(2 * a));
    });
  };
  return e;
}

// -------------------------- box_gerbe --------------------------------------

inline CatalogEntry make_box_gerbe(ParamMap params) {
  check_known_params(params, {"charts"}, "box_gerbe");
  int n_charts = static_cast<int>(param_or(params, "charts", 1.0));
  if (n_charts != 1 && n_charts != 2) throw BadParameter("box_gerbe: charts must be 1 or 2");

  CatalogEntry e;
  e.name = "box_gerbe";
  e.params = {{"charts", static_cast<double>(n_charts)}};

  ChartCover cover;
  cover.ambient_dim = 3;
  cover.manifold_dim = 3;
  cover.projection = [](const Vec& p) { return p; };
  if (n_charts == 1) {
    Chart all;
    all.membership = [](const Vec& p) {
      double d = std::max({std::abs(p[0] - 0.5), std::abs(p[1] - 0.5), std::abs(p[2] - 0.5)});
      return 1.5 - d;
    };
    cover.charts = {all};
  } else {
    Chart left, right;
    left.membership = [](const Vec& p) { return 0.65 - p[0]; };
    right.membership = [](const Vec& p) { return p[0] - 0.35; };
    cover.charts = {left, right};
    cover.declared_pairs = {{0, 1}};
  }
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j)
      for (int k = 0; k <= 5; ++k) {
        Vec p = {i / 5.0, j / 5.0, k / 5.0};
        for (Chart& c : cover.charts)
          if (c.membership(p) > 0.02) c.samples.push_back(p);
      }
  e.cover = cover;

  GerbeData g;
  g.cover = cover;
  g.g3 = [](int, int, int, const Vec&) { return std::complex<double>(1, 0); };
  g.A2 = [](int, int, const Vec&, const Vec&) { return 0.0; };
  g.F = [](int, const Vec& p, const Vec& u, const Vec& v) {
    return p[0] * (u[1] * v[2] - u[2] * v[1]);  // x dy ^ dz
  };
  g.G_analytic = [](int, const Vec&, const Vec& u, const Vec& v, const Vec& w) {
    return det3(u, v, w);  // dx ^ dy ^ dz
  };
  e.gerbe = g;

  ChartCover cover_copy = cover;
  e.maps["cube"] = {"volume", {}, {}, {},
                    [cover_copy](const ParamMap&, int nx, int ny, int nz) {
                      VolumeObject vo;
                      vo.H = [](const Vec& p) { return p; };
                      vo.partition = build_volume_partition(nx, ny, nz);
                      label_volume(vo.partition, vo.H, cover_copy);
                      return vo;
                    }};
  e.maps["constant"] = {"path",
                        [](const ParamMap& mp) {
                          Vec y = {param_or(mp, "x", 0.5), param_or(mp, "y", 0.5),
                                   param_or(mp, "z", 0.5)};
                          PathFn p = [y](double) { return y; };
                          return std::make_tuple(p, 0.0, 1.0);
                        },
                        {}, {}, {}};
  return e;
}

}  // namespace detail

// Entries verify their cocycle data at tol 1e-6 on construction.
inline CatalogEntry make_catalog_entry(const std::string& name, ParamMap params = {},
                                       bool verify = true) {
  CatalogEntry e;
  if (name == "circle_flat")
    e = detail::make_circle_flat(std::move(params));
  else if (name == "sphere_monopole")
    e = detail::make_sphere_monopole(std::move(params));
  else if (name == "torus_global_B")
    e = detail::make_torus_global_B(std::move(params));
  else if (name == "torus_flat_gerbe")
    e = detail::make_torus_flat_gerbe(std::move(params));
  else if (name == "box_gerbe")
    e = detail::make_box_gerbe(std::move(params));
  else
    throw BadParameter("unknown geometry '" + name + "'");

  if (verify) {
    if (e.bundle && !check_bundle_cocycle(*e.bundle).pass)
      throw BadParameter(name + ": bundle data fails the cocycle check");
    if (e.gerbe && !check_gerbe_cocycle(*e.gerbe).pass)
      throw BadParameter(name + ": gerbe data fails the cocycle check");
  }
  return e;
}

}  // namespace holonomy
