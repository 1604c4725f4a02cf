#pragma once

// Compiled-in model configurations, so scripted checks and the acceptance
// suite need no external files.
//
//   sphere4               round S^4 chart (constant curvature 1)
//   flat-torus            flat 3-torus chart (cone boundary everywhere)
//   cap-positive-control  spherical-cap collar with an inward perturbation
//                         whose boundary h-difference is strictly m-convex
//   cap-negative-control  the same cap bent the other way (hypothesis fails)
//   slab-geodesic         flat slab with totally geodesic boundary
//   double-cap            spherical cap boundary data for the doubling sweep
//
// The cap family is built from an explicit perturbation (gt = g + rho P with
// P = +/- c g_tangential), which keeps deep-collar curvature exact; see
// gluing.hpp. With h_g - h_gt = P/2 on the boundary, the positive control has
// a strictly m-convex difference and the negative control violates it.

#include "intercurve/config.hpp"
#include "intercurve/doubling.hpp"
#include "intercurve/gluing.hpp"
#include "intercurve/metric.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace intercurve {

struct Preset {
  std::string name;
  std::optional<ChartMetric> chart;
  std::optional<GlueFamily> family;
  double collar_trim = 0.0;
  Config defaults;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline ChartMetric cap_chart() {
  // geodesic cap of the round S^3, Fermi collar from its boundary sphere:
  // g = drho^2 + sin^2(r0 - rho) (dtheta^2 + sin^2 theta dphi^2), r0 = pi/4
  const double r0 = 0.25 * 3.14159265358979323846;
  Box b;
  b.lo = Eigen::VectorXd(3);
  b.hi = Eigen::VectorXd(3);
  b.lo << 0.0, 0.5, 0.0;
  b.hi << 0.5, 2.6, 1.0;
  const std::string warp = "sin(" + fmt17(r0) + " - x1)^2";
  return ChartMetric::from_expressions(
      3, b, {{"1", "0", "0"}, {warp, "0"}, {warp + " * sin(x2)^2"}}, 0);
}

inline GlueFamily cap_family(double c) {
  // collar width 0.5: the taper plateau reaches 0.4 > exp(-1), so the whole
  // default lambda grid {1, 2, 4, 8, 12} is admissible
  const ChartMetric g = cap_chart();
  const int n = 3;
  std::vector<std::vector<FieldPtr>> p(n, std::vector<FieldPtr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == 0 || j == 0) {
        p[i][j] = make_constant_field(0.0, n);
      } else {
        FieldPtr gij = g.component(i, j);
        p[i][j] = make_function_field(
            [gij, c](const Eigen::VectorXd& x) { return c * gij->jet(x); });
      }
    }
  return glue_family_from_perturbation(g, p, 0.5);
}

inline ChartMetric slab_chart() {
  Box b;
  b.lo = Eigen::VectorXd(3);
  b.hi = Eigen::VectorXd(3);
  b.lo << 0.0, 0.0, 0.0;
  b.hi << 0.5, 1.0, 1.0;
  return ChartMetric::from_expressions(3, b, {{"1", "0", "0"}, {"1", "0"}, {"1"}}, 0);
}

inline ChartMetric sphere4_chart() {
  Box b;
  b.lo = Eigen::VectorXd(4);
  b.hi = Eigen::VectorXd(4);
  b.lo << 0.6, 0.6, 0.6, 0.0;
  b.hi << 1.2, 2.4, 2.4, 1.0;
  return ChartMetric::from_expressions(4, b,
                                       {{"1", "0", "0", "0"},
                                        {"sin(x1)^2", "0", "0"},
                                        {"sin(x1)^2*sin(x2)^2", "0"},
                                        {"sin(x1)^2*sin(x2)^2*sin(x3)^2"}});
}

inline ChartMetric torus_chart() {
  Box b;
  b.lo = Eigen::VectorXd(3);
  b.hi = Eigen::VectorXd(3);
  b.lo << 0.0, 0.0, 0.0;
  b.hi << 1.0, 1.0, 1.0;
  return ChartMetric::from_expressions(3, b, {{"1", "0", "0"}, {"1", "0"}, {"1"}});
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
  return {"sphere4",          "flat-torus",          "cap-positive-control",
          "cap-negative-control", "slab-geodesic",   "double-cap"};
}

inline Preset get_preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "sphere4") {
    p.chart = detail::sphere4_chart();
    p.defaults.set("m", "2");
  } else if (name == "flat-torus") {
    p.chart = detail::torus_chart();
    p.defaults.set("m", "1 2");
  } else if (name == "cap-positive-control" || name == "cap-negative-control") {
    const double c = (name == "cap-positive-control") ? 0.25 : -0.25;
    p.family = detail::cap_family(c);
    p.chart = p.family->g;
    p.defaults.set("m", "1 2");
    p.defaults.set("lambda", "1 2 4 8 12");
    p.defaults.set("epsilon", "0.1");
    p.defaults.set("alpha", "0.5");
  } else if (name == "slab-geodesic") {
    p.chart = detail::slab_chart();
    p.collar_trim = 0.025;
    p.defaults.set("m", "1 2");
    p.defaults.set("epsilon", "0.1 0.05 0.01");
  } else if (name == "double-cap") {
    p.chart = detail::cap_chart();
    p.collar_trim = 0.05 * 0.5;
    p.defaults.set("m", "1 2");
    p.defaults.set("epsilon", "0.1 0.05 0.01");
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return p;
}

}  // namespace intercurve
