#pragma once

// Shared generators and oracles for the test suites. Everything here is
// independent of the code paths under test: random curvature tensors come from
// sums of Kulkarni-Nomizu squares (which carry the symmetries by construction),
// and derivative oracles use central finite differences.

#include "intercurve/metric.hpp"
#include "intercurve/rng.hpp"
#include "intercurve/tensor.hpp"

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace testsupport {

using namespace intercurve;

inline SymmetricForm random_symmetric(int n, Rng& rng, double scale = 1.0) {
  Eigen::MatrixXd a = rng.gaussian_matrix(n, n) * scale;
  return SymmetricForm(Eigen::MatrixXd(0.5 * (a + a.transpose())));
}

// Random algebraic curvature tensor as a short sum of h ^o h terms (these span
// the space of algebraic curvature tensors).
inline AlgebraicCurvatureTensor random_curvature(int n, Rng& rng, int terms = 3) {
  AlgebraicCurvatureTensor r(n);
  for (int t = 0; t < terms; ++t) {
    const SymmetricForm h = random_symmetric(n, rng);
    AlgebraicCurvatureTensor k = kulkarni_nomizu(h, h);
    k *= (rng.uniform() < 0.5 ? -0.5 : 0.5);
    r += k;
  }
  return r;
}

// Central finite differences for gradient/Hessian oracles.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

struct RandomCollarPair {
  ChartMetric g, gt;
  std::vector<std::string> p_sources;  // P_22, P_33, P_23
};

// Random Fermi collar pair gt = g + rho P, with P stated as expressions so the
// boundary identities have an exact reference.
inline RandomCollarPair random_collar_pair(Rng& rng, double rho_max = 0.4, double p_scale = 1.0) {
  char g22[160], g33[160], g23[64], p22[96], p33[96], p23[64];
  std::snprintf(g22, sizeof g22, "exp(%.5f*x1 + %.5f*x1^2) * (1 + %.5f*sin(x2))",
                0.4 * rng.gaussian(), 0.3 * rng.gaussian(), 0.25 * rng.uniform(-1, 1));
  std::snprintf(g33, sizeof g33, "exp(%.5f*x1) * (1 + %.5f*cos(x3))", 0.4 * rng.gaussian(),
                0.25 * rng.uniform(-1, 1));
  std::snprintf(g23, sizeof g23, "%.5f*x1", 0.15 * rng.uniform(-1, 1));
  std::snprintf(p22, sizeof p22, "%.5f + %.5f*x1 + %.5f*sin(x3)", p_scale * rng.gaussian(),
                0.5 * p_scale * rng.gaussian(), 0.3 * p_scale * rng.gaussian());
  std::snprintf(p33, sizeof p33, "%.5f + %.5f*x2", p_scale * rng.gaussian(),
                0.3 * p_scale * rng.gaussian());
  std::snprintf(p23, sizeof p23, "%.5f*x1", 0.2 * p_scale * rng.gaussian());

  Box b;
  b.lo = Eigen::VectorXd(3);
  b.hi = Eigen::VectorXd(3);
  b.lo << 0.0, 0.0, 0.0;
  b.hi << rho_max, 1.0, 1.0;

  RandomCollarPair out;
  out.g = ChartMetric::from_expressions(3, b, {{"1", "0", "0"}, {g22, g23}, {g33}}, 0);
  auto wrap = [](const std::string& gsrc, const std::string& psrc) {
    return "(" + gsrc + ") + x1*(" + psrc + ")";
  };
  out.gt = ChartMetric::from_expressions(
      3, b, {{"1", "0", "0"}, {wrap(g22, p22), wrap(g23, p23)}, {wrap(g33, p33)}}, 0);
  out.p_sources = {p22, p33, p23};
  return out;
}

inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double h = 1e-5) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd hess(n, n);
  const double f0 = f(x);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        hess(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
      } else {
        Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        hess(i, j) = hess(j, i) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
      }
    }
  }
  return hess;
}

}  // namespace testsupport
