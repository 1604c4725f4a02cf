#pragma once

// The two cutoff profiles of the gluing construction.
//
// chi on [0, inf):  chi(s) = s - s^2/2 on [0, 1/2], constant for s >= 1,
//                   chi'' < 0 on [0, 1), C^2 everywhere.
// beta on (-inf,0]: beta = 0 for s <= -2, beta = 1/2 on [-1, 0], C^2, in [0,1].
//
// The paper fixes only these qualitative properties; the bridge pieces are
// canonical C^2 polynomials built here. For chi, the bridge quintic on
// [1/2, 1] is determined by a cubic curvature profile c = chi'' with
//   c(1/2) = -1, c(1) = 0, c'(1) = -tail_slope, int_{1/2}^{1} c = -1/2,
// the last condition forcing chi'(1) = 0. tail_slope = 0 gives the double
// root at 1. Profiles that lose strict concavity are rejected at build time.
// C^2 (not C-infinity) suffices because only two metric derivatives enter
// curvature.

#include "intercurve/jet.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace intercurve {

// Piecewise polynomial with per-piece local origins. Queries left of the first
// break use the first piece, right of the last break the last piece.
class PiecewisePoly {
 public:
  struct Piece {
    double left;                  // piece covers [left, next break]
    std::vector<double> coeffs;   // ascending powers of (s - left)
  };
  struct Eval2 {
    double value, d1, d2;
  };

  PiecewisePoly() = default;
  explicit PiecewisePoly(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("PiecewisePoly: no pieces");
  }

  Eval2 eval2(double s) const {
    const Piece& p = pieces_[find(s)];
    const double t = s - p.left;
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (int k = static_cast<int>(p.coeffs.size()) - 1; k >= 0; --k) {
      d2 = d2 * t + 2.0 * d1;
      d1 = d1 * t + v;
      v = v * t + p.coeffs[k];
    }
    return {v, d1, d2};
  }

  double operator()(double s) const { return eval2(s).value; }

  // f(u) for a jet-valued argument.
  Jet2 compose(const Jet2& u) const {
    const Eval2 e = eval2(u.value);
    return u.compose(e.value, e.d1, e.d2);
  }

  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  size_t find(double s) const {
    size_t i = 0;
    while (i + 1 < pieces_.size() && s >= pieces_[i + 1].left) ++i;
    return i;
  }
  std::vector<Piece> pieces_;
};

namespace detail {

// antiderivative of a local-coordinate polynomial, with given value at t = 0
inline std::vector<double> poly_antiderivative(const std::vector<double>& c, double at_zero) {
  std::vector<double> out(c.size() + 1, 0.0);
  out[0] = at_zero;
  for (size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k] / static_cast<double>(k + 1);
  return out;
}

inline double poly_eval(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) v = v * t + c[k];
  return v;
}

// C^2 smoothstep of the requested polynomial order on [0,1], as local coeffs.
inline std::vector<double> smoothstep_coeffs(int order) {
  switch (order) {
    case 3: return {0, 0, 3, -2};
    case 5: return {0, 0, 0, 10, -15, 6};
    case 7: return {0, 0, 0, 0, 35, -84, 70, -20};
    default: throw std::invalid_argument("smoothstep order must be 3, 5 or 7");
  }
}

}  // namespace detail

struct ChiShape {
  double tail_slope = 0.0;  // -chi'''(1) of the bridge curvature profile
};

struct BetaShape {
  int smoothstep_order = 5;
};

class CutoffChi {
 public:
  PiecewisePoly poly;
  double c_infinity_value = 0.0;

  double operator()(double s) const { return poly(s); }
  PiecewisePoly::Eval2 eval2(double s) const { return poly.eval2(s); }
  Jet2 compose(const Jet2& u) const { return poly.compose(u); }
};

class CutoffBeta {
 public:
  PiecewisePoly poly;

  double operator()(double s) const { return poly(s); }
  PiecewisePoly::Eval2 eval2(double s) const { return poly.eval2(s); }
  Jet2 compose(const Jet2& u) const { return poly.compose(u); }
};

namespace detail {

inline void validate_chi(const CutoffChi& chi) {
  const int samples = 10000;
  for (int k = 0; k <= samples; ++k) {
    const double s = 1.5 * k / samples;
    const auto e = chi.eval2(s);
    if (s <= 0.5) {
      const double exact = s - 0.5 * s * s;
      if (std::fabs(e.value - exact) > 1e-14)
        throw std::invalid_argument("chi: parabola piece mismatch");
    }
    if (s < 1.0 && !(e.d2 < 0.0)) throw std::invalid_argument("chi: chi'' not negative on [0,1)");
    if (s >= 1.0 && (std::fabs(e.d1) > 1e-13 || std::fabs(e.value - chi.c_infinity_value) > 1e-13))
      throw std::invalid_argument("chi: not constant beyond 1");
    if (e.value < -1e-13 || e.value > 1.0 + 1e-13)
      throw std::invalid_argument("chi: range leaves [0,1]");
  }
  // C^2 junctions
  for (double b : {0.5, 1.0}) {
    const auto l = chi.eval2(b - 1e-12);
    const auto r = chi.eval2(b + 1e-12);
    if (std::fabs(l.value - r.value) > 1e-10 || std::fabs(l.d1 - r.d1) > 1e-9 ||
        std::fabs(l.d2 - r.d2) > 1e-8)
      throw std::invalid_argument("chi: junction not C^2");
  }
}

inline void validate_beta(const CutoffBeta& beta) {
  const int samples = 10000;
  for (int k = 0; k <= samples; ++k) {
    const double s = -3.0 + 3.0 * k / samples;
    const auto e = beta.eval2(s);
    if (s <= -2.0 && std::fabs(e.value) > 1e-14)
      throw std::invalid_argument("beta: not zero below -2");
    if (s >= -1.0 && std::fabs(e.value - 0.5) > 1e-14)
      throw std::invalid_argument("beta: plateau is not 1/2");
    if (e.value < -1e-13 || e.value > 1.0 + 1e-13)
      throw std::invalid_argument("beta: range leaves [0,1]");
  }
  for (double b : {-2.0, -1.0}) {
    const auto l = beta.eval2(b - 1e-12);
    const auto r = beta.eval2(b + 1e-12);
    if (std::fabs(l.value - r.value) > 1e-10 || std::fabs(l.d1 - r.d1) > 1e-9 ||
        std::fabs(l.d2 - r.d2) > 1e-8)
      throw std::invalid_argument("beta: junction not C^2");
  }
}

}  // namespace detail

inline CutoffChi build_chi(const ChiShape& shape = {}) {
  // Bridge curvature cubic in the local coordinate t = s - 1/2 on [0, 1/2]:
  //   c(0) = -1, c(1/2) = 0, c'(1/2) = -tail_slope, int_0^{1/2} c = -1/2.
  Eigen::Matrix4d a;
  Eigen::Vector4d rhs;
  a << 1, 0, 0, 0,                                    // c(0)
      1, 0.5, 0.25, 0.125,                            // c(1/2)
      0, 1, 1.0, 0.75,                                // c'(1/2)
      0.5, 0.125, 1.0 / 24.0, 1.0 / 64.0;             // integral over [0, 1/2]
  rhs << -1.0, 0.0, -shape.tail_slope, -0.5;
  const Eigen::Vector4d c = a.colPivHouseholderQr().solve(rhs);

  const std::vector<double> curv{c[0], c[1], c[2], c[3]};
  // chi'(1/2) = 1/2 and chi(1/2) = 3/8 from the parabola piece
  const std::vector<double> slope = detail::poly_antiderivative(curv, 0.5);
  const std::vector<double> bridge = detail::poly_antiderivative(slope, 0.375);
  const double chi_inf = detail::poly_eval(bridge, 0.5);

  CutoffChi chi;
  chi.c_infinity_value = chi_inf;
  chi.poly = PiecewisePoly({{0.0, {0.0, 1.0, -0.5}},  // s - s^2/2
                            {0.5, bridge},
                            {1.0, {chi_inf}}});
  detail::validate_chi(chi);
  return chi;
}

inline CutoffBeta build_beta(const BetaShape& shape = {}) {
  std::vector<double> step = detail::smoothstep_coeffs(shape.smoothstep_order);
  for (double& v : step) v *= 0.5;

  CutoffBeta beta;
  beta.poly = PiecewisePoly({{-3.0, {0.0}},  // clamp piece: identically zero
                             {-2.0, step},
                             {-1.0, {0.5}}});
  detail::validate_beta(beta);
  return beta;
}

}  // namespace intercurve
