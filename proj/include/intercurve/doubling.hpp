#pragma once

// Leading-order curvature of the doubled manifold: the tube boundary
// D(N) = {dist(., N_1) = epsilon} inside N x I, at an edge point with bending
// angle theta.
//
// Model space at the edge point: an orthonormal basis {f_1..f_{n-1}, f_n}
// of the D(N) tangent space, where f_1..f_{n-1} are principal directions of
// the shrunk boundary and f_n is the tube bending direction. The second
// fundamental form is
//     h = cos(theta) * (boundary_h (+) 0)  +  (cos(theta)/epsilon) * f_n (x) f_n,
// and the ambient factor embeds f_n as sin(theta) nu + cos(theta) d_t into
// N x I whose curvature is Rm^N zero-padded in the flat I direction. All
// O(epsilon) corrections of the exact tube are dropped; every number these
// routines produce is leading order, and the epsilon^-2 terms of the Gauss
// equation cancel identically because the 1/epsilon block of h is rank one.

#include "intercurve/cone.hpp"
#include "intercurve/metric.hpp"
#include "intercurve/parallel.hpp"
#include "intercurve/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace intercurve {

struct DoubleEdgeState {
  SymmetricForm boundary_h;              // (n-1)-dim, orthonormal boundary basis
  AlgebraicCurvatureTensor ambient_rm;   // n-dim, basis {f_1..f_{n-1}, nu}
  double theta = 0.0;                    // bending angle in [0, pi/2]
  double epsilon = 0.0;                  // tube radius
  double collar_trim = 0.0;              // N -> N_1 shrink distance (bookkeeping)

  int dim() const { return ambient_rm.dim(); }

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("DoubleEdgeState: epsilon must be positive");
    if (theta < 0.0 || theta > 1.5707963267948966 + 1e-12)
      throw std::invalid_argument("DoubleEdgeState: theta outside [0, pi/2]");
    if (boundary_h.dim() != dim() - 1)
      throw std::invalid_argument("DoubleEdgeState: boundary_h must have dimension n-1");
  }
};

// Leading-order principal curvatures: mu_k cos(theta) for the boundary
// directions (mu ascending) and cos(theta)/epsilon for the bend.
inline std::vector<double> dn_principal_curvatures(const DoubleEdgeState& st) {
  st.validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.boundary_h.matrix());
  std::vector<double> lam;
  const double c = std::cos(st.theta);
  for (int k = 0; k < st.boundary_h.dim(); ++k) lam.push_back(es.eigenvalues()[k] * c);
  lam.push_back(c / st.epsilon);
  return lam;
}

// Block form cos(theta) h_boundary (+) cos(theta)/epsilon on the bend slot.
inline SymmetricForm dn_second_fundamental_form(const DoubleEdgeState& st) {
  st.validate();
  const int n = st.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h.topLeftCorner(n - 1, n - 1) = std::cos(st.theta) * st.boundary_h.matrix();
  h(n - 1, n - 1) = std::cos(st.theta) / st.epsilon;
  return SymmetricForm(h);
}

namespace detail {

// Rm^{N x I} pulled back to the D(N) tangent model: tangential directions map
// to themselves, the bend direction to sin(theta) nu (the d_t component meets
// only zero rows of the product curvature).
inline AlgebraicCurvatureTensor ambient_rm_on_edge(const DoubleEdgeState& st) {
  const int n = st.dim();
  Eigen::MatrixXd embed = Eigen::MatrixXd::Identity(n, n);
  embed(n - 1, n - 1) = std::sin(st.theta);
  return st.ambient_rm.transformed(embed);
}

inline SymmetricForm padded_boundary_h(const DoubleEdgeState& st) {
  const int n = st.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h.topLeftCorner(n - 1, n - 1) = st.boundary_h.matrix();
  return SymmetricForm(h);
}

}  // namespace detail

// Effective algebraic curvature tensor of D(N) at the edge point:
//   Q = iota* Rm^{N x I} + 1/2 h ^o h,
// so the Gauss-equation partial sums are partial_sectional_sum(Q, ., m).
inline AlgebraicCurvatureTensor dn_effective_curvature(const DoubleEdgeState& st) {
  st.validate();
  const SymmetricForm h = dn_second_fundamental_form(st);
  AlgebraicCurvatureTensor gauss = kulkarni_nomizu(h, h);
  gauss *= 0.5;
  return detail::ambient_rm_on_edge(st) + gauss;
}

struct DnSumParts {
  double total = 0.0;
  double rm_term = 0.0;        // ambient product curvature contribution
  double inv_eps_term = 0.0;   // (cos^2 theta / epsilon) * KN(boundary_h, nu (x) nu) sum
  double remainder = 0.0;      // O(1) h-square remainder
};

// Gauss-equation partial sum with its decomposition exposed, so the
// epsilon^-2 cancellation and the sign of the 1/epsilon term are inspectable.
inline DnSumParts dn_intermediate_sum(const DoubleEdgeState& st, const Frame& f, int m) {
  st.validate();
  const int n = st.dim();
  if (f.dim() != n) throw std::invalid_argument("dn_intermediate_sum: frame dimension mismatch");

  DnSumParts parts;
  parts.total = partial_sectional_sum(dn_effective_curvature(st), f, m);
  parts.rm_term = partial_sectional_sum(detail::ambient_rm_on_edge(st), f, m);

  Eigen::VectorXd nu_flat = Eigen::VectorXd::Zero(n);
  nu_flat[n - 1] = 1.0;
  const double c = std::cos(st.theta);
  parts.inv_eps_term =
      (c * c / st.epsilon) *
      partial_sectional_sum(kulkarni_nomizu(detail::padded_boundary_h(st), rank_one(nu_flat)), f, m);
  parts.remainder = parts.total - parts.rm_term - parts.inv_eps_term;
  return parts;
}

struct EdgeSample {
  SymmetricForm boundary_h;
  AlgebraicCurvatureTensor ambient_rm;
};

// Boundary data for the doubling sweep read off a collar chart at the slice
// rho = trim (the shrunk manifold N_1), expressed in an orthonormal basis
// {tangential, d_rho}. The slice h of a Fermi chart is exact.
inline std::vector<EdgeSample> edge_samples_from_collar(const ChartMetric& g, double trim,
                                                        const std::vector<int>& tangential_counts) {
  if (!g.collar_axis()) throw std::invalid_argument("edge_samples_from_collar: no collar axis");
  const int n = g.dim();
  const int axis = *g.collar_axis();
  Box face = g.domain();
  face.lo[axis] = face.hi[axis] = trim;
  std::vector<int> counts(n, 1);
  int t = 0;
  for (int i = 0; i < n; ++i)
    if (i != axis)
      counts[i] = tangential_counts[std::min<size_t>(t++, tangential_counts.size() - 1)];

  std::vector<EdgeSample> samples;
  for (const auto& q : domain_grid(face, counts)) {
    const SymmetricForm h = level_set_second_fundamental_form(g, q);
    const SymmetricForm induced = induced_boundary_metric(g, q);
    const Eigen::MatrixXd tbasis = orthonormal_gauge(induced.matrix());

    EdgeSample s;
    s.boundary_h = SymmetricForm(Eigen::MatrixXd(tbasis.transpose() * h.matrix() * tbasis));

    // ambient curvature in the basis {lifted tangentials, d_rho}
    Eigen::MatrixXd lift = Eigen::MatrixXd::Zero(n, n);
    int col = 0;
    for (int i = 0; i < n; ++i) {
      if (i == axis) continue;
      int row = 0;
      for (int j = 0; j < n; ++j) {
        if (j == axis) continue;
        lift(j, col) = tbasis(row, col);
        ++row;
      }
      ++col;
    }
    lift(axis, n - 1) = 1.0;  // nu = d_rho, last slot
    s.ambient_rm = riemann(g, q).transformed(lift);
    samples.push_back(std::move(s));
  }
  return samples;
}

struct DoublingEpsilonRow {
  double epsilon = 0.0;
  double worst_margin = 0.0;
  double worst_theta = 0.0;
  int worst_sample = 0;
  bool all_positive = false;
};

struct DoublingSweepReport {
  int m = 0;
  bool hypothesis_m_convex = false;  // every boundary_h sample strictly m-positive
  double hypothesis_margin = 0.0;
  std::vector<DoublingEpsilonRow> rows;  // one per epsilon, in input order
  std::optional<double> largest_passing_epsilon;
  bool margins_improve_as_epsilon_decreases = false;
};

// Doubling-lemma sweep: frame-minimized Gauss-equation sums over the theta
// grid and the boundary samples, for each tube radius. The m-convexity
// hypothesis is checked and reported; the sweep runs either way.
inline DoublingSweepReport doubling_sweep(const std::vector<EdgeSample>& samples, int m,
                                          const std::vector<double>& epsilons, int theta_count = 32,
                                          const ConeOptions& cone_opts = {}) {
  if (samples.empty()) throw std::invalid_argument("doubling_sweep: no samples");
  const int n = samples.front().ambient_rm.dim();
  if (m < 1 || m > n - 1) throw std::invalid_argument("doubling_sweep: m out of range");

  DoublingSweepReport rep;
  rep.m = m;
  rep.hypothesis_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples)
    rep.hypothesis_margin = std::min(rep.hypothesis_margin, m_positive(s.boundary_h, std::min(m, n - 1)).margin);
  rep.hypothesis_m_convex = rep.hypothesis_margin > 0.0;

  const double half_pi = 1.5707963267948966;
  std::vector<double> thetas;
  for (int t = 0; t < theta_count; ++t)
    thetas.push_back(theta_count == 1 ? 0.0 : half_pi * t / (theta_count - 1));

  for (double eps : epsilons) {
    DoublingEpsilonRow row;
    row.epsilon = eps;
    row.worst_margin = std::numeric_limits<double>::infinity();
    const long total = static_cast<long>(samples.size()) * theta_count;
    std::vector<double> margins(total);
    parallel_blocks(total, [&](long lo, long hi) {
      for (long k = lo; k < hi; ++k) {
        const size_t si = static_cast<size_t>(k) / theta_count;
        const int ti = static_cast<int>(k % theta_count);
        DoubleEdgeState st{samples[si].boundary_h, samples[si].ambient_rm, thetas[ti], eps, 0.0};
        margins[k] = cone_min(dn_effective_curvature(st), m, cone_opts).min_value;
      }
    });
    for (long k = 0; k < total; ++k)
      if (margins[k] < row.worst_margin) {
        row.worst_margin = margins[k];
        row.worst_sample = static_cast<int>(k / theta_count);
        row.worst_theta = thetas[k % theta_count];
      }
    row.all_positive = row.worst_margin > 0.0;
    rep.rows.push_back(row);
  }

  for (const auto& row : rep.rows)
    if (row.all_positive &&
        (!rep.largest_passing_epsilon || row.epsilon > *rep.largest_passing_epsilon))
      rep.largest_passing_epsilon = row.epsilon;

  // smaller epsilon should not hurt: compare rows sorted by decreasing epsilon
  std::vector<DoublingEpsilonRow> sorted = rep.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.epsilon > b.epsilon; });
  rep.margins_improve_as_epsilon_decreases = true;
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].worst_margin < sorted[i - 1].worst_margin - 1e-9)
      rep.margins_improve_as_epsilon_decreases = false;
  return rep;
}

}  // namespace intercurve
