#pragma once

// Chart-based Riemannian metrics: Christoffel symbols and the lowered Riemann
// tensor from exact second-order jets of the components, Fermi collar charts,
// and second fundamental forms of the boundary and of distance level sets.
//
// Curvature sign convention:
//   Rm(X,Y,Z,W) = -g(D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z, W),
// which makes round spheres come out with sectional curvature +1. The second
// fundamental form of a collar boundary uses the inward unit normal nu = d/drho
// and satisfies h(X,Y) = g(nu, D_X Y) = -1/2 d(g_ab)/drho; the unit sphere
// bounding the unit ball gets h = +identity.
//
// Collar charts put the metric in Fermi form g = drho^2 + g_rho(tangential)
// with rho = coordinate collar_axis and the boundary at rho = 0, so |Drho| = 1
// holds exactly. The boundary defining function of a general metric is a
// distance function; computing it is a PDE problem this library does not
// solve. Inputs must already be in collar form where boundary geometry is
// requested.

#include "intercurve/cone.hpp"
#include "intercurve/field.hpp"
#include "intercurve/tensor.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace intercurve {

struct Box {
  Eigen::VectorXd lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& p, double slack = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
    return true;
  }
};

// Metric value and its first two derivative arrays at a point.
struct MetricJets {
  Eigen::MatrixXd value;                  // g_ij
  std::vector<Eigen::MatrixXd> d1;        // d1[k](i,j) = d_k g_ij
  std::vector<std::vector<Eigen::MatrixXd>> d2;  // d2[k][l](i,j) = d_k d_l g_ij
};

struct PointGeometry {
  Eigen::VectorXd point;
  SymmetricForm metric_value;
  std::vector<Eigen::MatrixXd> christoffel;  // christoffel[k](i,j) = Gamma^k_ij
  AlgebraicCurvatureTensor riemann;
};

class ChartMetric {
 public:
  ChartMetric() = default;

  static ChartMetric from_expressions(int dim, Box domain,
                                      const std::vector<std::vector<std::string>>& upper_triangle,
                                      std::optional<int> collar_axis = std::nullopt) {
    ChartMetric g;
    g.dim_ = dim;
    g.domain_ = std::move(domain);
    g.collar_axis_ = collar_axis;
    g.comps_.assign(dim, std::vector<FieldPtr>(dim));
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        const std::string& src = upper_triangle[i][j - i];
        g.comps_[i][j] = g.comps_[j][i] = make_expression_field(src, dim);
      }
    g.check_shape();
    return g;
  }

  static ChartMetric from_fields(int dim, Box domain, std::vector<std::vector<FieldPtr>> comps,
                                 std::optional<int> collar_axis = std::nullopt) {
    ChartMetric g;
    g.dim_ = dim;
    g.domain_ = std::move(domain);
    g.collar_axis_ = collar_axis;
    g.comps_ = std::move(comps);
    g.check_shape();
    return g;
  }

  int dim() const { return dim_; }
  const Box& domain() const { return domain_; }
  std::optional<int> collar_axis() const { return collar_axis_; }
  const FieldPtr& component(int i, int j) const { return comps_[i][j]; }

  Eigen::MatrixXd value(const Eigen::VectorXd& p) const {
    Eigen::MatrixXd g(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) g(i, j) = g(j, i) = comps_[i][j]->value(p);
    return g;
  }

  MetricJets jets(const Eigen::VectorXd& p) const {
    MetricJets m;
    m.value.resize(dim_, dim_);
    m.d1.assign(dim_, Eigen::MatrixXd::Zero(dim_, dim_));
    m.d2.assign(dim_, std::vector<Eigen::MatrixXd>(dim_, Eigen::MatrixXd::Zero(dim_, dim_)));
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) {
        const Jet2 jet = comps_[i][j]->jet(p);
        m.value(i, j) = m.value(j, i) = jet.value;
        for (int k = 0; k < dim_; ++k) {
          m.d1[k](i, j) = m.d1[k](j, i) = jet.grad[k];
          for (int l = 0; l < dim_; ++l) m.d2[k][l](i, j) = m.d2[k][l](j, i) = jet.hess(k, l);
        }
      }
    return m;
  }

 private:
  void check_shape() const {
    if (dim_ <= 0) throw std::invalid_argument("ChartMetric: dim must be positive");
    if (domain_.dim() != dim_) throw std::invalid_argument("ChartMetric: domain dim mismatch");
    if (collar_axis_ && (*collar_axis_ < 0 || *collar_axis_ >= dim_))
      throw std::invalid_argument("ChartMetric: collar axis out of range");
  }

  int dim_ = 0;
  Box domain_;
  std::optional<int> collar_axis_;
  std::vector<std::vector<FieldPtr>> comps_;
};

namespace detail {

inline Eigen::MatrixXd inverse_metric(const Eigen::MatrixXd& g, const Eigen::VectorXd& p) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    std::string where = "(";
    for (int i = 0; i < p.size(); ++i) where += (i ? ", " : "") + std::to_string(p[i]);
    throw std::domain_error("metric not positive definite at " + where + ")");
  }
  return llt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

}  // namespace detail

// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
inline std::vector<Eigen::MatrixXd> christoffel(const ChartMetric& g, const Eigen::VectorXd& p) {
  const int n = g.dim();
  const MetricJets m = g.jets(p);
  const Eigen::MatrixXd ginv = detail::inverse_metric(m.value, p);
  std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (m.d1[i](j, l) + m.d1[j](i, l) - m.d1[l](i, j));
        gamma[k](i, j) = gamma[k](j, i) = 0.5 * s;
      }
  return gamma;
}

// Lowered curvature assembled from Gamma and its exact derivative:
//   R_abcd = -g_ld (d_a Gamma^l_bc - d_b Gamma^l_ac
//                   + Gamma^k_bc Gamma^l_ak - Gamma^k_ac Gamma^l_bk).
// d(Gamma) uses d g^{kl} = -g^{ka} (d g_ab) g^{bl} and the component Hessians,
// so no finite differences enter anywhere.
inline PointGeometry point_geometry(const ChartMetric& g, const Eigen::VectorXd& p) {
  const int n = g.dim();
  const MetricJets m = g.jets(p);
  const Eigen::MatrixXd ginv = detail::inverse_metric(m.value, p);

  std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (m.d1[i](j, l) + m.d1[j](i, l) - m.d1[l](i, j));
        gamma[k](i, j) = gamma[k](j, i) = 0.5 * s;
      }

  // d_m g^{kl}
  std::vector<Eigen::MatrixXd> dginv(n);
  for (int mm = 0; mm < n; ++mm) dginv[mm] = -ginv * m.d1[mm] * ginv;

  // dgamma[m][k](i,j) = d_m Gamma^k_ij
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(
      n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int mm = 0; mm < n; ++mm)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s += dginv[mm](k, l) * (m.d1[i](j, l) + m.d1[j](i, l) - m.d1[l](i, j));
            s += ginv(k, l) * (m.d2[mm][i](j, l) + m.d2[mm][j](i, l) - m.d2[mm][l](i, j));
          }
          dgamma[mm][k](i, j) = dgamma[mm][k](j, i) = 0.5 * s;
        }

  AlgebraicCurvatureTensor r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            double term = dgamma[a][l](b, c) - dgamma[b][l](a, c);
            for (int k = 0; k < n; ++k)
              term += gamma[k](b, c) * gamma[l](a, k) - gamma[k](a, c) * gamma[l](b, k);
            s += m.value(l, d) * term;
          }
          r.at(a, b, c, d) = -s;
        }

  PointGeometry out;
  out.point = p;
  out.metric_value = SymmetricForm(m.value);
  out.christoffel = std::move(gamma);
  out.riemann = std::move(r);
  return out;
}

inline AlgebraicCurvatureTensor riemann(const ChartMetric& g, const Eigen::VectorXd& p) {
  return point_geometry(g, p).riemann;
}

namespace detail {

inline void require_collar(const ChartMetric& g, const char* who) {
  if (!g.collar_axis()) throw std::invalid_argument(std::string(who) + ": metric has no collar axis");
}

// h on the tangential directions of the level set {rho = const}, inward normal
// d/drho; h_ab = Gamma^rho_ab = -1/2 d_rho g_ab in Fermi form.
inline SymmetricForm level_set_h(const ChartMetric& g, const Eigen::VectorXd& q) {
  const int n = g.dim();
  const int axis = *g.collar_axis();
  const std::vector<Eigen::MatrixXd> gamma = christoffel(g, q);
  const Eigen::MatrixXd gq = g.value(q);
  Eigen::MatrixXd h(n - 1, n - 1);
  int ai = 0;
  for (int i = 0; i < n; ++i) {
    if (i == axis) continue;
    int bj = 0;
    for (int j = 0; j < n; ++j) {
      if (j == axis) continue;
      // g(nu, D_a d_b) with nu = d/drho: lower Gamma^k_ab with the rho row of g
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += gq(axis, k) * gamma[k](i, j);
      h(ai, bj) = s;
      ++bj;
    }
    ++ai;
  }
  return SymmetricForm(h);
}

}  // namespace detail

// Second fundamental form of the boundary face {rho = 0} of a collar chart.
inline SymmetricForm second_fundamental_form(const ChartMetric& g, const Eigen::VectorXd& q) {
  detail::require_collar(g, "second_fundamental_form");
  if (q[*g.collar_axis()] != 0.0)
    throw std::invalid_argument("second_fundamental_form: point not on the rho = 0 face");
  return detail::level_set_h(g, q);
}

// Same formula on the slice {rho = q[collar_axis]}; in Fermi form every slice
// is a level set of the distance function, so this is the exact slice h.
inline SymmetricForm level_set_second_fundamental_form(const ChartMetric& g,
                                                       const Eigen::VectorXd& q) {
  detail::require_collar(g, "level_set_second_fundamental_form");
  return detail::level_set_h(g, q);
}

// Tangential block of the metric at a collar point (the induced metric).
inline SymmetricForm induced_boundary_metric(const ChartMetric& g, const Eigen::VectorXd& q) {
  detail::require_collar(g, "induced_boundary_metric");
  const int n = g.dim();
  const int axis = *g.collar_axis();
  const Eigen::MatrixXd gq = g.value(q);
  Eigen::MatrixXd t(n - 1, n - 1);
  int ai = 0;
  for (int i = 0; i < n; ++i) {
    if (i == axis) continue;
    int bj = 0;
    for (int j = 0; j < n; ++j) {
      if (j == axis) continue;
      t(ai, bj) = gq(i, j);
      ++bj;
    }
    ++ai;
  }
  return SymmetricForm(t);
}

// Basis orthonormalizing the metric at p: columns of chol(g)^-T. Deterministic.
inline Eigen::MatrixXd orthonormal_gauge(const Eigen::MatrixXd& g_value) {
  Eigen::LLT<Eigen::MatrixXd> llt(g_value);
  if (llt.info() != Eigen::Success) throw std::domain_error("orthonormal_gauge: metric not SPD");
  const Eigen::MatrixXd lt = llt.matrixL().transpose();
  return lt.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(g_value.rows(), g_value.cols()));
}

// Frame-minimized m-intermediate curvature at a point: express Rm in an
// orthonormal gauge and delegate to cone_min. The verdict's minimizer frame is
// mapped back to chart coordinates.
inline ConeVerdict m_intermediate_min(const ChartMetric& g, const Eigen::VectorXd& p, int m,
                                      const ConeOptions& opts = {}) {
  const PointGeometry pg = point_geometry(g, p);
  const Eigen::MatrixXd basis = orthonormal_gauge(pg.metric_value.matrix());
  const AlgebraicCurvatureTensor r_on = pg.riemann.transformed(basis);
  ConeVerdict v = cone_min(r_on, m, opts);
  v.minimizer = Frame(basis * v.minimizer.columns(), pg.metric_value, 1e-8);
  return v;
}

// Uniform inclusive grid over the chart domain; counts per axis.
inline std::vector<Eigen::VectorXd> domain_grid(const Box& box, const std::vector<int>& counts) {
  const int n = box.dim();
  std::vector<Eigen::VectorXd> points;
  std::vector<int> index(n, 0);
  long total = 1;
  for (int i = 0; i < n; ++i) total *= std::max(1, counts[i]);
  points.reserve(total);
  for (long it = 0; it < total; ++it) {
    Eigen::VectorXd p(n);
    long rest = it;
    for (int i = 0; i < n; ++i) {
      const int c = std::max(1, counts[i]);
      const int k = static_cast<int>(rest % c);
      rest /= c;
      p[i] = (c == 1) ? 0.5 * (box.lo[i] + box.hi[i])
                      : box.lo[i] + (box.hi[i] - box.lo[i]) * k / (c - 1);
    }
    points.push_back(std::move(p));
  }
  return points;
}

struct ChartValidation {
  bool spd_ok = true;
  double min_eigenvalue = 0.0;
  bool fermi_ok = true;
  double fermi_violation = 0.0;
  Eigen::VectorXd worst_point;
};

// Sample-grid validation: SPD everywhere, and for collar charts the exact
// Fermi block structure g(d_rho, d_rho) = 1, g(d_rho, d_a) = 0.
inline ChartValidation validate_chart(const ChartMetric& g, const std::vector<int>& counts,
                                      double fermi_tol = 1e-12) {
  ChartValidation v;
  v.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& p : domain_grid(g.domain(), counts)) {
    const Eigen::MatrixXd gv = g.value(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gv + gv.transpose()));
    const double mineig = es.eigenvalues()[0];
    if (mineig < v.min_eigenvalue) {
      v.min_eigenvalue = mineig;
      v.worst_point = p;
    }
    if (mineig <= 0.0) v.spd_ok = false;
    if (g.collar_axis()) {
      const int axis = *g.collar_axis();
      double viol = std::fabs(gv(axis, axis) - 1.0);
      for (int a = 0; a < g.dim(); ++a)
        if (a != axis) viol = std::max(viol, std::fabs(gv(axis, a)));
      if (viol > v.fermi_violation) v.fermi_violation = viol;
      if (viol > fermi_tol) v.fermi_ok = false;
    }
  }
  return v;
}

}  // namespace intercurve
