#pragma once

// Multilinear algebra on a single tangent space: symmetric bilinear forms,
// algebraic curvature tensors, metric-orthonormal frames, Kulkarni-Nomizu
// products and partial sectional sums.
//
// Sign and summation conventions used throughout the library:
//   * curvature tensors are fully lowered, R(e_p,e_q,e_p,e_q) is the sectional
//     numerator, and round metrics come out positive;
//   * the partial sectional sum is sum_{p=1}^m sum_{q=p+1}^n R(e_p,e_q,e_p,e_q);
//   * components are always expressed in a stated basis, and frames are
//     orthonormal against an explicit SymmetricForm.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace intercurve {

using CoVector = Eigen::VectorXd;

class SymmetricForm {
 public:
  SymmetricForm() = default;

  // Symmetrizes the input; 0.5*(a_ij + a_ji) is order-independent, so the
  // stored entries satisfy entries(i,j) == entries(j,i) exactly.
  explicit SymmetricForm(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SymmetricForm: matrix not square");
    mat_ = 0.5 * (a + a.transpose());
  }

  // Rejects matrices whose asymmetry exceeds tol instead of silently fixing it.
  static SymmetricForm checked(const Eigen::MatrixXd& a, double tol = 1e-12) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SymmetricForm: matrix not square");
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol)
      throw std::invalid_argument("SymmetricForm: asymmetry " + std::to_string(asym) +
                                  " exceeds tolerance");
    return SymmetricForm(a);
  }

  static SymmetricForm identity(int n) { return SymmetricForm(Eigen::MatrixXd::Identity(n, n)); }
  static SymmetricForm zero(int n) { return SymmetricForm(Eigen::MatrixXd::Zero(n, n)); }

  int dim() const { return static_cast<int>(mat_.rows()); }
  double operator()(int i, int j) const { return mat_(i, j); }
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return x.dot(mat_ * y);
  }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  double trace() const { return mat_.trace(); }

 private:
  Eigen::MatrixXd mat_;
};

// nu (x) nu as a symmetric form: entries[i][j] = nu_i * nu_j.
inline SymmetricForm rank_one(const CoVector& nu) {
  return SymmetricForm(Eigen::MatrixXd(nu * nu.transpose()));
}

// Dense rank-4 component array R[i][j][k][l]. Expected to carry the curvature
// symmetries; validate_curvature measures how well it does.
class AlgebraicCurvatureTensor {
 public:
  AlgebraicCurvatureTensor() = default;
  explicit AlgebraicCurvatureTensor(int n) : n_(n), c_(static_cast<size_t>(n) * n * n * n, 0.0) {
    if (n <= 0) throw std::invalid_argument("AlgebraicCurvatureTensor: dim must be positive");
  }

  int dim() const { return n_; }
  double operator()(int i, int j, int k, int l) const { return c_[idx(i, j, k, l)]; }
  double& at(int i, int j, int k, int l) { return c_[idx(i, j, k, l)]; }
  const std::vector<double>& data() const { return c_; }

  // Full multilinear evaluation on four vectors expressed in the component basis.
  double evaluate(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const Eigen::VectorXd& d) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < n_; ++j) {
        if (b[j] == 0.0) continue;
        double skl = 0.0;
        const double* base = &c_[idx(i, j, 0, 0)];
        for (int k = 0; k < n_; ++k) {
          double sl = 0.0;
          for (int l = 0; l < n_; ++l) sl += base[k * n_ + l] * d[l];
          skl += c[k] * sl;
        }
        s += a[i] * b[j] * skl;
      }
    }
    return s;
  }

  // Components in a new basis whose vectors are the columns of B (expressed in
  // the old basis): R'(a,b,c,d) = R(B_a, B_b, B_c, B_d).
  AlgebraicCurvatureTensor transformed(const Eigen::MatrixXd& basis) const {
    if (basis.rows() != n_) throw std::invalid_argument("transformed: basis row mismatch");
    const int m = static_cast<int>(basis.cols());
    auto contract_first = [](const std::vector<double>& in, int nfirst, int rest,
                             const Eigen::MatrixXd& b, std::vector<double>& out) {
      // in: [nfirst x rest], out: [cols(b) x rest]; out[a][r] = sum_i b(i,a) in[i][r]
      const int cols = static_cast<int>(b.cols());
      out.assign(static_cast<size_t>(cols) * rest, 0.0);
      for (int i = 0; i < nfirst; ++i)
        for (int a = 0; a < cols; ++a) {
          const double w = b(i, a);
          if (w == 0.0) continue;
          const double* src = &in[static_cast<size_t>(i) * rest];
          double* dst = &out[static_cast<size_t>(a) * rest];
          for (int r = 0; r < rest; ++r) dst[r] += w * src[r];
        }
    };
    // Cycle the leading index through all four modes.
    std::vector<double> cur = c_, next;
    int lead = n_;
    for (int mode = 0; mode < 4; ++mode) {
      const int rest = static_cast<int>(cur.size()) / lead;
      contract_first(cur, lead, rest, basis, next);
      // move the new leading block to the back: out[a][r] -> [r][a]
      std::vector<double> rot(next.size());
      for (int a = 0; a < m; ++a)
        for (int r = 0; r < rest; ++r)
          rot[static_cast<size_t>(r) * m + a] = next[static_cast<size_t>(a) * rest + r];
      cur.swap(rot);
      lead = (mode < 3) ? n_ : m;
    }
    AlgebraicCurvatureTensor out(m);
    out.c_ = std::move(cur);
    return out;
  }

  AlgebraicCurvatureTensor& operator+=(const AlgebraicCurvatureTensor& o) {
    check_same_dim(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  AlgebraicCurvatureTensor& operator-=(const AlgebraicCurvatureTensor& o) {
    check_same_dim(o);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  AlgebraicCurvatureTensor& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  friend AlgebraicCurvatureTensor operator+(AlgebraicCurvatureTensor a,
                                            const AlgebraicCurvatureTensor& b) {
    return a += b;
  }
  friend AlgebraicCurvatureTensor operator-(AlgebraicCurvatureTensor a,
                                            const AlgebraicCurvatureTensor& b) {
    return a -= b;
  }
  friend AlgebraicCurvatureTensor operator*(double s, AlgebraicCurvatureTensor a) { return a *= s; }

  size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }

 private:
  void check_same_dim(const AlgebraicCurvatureTensor& o) const {
    if (o.n_ != n_) throw std::invalid_argument("curvature tensor dimension mismatch");
  }
  int n_ = 0;
  std::vector<double> c_;
};

// (S ^o T)(v1,v2,v3,v4) = S(v1,v3)T(v2,v4) + S(v2,v4)T(v1,v3)
//                       - S(v1,v4)T(v2,v3) - S(v2,v3)T(v1,v4).
// The grouped evaluation keeps the first-pair antisymmetry and the pair
// symmetry exact in floating point, not just up to roundoff.
inline AlgebraicCurvatureTensor kulkarni_nomizu(const SymmetricForm& s, const SymmetricForm& t) {
  const int n = s.dim();
  if (t.dim() != n) throw std::invalid_argument("kulkarni_nomizu: dimension mismatch");
  AlgebraicCurvatureTensor r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double p1 = s(i, k) * t(j, l);
          const double p2 = s(j, l) * t(i, k);
          const double p3 = s(i, l) * t(j, k);
          const double p4 = s(j, k) * t(i, l);
          r.at(i, j, k, l) = (p1 + p2) - (p3 + p4);
        }
  return r;
}

// R = (kappa/2) * (delta ^o delta): every sectional curvature equals kappa.
inline AlgebraicCurvatureTensor constant_curvature_tensor(int n, double kappa) {
  AlgebraicCurvatureTensor r = kulkarni_nomizu(SymmetricForm::identity(n), SymmetricForm::identity(n));
  r *= 0.5 * kappa;
  return r;
}

// Ric(i,j) = sum_k R(i,k,j,k); positive on round spheres under our convention.
inline Eigen::MatrixXd ricci(const AlgebraicCurvatureTensor& r) {
  const int n = r.dim();
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += r(i, k, j, k);
      ric(i, j) = s;
    }
  return ric;
}

// sum_{p,q} R(p,q,p,q); twice the (n-1)-partial sum of any orthonormal frame.
inline double double_contraction(const AlgebraicCurvatureTensor& r) {
  const int n = r.dim();
  double s = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) s += r(p, q, p, q);
  return s;
}

// Closed form of sum_{p<=m, q>p} (delta ^o delta)(e_p,e_q,e_p,e_q): each of the
// m*n - m(m+1)/2 counted pairs contributes 2.
inline double delta_kn_partial_sum(int n, int m) {
  return static_cast<double>(m) * (2.0 * n - m - 1.0);
}

struct CurvatureSymmetryReport {
  double antisymmetry = 0.0;   // max |R_ijkl + R_jikl|
  double pair_symmetry = 0.0;  // max |R_ijkl - R_klij|
  double first_bianchi = 0.0;  // max |R_ijkl + R_kijl + R_jkil|
  double tolerance = 0.0;
  bool passed = false;
  double max_violation() const {
    return std::max(antisymmetry, std::max(pair_symmetry, first_bianchi));
  }
};

inline CurvatureSymmetryReport validate_curvature(const AlgebraicCurvatureTensor& r, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("validate_curvature: tol must be positive");
  const int n = r.dim();
  CurvatureSymmetryReport rep;
  rep.tolerance = tol;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          rep.antisymmetry = std::max(rep.antisymmetry, std::fabs(r(i, j, k, l) + r(j, i, k, l)));
          rep.pair_symmetry = std::max(rep.pair_symmetry, std::fabs(r(i, j, k, l) - r(k, l, i, j)));
          rep.first_bianchi = std::max(
              rep.first_bianchi, std::fabs(r(i, j, k, l) + r(k, i, j, l) + r(j, k, i, l)));
        }
  rep.passed = rep.max_violation() <= tol;
  return rep;
}

// Nearest tensor with the curvature symmetries: antisymmetrize both pairs,
// symmetrize the pair exchange, then project out the totally antisymmetric
// (first-Bianchi-violating) part.
inline AlgebraicCurvatureTensor symmetrize_curvature(const AlgebraicCurvatureTensor& t) {
  const int n = t.dim();
  AlgebraicCurvatureTensor a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double pair1 = 0.25 * (t(i, j, k, l) - t(j, i, k, l) - t(i, j, l, k) + t(j, i, l, k));
          const double pair2 = 0.25 * (t(k, l, i, j) - t(l, k, i, j) - t(k, l, j, i) + t(l, k, j, i));
          a.at(i, j, k, l) = 0.5 * (pair1 + pair2);
        }
  AlgebraicCurvatureTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double bianchi = (a(i, j, k, l) + a(j, k, i, l) + a(k, i, j, l)) / 3.0;
          out.at(i, j, k, l) = a(i, j, k, l) - bianchi;
        }
  return out;
}

// Columns orthonormal with respect to a supplied metric.
class Frame {
 public:
  Frame(const Eigen::MatrixXd& columns, const SymmetricForm& metric, double tol = 1e-12)
      : cols_(columns), metric_(metric) {
    const int n = dim();
    if (columns.rows() != n || columns.cols() != n)
      throw std::invalid_argument("Frame: need n columns of dimension n");
    const Eigen::MatrixXd gram = columns.transpose() * metric.matrix() * columns;
    const double err = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > tol)
      throw std::invalid_argument("Frame: columns not orthonormal (violation " +
                                  std::to_string(err) + ")");
  }

  static Frame standard(int n) {
    return Frame(Eigen::MatrixXd::Identity(n, n), SymmetricForm::identity(n));
  }

  // Columns assumed orthonormal w.r.t. the identity; skips the checked ctor's
  // Gram matrix when the caller already knows (hot loops).
  static Frame unchecked_euclidean(const Eigen::MatrixXd& columns) {
    Frame f;
    f.cols_ = columns;
    f.metric_ = SymmetricForm::identity(static_cast<int>(columns.rows()));
    return f;
  }

  // Modified Gram-Schmidt against the metric, applied twice.
  static Frame gram_schmidt(const Eigen::MatrixXd& columns, const SymmetricForm& metric) {
    Eigen::MatrixXd q = columns;
    const Eigen::MatrixXd& g = metric.matrix();
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < q.cols(); ++j) {
        for (int i = 0; i < j; ++i) {
          const double proj = q.col(i).dot(g * q.col(j));
          q.col(j) -= proj * q.col(i);
        }
        const double norm = std::sqrt(q.col(j).dot(g * q.col(j)));
        if (!(norm > 1e-14)) throw std::invalid_argument("gram_schmidt: degenerate column");
        q.col(j) /= norm;
      }
    }
    return Frame(q, metric);
  }

  int dim() const { return metric_.dim(); }
  const Eigen::MatrixXd& columns() const { return cols_; }
  Eigen::VectorXd column(int i) const { return cols_.col(i); }
  const SymmetricForm& metric() const { return metric_; }

 private:
  Frame() = default;
  Eigen::MatrixXd cols_;
  SymmetricForm metric_;
};

namespace detail {

// sum_{p<m} sum_{q>p} R(cols_p, cols_q, cols_p, cols_q) on raw columns.
inline double partial_sum_columns(const AlgebraicCurvatureTensor& r, const Eigen::MatrixXd& cols,
                                  int m) {
  const int n = r.dim();
  double total = 0.0;
  Eigen::MatrixXd mid(n, n);
  for (int p = 0; p < m; ++p) {
    const Eigen::VectorXd a = cols.col(p);
    // mid(j,l) = sum_{i,k} a_i a_k R[i][j][k][l]
    mid.setZero();
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        const double w = a[i] * a[k];
        if (w == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          const double* base = &r.data()[r.idx(i, j, k, 0)];
          for (int l = 0; l < n; ++l) mid(j, l) += w * base[l];
        }
      }
    }
    for (int q = p + 1; q < n; ++q) {
      const Eigen::VectorXd b = cols.col(q);
      total += b.dot(mid * b);
    }
  }
  return total;
}

}  // namespace detail

// Partial sectional sum over the first m frame vectors; 1 <= m <= n-1.
inline double partial_sectional_sum(const AlgebraicCurvatureTensor& r, const Frame& f, int m) {
  const int n = r.dim();
  if (f.dim() != n) throw std::invalid_argument("partial_sectional_sum: frame dimension mismatch");
  if (m < 1 || m > n - 1) throw std::invalid_argument("partial_sectional_sum: m out of range");
  return detail::partial_sum_columns(r, f.columns(), m);
}

}  // namespace intercurve
