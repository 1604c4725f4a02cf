#pragma once

// Membership and margin computation for the cone of non-negative
// m-intermediate curvature, m-positivity of symmetric forms, and the
// equivalence between m-convexity of a restricted form and interior cone
// membership of its Kulkarni-Nomizu product with a rank-one factor.
//
// All cone searches run in an orthonormal gauge: the tensor components are
// expressed in a basis orthonormal for the ambient inner product, so frames
// are plain orthogonal matrices. Callers with a non-trivial metric transform
// once (see manifold::m_intermediate_min) before delegating here.

#include "intercurve/parallel.hpp"
#include "intercurve/rng.hpp"
#include "intercurve/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace intercurve {

struct MPositivity {
  bool positive = false;
  double margin = 0.0;  // sum of the m smallest eigenvalues
};

// Sum of the m smallest eigenvalues of S; generalized eigenvalues when an
// ambient metric is supplied. positive <=> margin > 0 (strict).
inline MPositivity m_positive(const SymmetricForm& s, int m,
                              const std::optional<SymmetricForm>& metric = std::nullopt) {
  const int n = s.dim();
  if (m < 1 || m > n) throw std::invalid_argument("m_positive: m out of range");
  Eigen::VectorXd evs;
  if (metric) {
    if (metric->dim() != n) throw std::invalid_argument("m_positive: metric dimension mismatch");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix(), metric->matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("m_positive: eigensolver failed");
    evs = es.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("m_positive: eigensolver failed");
    evs = es.eigenvalues();
  }
  double margin = 0.0;
  for (int i = 0; i < m; ++i) margin += evs[i];  // ascending order
  return {margin > 0.0, margin};
}

enum class ConeMethod { automatic, exact_m1, exact_mn1, sweep, brute_force };

inline const char* to_string(ConeMethod m) {
  switch (m) {
    case ConeMethod::automatic: return "auto";
    case ConeMethod::exact_m1: return "exact_m1";
    case ConeMethod::exact_mn1: return "exact_mn1";
    case ConeMethod::sweep: return "sweep";
    case ConeMethod::brute_force: return "brute_force";
  }
  return "?";
}

struct ConeOptions {
  ConeMethod method = ConeMethod::automatic;
  int restarts = 8;          // sweep restarts (first start is the identity frame)
  long samples = 0;          // brute force draws; 0 -> 1e4 (n<=2), 1e5 (n==3), 1e6 (n==4)
  double sweep_tol = 1e-13;  // relative objective improvement per full cycle
  int max_sweeps = 200;
  double strictness_tol = 1e-8;  // interior <=> min_value > strictness_tol
  std::uint64_t seed = 0x1c5eedULL;
};

struct ConeVerdict {
  double min_value = 0.0;
  Frame minimizer = Frame::standard(1);
  ConeMethod method = ConeMethod::automatic;
  double interior_margin = 0.0;  // == min_value; interior iff > tolerance
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  int restarts = 0;
  bool interior() const { return interior_margin > tolerance; }
};

namespace detail {

inline double objective_from_transformed(const AlgebraicCurvatureTensor& w, int m) {
  const int n = w.dim();
  double s = 0.0;
  for (int p = 0; p < m; ++p)
    for (int q = p + 1; q < n; ++q) s += w(p, q, p, q);
  return s;
}

// Rotate the tensor components into the frame obtained by replacing columns
// (i,j) with (c e_i + s e_j, -s e_i + c e_j).
inline void rotate_tensor_plane(AlgebraicCurvatureTensor& w, int i, int j, double c, double s) {
  const int n = w.dim();
  // mode 0
  for (int b = 0; b < n; ++b)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double wi = w(i, b, k, l), wj = w(j, b, k, l);
        w.at(i, b, k, l) = c * wi + s * wj;
        w.at(j, b, k, l) = -s * wi + c * wj;
      }
  // mode 1
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double wi = w(a, i, k, l), wj = w(a, j, k, l);
        w.at(a, i, k, l) = c * wi + s * wj;
        w.at(a, j, k, l) = -s * wi + c * wj;
      }
  // mode 2
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int l = 0; l < n; ++l) {
        const double wi = w(a, b, i, l), wj = w(a, b, j, l);
        w.at(a, b, i, l) = c * wi + s * wj;
        w.at(a, b, j, l) = -s * wi + c * wj;
      }
  // mode 3
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        const double wi = w(a, b, k, i), wj = w(a, b, k, j);
        w.at(a, b, k, i) = c * wi + s * wj;
        w.at(a, b, k, j) = -s * wi + c * wj;
      }
}

// Restriction of the partial sum to a rotation in the (i,j) plane, i < m <= j.
// Pairs inside {1..m} or inside {m+1..n} are rotation-invariant and the (i,j)
// pair sees only its own plane, so the objective reduces to
//   f(theta) = offset + A cos^2 + 2B cos sin + C sin^2
// with coefficients read off the currently transformed tensor.
struct PlaneRestriction {
  double offset, a, b, c;
  double operator()(double theta) const {
    const double co = std::cos(theta), si = std::sin(theta);
    return offset + a * co * co + 2.0 * b * co * si + c * si * si;
  }
};

inline PlaneRestriction make_plane_restriction(const AlgebraicCurvatureTensor& w, int m, int i,
                                               int j) {
  const int n = w.dim();
  double a = 0.0, b = 0.0, c = 0.0;
  for (int p = m; p < n; ++p) {
    if (p == j) continue;
    a += w(p, i, p, i);
    b += w(p, i, p, j);
    c += w(p, j, p, j);
  }
  const double full = objective_from_transformed(w, m);
  return {full - a, a, b, c};  // theta = 0 reproduces the current objective
}

// Golden-section minimization of fn on [lo, hi] (fn unimodal there).
template <typename F>
double golden_section(F&& fn, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    }
  }
  return 0.5 * (a + b);
}

struct SweepOutcome {
  double value;
  Eigen::MatrixXd frame;
  int sweeps;
};

// Cyclic two-column rotation sweeps from a given start frame. Only planes
// mixing the first m columns with the rest are visited; the rest provably do
// not change the objective.
inline SweepOutcome sweep_minimize(const AlgebraicCurvatureTensor& r, int m,
                                   const Eigen::MatrixXd& start, const ConeOptions& opts) {
  const int n = r.dim();
  Eigen::MatrixXd q = start;
  AlgebraicCurvatureTensor w = r.transformed(q);
  double value = objective_from_transformed(w, m);
  const double pi = 3.14159265358979323846;
  int sweeps = 0;
  for (; sweeps < opts.max_sweeps; ++sweeps) {
    const double before = value;
    for (int i = 0; i < m; ++i)
      for (int j = m; j < n; ++j) {
        const PlaneRestriction f = make_plane_restriction(w, m, i, j);
        // coarse bracket over one period, then golden-section refinement
        constexpr int grid = 16;
        double best_t = 0.0, best_f = f(0.0);
        for (int g = 0; g < grid; ++g) {
          const double t = -0.5 * pi + pi * (g + 0.5) / grid;
          const double ft = f(t);
          if (ft < best_f) {
            best_f = ft;
            best_t = t;
          }
        }
        const double span = pi / grid;
        const double theta = golden_section(f, best_t - span, best_t + span, 1e-12);
        const double ftheta = f(theta);
        if (ftheta < value - 0.0) {
          const double c = std::cos(theta), s = std::sin(theta);
          rotate_tensor_plane(w, i, j, c, s);
          // columns: e_i' = c e_i + s e_j, e_j' = -s e_i + c e_j
          const Eigen::VectorXd qi = q.col(i), qj = q.col(j);
          q.col(i) = c * qi + s * qj;
          q.col(j) = -s * qi + c * qj;
          value = ftheta;
        }
      }
    if (before - value <= opts.sweep_tol * (1.0 + std::fabs(before))) {
      ++sweeps;
      break;
    }
  }
  // Re-evaluate from the untransformed tensor to shed incremental rotation drift.
  value = partial_sum_columns(r, q, m);
  return {value, q, sweeps};
}

inline long default_samples(int n) {
  if (n <= 2) return 10000;
  if (n == 3) return 100000;
  return 1000000;
}

// Allocation-free Haar draw for the sampling loop: modified Gram-Schmidt on a
// Gaussian matrix yields the unique Q with positive-diagonal R, the same
// distribution as Householder QR with the sign fix. q is column-major n*n.
inline void haar_sample_raw(int n, Rng& rng, double* q) {
  for (;;) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      double* col = q + j * n;
      for (int i = 0; i < n; ++i) col[i] = rng.gaussian();
      for (int k = 0; k < j; ++k) {
        const double* prev = q + k * n;
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += prev[i] * col[i];
        for (int i = 0; i < n; ++i) col[i] -= dot * prev[i];
      }
      double nrm2 = 0.0;
      for (int i = 0; i < n; ++i) nrm2 += col[i] * col[i];
      if (nrm2 < 1e-24) {
        ok = false;
        break;
      }
      const double inv = 1.0 / std::sqrt(nrm2);
      for (int i = 0; i < n; ++i) col[i] *= inv;
    }
    if (ok) return;
  }
}

// Two modified-Gram-Schmidt passes; restores orthonormality to roundoff even
// for ill-conditioned inputs (single-pass MGS degrades with the condition
// number of the original draw).
inline void reorthonormalize(Eigen::MatrixXd& q) {
  for (int pass = 0; pass < 2; ++pass)
    for (int j = 0; j < q.cols(); ++j) {
      for (int k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
      q.col(j) /= q.col(j).norm();
    }
}

// partial_sum_columns on raw column-major storage; mid is n*n scratch.
inline double partial_sum_raw(const AlgebraicCurvatureTensor& r, const double* q, int m, int n,
                              double* mid) {
  const double* data = r.data().data();
  double total = 0.0;
  for (int p = 0; p < m; ++p) {
    const double* a = q + p * n;
    for (int t = 0; t < n * n; ++t) mid[t] = 0.0;
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        const double w = a[i] * a[k];
        if (w == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          const double* row = data + ((static_cast<size_t>(i) * n + j) * n + k) * n;
          double* mrow = mid + j * n;
          for (int l = 0; l < n; ++l) mrow[l] += w * row[l];
        }
      }
    }
    for (int qq = p + 1; qq < n; ++qq) {
      const double* b = q + qq * n;
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        if (b[j] == 0.0) continue;
        const double* mrow = mid + j * n;
        double t = 0.0;
        for (int l = 0; l < n; ++l) t += mrow[l] * b[l];
        s += b[j] * t;
      }
      total += s;
    }
  }
  return total;
}

// Completes unit vector v to an orthonormal basis with v in a given column.
inline Eigen::MatrixXd householder_completion(const Eigen::VectorXd& v, int position) {
  const int n = static_cast<int>(v.size());
  const double s = v[n - 1] >= 0.0 ? 1.0 : -1.0;
  Eigen::VectorXd u = v;
  u[n - 1] += s;
  const double uu = u.squaredNorm();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  if (uu > 1e-30) h -= (2.0 / uu) * (u * u.transpose());
  // h's last column is -s*v; the others span the orthogonal complement.
  Eigen::MatrixXd out(n, n);
  int k = 0;
  for (int col = 0; col < n - 1; ++col, ++k) {
    if (k == position) ++k;
    out.col(k) = h.col(col);
  }
  out.col(position) = v;
  return out;
}

}  // namespace detail

// Smallest partial sectional sum over orthonormal frames.
//
// Methods:
//   exact_m1   (m == 1):   min eigenvalue of the Ricci contraction;
//   exact_mn1  (m == n-1): half the double contraction, frame-free;
//   sweep:                 multi-start cyclic plane-rotation descent;
//   brute_force (n <= 4):  Haar sampling of O(n) followed by sweep refinement.
// automatic picks the exact method when available and sweep otherwise.
inline ConeVerdict cone_min(const AlgebraicCurvatureTensor& r, int m, const ConeOptions& opts = {}) {
  const int n = r.dim();
  if (m < 1 || m > n - 1) throw std::invalid_argument("cone_min: m out of range");

  ConeMethod method = opts.method;
  if (method == ConeMethod::automatic)
    method = (m == 1) ? ConeMethod::exact_m1 : (m == n - 1) ? ConeMethod::exact_mn1 : ConeMethod::sweep;
  if (method == ConeMethod::exact_m1 && m != 1)
    throw std::invalid_argument("cone_min: exact_m1 requires m == 1");
  if (method == ConeMethod::exact_mn1 && m != n - 1)
    throw std::invalid_argument("cone_min: exact_mn1 requires m == n-1");
  if (method == ConeMethod::brute_force && n > 4)
    throw std::invalid_argument("cone_min: brute_force limited to n <= 4");

  ConeVerdict v;
  v.method = method;
  v.tolerance = opts.strictness_tol;
  v.seed = opts.seed;
  v.restarts = 0;

  switch (method) {
    case ConeMethod::exact_m1: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ricci(r));
      const Eigen::VectorXd e1 = es.eigenvectors().col(0);
      v.min_value = es.eigenvalues()[0];
      v.minimizer = Frame(detail::householder_completion(e1, 0), SymmetricForm::identity(n), 1e-9);
      break;
    }
    case ConeMethod::exact_mn1: {
      v.min_value = 0.5 * double_contraction(r);
      v.minimizer = Frame::standard(n);
      break;
    }
    case ConeMethod::sweep: {
      v.restarts = std::max(1, opts.restarts);
      double best = std::numeric_limits<double>::infinity();
      Eigen::MatrixXd best_q;
      std::vector<detail::SweepOutcome> results(v.restarts,
                                                {0.0, Eigen::MatrixXd(), 0});
      parallel_blocks(v.restarts, [&](long lo, long hi) {
        for (long k = lo; k < hi; ++k) {
          Eigen::MatrixXd start;
          if (k == 0) {
            start = Eigen::MatrixXd::Identity(n, n);
          } else {
            Rng rng(substream_seed(opts.seed, static_cast<std::uint64_t>(k)));
            start = haar_orthogonal(n, rng);
          }
          results[k] = detail::sweep_minimize(r, m, start, opts);
        }
      });
      for (const auto& res : results)
        if (res.value < best) {
          best = res.value;
          best_q = res.frame;
        }
      v.min_value = best;
      v.minimizer = Frame(best_q, SymmetricForm::identity(n), 1e-9);
      break;
    }
    case ConeMethod::brute_force: {
      const long samples = opts.samples > 0 ? opts.samples : detail::default_samples(n);
      const int blocks = std::max(1, max_threads());
      const long per_block = (samples + blocks - 1) / blocks;
      std::vector<double> block_best(blocks, std::numeric_limits<double>::infinity());
      std::vector<Eigen::MatrixXd> block_frame(blocks);
      parallel_blocks(blocks, [&](long blo, long bhi) {
        double qbuf[64], best_buf[64], scratch[64];  // n <= 4 here
        for (long blk = blo; blk < bhi; ++blk) {
          Rng rng(substream_seed(opts.seed, 0x6b5fULL + static_cast<std::uint64_t>(blk)));
          const long lo = blk * per_block;
          const long hi = std::min(samples, lo + per_block);
          double best = std::numeric_limits<double>::infinity();
          for (long k = lo; k < hi; ++k) {
            detail::haar_sample_raw(n, rng, qbuf);
            const double val = detail::partial_sum_raw(r, qbuf, m, n, scratch);
            if (val < best) {
              best = val;
              for (int t = 0; t < n * n; ++t) best_buf[t] = qbuf[t];
            }
          }
          block_best[blk] = best;
          block_frame[blk] = Eigen::Map<const Eigen::MatrixXd>(best_buf, n, n);
        }
      });
      int arg = 0;
      for (int b2 = 1; b2 < blocks; ++b2)
        if (block_best[b2] < block_best[arg]) arg = b2;
      Eigen::MatrixXd start = block_frame[arg];
      detail::reorthonormalize(start);
      const double start_value = detail::partial_sum_columns(r, start, m);
      const detail::SweepOutcome refined = detail::sweep_minimize(r, m, start, opts);
      v.min_value = std::min(refined.value, start_value);
      v.minimizer = Frame(refined.value <= start_value ? refined.frame : start,
                          SymmetricForm::identity(n), 1e-9);
      break;
    }
    case ConeMethod::automatic:
      break;  // unreachable
  }
  v.interior_margin = v.min_value;
  return v;
}

// Exact evaluation of the partial sectional sum of T ^o (nu (x) nu) over a
// frame, grouped as in the trace identity:
//   trace(T) sum_{p<=m} a_p^2 + (sum_{p>m} a_p^2) sum_{q<=m} T(e_q,e_q)
//     + T(w', w') - T(nu#, nu#),
// with a_p = nu(e_p), w' = sum_{p>m} a_p e_p and nu# = sum_p a_p e_p. The last
// term vanishes for the extension-by-zero tensors the identity is usually
// applied to; keeping it makes the identity hold for every symmetric T.
inline double kn_rank_one_sum(const SymmetricForm& t, const CoVector& nu, const Frame& f, int m) {
  const int n = t.dim();
  if (nu.size() != n || f.dim() != n) throw std::invalid_argument("kn_rank_one_sum: dimension mismatch");
  if (m < 1 || m > n - 1) throw std::invalid_argument("kn_rank_one_sum: m out of range");
  double trace = 0.0, trace_m = 0.0, sigma_m = 0.0, sigma_c = 0.0;
  Eigen::VectorXd w_tail = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd nu_sharp = Eigen::VectorXd::Zero(n);
  for (int p = 0; p < n; ++p) {
    const Eigen::VectorXd e = f.column(p);
    const double a = nu.dot(e);
    const double diag = t(e, e);
    trace += diag;
    nu_sharp += a * e;
    if (p < m) {
      sigma_m += a * a;
      trace_m += diag;
    } else {
      sigma_c += a * a;
      w_tail += a * e;
    }
  }
  return trace * sigma_m + sigma_c * trace_m + t(w_tail, w_tail) - t(nu_sharp, nu_sharp);
}

struct Prop31Report {
  bool restriction_positive = false;  // (A) S|_W m-positive
  double restriction_margin = 0.0;
  ConeVerdict cone;                   // (B) cone_min of S ^o (nu (x) nu)
  bool cone_interior = false;
  bool agree = false;
  double strictness_tol = 0.0;
};

// Proposition check: S|_W m-positive <=> S ^o (nu (x) nu) in the cone interior.
// W = nu^perp realized by Householder completion; the cone side uses the brute
// force oracle for n <= 4 and the sweep otherwise.
inline Prop31Report check_prop31(const SymmetricForm& s, const CoVector& nu, int m,
                                 ConeOptions opts = {}) {
  const int n = s.dim();
  if (nu.size() != n) throw std::invalid_argument("check_prop31: dimension mismatch");
  if (m < 1 || m > n - 1) throw std::invalid_argument("check_prop31: m out of range");
  if (std::fabs(nu.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("check_prop31: nu must be a unit vector");

  const Eigen::MatrixXd basis = detail::householder_completion(nu, n - 1);
  Eigen::MatrixXd restricted(n - 1, n - 1);
  for (int a = 0; a < n - 1; ++a)
    for (int b = 0; b < n - 1; ++b) restricted(a, b) = basis.col(a).dot(s.matrix() * basis.col(b));

  Prop31Report rep;
  rep.strictness_tol = opts.strictness_tol;
  const MPositivity mp = m_positive(SymmetricForm(restricted), m);
  rep.restriction_positive = mp.positive;
  rep.restriction_margin = mp.margin;

  if (opts.method == ConeMethod::automatic)
    opts.method = (n <= 4) ? ConeMethod::brute_force : ConeMethod::sweep;
  rep.cone = cone_min(kulkarni_nomizu(s, rank_one(nu)), m, opts);
  rep.cone_interior = rep.cone.min_value > rep.strictness_tol;
  rep.agree = (rep.restriction_positive == rep.cone_interior);
  return rep;
}

}  // namespace intercurve
