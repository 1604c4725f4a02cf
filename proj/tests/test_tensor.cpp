#include "intercurve/tensor.hpp"

#include "intercurve/rng.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace intercurve;
using testsupport::random_curvature;
using testsupport::random_symmetric;

TEST_CASE("kulkarni-nomizu of identities") {
  const int n = 3;
  const auto kn = kulkarni_nomizu(SymmetricForm::identity(n), SymmetricForm::identity(n));
  const Frame f = Frame::standard(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double expected = (p == q) ? 0.0 : 2.0;
      CHECK(kn(p, q, p, q) == expected);
    }
}

TEST_CASE("kulkarni-nomizu with a zero factor is zero") {
  Rng rng(11);
  const auto kn = kulkarni_nomizu(random_symmetric(4, rng), SymmetricForm::zero(4));
  for (double v : kn.data()) CHECK(v == 0.0);
}

TEST_CASE("symmetrized one-form pairing with rank-one factor vanishes") {
  // (omega (x) nu + nu (x) omega) ^o (nu (x) nu) == 0
  Rng rng(12);
  for (int n : {2, 3, 5}) {
    const Eigen::VectorXd omega = rng.gaussian_vector(n);
    const Eigen::VectorXd nu = rng.gaussian_vector(n);
    const SymmetricForm sym(Eigen::MatrixXd(omega * nu.transpose() + nu * omega.transpose()));
    const auto kn = kulkarni_nomizu(sym, rank_one(nu));
    double worst = 0.0;
    for (double v : kn.data()) worst = std::max(worst, std::fabs(v));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("rank_one examples") {
  Eigen::VectorXd nu(3);
  nu << 1.0, 0.0, 0.0;
  CHECK(rank_one(nu).matrix() == Eigen::MatrixXd(Eigen::Vector3d(1, 0, 0).asDiagonal()));

  CHECK(rank_one(Eigen::VectorXd::Zero(4)).matrix().isZero(0.0));

  Eigen::VectorXd ab(2);
  ab << -1.25, 0.5;
  const auto m = rank_one(ab).matrix();
  CHECK(m(0, 0) == ab[0] * ab[0]);
  CHECK(m(0, 1) == ab[0] * ab[1]);
  CHECK(std::fabs(m.determinant()) < 1e-15);  // rank <= 1
}

TEST_CASE("partial sectional sums on constant curvature") {
  // n = 4, m = 2, curvature 1: sum over pairs = (4-1) + (4-2) = 5
  const auto r = constant_curvature_tensor(4, 1.0);
  CHECK(partial_sectional_sum(r, Frame::standard(4), 2) == Catch::Approx(5.0).margin(1e-14));

  // frame independence under constant curvature
  Rng rng(21);
  const Frame f(haar_orthogonal(4, rng), SymmetricForm::identity(4), 1e-10);
  CHECK(partial_sectional_sum(r, f, 2) == Catch::Approx(5.0).margin(1e-12));

  // zero tensor
  const AlgebraicCurvatureTensor zero(4);
  CHECK(partial_sectional_sum(zero, f, 2) == 0.0);

  // delta ^o delta at n = 3, m = 2 equals 6 = m(2n - m - 1)
  const auto kn = kulkarni_nomizu(SymmetricForm::identity(3), SymmetricForm::identity(3));
  CHECK(partial_sectional_sum(kn, Frame::standard(3), 2) == Catch::Approx(6.0));
  CHECK(delta_kn_partial_sum(3, 2) == 6.0);
}

TEST_CASE("delta kn closed form vs direct summation") {
  for (int n = 2; n <= 8; ++n) {
    const auto kn = kulkarni_nomizu(SymmetricForm::identity(n), SymmetricForm::identity(n));
    for (int m = 1; m < n; ++m) {
      const double direct = partial_sectional_sum(kn, Frame::standard(n), m);
      CHECK(direct == Catch::Approx(delta_kn_partial_sum(n, m)).margin(1e-12));
    }
  }
}

TEST_CASE("partial sum invariance under block permutations") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(3, 6);
    const int m = rng.uniform_int(1, n - 1);
    const auto r = random_curvature(n, rng);
    const Frame f(haar_orthogonal(n, rng), SymmetricForm::identity(n), 1e-9);
    const double base = partial_sectional_sum(r, f, m);

    // permute within the first m columns and within the tail independently
    Eigen::MatrixXd cols = f.columns();
    for (int k = m - 1; k > 0; --k) cols.col(k).swap(cols.col(rng.uniform_int(0, k)));
    for (int k = n - 1; k > m; --k) cols.col(k).swap(cols.col(m + rng.uniform_int(0, k - m)));
    const double permuted =
        partial_sectional_sum(r, Frame(cols, SymmetricForm::identity(n), 1e-9), m);
    CHECK(permuted == Catch::Approx(base).margin(1e-10 * (1.0 + std::fabs(base))));
  }
}

TEST_CASE("m = n-1 partial sum is frame independent") {
  Rng rng(41);
  for (int n : {3, 4, 5}) {
    const auto r = random_curvature(n, rng);
    const double reference = partial_sectional_sum(r, Frame::standard(n), n - 1);
    double spread = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Frame f(haar_orthogonal(n, rng), SymmetricForm::identity(n), 1e-9);
      spread = std::max(spread, std::fabs(partial_sectional_sum(r, f, n - 1) - reference));
    }
    CHECK(spread < 1e-10 * (1.0 + std::fabs(reference)));
    CHECK(reference == Catch::Approx(0.5 * double_contraction(r)).margin(1e-10));
  }
}

TEST_CASE("kulkarni-nomizu symmetry property") {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const auto s = random_symmetric(n, rng);
    const auto t = random_symmetric(n, rng);
    const auto st = kulkarni_nomizu(s, t);
    CHECK(validate_curvature(st, 1e-12).passed);
    // KN(S,T) == KN(T,S)
    const auto ts = kulkarni_nomizu(t, s);
    double diff = 0.0;
    for (size_t i = 0; i < st.data().size(); ++i)
      diff = std::max(diff, std::fabs(st.data()[i] - ts.data()[i]));
    CHECK(diff == 0.0);
  }
}

TEST_CASE("validate_curvature flags a constructed defect") {
  auto r = constant_curvature_tensor(3, 1.0);
  r.at(0, 1, 0, 1) += 1e-3;
  const auto rep = validate_curvature(r, 1e-12);
  CHECK_FALSE(rep.passed);
  CHECK(rep.antisymmetry == Catch::Approx(1e-3).epsilon(1e-9));

  CHECK(validate_curvature(AlgebraicCurvatureTensor(4), 1e-12).passed);
}

TEST_CASE("symmetrize_curvature projects onto the curvature symmetries") {
  Rng rng(61);
  for (int n : {3, 4}) {
    AlgebraicCurvatureTensor noisy = random_curvature(n, rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) noisy.at(i, j, k, l) += 0.05 * rng.gaussian();
    const auto fixed = symmetrize_curvature(noisy);
    CHECK(validate_curvature(fixed, 1e-12).passed);
    // projection is idempotent
    const auto twice = symmetrize_curvature(fixed);
    double diff = 0.0;
    for (size_t i = 0; i < fixed.data().size(); ++i)
      diff = std::max(diff, std::fabs(fixed.data()[i] - twice.data()[i]));
    CHECK(diff < 1e-13);
  }
}

TEST_CASE("frames enforce orthonormality") {
  Rng rng(71);
  const int n = 4;
  CHECK_THROWS_AS(Frame(Eigen::MatrixXd::Identity(n, n) * 1.01, SymmetricForm::identity(n)),
                  std::invalid_argument);

  // Gram-Schmidt against a non-trivial metric
  const SymmetricForm g(
      Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n) + 0.2 * rng.gaussian_matrix(n, n)));
  const SymmetricForm spd(Eigen::MatrixXd(g.matrix().transpose() * g.matrix() +
                                          Eigen::MatrixXd::Identity(n, n)));
  const Frame f = Frame::gram_schmidt(rng.gaussian_matrix(n, n), spd);
  const Eigen::MatrixXd gram = f.columns().transpose() * spd.matrix() * f.columns();
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor basis transform is multilinear evaluation") {
  Rng rng(81);
  const int n = 4;
  const auto r = random_curvature(n, rng);
  const Eigen::MatrixXd b = rng.gaussian_matrix(n, n);
  const auto rt = r.transformed(b);
  for (int trial = 0; trial < 10; ++trial) {
    const int i = rng.uniform_int(0, n - 1), j = rng.uniform_int(0, n - 1);
    const int k = rng.uniform_int(0, n - 1), l = rng.uniform_int(0, n - 1);
    const double direct = r.evaluate(b.col(i), b.col(j), b.col(k), b.col(l));
    CHECK(rt(i, j, k, l) == Catch::Approx(direct).margin(1e-10));
  }
}
