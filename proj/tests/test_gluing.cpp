#include "intercurve/gluing.hpp"

#include "intercurve/presets.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

using namespace intercurve;

namespace {

Eigen::VectorXd pt(std::initializer_list<double> xs) {
  Eigen::VectorXd p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

using testsupport::RandomCollarPair;
using testsupport::random_collar_pair;

Box slab_box() {
  Box b;
  b.lo = Eigen::VectorXd(3);
  b.hi = Eigen::VectorXd(3);
  b.lo << 0, 0, 0;
  b.hi << 0.4, 1, 1;
  return b;
}

}  // namespace

TEST_CASE("chi cutoff satisfies the required profile") {
  const CutoffChi chi = build_chi();
  CHECK(chi(0.25) == Catch::Approx(0.21875).margin(1e-15));  // 1/4 - 1/32
  CHECK(chi(0.1) == Catch::Approx(0.1 - 0.005).margin(1e-15));
  CHECK(chi.eval2(1.0).d1 == Catch::Approx(0.0).margin(1e-13));
  CHECK(chi.eval2(1.0 - 1e-7).d2 < 0.0);
  CHECK(std::fabs(chi.eval2(1.0 - 1e-7).d2) < 1e-10);  // C^2 approach to the plateau
  CHECK(chi(1.5) == chi.c_infinity_value);
  CHECK(chi(7.0) == chi.c_infinity_value);
  CHECK(chi.c_infinity_value == Catch::Approx(0.4625).margin(1e-12));  // 37/80 for the default

  for (int k = 0; k < 2000; ++k) {
    const double s = k / 2000.0;
    CHECK(chi.eval2(s).d2 < 0.0);
  }
}

TEST_CASE("beta cutoff satisfies the required profile") {
  const CutoffBeta beta = build_beta();
  CHECK(beta(-0.5) == 0.5);
  CHECK(beta(0.0) == 0.5);
  CHECK(beta(-1.0) == 0.5);
  CHECK(beta(-3.0) == 0.0);
  CHECK(beta(-2.0) == 0.0);
  for (int k = 0; k <= 1000; ++k) {
    const double s = -3.0 + 3.0 * k / 1000.0;
    CHECK(beta(s) >= 0.0);
    CHECK(beta(s) <= 0.5 + 1e-15);
  }
}

TEST_CASE("invalid cutoff shapes are rejected") {
  // a heavy tail slope destroys chi'' < 0 near s = 1
  CHECK_THROWS_AS(build_chi({50.0}), std::invalid_argument);
  // order-3 smoothstep is merely C^1 at the junctions
  CHECK_THROWS_AS(build_beta({3}), std::invalid_argument);
  CHECK_NOTHROW(build_beta({7}));
}

TEST_CASE("extract_S recovers a stated perturbation") {
  Rng rng(401);
  const RandomCollarPair pair = random_collar_pair(rng);
  const auto s = extract_S(pair.g, pair.gt, 0.36);
  const auto p22 = Expression::parse(pair.p_sources[0], chart_variables(3));
  const auto p33 = Expression::parse(pair.p_sources[1], chart_variables(3));
  const auto p23 = Expression::parse(pair.p_sources[2], chart_variables(3));
  for (int k = 0; k < 50; ++k) {
    // inside the taper plateau: rho <= 0.8 * 0.36
    const Eigen::VectorXd x = pt({0.28 * rng.uniform(), rng.uniform(), rng.uniform()});
    CHECK(s[1][1]->value(x) == Catch::Approx(p22.value(x)).margin(1e-10));
    CHECK(s[2][2]->value(x) == Catch::Approx(p33.value(x)).margin(1e-10));
    CHECK(s[1][2]->value(x) == Catch::Approx(p23.value(x)).margin(1e-10));
    CHECK(s[0][0]->value(x) == Catch::Approx(0.0).margin(1e-11));
  }
  // beyond the collar the taper kills S
  CHECK(s[1][1]->value(pt({0.39, 0.5, 0.5})) == Catch::Approx(0.0).margin(1e-14));

  // identical metrics give S == 0
  const auto zero = extract_S(pair.g, pair.g, 0.36);
  CHECK(zero[1][1]->value(pt({0.2, 0.5, 0.5})) == 0.0);

  // boundary disagreement is refused by the family constructor
  Rng rng2(999);
  const auto other = random_collar_pair(rng2);
  CHECK_THROWS_AS(glue_family_from_metrics(pair.g, other.gt, 0.36), GlueError);
}

TEST_CASE("boundary identity: tangential S equals twice the h difference") {
  Rng rng(411);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomCollarPair pair = random_collar_pair(rng);
    const GlueFamily fam = glue_family_from_metrics(pair.g, pair.gt, 0.36);
    const Eigen::VectorXd q = pt({0.0, rng.uniform(), rng.uniform()});
    const SymmetricForm hg = second_fundamental_form(fam.g, q);
    const SymmetricForm hgt = second_fundamental_form(fam.g_tilde, q);
    const SymmetricForm s0 = fam.S_value(q);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(s0(a + 1, b + 1) == Catch::Approx(2.0 * (hg(a, b) - hgt(a, b))).margin(1e-9));
  }
}

TEST_CASE("glued metric branch structure") {
  // collar width 0.5: the taper plateau reaches 0.4 >= exp(-1), so every
  // lambda >= 1 has its seam inside the plateau
  Rng rng(421);
  const CutoffChi chi = build_chi();
  const CutoffBeta beta = build_beta();
  for (int trial = 0; trial < 8; ++trial) {
    const RandomCollarPair pair = random_collar_pair(rng, 0.55, 0.5);
    const GlueFamily fam = glue_family_from_metrics(pair.g, pair.gt, 0.5);
    for (double lambda : {1.0, 2.0, 4.0}) {
      const GlueSpec spec{fam, lambda};
      const ChartMetric ghat = glued_metric(spec, chi, beta);
      const double seam = std::exp(-lambda * lambda);
      const double y = rng.uniform(), z = rng.uniform();

      // deep region: ghat == gt exactly
      const Eigen::VectorXd deep = pt({0.5 * seam * seam, y, z});
      CHECK((ghat.value(deep) - fam.g_tilde.value(deep)).cwiseAbs().maxCoeff() == 0.0);

      // outside the collar: ghat == g exactly
      const Eigen::VectorXd outside = pt({0.54, y, z});
      CHECK((ghat.value(outside) - fam.g.value(outside)).cwiseAbs().maxCoeff() == 0.0);

      // seam: both branch formulas agree to 1e-13
      const Eigen::VectorXd at_seam = pt({seam, y, z});
      const Eigen::MatrixXd b1 = glued_branch_value(spec, chi, beta, 1, at_seam);
      const Eigen::MatrixXd b2 = glued_branch_value(spec, chi, beta, 2, at_seam);
      CHECK((b1 - b2).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  // a seam outside the taper plateau is rejected as lambda-too-small
  const RandomCollarPair narrow = random_collar_pair(rng);
  const GlueFamily fam = glue_family_from_metrics(narrow.g, narrow.gt, 0.36);
  CHECK_THROWS_AS(glued_metric({fam, 1.0}, chi, beta), GlueError);  // exp(-1) > 0.288
}

TEST_CASE("glued metric reconstruction identity inside the collar") {
  Rng rng(431);
  const RandomCollarPair pair = random_collar_pair(rng);
  const GlueFamily fam = glue_family_from_metrics(pair.g, pair.gt, 0.36);
  for (int k = 0; k < 40; ++k) {
    const double rho = 1e-4 + 0.28 * rng.uniform();
    const Eigen::VectorXd x = pt({rho, rng.uniform(), rng.uniform()});
    const Eigen::MatrixXd lhs = fam.g.value(x) + rho * fam.S_value(x).matrix();
    CHECK((lhs - fam.g_tilde.value(x)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("indefinite glued metric is reported with the witness point") {
  // violent negative perturbation at tiny lambda
  const auto slab =
      ChartMetric::from_expressions(3, slab_box(), {{"1", "0", "0"}, {"1", "0"}, {"1"}}, 0);
  std::vector<std::vector<FieldPtr>> p(3, std::vector<FieldPtr>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i][j] = make_constant_field((i == j && i > 0) ? -40.0 : 0.0, 3);
  const GlueFamily fam = glue_family_from_perturbation(slab, p, 0.36);
  CHECK_THROWS_AS(glued_metric({fam, 1.5}, build_chi(), build_beta()), GlueError);
  CHECK_THROWS_AS(glued_metric({fam, 0.0}, build_chi(), build_beta()), std::invalid_argument);
}

TEST_CASE("trivial family: g == gt passes every lambda") {
  Rng rng(441);
  const RandomCollarPair pair = random_collar_pair(rng);
  std::vector<std::vector<FieldPtr>> p(3, std::vector<FieldPtr>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i][j] = make_constant_field(0.0, 3);
  const GlueFamily fam = glue_family_from_perturbation(pair.g, p, 0.36);
  const CutoffChi chi = build_chi();
  const CutoffBeta beta = build_beta();
  for (double lambda : {1.2, 3.0}) {
    const ChartMetric ghat = glued_metric({fam, lambda}, chi, beta);
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd x = pt({0.4 * rng.uniform(), rng.uniform(), rng.uniform()});
      CHECK((ghat.value(x) - fam.g.value(x)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  const HolderReport hrep = holder_convergence(fam, 0.5, {2.0, 4.0});
  for (const auto& row : hrep.rows) {
    CHECK(row.sup == 0.0);
    CHECK(row.seminorm == 0.0);
  }
}

TEST_CASE("zero perturbation of the cap: every lambda passes, lambda0 is the grid minimum") {
  const Preset pos = get_preset("cap-positive-control");
  std::vector<std::vector<FieldPtr>> zero(3, std::vector<FieldPtr>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) zero[i][j] = make_constant_field(0.0, 3);
  const GlueFamily fam = glue_family_from_perturbation(pos.family->g, zero, 0.5);
  GlueGridOptions grid;
  grid.tangential = {2, 2};
  grid.rho_linear = 3;
  grid.rho_log = 2;
  ConeOptions copts;

  const PositivityScanReport rep = positivity_scan(fam, 1, {1, 2, 4}, grid, copts);
  REQUIRE(rep.empirical_lambda0.has_value());
  CHECK(*rep.empirical_lambda0 == 1.0);
  for (const auto& row : rep.rows) CHECK(row.min_value > 0.0);

  // corollary comparison is exactly tight: ghat == g == gt pointwise
  const Corollary43Report c43 = check_corollary43(fam, 1, 2.0, 0.1, grid, copts);
  CHECK(c43.passed);
  CHECK(std::fabs(c43.worst_slack) < 1e-12);
}

TEST_CASE("corollary comparison fails for deliberately tiny lambda") {
  // at lambda = 1 the cap's bend is far too sharp for epsilon = 0.1; the
  // report must carry the failing points
  const Preset pos = get_preset("cap-positive-control");
  GlueGridOptions grid;
  grid.tangential = {2, 2};
  grid.rho_linear = 3;
  grid.rho_log = 2;
  const Corollary43Report rep = check_corollary43(*pos.family, 1, 1.0, 0.1, grid, {});
  CHECK_FALSE(rep.passed);
  CHECK(rep.worst_slack < -0.1);
  int failing = 0;
  for (const auto& row : rep.rows)
    if (row.slack < -rep.epsilon) ++failing;
  CHECK(failing > 0);
}

TEST_CASE("positive control: hypotheses met, finite lambda0, corollary satisfied") {
  const Preset pos = get_preset("cap-positive-control");
  const GlueFamily& fam = *pos.family;
  GlueGridOptions grid;
  ConeOptions copts;

  for (int m : {1, 2}) {
    const PositivityScanReport rep = positivity_scan(fam, m, {1, 2, 4, 8, 12}, grid, copts);
    CHECK(rep.hypotheses.all_met());
    CHECK(rep.hypotheses.h_difference_margin ==
          Catch::Approx(0.125 * m).margin(1e-9));  // c/2 per eigenvalue, c = 0.25
    REQUIRE(rep.empirical_lambda0.has_value());
    CHECK(*rep.empirical_lambda0 <= 4.0);
    for (const auto& row : rep.rows)
      if (row.lambda >= *rep.empirical_lambda0) CHECK(row.min_value > 0.0);
  }

  const Corollary43Report c43 = check_corollary43(fam, 1, 12.0, 0.1, grid, copts);
  CHECK(c43.passed);
  CHECK(c43.worst_slack >= -0.1);
}

TEST_CASE("negative control: hypothesis flag raised") {
  const Preset neg = get_preset("cap-negative-control");
  GlueGridOptions grid;
  ConeOptions copts;
  const ScanHypotheses hy = check_glue_hypotheses(*neg.family, 1, grid, copts);
  CHECK_FALSE(hy.h_difference_m_positive);
  CHECK(hy.h_difference_margin < 0.0);
  CHECK(hy.g_positive);        // both metrics are still positively curved:
  CHECK(hy.g_tilde_positive);  // only the boundary hypothesis fails
}

TEST_CASE("holder convergence decreases and respects the sup bound") {
  const Preset pos = get_preset("cap-positive-control");
  const HolderReport rep = holder_convergence(*pos.family, 0.5, {2, 4, 8, 16});
  REQUIRE(rep.rows.size() == 4);
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    if (i > 0) CHECK(rep.rows[i].total < rep.rows[i - 1].total);
    CHECK(rep.rows[i].sup <= rep.rows[i].sup_bound);
  }
}

TEST_CASE("bend-zone minima are nondecreasing while the grid stays active") {
  // The -chi'' boost grows with lambda as long as lambda * rho <= 1 on the
  // window; beyond that the bend leaves the window and the comparison stops
  // being meaningful.
  const Preset pos = get_preset("cap-positive-control");
  const GlueFamily& fam = *pos.family;
  const CutoffChi chi = build_chi();
  const CutoffBeta beta = build_beta();
  const std::vector<double> lambdas{1, 2, 4, 8};  // 8 * 0.1 <= 1 keeps the window active
  const double window = 0.1;

  std::vector<Eigen::VectorXd> pts;
  for (const auto& q : detail::boundary_grid(fam.g, {3, 3}))
    for (double rho : {1e-4, 1e-3, 1e-2, 0.03, 0.06, window}) {
      Eigen::VectorXd x = q;
      x[0] = rho;
      pts.push_back(x);
    }

  for (int m : {1, 2}) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double lambda : lambdas) {
      const ChartMetric ghat = glued_metric({fam, lambda}, chi, beta);
      double mn = std::numeric_limits<double>::infinity();
      for (const auto& x : pts) mn = std::min(mn, m_intermediate_min(ghat, x, m).min_value);
      CHECK(mn >= prev - 1e-9);
      prev = mn;
    }
  }
}
