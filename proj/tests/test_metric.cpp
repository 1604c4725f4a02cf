#include "intercurve/metric.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

using namespace intercurve;

namespace {

constexpr double kPi = 3.14159265358979323846;

Box box(std::initializer_list<std::pair<double, double>> iv) {
  Box b;
  b.lo.resize(static_cast<int>(iv.size()));
  b.hi.resize(static_cast<int>(iv.size()));
  int i = 0;
  for (const auto& [lo, hi] : iv) {
    b.lo[i] = lo;
    b.hi[i] = hi;
    ++i;
  }
  return b;
}

// diagonal metric from per-axis component sources
ChartMetric diag_chart(Box b, const std::vector<std::string>& diag,
                       std::optional<int> collar = std::nullopt) {
  const int n = b.dim();
  std::vector<std::vector<std::string>> upper(n);
  for (int i = 0; i < n; ++i) {
    upper[i].push_back(diag[i]);
    for (int j = i + 1; j < n; ++j) upper[i].push_back("0");
  }
  return ChartMetric::from_expressions(n, std::move(b), upper, collar);
}

ChartMetric round_sphere2() {
  return diag_chart(box({{0.3, 2.8}, {0.0, 6.2}}), {"1", "sin(x1)^2"});
}

// Euclidean ball collar: g = drho^2 + (1 - rho)^2 (round S^2)
ChartMetric unit_ball_collar() {
  return diag_chart(box({{0.0, 0.4}, {0.5, 2.6}, {0.0, 3.0}}),
                    {"1", "(1-x1)^2", "(1-x1)^2*sin(x2)^2"}, 0);
}

Eigen::VectorXd pt(std::initializer_list<double> xs) {
  Eigen::VectorXd p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

}  // namespace

TEST_CASE("christoffel symbols of flat space vanish") {
  const auto flat = diag_chart(box({{0, 1}, {0, 1}, {0, 1}}), {"1", "1", "1"});
  const auto gamma = christoffel(flat, pt({0.3, 0.7, 0.2}));
  for (const auto& gk : gamma) CHECK(gk.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("christoffel symbols of the round two-sphere") {
  const auto s2 = round_sphere2();
  const auto gamma = christoffel(s2, pt({kPi / 4, 1.0}));
  CHECK(gamma[0](1, 1) == Catch::Approx(-0.5).margin(1e-12));       // Gamma^theta_phiphi
  CHECK(gamma[1](0, 1) == Catch::Approx(1.0).margin(1e-12));        // Gamma^phi_thetaphi = cot
  CHECK(gamma[0](0, 0) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("christoffel matches a finite-difference assembly") {
  // random diagonal exp-of-polynomial metrics
  Rng rng(301);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::string> comp;
    for (int i = 0; i < 3; ++i) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "exp(%.4f*x1 + %.4f*x2^2 + %.4f*x1*x3)",
                    0.3 * rng.gaussian(), 0.2 * rng.gaussian(), 0.2 * rng.gaussian());
      comp.push_back(buf);
    }
    const auto g = diag_chart(box({{-1, 1}, {-1, 1}, {-1, 1}}), comp);
    const Eigen::VectorXd p = 0.4 * rng.gaussian_vector(3);
    const auto gamma = christoffel(g, p);

    // same formula, derivatives by central differences of the metric values
    const double h = 1e-5;
    const int n = 3;
    std::vector<Eigen::MatrixXd> d1(n);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd pp = p, pm = p;
      pp[k] += h;
      pm[k] -= h;
      d1[k] = (g.value(pp) - g.value(pm)) / (2 * h);
    }
    const Eigen::MatrixXd ginv = g.value(p).inverse();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += ginv(k, l) * (d1[i](j, l) + d1[j](i, l) - d1[l](i, j));
          CHECK(gamma[k](i, j) == Catch::Approx(0.5 * s).margin(1e-6));
        }
  }
}

TEST_CASE("riemann of flat space is zero") {
  const auto flat = diag_chart(box({{0, 1}, {0, 1}, {0, 1}}), {"1", "1", "1"});
  const auto r = riemann(flat, pt({0.5, 0.5, 0.5}));
  for (double v : r.data()) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("round sphere has sectional curvature one under the sign convention") {
  const auto s2 = round_sphere2();
  const Eigen::VectorXd p = pt({kPi / 3, 0.7});
  const PointGeometry pg = point_geometry(s2, p);
  CHECK(validate_curvature(pg.riemann, 1e-8).passed);
  const Eigen::MatrixXd basis = orthonormal_gauge(pg.metric_value.matrix());
  const auto r_on = pg.riemann.transformed(basis);
  CHECK(r_on(0, 1, 0, 1) == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("product of a sphere and a flat circle splits sectional curvatures") {
  const auto prod =
      diag_chart(box({{0.3, 2.8}, {0.0, 6.2}, {0.0, 1.0}}), {"1", "sin(x1)^2", "1"});
  const Eigen::VectorXd p = pt({1.1, 0.4, 0.3});
  const PointGeometry pg = point_geometry(prod, p);
  const auto r_on = pg.riemann.transformed(orthonormal_gauge(pg.metric_value.matrix()));
  CHECK(r_on(0, 1, 0, 1) == Catch::Approx(1.0).margin(1e-9));  // sphere plane
  CHECK(std::fabs(r_on(0, 2, 0, 2)) < 1e-10);                  // mixed planes flat
  CHECK(std::fabs(r_on(1, 2, 1, 2)) < 1e-10);
}

TEST_CASE("curvature symmetries hold for random smooth metrics") {
  Rng rng(311);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform_int(2, 4);
    std::vector<std::vector<std::string>> upper(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        char buf[200];
        if (i == j)
          std::snprintf(buf, sizeof buf, "1 + %.4f*sin(x%d) + %.4f*x%d^2", 0.2 * rng.gaussian(),
                        1 + (i + 1) % n, 0.15 * rng.gaussian(), 1 + (i + 2) % n);
        else
          std::snprintf(buf, sizeof buf, "%.4f*x%d*x%d", 0.1 * rng.gaussian(), i + 1, j + 1);
        upper[i].push_back(buf);
      }
    Box b;
    b.lo = Eigen::VectorXd::Constant(n, -0.8);
    b.hi = Eigen::VectorXd::Constant(n, 0.8);
    const auto g = ChartMetric::from_expressions(n, b, upper);
    const Eigen::VectorXd p = 0.4 * rng.gaussian_vector(n);
    const auto rep = validate_curvature(riemann(g, p), 1e-8);
    CHECK(rep.passed);
  }
}

TEST_CASE("boundary h of the unit ball collar is plus identity") {
  const auto g = unit_ball_collar();
  const Eigen::VectorXd q = pt({0.0, 1.2, 0.8});
  const SymmetricForm h = second_fundamental_form(g, q);
  const SymmetricForm induced = induced_boundary_metric(g, q);
  // h = +identity relative to the induced round metric
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix(), induced.matrix());
  CHECK(es.eigenvalues()[0] == Catch::Approx(1.0).margin(1e-8));
  CHECK(es.eigenvalues()[1] == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("flat slab boundary is totally geodesic") {
  const auto slab = diag_chart(box({{0.0, 1.0}, {0, 1}, {0, 1}}), {"1", "1", "1"}, 0);
  const SymmetricForm h = second_fundamental_form(slab, pt({0.0, 0.4, 0.6}));
  CHECK(h.matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("warped collar h has the documented sign") {
  // g = drho^2 + exp(2 c rho) delta: h = -c * delta at rho = 0
  const double c = 0.37;
  char buf[64];
  std::snprintf(buf, sizeof buf, "exp(%.17g*x1)", 2.0 * c);
  const auto g = diag_chart(box({{0.0, 0.5}, {0, 1}, {0, 1}}), {"1", buf, buf}, 0);
  const Eigen::VectorXd q = pt({0.0, 0.5, 0.5});
  const SymmetricForm h = second_fundamental_form(g, q);
  CHECK(h(0, 0) == Catch::Approx(-c).margin(1e-12));
  CHECK(h(1, 1) == Catch::Approx(-c).margin(1e-12));
  CHECK(std::fabs(h(0, 1)) < 1e-14);

  // independent assembly: h_ab = -1/2 d_rho g_ab by finite differences
  const double step = 1e-6;
  Eigen::VectorXd qp = q;
  qp[0] += step;
  const Eigen::MatrixXd fd = -(g.value(qp) - g.value(q)) / step * 0.5;
  CHECK(h(0, 0) == Catch::Approx(fd(1, 1)).margin(1e-5));
  CHECK(h(1, 1) == Catch::Approx(fd(2, 2)).margin(1e-5));

  CHECK_THROWS_AS(second_fundamental_form(g, pt({0.1, 0.5, 0.5})), std::invalid_argument);
  const auto no_collar = diag_chart(box({{0.0, 0.5}, {0, 1}}), {"1", "1"});
  CHECK_THROWS_AS(second_fundamental_form(no_collar, pt({0.0, 0.5})), std::invalid_argument);
}

TEST_CASE("gauss equation consistency on the unit ball boundary") {
  // intrinsic boundary curvature (a) from the induced chart, (b) assembled
  // from ambient curvature and h
  const auto g = unit_ball_collar();
  const Eigen::VectorXd q = pt({0.0, 1.3, 0.9});

  // (a) induced chart of the boundary: round S^2
  const auto s2 = round_sphere2();
  const PointGeometry bpg = point_geometry(s2, pt({1.3, 0.9}));
  const auto r_bd = bpg.riemann.transformed(orthonormal_gauge(bpg.metric_value.matrix()));
  const double intrinsic = r_bd(0, 1, 0, 1);

  // (b) Gauss equation with ambient geometry
  const PointGeometry apg = point_geometry(g, q);
  const SymmetricForm h = second_fundamental_form(g, q);
  const SymmetricForm induced = induced_boundary_metric(g, q);
  const Eigen::MatrixXd tbasis = orthonormal_gauge(induced.matrix());  // tangential orthonormal
  // lift tangential basis vectors into the chart (rho component zero)
  Eigen::MatrixXd lift = Eigen::MatrixXd::Zero(3, 2);
  lift.block(1, 0, 2, 2) = tbasis;
  const double ambient = apg.riemann.evaluate(lift.col(0), lift.col(1), lift.col(0), lift.col(1));
  const Eigen::MatrixXd h_on = tbasis.transpose() * h.matrix() * tbasis;
  const double assembled = ambient + h_on(0, 0) * h_on(1, 1) - h_on(0, 1) * h_on(0, 1);

  CHECK(assembled == Catch::Approx(intrinsic).margin(1e-7));
  CHECK(intrinsic == Catch::Approx(1.0).margin(1e-9));
  CHECK(std::fabs(ambient) < 1e-9);  // unit ball is flat
}

TEST_CASE("fermi form is exact on collar charts") {
  const auto g = unit_ball_collar();
  Rng rng(321);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd p(3);
    for (int i = 0; i < 3; ++i)
      p[i] = g.domain().lo[i] + (g.domain().hi[i] - g.domain().lo[i]) * rng.uniform();
    const Eigen::MatrixXd gv = g.value(p);
    CHECK(gv(0, 0) == 1.0);
    CHECK(gv(0, 1) == 0.0);
    CHECK(gv(0, 2) == 0.0);
  }
  const auto v = validate_chart(g, {3, 3, 3});
  CHECK(v.spd_ok);
  CHECK(v.fermi_ok);
}

TEST_CASE("m-intermediate minimum on model charts") {
  // round S^4: constant curvature, m = 2 gives 5 everywhere
  const auto s4 = diag_chart(
      box({{0.6, 1.2}, {0.6, 2.4}, {0.6, 2.4}, {0.0, 1.0}}),
      {"1", "sin(x1)^2", "sin(x1)^2*sin(x2)^2", "sin(x1)^2*sin(x2)^2*sin(x3)^2"});
  const auto v = m_intermediate_min(s4, pt({0.9, 1.2, 1.5, 0.4}), 2);
  CHECK(v.min_value == Catch::Approx(5.0).margin(1e-7));

  // flat torus chart: 0 for every m (cone boundary, not interior)
  const auto torus = diag_chart(box({{0, 1}, {0, 1}, {0, 1}}), {"1", "1", "1"});
  for (int m : {1, 2}) {
    const auto vt = m_intermediate_min(torus, pt({0.2, 0.8, 0.5}), m);
    CHECK(std::fabs(vt.min_value) < 1e-12);
    CHECK_FALSE(vt.interior());
  }

  // S^2 x S^1: m = 1 gives 0 (circle direction), m = 2 gives 1
  const auto prod =
      diag_chart(box({{0.3, 2.8}, {0.0, 6.2}, {0.0, 1.0}}), {"1", "sin(x1)^2", "1"});
  const Eigen::VectorXd p = pt({1.2, 0.5, 0.7});
  CHECK(m_intermediate_min(prod, p, 1).min_value == Catch::Approx(0.0).margin(1e-9));
  CHECK(m_intermediate_min(prod, p, 2).min_value == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("singular metrics are reported") {
  const auto sing = diag_chart(box({{-1, 1}, {-1, 1}}), {"x1", "1"});
  CHECK_THROWS_AS(christoffel(sing, pt({0.0, 0.0})), std::domain_error);
  CHECK_THROWS_AS(riemann(sing, pt({-0.5, 0.0})), std::domain_error);
}
