#include "covbell/local_bound.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "covbell/expressions.hpp"
#include "covbell/references.hpp"
#include "testutil.hpp"

using namespace covbell;

namespace {

LocalDecomposition popt_weights() {
  LocalDecomposition d;
  d.weights.assign(16, 0.0);
  d.weights[15] = 3.0 / 7.0;
  d.weights[2] = 2.0 / 7.0;
  d.weights[8] = 2.0 / 7.0;
  return d;
}

}  // namespace

TEST_CASE("quadratic weight form hits 16/7 on the optimal weights") {
  CHECK(covchsh_of_weights(popt_weights()) ==
        Catch::Approx(16.0 / 7.0).margin(1e-12));

  std::vector<Rational> q(16, Rational(0));
  q[15] = Rational(3, 7);
  q[2] = Rational(2, 7);
  q[8] = Rational(2, 7);
  CHECK(covchsh_of_weights_exact(q) == Rational(16, 7));
}

TEST_CASE("quadratic form matches the moment-level definition") {
  const BellExpression cc = covchsh_expression();
  std::mt19937_64 rng(401);
  double max_err = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const LocalDecomposition d = testutil::random_decomposition(rng);
    const double via_form = covchsh_of_weights(d);
    const double via_moments =
        evaluate(cc, correlators(mixture_distribution(d)));
    max_err = std::max(max_err, std::abs(via_form - via_moments));
    CHECK(via_form <= 16.0 / 7.0 + 1e-12);
  }
  CHECK(max_err <= 1e-10);
}

TEST_CASE("weight objective agrees with evaluation for every preset") {
  std::mt19937_64 rng(402);
  for (const std::string& name : expression_names()) {
    const BellExpression expr = expression_by_name(name);
    const WeightObjective obj(expr);
    for (int trial = 0; trial < 200; ++trial) {
      const LocalDecomposition d =
          testutil::random_decomposition(rng, expr.nX(), expr.nY());
      const double direct = evaluate(expr, correlators(mixture_distribution(d)));
      CHECK(obj.value(d.weights) == Catch::Approx(direct).margin(1e-10));
      CHECK(weight_expression_value(expr, d) ==
            Catch::Approx(direct).margin(1e-10));
    }
  }
}

TEST_CASE("mixed-direction objective is the matching covariance combination") {
  const BellExpression cc = covchsh_expression();
  const BellExpression cp = covchsh_prime_expression();
  const double theta = 1.1;
  std::vector<std::vector<double>> coeffs(2, std::vector<double>(2));
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      coeffs[x][y] = std::cos(theta) * cc.signs[x][y] +
                     std::sin(theta) * cp.signs[x][y];
    }
  }
  const WeightObjective obj(CorrKind::covariance, coeffs, {0.0, 0.0},
                            {0.0, 0.0});
  std::mt19937_64 rng(403);
  for (int trial = 0; trial < 200; ++trial) {
    const LocalDecomposition d = testutil::random_decomposition(rng);
    const Correlators corr = correlators(mixture_distribution(d));
    const double want =
        std::cos(theta) * evaluate(cc, corr) + std::sin(theta) * evaluate(cp, corr);
    CHECK(obj.value(d.weights) == Catch::Approx(want).margin(1e-10));
  }
}

TEST_CASE("gradient matches central differences on the quadratic kinds") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.01, 0.2);
  for (const std::string& name : {std::string("covchsh"), std::string("chsh"),
                                  std::string("i3322"), std::string("cov3322")}) {
    const BellExpression expr = expression_by_name(name);
    const WeightObjective obj(expr);
    REQUIRE(obj.is_quadratic());
    std::vector<double> q(obj.weight_count());
    for (double& v : q) v = u(rng);
    std::vector<double> g(q.size());
    obj.gradient(q.data(), g.data());
    const double h = 1e-6;
    for (std::size_t i = 0; i < q.size(); ++i) {
      std::vector<double> lo = q, hi = q;
      lo[i] -= h;
      hi[i] += h;
      const double fd = (obj.value(hi) - obj.value(lo)) / (2 * h);
      CHECK(g[i] == Catch::Approx(fd).margin(1e-5));
    }
  }
  CHECK_FALSE(WeightObjective(rchsh_expression()).is_quadratic());
}

TEST_CASE("mixing a strategy with its global flip") {
  const BellExpression cc = covchsh_expression();
  const BellExpression raw = chsh_expression();
  std::mt19937_64 rng(405);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = std::uniform_int_distribution<int>(0, 15)(rng);
    const DeterministicStrategy s = strategy_from_index(2, 2, k);
    double chsh_det = 0.0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        chsh_det += raw.signs[x][y] * s.a_out[x] * s.b_out[y];
      }
    }
    const double q = u(rng);
    LocalDecomposition d;
    d.weights.assign(16, 0.0);
    d.weights[k] += q;
    d.weights[15 - k] += 1.0 - q;  // flipping every output complements the bits
    const double cov_val = covchsh_of_weights(d);
    CHECK(cov_val == Catch::Approx(4 * q * (1 - q) * chsh_det).margin(1e-12));
    CHECK(std::abs(cov_val) <= 2.0 + 1e-12);
  }
  // At q = 1/2 the covariance value coincides with the raw CHSH value.
  LocalDecomposition half;
  half.weights.assign(16, 0.0);
  half.weights[15] = 0.5;
  half.weights[0] = 0.5;
  CHECK(covchsh_of_weights(half) == Catch::Approx(2.0).margin(1e-12));
  CHECK(weight_expression_value(raw, half) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("numeric maximization recovers the known bounds") {
  const LocalBoundResult cov = numeric_local_bound(covchsh_expression(), 2, 2,
                                                   120, 1e-9, 42, 1);
  CHECK(cov.converged);
  CHECK(cov.bound == Catch::Approx(16.0 / 7.0).margin(1e-6));
  CHECK_NOTHROW(validate_decomposition(cov.best));
  CHECK(covchsh_of_weights(cov.best) == Catch::Approx(cov.bound).margin(1e-9));

  const LocalBoundResult raw =
      numeric_local_bound(chsh_expression(), 2, 2, 40, 1e-9, 42, 1);
  CHECK(raw.bound == Catch::Approx(2.0).margin(1e-9));

  const LocalBoundResult pr = numeric_local_bound(rchsh_expression(), 2, 2,
                                                  300, 1e-9, 42, 1);
  CHECK(pr.bound == Catch::Approx(2.5).margin(1e-6));
}

TEST_CASE("maximization is deterministic and job-count independent") {
  const LocalBoundResult a =
      numeric_local_bound(covchsh_expression(), 2, 2, 30, 1e-9, 7, 1);
  const LocalBoundResult b =
      numeric_local_bound(covchsh_expression(), 2, 2, 30, 1e-9, 7, 1);
  const LocalBoundResult c =
      numeric_local_bound(covchsh_expression(), 2, 2, 30, 1e-9, 7, 3);
  CHECK(a.bound == b.bound);
  CHECK(a.bound == c.bound);
  CHECK(a.best.weights == b.best.weights);
  CHECK(a.best.weights == c.best.weights);
}

TEST_CASE("direction scan pins the axis and diagonal support points") {
  const std::vector<ScanPoint> pts = localset_scan(8, 100, 1e-9, 42, 1);
  REQUIRE(pts.size() == 8);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].theta ==
          Catch::Approx(2.0 * M_PI * static_cast<double>(i) / 8.0).margin(1e-12));
    CHECK(pts[i].covchsh + pts[i].covchsh_prime <= 4.0 + 1e-9);
  }
  CHECK(pts[0].covchsh == Catch::Approx(16.0 / 7.0).margin(1e-6));
  CHECK(pts[1].covchsh == Catch::Approx(2.0).margin(1e-6));
  CHECK(pts[1].covchsh_prime == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("the optimum is approached smoothly from inside the simplex") {
  const LocalDecomposition opt = popt_weights();
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    LocalDecomposition d = opt;
    for (double& w : d.weights) w *= 1.0 - eps;
    d.weights[0] += eps;
    const double v = covchsh_of_weights(d);
    CHECK(v < 16.0 / 7.0);
    CHECK(16.0 / 7.0 - v <= 20.0 * eps);
  }
}
