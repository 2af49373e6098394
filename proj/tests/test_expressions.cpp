#include "covbell/expressions.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "covbell/errors.hpp"
#include "covbell/references.hpp"
#include "covbell/strategies.hpp"
#include "testutil.hpp"

using namespace covbell;

TEST_CASE("preset shapes and kinds") {
  CHECK(chsh_expression().kind == CorrKind::raw);
  CHECK(covchsh_expression().kind == CorrKind::covariance);
  CHECK(rchsh_expression().kind == CorrKind::pearson);
  CHECK(cov3322_expression().nX() == 3);
  CHECK((cov3322_expression().marginal_a.empty() ||
         cov3322_expression().marginal_a ==
             std::vector<int>{0, 0, 0}));  // pure covariance form
  CHECK(i3322_expression().marginal_a == std::vector<int>{1, 1, 0});
  CHECK(i3322_expression().marginal_b == std::vector<int>{-1, -1, 0});
  CHECK(known_local_bound("covchsh") == 16.0 / 7.0);
  CHECK(known_local_bound("cov3322") == 4.5);
  CHECK(known_local_bound("rchsh") == 2.5);
  CHECK_FALSE(known_local_bound("nope").has_value());
  CHECK_THROWS_AS(expression_by_name("nope"), input_error);
}

TEST_CASE("optimal three-strategy mixture hits 16/7") {
  LoadedDistribution popt =
      load_distribution_file(testutil::data_path("popt.json"));
  const Correlators corr = correlators(popt.dist);
  CHECK(covchsh(corr) == Catch::Approx(16.0 / 7.0).margin(1e-12));
  CHECK(covchsh_prime(corr) == Catch::Approx(16.0 / 49.0).margin(1e-12));
  CHECK(chsh(corr) == Catch::Approx(2.0).margin(1e-12));

  REQUIRE(popt.exact.has_value());
  const ExactCorrelators exact = exact_correlators(*popt.exact);
  CHECK(evaluate_exact(covchsh_expression(), exact) == Rational(16, 7));
  CHECK(evaluate_exact(covchsh_prime_expression(), exact) == Rational(16, 49));
  CHECK(evaluate_exact(chsh_expression(), exact) == Rational(2));
  CHECK_FALSE(evaluate_exact(rchsh_expression(), exact).has_value());
}

TEST_CASE("two-strategy point gives 2 on both covariance forms") {
  const Correlators corr = correlators(refs::p2());
  CHECK(covchsh(corr) == Catch::Approx(2.0).margin(1e-12));
  CHECK(covchsh_prime(corr) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("extremal no-signalling box reaches the algebraic maximum 4") {
  const Correlators corr = correlators(refs::pr_box());
  CHECK(covchsh(corr) == Catch::Approx(4.0).margin(1e-12));
  CHECK(chsh(corr) == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("deterministic points zero out every covariance expression") {
  // Raw three-input form at the all-plus/all-minus point: the signed
  // correlator sum cancels against the marginal terms exactly.
  DeterministicStrategy s;
  s.a_out = {1, 1, 1};
  s.b_out = {-1, -1, -1};
  const Correlators corr = correlators(strategy_distribution(s));
  CHECK(i3322(corr) == Catch::Approx(0.0).margin(1e-12));
  CHECK(cov3322(corr) == Catch::Approx(0.0).margin(1e-12));

  for (int idx : {0, 5, 9, 15}) {
    const Correlators c2 =
        correlators(strategy_distribution(strategy_from_index(2, 2, idx)));
    CHECK(covchsh(c2) == Catch::Approx(0.0).margin(1e-15));
    CHECK(rchsh(c2) == 0.0);
  }
}

TEST_CASE("three-input optimum evaluates to 9/2 exactly") {
  LoadedDistribution opt =
      load_distribution_file(testutil::data_path("cov3322_opt.json"));
  const Correlators corr = correlators(opt.dist);
  CHECK(cov3322(corr) == Catch::Approx(4.5).margin(1e-12));
  CHECK(i3322(corr) == Catch::Approx(4.0).margin(1e-12));

  REQUIRE(opt.exact.has_value());
  const ExactCorrelators exact = exact_correlators(*opt.exact);
  CHECK(evaluate_exact(cov3322_expression(), exact) == Rational(9, 2));
  CHECK(evaluate_exact(i3322_expression(), exact) == Rational(4));
}

TEST_CASE("ternary outputs push the pearson form to 2 sqrt 2") {
  LoadedDistribution tern =
      load_distribution_file(testutil::data_path("rchsh_ternary.json"));
  const Correlators corr = correlators(tern.dist);
  const double root2 = std::sqrt(2.0);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double expect = (x == 1 && y == 1) ? -1.0 / root2 : 1.0 / root2;
      CHECK(pearson(corr, x, y) == Catch::Approx(expect).margin(1e-12));
    }
  }
  CHECK(rchsh(corr) == Catch::Approx(2.0 * root2).margin(1e-12));
}

TEST_CASE("epsilon family matches its closed form") {
  for (double eps : {0.5, 0.25, 0.8}) {
    const Correlators corr = correlators(refs::epsilon_family(eps));
    CHECK(pearson(corr, 0, 0) ==
          Catch::Approx(std::sqrt((1 - eps) / (2 - eps))).margin(1e-12));
    CHECK(pearson(corr, 0, 1) ==
          Catch::Approx(1.0 / std::sqrt(2 - eps)).margin(1e-12));
    CHECK(rchsh(corr) ==
          Catch::Approx(2.0 * (1.0 + std::sqrt(1 - eps)) /
                        std::sqrt(2 - eps))
              .margin(1e-12));
  }
  CHECK_THROWS_AS(refs::epsilon_family(0.0), input_error);
  CHECK_THROWS_AS(refs::epsilon_family(1.5), input_error);
}

TEST_CASE("custom expressions load from sign-matrix json") {
  std::istringstream in(R"({
    "kind": "covariance",
    "signs": [[1, 1], [1, -1]],
    "marginalA": [0, 0],
    "marginalB": [0, 0]
  })");
  const BellExpression expr = expression_from_json(in);
  CHECK(expr.kind == CorrKind::covariance);
  const Correlators corr =
      correlators(load_distribution_file(testutil::data_path("popt.json"))
                      .dist);
  CHECK(evaluate(expr, corr) == Catch::Approx(16.0 / 7.0).margin(1e-12));

  std::istringstream bad(R"({"kind": "covariance"})");
  CHECK_THROWS_AS(expression_from_json(bad), input_error);
  std::istringstream bad_kind(R"({"kind": "weird", "signs": [[1]]})");
  CHECK_THROWS_AS(expression_from_json(bad_kind), input_error);
}

TEST_CASE("scenario mismatch is rejected") {
  const Correlators corr = correlators(refs::p2());
  CHECK_THROWS_AS(evaluate(cov3322_expression(), corr), input_error);
}

TEST_CASE("exact and floating evaluation agree on random mixtures") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    // Random rational weights over a handful of strategies.
    std::vector<Rational> q(16, Rational(0));
    LocalDecomposition d;
    d.weights.assign(16, 0.0);
    int denom = 1 + static_cast<int>(rng() % 40);
    int left = denom;
    for (int k = 0; k < 15 && left > 0; ++k) {
      int take = static_cast<int>(rng() % (left + 1));
      q[k] = Rational(take, denom);
      d.weights[k] = static_cast<double>(take) / denom;
      left -= take;
    }
    q[15] = Rational(left, denom);
    d.weights[15] = static_cast<double>(left) / denom;

    // Build the exact table from strategy point masses.
    ExactDistribution exact;
    exact.outcomes_a = {{1, -1}, {1, -1}};
    exact.outcomes_b = {{1, -1}, {1, -1}};
    exact.table.assign(
        2, std::vector<std::vector<std::vector<Rational>>>(
               2, std::vector<std::vector<Rational>>(
                      2, std::vector<Rational>(2, Rational(0)))));
    for (int k = 0; k < 16; ++k) {
      const DeterministicStrategy s = strategy_from_index(2, 2, k);
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          const int a = s.a_out[x] == 1 ? 0 : 1;
          const int b = s.b_out[y] == 1 ? 0 : 1;
          exact.table[x][y][a][b] += q[k];
        }
      }
    }
    const ExactCorrelators ec = exact_correlators(exact);
    const Correlators fc = correlators(mixture_distribution(d));
    const auto ev = evaluate_exact(covchsh_expression(), ec);
    REQUIRE(ev.has_value());
    CHECK(to_double(*ev) ==
          Catch::Approx(covchsh(fc)).margin(1e-12));
  }
}
