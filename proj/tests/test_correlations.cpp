#include "covbell/correlations.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "covbell/errors.hpp"
#include "covbell/references.hpp"
#include "covbell/strategies.hpp"
#include "testutil.hpp"

using namespace covbell;

TEST_CASE("moments of a hand-built mixture") {
  // 1/2 (++/+-) + 1/2 (--/-+): perfect correlation at (0,0),
  // perfect anti-correlation everywhere B1 is involved symmetrically.
  const JointDistribution dist = refs::p2();
  const Correlators corr = correlators(dist);
  CHECK(corr.exy[0][0] == Catch::Approx(1.0).margin(1e-15));
  CHECK(corr.exy[0][1] == Catch::Approx(-1.0).margin(1e-15));
  CHECK(corr.exy[1][0] == Catch::Approx(1.0).margin(1e-15));
  CHECK(corr.exy[1][1] == Catch::Approx(-1.0).margin(1e-15));
  for (int x = 0; x < 2; ++x) CHECK(corr.ex[x] == Catch::Approx(0).margin(1e-15));
  for (int y = 0; y < 2; ++y) CHECK(corr.ey[y] == Catch::Approx(0).margin(1e-15));
  CHECK(covariance(corr, 0, 0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(covariance(corr, 1, 1) == Catch::Approx(-1.0).margin(1e-15));
  CHECK(pearson(corr, 0, 0) == Catch::Approx(1.0).margin(1e-12));
  CHECK(sigma_a(corr, 0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("deterministic points have zero variance and zero pearson") {
  const JointDistribution dist =
      strategy_distribution(strategy_from_index(2, 2, 11));
  const Correlators corr = correlators(dist);
  for (int x = 0; x < 2; ++x) {
    CHECK(sigma_a(corr, x) == Catch::Approx(0.0).margin(1e-15));
    for (int y = 0; y < 2; ++y) {
      CHECK(covariance(corr, x, y) == Catch::Approx(0.0).margin(1e-15));
      CHECK(pearson(corr, x, y) == 0.0);  // sigma < 1e-10 convention
    }
  }
}

TEST_CASE("construction rejects malformed tables") {
  std::vector<std::vector<double>> outs = {{1, -1}, {1, -1}};
  auto uniform = [] {
    return std::vector<std::vector<std::vector<std::vector<double>>>>(
        2, std::vector<std::vector<std::vector<double>>>(
               2, std::vector<std::vector<double>>(
                      2, std::vector<double>(2, 0.25))));
  };
  CHECK_NOTHROW(JointDistribution(outs, outs, uniform()));

  auto bad_norm = uniform();
  bad_norm[0][0][0][0] = 0.5;  // context sums to 1.25
  CHECK_THROWS_AS(JointDistribution(outs, outs, bad_norm), input_error);

  auto negative = uniform();
  negative[1][1][0][0] = -0.25;
  negative[1][1][1][1] = 0.75;
  CHECK_THROWS_AS(JointDistribution(outs, outs, negative), input_error);

  std::vector<std::vector<double>> out_of_range = {{1, -2}, {1, -1}};
  CHECK_THROWS_AS(JointDistribution(out_of_range, outs, uniform()),
                  input_error);
}

TEST_CASE("signalling beyond the hard tolerance is an invariant violation") {
  std::vector<std::vector<double>> outs = {{1, -1}, {1, -1}};
  // Alice's marginal depends on y in context x=0: P(a|0,0) = (1, 0) but
  // P(a|0,1) = (0, 1).
  auto table = std::vector<std::vector<std::vector<std::vector<double>>>>(
      2, std::vector<std::vector<std::vector<double>>>(
             2, std::vector<std::vector<double>>(2,
                                                 std::vector<double>(2, 0.0))));
  table[0][0][0][0] = 1.0;
  table[0][1][1][0] = 1.0;
  table[1][0][0][0] = 1.0;
  table[1][1][0][0] = 1.0;
  CHECK_THROWS_AS(JointDistribution(outs, outs, table), invariant_error);

  // A 1e-11 wobble stays under the hard threshold.
  auto mild = std::vector<std::vector<std::vector<std::vector<double>>>>(
      2, std::vector<std::vector<std::vector<double>>>(
             2, std::vector<std::vector<double>>(2,
                                                 std::vector<double>(2,
                                                                     0.25))));
  mild[0][1][0][0] += 1e-11;
  mild[0][1][1][0] -= 1e-11;
  CHECK_NOTHROW(JointDistribution(outs, outs, mild));
}

TEST_CASE("binarize preserves first moments and covariances") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const JointDistribution dist = testutil::random_local_distribution(rng);
    const Correlators before = correlators(dist);
    const Correlators after = correlators(binarize(dist));
    for (int x = 0; x < 2; ++x) {
      worst = std::max(worst, std::fabs(before.ex[x] - after.ex[x]));
      for (int y = 0; y < 2; ++y) {
        worst = std::max(worst,
                         std::fabs(before.exy[x][y] - after.exy[x][y]));
        worst = std::max(worst, std::fabs(covariance(before, x, y) -
                                          covariance(after, x, y)));
      }
    }
    for (int y = 0; y < 2; ++y) {
      worst = std::max(worst, std::fabs(before.ey[y] - after.ey[y]));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("binarize contracts pearson correlators") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const JointDistribution dist = testutil::random_local_distribution(rng);
    const Correlators before = correlators(dist);
    const Correlators after = correlators(binarize(dist));
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        CHECK(std::fabs(pearson(after, x, y)) <=
              std::fabs(pearson(before, x, y)) + 1e-12);
      }
    }
  }
}

TEST_CASE("binarizing the ternary distribution keeps covariances cell-wise") {
  const JointDistribution tern = refs::ternary_rchsh();
  const Correlators before = correlators(tern);
  const Correlators after = correlators(binarize(tern));
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      CHECK(covariance(after, x, y) ==
            Catch::Approx(covariance(before, x, y)).margin(1e-14));
    }
  }
  // The variances do change (outputs collapse to +-1), so Pearson contracts.
  CHECK(std::fabs(pearson(after, 0, 0)) <= std::fabs(pearson(before, 0, 0)));
}

TEST_CASE("json loader keeps an exact mirror for exact inputs") {
  std::istringstream in(R"({
    "nX": 2, "nY": 2,
    "outcomesA": [[1, -1], [1, -1]],
    "outcomesB": [[1, -1], [1, -1]],
    "table": {
      "0,0": [["1/2", 0], [0, "1/2"]],
      "0,1": [["0.5", 0], [0, "0.5"]],
      "1,0": [["1/2", "0"], ["0", "1/2"]],
      "1,1": [[0, "1/2"], ["1/2", 0]]
    }
  })");
  LoadedDistribution loaded = load_distribution_json(in);
  REQUIRE(loaded.exact.has_value());
  const ExactCorrelators exact = exact_correlators(*loaded.exact);
  CHECK(exact.exy[0][0] == Rational(1));
  CHECK(exact.exy[1][1] == Rational(-1));
  CHECK(exact.ex[0] == Rational(0));

  const Correlators corr = correlators(loaded.dist);
  CHECK(corr.exy[0][0] == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("json loader drops the exact mirror on float entries") {
  std::istringstream in(R"({
    "nX": 2, "nY": 2,
    "outcomesA": [[1, -1], [1, -1]],
    "outcomesB": [[1, -1], [1, -1]],
    "table": {
      "0,0": [[0.25, 0.25], [0.25, 0.25]],
      "0,1": [[0.25, 0.25], [0.25, 0.25]],
      "1,0": [[0.25, 0.25], [0.25, 0.25]],
      "1,1": [[0.25, 0.25], [0.25, 0.25]]
    }
  })");
  LoadedDistribution loaded = load_distribution_json(in);
  CHECK_FALSE(loaded.exact.has_value());
}

TEST_CASE("json loader rejects malformed documents with diagnostics") {
  std::istringstream missing(R"({"nX": 2})");
  CHECK_THROWS_AS(load_distribution_json(missing), input_error);
  std::istringstream not_json("[[");
  CHECK_THROWS_AS(load_distribution_json(not_json), input_error);
  CHECK_THROWS_AS(load_distribution_file("/nonexistent/path.json"),
                  input_error);
}

TEST_CASE("shipped data files load with exact mirrors") {
  for (const char* name : {"popt.json", "p2.json", "prbox.json",
                           "cov3322_opt.json", "rchsh_ternary.json"}) {
    LoadedDistribution loaded =
        load_distribution_file(testutil::data_path(name));
    INFO(name);
    CHECK(loaded.exact.has_value());
  }
  LoadedDistribution popt =
      load_distribution_file(testutil::data_path("popt.json"));
  const ExactCorrelators exact = exact_correlators(*popt.exact);
  CHECK(exact.exy[0][0] == Rational(1));
  CHECK(exact.exy[0][1] == Rational(3, 7));
  CHECK(exact.exy[1][1] == Rational(-1, 7));
  CHECK(exact.ex[0] == Rational(-1, 7));
}
