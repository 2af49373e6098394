#include "covbell/strategies.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "covbell/errors.hpp"
#include "covbell/references.hpp"
#include "testutil.hpp"

using namespace covbell;

TEST_CASE("index encoding is A-bits first, +1 on set bits") {
  const DeterministicStrategy all_plus = strategy_from_index(2, 2, 15);
  CHECK(all_plus.a_out == std::vector<int>{1, 1});
  CHECK(all_plus.b_out == std::vector<int>{1, 1});
  CHECK(strategy_notation(all_plus) == "(++/++)");

  CHECK(strategy_notation(strategy_from_index(2, 2, 2)) == "(-+/--)");
  CHECK(strategy_notation(strategy_from_index(2, 2, 8)) == "(--/-+)");
  CHECK(strategy_notation(strategy_from_index(2, 2, 7)) == "(++/+-)");
  CHECK(strategy_notation(strategy_from_index(2, 2, 0)) == "(--/--)");
  CHECK(strategy_notation(strategy_from_index(2, 2, 13)) == "(+-/++)");

  CHECK(strategy_from_notation("(-+/--)").index == 2);
  CHECK(strategy_from_notation("(-+-/-+-)").index == 18);
  CHECK(strategy_from_notation("(+++/+++)").index == 63);
}

TEST_CASE("notation round trips over both scenarios") {
  for (int idx = 0; idx < 16; ++idx) {
    const DeterministicStrategy s = strategy_from_index(2, 2, idx);
    CHECK(strategy_index(s) == idx);
    CHECK(strategy_from_notation(strategy_notation(s)).index == idx);
  }
  for (int idx = 0; idx < 64; ++idx) {
    const DeterministicStrategy s = strategy_from_index(3, 3, idx);
    CHECK(strategy_from_notation(strategy_notation(s)).index == idx);
  }
  CHECK(enumerate_deterministic(2, 2).size() == 16);
  CHECK(enumerate_deterministic(3, 3).size() == 64);
  CHECK(strategy_from_notation("++/++").index == 15);  // parens optional
  CHECK_THROWS_AS(strategy_from_notation("(++)"), input_error);
  CHECK_THROWS_AS(strategy_from_notation("(/++)"), input_error);
  CHECK_THROWS_AS(strategy_from_notation("(+-/)"), input_error);
  CHECK_THROWS_AS(strategy_from_index(2, 2, 16), input_error);
  CHECK_THROWS_AS(strategy_from_index(2, 2, -1), input_error);
}

TEST_CASE("point masses reproduce their strategy's products") {
  const DeterministicStrategy s = strategy_from_notation("(+-/-+)");
  const Correlators corr = correlators(strategy_distribution(s));
  for (int x = 0; x < 2; ++x) {
    CHECK(corr.ex[x] == Catch::Approx(s.a_out[x]).margin(1e-15));
    for (int y = 0; y < 2; ++y) {
      CHECK(corr.exy[x][y] ==
            Catch::Approx(s.a_out[x] * s.b_out[y]).margin(1e-15));
    }
  }
}

TEST_CASE("mixtures match the hand-generated data files") {
  const JointDistribution built = refs::p_opt();
  LoadedDistribution shipped =
      load_distribution_file(testutil::data_path("popt.json"));
  REQUIRE(built.nX() == shipped.dist.nX());
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          CHECK(built.p(x, y, a, b) ==
                Catch::Approx(shipped.dist.p(x, y, a, b)).margin(1e-15));
        }
      }
    }
  }
}

TEST_CASE("decomposition validation") {
  LocalDecomposition d;
  d.weights.assign(16, 1.0 / 16.0);
  CHECK_NOTHROW(validate_decomposition(d));

  d.weights[0] = -0.1;
  d.weights[1] = 0.1 + 1.0 / 16.0;
  CHECK_THROWS_AS(validate_decomposition(d), invariant_error);

  LocalDecomposition short_d;
  short_d.weights.assign(8, 0.125);
  CHECK_THROWS_AS(validate_decomposition(short_d), invariant_error);

  LocalDecomposition unnormalized;
  unnormalized.weights.assign(16, 0.125);
  CHECK_THROWS_AS(validate_decomposition(unnormalized), invariant_error);
}

TEST_CASE("random mixtures stay valid distributions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const LocalDecomposition d = testutil::random_decomposition(rng);
    CHECK_NOTHROW(mixture_distribution(d));
  }
  std::mt19937_64 rng3(32);
  const LocalDecomposition d3 = testutil::random_decomposition(rng3, 3, 3);
  const JointDistribution m3 = mixture_distribution(d3);
  CHECK(m3.nX() == 3);
  CHECK(m3.nY() == 3);
}
