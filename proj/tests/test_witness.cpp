#include "covbell/witness.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "covbell/errors.hpp"
#include "covbell/local_bound.hpp"

using namespace covbell;

namespace {

int positive_count(const LocalDecomposition& d) {
  int n = 0;
  for (double w : d.weights) n += w > 1e-9 ? 1 : 0;
  return n;
}

double h2(double p) {
  double h = 0.0;
  if (p > 0) h -= p * std::log2(p);
  if (1 - p > 0) h -= (1 - p) * std::log2(1 - p);
  return h;
}

}  // namespace

TEST_CASE("entropy primitives") {
  CHECK(shannon_entropy({0.25, 0.25, 0.25, 0.25}) ==
        Catch::Approx(2.0).margin(1e-12));
  CHECK(shannon_entropy({1.0}) == Catch::Approx(0.0).margin(1e-12));
  CHECK(shannon_entropy({0.5, 0.5, 0.0, 0.0}) ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(binary_entropy_bias(0.0) == Catch::Approx(1.0).margin(1e-12));
  CHECK(binary_entropy_bias(1.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(binary_entropy_bias(-1.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(binary_entropy_bias(0.3) ==
        Catch::Approx(binary_entropy_bias(-0.3)).margin(1e-12));
}

TEST_CASE("two-strategy closed form") {
  for (int i = 0; i <= 50; ++i) {
    const double c = 2.0 * i / 50.0;
    const double p = 0.5 * (1.0 + std::sqrt(1.0 - c / 2.0));
    CHECK(closed_form_min_entropy_pair(c) == Catch::Approx(h2(p)).margin(1e-6));
  }
  CHECK(closed_form_min_entropy_pair(0.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(closed_form_min_entropy_pair(2.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("minimum Shannon entropy at the landmarks") {
  const WitnessPoint zero = min_shannon_entropy(0.0);
  CHECK(zero.min_shannon == Catch::Approx(0.0).margin(1e-9));
  CHECK(positive_count(zero.decomposition) == 1);
  CHECK(zero.constraint_ok);

  const WitnessPoint two = min_shannon_entropy(2.0);
  CHECK(two.min_shannon == Catch::Approx(1.0).margin(1e-9));

  const double c_max = 16.0 / 7.0;
  const WitnessPoint top = min_shannon_entropy(c_max);
  const double h_top = -(3.0 / 7.0) * std::log2(3.0 / 7.0) -
                       2.0 * (2.0 / 7.0) * std::log2(2.0 / 7.0);
  CHECK(top.min_shannon == Catch::Approx(h_top).margin(1e-9));
  CHECK(top.min_shannon == Catch::Approx(1.5566567075).margin(1e-4));
  REQUIRE(positive_count(top.decomposition) == 3);
  std::vector<double> w = top.decomposition.weights;
  std::sort(w.rbegin(), w.rend());
  CHECK(w[0] == Catch::Approx(3.0 / 7.0).margin(1e-6));
  CHECK(w[1] == Catch::Approx(2.0 / 7.0).margin(1e-6));
  CHECK(w[2] == Catch::Approx(2.0 / 7.0).margin(1e-6));

  CHECK_THROWS_AS(min_shannon_entropy(-0.01), input_error);
  CHECK_THROWS_AS(min_shannon_entropy(c_max + 1e-6), input_error);
}

TEST_CASE("above the raw bound three strategies are required") {
  const WitnessPoint p = min_shannon_entropy(2.1);
  CHECK(positive_count(p.decomposition) == 3);
  CHECK(p.min_shannon > 1.0 + 1e-6);

  // At c = 2.27 the optimal triple splits asymmetrically; its heaviest
  // weight sits strictly inside the feasibility window
  // [(3 - sqrt(16-7c))/7, (3 + sqrt(16-7c))/7]. Both frozen decimals come
  // from an independent one-parameter minimization of the family
  // (1-q1)(1+7q1) - (q2-q3)^2 = c.
  const WitnessPoint q = min_shannon_entropy(2.27);
  CHECK(q.min_shannon == Catch::Approx(1.5222953955).margin(1e-8));
  std::vector<double> w = q.decomposition.weights;
  std::sort(w.rbegin(), w.rend());
  CHECK(w[0] == Catch::Approx(0.4727283566).margin(1e-6));
  const double span = std::sqrt(16.0 - 7.0 * 2.27);
  CHECK(w[0] > (3.0 - span) / 7.0 + 1e-3);
  CHECK(w[0] < (3.0 + span) / 7.0 - 1e-3);
}

TEST_CASE("triple closed form matches the exact search above 2") {
  for (int i = 1; i <= 20; ++i) {
    const double c = 2.0 + (16.0 / 7.0 - 2.0) * i / 20.0;
    CHECK(closed_form_min_entropy_triple(c) ==
          Catch::Approx(min_shannon_entropy(c).min_shannon).margin(1e-8));
  }
}

TEST_CASE("witness curve is monotone and constraint-consistent") {
  const std::vector<WitnessPoint> curve = entropy_curve(0.0, 16.0 / 7.0, 40);
  REQUIRE(curve.size() == 40);
  CHECK(curve.front().c == Catch::Approx(0.0).margin(1e-12));
  CHECK(curve.back().c == Catch::Approx(16.0 / 7.0).margin(1e-12));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const WitnessPoint& p = curve[i];
    CHECK(p.constraint_ok);
    CHECK(covchsh_of_weights(p.decomposition) == Catch::Approx(p.c).margin(1e-6));
    if (i > 0) CHECK(p.min_shannon >= curve[i - 1].min_shannon - 1e-9);
    if (p.c <= 2.0 + 1e-12) {
      CHECK(p.min_shannon ==
            Catch::Approx(closed_form_min_entropy_pair(p.c)).margin(1e-6));
    }
  }
}

TEST_CASE("support-size entropy is an exact step") {
  CHECK(min_max_entropy(0.0) == 0.0);
  CHECK(min_max_entropy(0.5) == 1.0);
  CHECK(min_max_entropy(2.0) == 1.0);
  CHECK(min_max_entropy(2.0000001) == std::log2(3.0));
  CHECK(min_max_entropy(16.0 / 7.0) == std::log2(3.0));
  CHECK_THROWS_AS(min_max_entropy(-0.1), input_error);
  CHECK_THROWS_AS(min_max_entropy(2.3), input_error);
}

TEST_CASE("the full-simplex penalty search never beats the exact value") {
  for (double c : {0.8, 1.7, 2.1, 16.0 / 7.0 - 1e-3}) {
    const double exact = min_shannon_entropy(c).min_shannon;
    const double searched = min_shannon_entropy_search(c, 30, 42, 1e-6);
    CHECK(searched >= exact - 1e-6);
    CHECK(searched <= exact + 0.1);
  }
}
