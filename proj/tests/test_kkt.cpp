#include "covbell/kkt.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <map>
#include <set>
#include <vector>

#include "covbell/local_bound.hpp"
#include "covbell/references.hpp"
#include "covbell/strategies.hpp"

using namespace covbell;

namespace {

std::vector<Rational> expand_weights(const WeightKktSolution& s) {
  std::vector<Rational> q(16, Rational(0));
  for (std::size_t i = 0; i < s.support.size(); ++i) {
    q[s.support[i]] = s.weights[i];
  }
  return q;
}

}  // namespace

TEST_CASE("weight-space stationarity counts for supports of size 2 and 3") {
  const WeightKktReport rep = kkt_weights_enumerate(2, 3, 1);
  REQUIRE(rep.rows.size() == 2);
  const std::vector<WeightKktRow>& want = refs::expected_weight_rows();
  for (int i = 0; i < 2; ++i) {
    CHECK(rep.rows[i].d == want[i].d);
    CHECK(rep.rows[i].systems == want[i].systems);
    CHECK(rep.rows[i].consistent_eq == want[i].consistent_eq);
    CHECK(rep.rows[i].consistent_full == want[i].consistent_full);
    CHECK(rep.rows[i].local_maxima == want[i].local_maxima);
  }
  CHECK(rep.max_value == Rational(16, 7));
  CHECK(rep.feasible.size() == 12);  // 4 at d=2 plus 8 at d=3

  // Each feasible stationary point evaluates consistently in exact arithmetic.
  for (const WeightKktSolution& s : rep.feasible) {
    CHECK_FALSE(s.underdetermined);
    CHECK(covchsh_of_weights_exact(expand_weights(s)) == s.value);
    Rational total(0);
    for (const Rational& w : s.weights) {
      CHECK(w > 0);
      total += w;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("the eight optimal weight decompositions") {
  const WeightKktReport rep = kkt_weights_enumerate(2, 3, 1);
  REQUIRE(rep.optima.size() == 8);

  std::set<std::set<int>> seen;
  for (const WeightKktSolution& s : rep.optima) {
    CHECK(s.value == Rational(16, 7));
    CHECK(s.mu == refs::expected_weight_optimum_mu());
    seen.insert(std::set<int>(s.support.begin(), s.support.end()));
  }
  CHECK(seen.size() == 8);

  const std::vector<Rational>& order = refs::expected_weight_optimum_weights();
  for (const refs::WeightOptimumSupport& names : refs::expected_weight_optima()) {
    std::set<int> support;
    std::map<int, Rational> weight_of;
    for (int i = 0; i < 3; ++i) {
      const int idx = strategy_from_notation(names[i]).index;
      support.insert(idx);
      weight_of[idx] = order[i];
    }
    REQUIRE(seen.count(support) == 1);
    const auto it = std::find_if(
        rep.optima.begin(), rep.optima.end(), [&](const WeightKktSolution& s) {
          return std::set<int>(s.support.begin(), s.support.end()) == support;
        });
    REQUIRE(it != rep.optima.end());
    for (std::size_t i = 0; i < it->support.size(); ++i) {
      CHECK(it->weights[i] == weight_of.at(it->support[i]));
    }
  }
}

TEST_CASE("supports of size two only reach the raw bound") {
  const WeightKktReport rep = kkt_weights_enumerate(2, 2, 1);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.max_value == Rational(2));
  CHECK(rep.feasible.size() == 4);
}

TEST_CASE("expectation-space enumeration reproduces the frozen statistics") {
  const ExpectationKktReport rep = kkt_expectations_enumerate(1);
  CHECK(rep.cases == 512);
  CHECK(rep.consistent == 320);
  CHECK(rep.feasible == 207);
  CHECK(rep.max_value == Rational(16, 7));
  REQUIRE(rep.optima.size() == 8);

  std::set<std::vector<Rational>> seen;
  for (const ExpectationKktSolution& s : rep.optima) {
    REQUIRE(s.vars.size() == 9);
    CHECK(s.value == Rational(16, 7));
    CHECK(s.vars[8] == refs::expected_expectation_lambda());
    seen.insert(std::vector<Rational>(s.vars.begin(), s.vars.begin() + 8));
  }
  CHECK(seen.size() == 8);
  for (const std::array<Rational, 8>& row : refs::expected_expectation_optima()) {
    CHECK(seen.count(std::vector<Rational>(row.begin(), row.end())) == 1);
  }
}

TEST_CASE("expectation enumeration is job-count independent") {
  const ExpectationKktReport one = kkt_expectations_enumerate(1);
  const ExpectationKktReport two = kkt_expectations_enumerate(2);
  CHECK(one.consistent == two.consistent);
  CHECK(one.feasible == two.feasible);
  CHECK(one.max_value == two.max_value);
  CHECK(one.optima.size() == two.optima.size());
}

TEST_CASE("certification agrees across both spaces") {
  CHECK(certify_local_bound(3, 1) == Rational(16, 7));
}
