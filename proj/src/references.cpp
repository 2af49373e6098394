#include "covbell/references.hpp"

#include <cmath>
#include <cstdlib>

#include "covbell/errors.hpp"

namespace covbell::refs {

namespace {

LocalDecomposition decomposition_2x2(
    const std::vector<std::pair<const char*, double>>& terms) {
  LocalDecomposition d;
  d.nx = 2;
  d.ny = 2;
  d.weights.assign(16, 0.0);
  for (const auto& [notation, w] : terms) {
    d.weights[strategy_from_notation(notation).index] += w;
  }
  return d;
}

int alphabet_index(const std::vector<double>& alphabet, double value) {
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i] == value) return static_cast<int>(i);
  }
  std::abort();  // reference tables are internally consistent
}

// Mixture of deterministic responses with arbitrary (per-input) output
// alphabets; a_out[k][x] / b_out[k][y] are the outputs of strategy k.
JointDistribution mix_general(std::vector<std::vector<double>> outcomes_a,
                              std::vector<std::vector<double>> outcomes_b,
                              const std::vector<double>& weights,
                              const std::vector<std::vector<double>>& a_out,
                              const std::vector<std::vector<double>>& b_out) {
  const int nx = static_cast<int>(outcomes_a.size());
  const int ny = static_cast<int>(outcomes_b.size());
  std::vector<std::vector<std::vector<std::vector<double>>>> table(nx);
  for (int x = 0; x < nx; ++x) {
    table[x].resize(ny);
    for (int y = 0; y < ny; ++y) {
      table[x][y].assign(outcomes_a[x].size(),
                         std::vector<double>(outcomes_b[y].size(), 0.0));
      for (std::size_t k = 0; k < weights.size(); ++k) {
        const int a = alphabet_index(outcomes_a[x], a_out[k][x]);
        const int b = alphabet_index(outcomes_b[y], b_out[k][y]);
        table[x][y][a][b] += weights[k];
      }
    }
  }
  return JointDistribution(std::move(outcomes_a), std::move(outcomes_b),
                           std::move(table));
}

}  // namespace

LocalDecomposition p_opt_decomposition() {
  return decomposition_2x2(
      {{"(++/++)", 3.0 / 7.0}, {"(-+/--)", 2.0 / 7.0}, {"(--/-+)", 2.0 / 7.0}});
}

JointDistribution p_opt() { return mixture_distribution(p_opt_decomposition()); }

JointDistribution p2() {
  return mixture_distribution(
      decomposition_2x2({{"(++/+-)", 0.5}, {"(--/-+)", 0.5}}));
}

JointDistribution pr_box() {
  std::vector<std::vector<double>> outs = {{1.0, -1.0}, {1.0, -1.0}};
  std::vector<std::vector<std::vector<std::vector<double>>>> table(2);
  for (int x = 0; x < 2; ++x) {
    table[x].resize(2);
    for (int y = 0; y < 2; ++y) {
      table[x][y].assign(2, std::vector<double>(2, 0.0));
      if (x == 1 && y == 1) {
        table[x][y][0][1] = 0.5;  // anti-correlated context
        table[x][y][1][0] = 0.5;
      } else {
        table[x][y][0][0] = 0.5;
        table[x][y][1][1] = 0.5;
      }
    }
  }
  return JointDistribution(outs, outs, std::move(table));
}

LocalDecomposition cov3322_opt_decomposition() {
  LocalDecomposition d;
  d.nx = 3;
  d.ny = 3;
  d.weights.assign(64, 0.0);
  d.weights[strategy_from_notation("(+++/+++)").index] = 3.0 / 8.0;
  d.weights[strategy_from_notation("(--+/--+)").index] = 3.0 / 8.0;
  d.weights[strategy_from_notation("(-+-/-+-)").index] = 1.0 / 4.0;
  return d;
}

JointDistribution cov3322_opt() {
  return mixture_distribution(cov3322_opt_decomposition());
}

JointDistribution ternary_rchsh() {
  const std::vector<double> tri = {1.0, 0.0, -1.0};
  return mix_general({tri, tri}, {tri, tri}, {4.0 / 9.0, 4.0 / 9.0, 1.0 / 9.0},
                     {{1, 1}, {1, -1}, {0, 0}}, {{1, 0}, {0, 1}, {-1, -1}});
}

JointDistribution epsilon_family(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw input_error("epsilon_family requires 0 < eps <= 1");
  }
  const std::vector<double> tri = {1.0, 0.0, -1.0};
  return mix_general({{1.0, -1.0}, {1.0, -1.0}}, {tri, tri},
                     {1.0 - eps, eps / 2.0, eps / 2.0},
                     {{1, 1}, {1, -1}, {-1, 1}}, {{1, 0}, {-1, 1}, {-1, -1}});
}

const std::vector<WeightKktRow>& expected_weight_rows() {
  static const std::vector<WeightKktRow> rows = [] {
    std::vector<WeightKktRow> r;
    auto add = [&r](int d, long long systems, long long eq, long long full,
                    std::vector<Rational> maxima) {
      r.push_back({d, systems, eq, full, std::move(maxima)});
    };
    add(2, 120, 120, 4, {Rational(2)});
    add(3, 560, 560, 8, {Rational(16, 7)});
    add(4, 1820, 1516, 14, {Rational(2), Rational(9, 4)});
    add(5, 4368, 3376, 0, {});
    add(6, 8008, 1896, 4, {Rational(2)});
    add(7, 11440, 688, 0, {});
    add(8, 12870, 154, 1, {Rational(2)});
    add(9, 11440, 16, 0, {});
    return r;
  }();
  return rows;
}

const std::vector<WeightOptimumSupport>& expected_weight_optima() {
  static const std::vector<WeightOptimumSupport> optima = {
      {{"(++/++)", "(-+/--)", "(--/-+)"}},
      {{"(--/--)", "(+-/++)", "(++/+-)"}},
      {{"(+-/-+)", "(++/+-)", "(-+/--)"}},
      {{"(-+/+-)", "(--/-+)", "(+-/++)"}},
      {{"(++/+-)", "(+-/-+)", "(--/--)"}},
      {{"(--/-+)", "(-+/+-)", "(++/++)"}},
      {{"(+-/++)", "(-+/+-)", "(--/--)"}},
      {{"(-+/--)", "(+-/-+)", "(++/++)"}},
  };
  return optima;
}

Rational expected_weight_optimum_mu() { return Rational(18, 7); }

const std::vector<Rational>& expected_weight_optimum_weights() {
  static const std::vector<Rational> w = {Rational(3, 7), Rational(2, 7),
                                          Rational(2, 7)};
  return w;
}

const std::vector<std::array<Rational, 8>>& expected_expectation_optima() {
  static const std::vector<std::array<Rational, 8>> optima = [] {
    auto q = [](int num) { return Rational(num, 7); };
    std::vector<std::array<Rational, 8>> rows;
    rows.push_back({Rational(1), q(3), q(3), q(-1), q(-1), q(3), q(-1), q(3)});
    rows.push_back({Rational(1), q(3), q(3), q(-1), q(1), q(-3), q(1), q(-3)});
    rows.push_back({q(1), q(3), q(3), Rational(-1), q(3), q(1), q(-3), q(-1)});
    rows.push_back({q(1), q(3), q(3), Rational(-1), q(-3), q(-1), q(3), q(1)});
    rows.push_back({q(3), q(1), Rational(1), q(-3), q(3), q(-1), q(-1), q(-3)});
    rows.push_back({q(3), q(1), Rational(1), q(-3), q(-3), q(1), q(1), q(3)});
    rows.push_back({q(3), Rational(1), q(1), q(-3), q(-1), q(-3), q(3), q(-1)});
    rows.push_back({q(3), Rational(1), q(1), q(-3), q(1), q(3), q(-3), q(1)});
    return rows;
  }();
  return optima;
}

Rational expected_expectation_lambda() { return Rational(5, 7); }

}  // namespace covbell::refs
