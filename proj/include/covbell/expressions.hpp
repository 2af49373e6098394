#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covbell/correlations.hpp"

namespace covbell {

// Which two-point statistic the sign matrix is applied to.
enum class CorrKind { raw, covariance, pearson };

// Generic Bell expression: sum_xy s[x][y] * stat(x,y) + sum_x mA[x]<Ax>
//                          + sum_y mB[y]<By>.
// Named expressions below are presets of this single evaluation path.
struct BellExpression {
  std::string name;
  CorrKind kind = CorrKind::raw;
  std::vector<std::vector<int>> signs;  // entries in {-1, 0, +1}
  std::vector<int> marginal_a;          // coefficient on <Ax>
  std::vector<int> marginal_b;          // coefficient on <By>

  int nX() const { return static_cast<int>(signs.size()); }
  int nY() const {
    return signs.empty() ? 0 : static_cast<int>(signs[0].size());
  }
};

double evaluate(const BellExpression& expr, const Correlators& corr);

// Exact evaluation for raw/covariance kinds on an exact correlator set;
// nullopt for the pearson kind (square roots leave the rationals).
std::optional<Rational> evaluate_exact(const BellExpression& expr,
                                       const ExactCorrelators& corr);

// Presets.
BellExpression chsh_expression();           // <= 2 locally
BellExpression covchsh_expression();        // <= 16/7 locally
BellExpression covchsh_prime_expression();  // the sign-flipped companion
BellExpression i3322_expression();          // <= 4 locally
BellExpression cov3322_expression();        // <= 9/2 locally
BellExpression rchsh_expression();          // <= 5/2 locally (binary outputs)

// Lookup by CLI name: chsh|covchsh|covchsh_prime|i3322|cov3322|rchsh.
// Throws input_error for unknown names.
BellExpression expression_by_name(const std::string& name);
const std::vector<std::string>& expression_names();

// Custom expression from a JSON document:
//   { "kind": "raw"|"covariance"|"pearson", "signs": [[...],...],
//     "marginalA": [...], "marginalB": [...] }   (marginals optional)
BellExpression expression_from_json(std::istream& in);
BellExpression expression_from_file(const std::string& path);

// Named one-shot evaluators.
double chsh(const Correlators& corr);
double covchsh(const Correlators& corr);
double covchsh_prime(const Correlators& corr);
double i3322(const Correlators& corr);
double cov3322(const Correlators& corr);
double rchsh(const Correlators& corr);

// Local bound of a preset when the artifact knows it (used for CLI flags).
std::optional<double> known_local_bound(const std::string& name);

}  // namespace covbell
