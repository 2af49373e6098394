#pragma once

#include <cstdint>
#include <vector>

#include "covbell/expressions.hpp"
#include "covbell/rational.hpp"
#include "covbell/strategies.hpp"

namespace covbell {

// C matrix of the quadratic weight form: C[i][j] combines the Alice outputs
// of strategy i with the Bob outputs of strategy j under the CHSH signs,
//   C_ij = A0^i B0^j + A0^i B1^j + A1^i B0^j - A1^i B1^j,
// so that for weights q over the 16 strategies
//   covCHSH(q) = sum_k q_k C_kk - sum_ij q_i q_j C_ij.
const std::vector<std::vector<int>>& chsh_strategy_matrix();

// The quadratic form above, evaluated with the SIMD kernels.
double covchsh_of_weights(const LocalDecomposition& d);

// Same value in exact arithmetic (used by the certification cross-checks).
Rational covchsh_of_weights_exact(const std::vector<Rational>& q16);

// Any expression evaluated directly from mixture weights: mixture moments are
// linear in q (binary strategies, so <Ax^2> = <By^2> = 1), the expression is
// applied on top. Agrees with evaluate(expr, correlators(mixture)) and is the
// optimizer's fast path.
class WeightObjective {
 public:
  // Coefficients may be non-integer (the boundary scan mixes two expressions).
  WeightObjective(CorrKind kind, std::vector<std::vector<double>> coeffs,
                  std::vector<double> marginal_a, std::vector<double> marginal_b);
  explicit WeightObjective(const BellExpression& expr);

  int weight_count() const { return n_; }
  int nX() const { return nx_; }
  int nY() const { return ny_; }

  double value(const double* q) const;
  double value(const std::vector<double>& q) const { return value(q.data()); }

  // Degree <= 2 polynomial in q? (raw and covariance kinds; pearson is not.)
  bool is_quadratic() const { return kind_ != CorrKind::pearson; }
  // Gradient of the quadratic kinds (unused for pearson).
  void gradient(const double* q, double* g) const;

 private:
  CorrKind kind_;
  int nx_, ny_, n_;
  std::vector<std::vector<double>> coeffs_;
  std::vector<double> marginal_a_, marginal_b_;
  std::vector<std::vector<double>> ax_;    // [x][k] strategy outputs
  std::vector<std::vector<double>> by_;    // [y][k]
  std::vector<std::vector<double>> prod_;  // [x*ny+y][k] products
};

double weight_expression_value(const BellExpression& expr,
                               const LocalDecomposition& d);

struct LocalBoundResult {
  double bound = 0.0;
  LocalDecomposition best;
  bool converged = false;
  int restarts = 0;
};

// Multi-start maximization over the weight simplex: per restart a projected
// Nelder-Mead descent, plus a Frank-Wolfe climb with exact line search for
// the quadratic kinds; the overall winner gets a deeper coordinate polish.
// Ties break toward the smallest support, then lexicographic indices.
// Deterministic for fixed seed and restart count, independent of `jobs`.
LocalBoundResult numeric_local_bound(const BellExpression& expr, int nx, int ny,
                                     int restarts, double tol,
                                     std::uint64_t seed = 42, int jobs = 1);

struct ScanPoint {
  double theta = 0.0;
  double covchsh = 0.0;
  double covchsh_prime = 0.0;
};

// Support points of the local set in the (covCHSH, covCHSH') plane: for each
// direction angle, maximize cos(theta)*covCHSH + sin(theta)*covCHSH' over the
// weight simplex and record both coordinates of the argmax.
std::vector<ScanPoint> localset_scan(int directions, int restarts, double tol,
                                     std::uint64_t seed = 42, int jobs = 1);

}  // namespace covbell
