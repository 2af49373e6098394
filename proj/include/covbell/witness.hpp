#pragma once

#include <cstdint>
#include <vector>

#include "covbell/strategies.hpp"

namespace covbell {

// How much shared randomness a local model needs to reach covCHSH = c:
// minimum Shannon entropy of the hidden variable, and minimum max-entropy
// (log2 of the smallest support size).

struct WitnessPoint {
  double c = 0.0;
  double min_shannon = 0.0;
  double min_max_entropy = 0.0;
  LocalDecomposition decomposition;  // achieves min_shannon
  bool constraint_ok = true;         // covCHSH(decomposition) == c within tol
};

// -q log2 q summed; 0 log 0 = 0.
double shannon_entropy(const std::vector<double>& q);

// Entropy of {(1+x)/2, (1-x)/2} for a bias x in [-1, 1].
double binary_entropy_bias(double x);

// The two-strategy closed form, valid for 0 <= c <= 2.
double closed_form_min_entropy_pair(double c);

// Independent one-parameter reference for 2 < c <= 16/7: the triple family
// with covCHSH = (1-q1)(1+7q1) - (q2-q3)^2 reduced to a line search in q1.
double closed_form_min_entropy_triple(double c);

// Exact search over all supports of size <= 3 (pairs solved in closed form,
// triples via an exact reduction of the quadratic constraint to a
// one-parameter window). Supports of size 1 cover c = 0. Larger supports
// never help (cross-checked by the penalty search below).
WitnessPoint min_shannon_entropy(double c, double tol = 1e-9);

// 0 at c = 0; 1 bit for 0 < c <= 2; log2(3) above 2.
double min_max_entropy(double c);

std::vector<WitnessPoint> entropy_curve(double c_min, double c_max, int steps,
                                        double tol = 1e-9);

// Penalty-method multi-start over the full 16-weight simplex; used as a
// cross-check that larger supports do not beat the exact small-support search.
double min_shannon_entropy_search(double c, int restarts = 50,
                                  std::uint64_t seed = 42, double tol = 1e-6);

}  // namespace covbell
