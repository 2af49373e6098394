#pragma once

#include <cstdint>
#include <vector>

#include "covbell/rational.hpp"

namespace covbell {

// ---------------------------------------------------------------------------
// Exact certification of the covCHSH local bound, twice over: once in the
// space of decomposition weights q_k (one stationarity system per support
// subset of the 16 deterministic strategies), once in the space of the nine
// expectation values with complementarity patterns over the constraints
// CHSH <= 2 and P(a,b|x,y) >= 0. Everything is rational arithmetic; affine
// solution families are handled exactly (Fourier-Motzkin feasibility plus a
// symbolic constancy check of the objective on the family).
// ---------------------------------------------------------------------------

struct WeightKktSolution {
  std::vector<int> support;       // sorted strategy indices, q_k > 0 here
  std::vector<Rational> weights;  // aligned with `support`
  Rational mu;                    // equality multiplier
  Rational value;                 // covCHSH at the solution
  bool underdetermined = false;   // value taken from an affine family
};

struct WeightKktRow {
  int d = 0;
  long long systems = 0;         // C(16, d)
  long long consistent_eq = 0;   // solvable equality systems
  long long consistent_full = 0; // also satisfying all inequality constraints
  std::vector<Rational> local_maxima;  // distinct values, ascending
};

struct WeightKktReport {
  std::vector<WeightKktRow> rows;            // one per d
  std::vector<WeightKktSolution> feasible;   // every feasible solution
  Rational max_value;
  std::vector<WeightKktSolution> optima;     // the ones attaining max_value
  bool used_family_fallback = false;  // a feasible family had a non-constant
                                      // objective; its max came from vertex
                                      // enumeration of the family's polytope
};

WeightKktReport kkt_weights_enumerate(int d_min = 2, int d_max = 9,
                                      int jobs = 1);

// Variable order of the expectation-space systems:
// [<A0B0>, <A0B1>, <A1B0>, <A1B1>, <A0>, <A1>, <B0>, <B1>, lambda]
struct ExpectationKktSolution {
  std::uint32_t case_id = 0;  // 9-bit complementarity pattern
  std::vector<Rational> vars;
  Rational value;
  bool underdetermined = false;
};

struct ExpectationKktReport {
  long long cases = 0;       // 512
  long long consistent = 0;  // solvable equality systems
  long long feasible = 0;    // also satisfying all inequality constraints
  Rational max_value;
  std::vector<ExpectationKktSolution> optima;
  bool used_family_fallback = false;
};

ExpectationKktReport kkt_expectations_enumerate(int jobs = 1);

// Runs the weight-space enumeration (restricted to supports of size <= d_max)
// and, when d_max covers the full range, the expectation-space one as well;
// the two maxima must agree or an invariant_error is thrown. Returns the
// certified bound (16/7 for the full run).
Rational certify_local_bound(int d_max = 9, int jobs = 1);

}  // namespace covbell
