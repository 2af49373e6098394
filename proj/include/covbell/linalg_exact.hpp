#pragma once

#include <vector>

#include "covbell/rational.hpp"

namespace covbell {

using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

enum class SolveKind { inconsistent, unique, affine };

// Exact solution set of A x = b. For an affine family the set is
// { particular + sum_m t_m * null_basis[m] : t free }.
struct LinearSolution {
  SolveKind kind = SolveKind::inconsistent;
  RationalVector particular;
  std::vector<RationalVector> null_basis;
};

LinearSolution solve_linear_exact(const RationalMatrix& a,
                                  const RationalVector& b);

// One affine inequality in the family parameters t:
//   coeffs . t + constant  >= 0   (strict == false)
//   coeffs . t + constant  >  0   (strict == true)
struct AffineConstraint {
  RationalVector coeffs;
  Rational constant;
  bool strict = false;
};

// Exact satisfiability of a mixed strict/non-strict system over the reals,
// by Fourier-Motzkin elimination. Sound and complete; fine for the handful of
// parameters the KKT families produce.
bool affine_system_feasible(std::vector<AffineConstraint> constraints,
                            std::size_t dim);

// Vertices of { t : coeffs.t + constant >= 0 for all constraints } found by
// solving every dim-subset of constraints as equalities and keeping the
// feasible intersection points (strictness ignored: this is the closure).
// Duplicates are removed exactly.
std::vector<RationalVector> polytope_vertices(
    const std::vector<AffineConstraint>& constraints, std::size_t dim);

}  // namespace covbell
