#pragma once

#include <array>
#include <vector>

#include "covbell/correlations.hpp"
#include "covbell/kkt.hpp"
#include "covbell/strategies.hpp"

namespace covbell::refs {

// Named distributions and frozen enumeration results that the reproduction
// harness checks fresh computations against. Everything here is exact by
// construction (strategy mixtures with small rational weights).

// 3/7 (++/++) + 2/7 (-+/--) + 2/7 (--/-+): covCHSH = 16/7, covCHSH' = 16/49.
LocalDecomposition p_opt_decomposition();
JointDistribution p_opt();

// 1/2 (++/+-) + 1/2 (--/-+): covCHSH = covCHSH' = 2 from only two strategies.
JointDistribution p2();

// Extremal no-signalling box P(a,b|x,y) = 1/2 iff ab = (-1)^xy: covCHSH = 4.
JointDistribution pr_box();

// (3/8)(+++/+++) + (3/8)(--+/--+) + (1/4)(-+-/-+-): cov3322 = 9/2.
LocalDecomposition cov3322_opt_decomposition();
JointDistribution cov3322_opt();

// 4/9 (++/+0) + 4/9 (+-/0+) + 1/9 (00/--) with outputs in {+1, 0, -1}: every
// Pearson correlator is +-1/sqrt(2), so rCHSH = 2 sqrt(2).
JointDistribution ternary_rchsh();

// (1-eps)(++/+0) + (eps/2)(+-/-+) + (eps/2)(-+/--), 0 < eps <= 1, B0 ternary.
// rCHSH = 2 (1 + sqrt(1-eps)) / sqrt(2-eps), approaching 2 sqrt(2) as eps -> 0.
JointDistribution epsilon_family(double eps);

// Per-support-size statistics the weight-space certification must reproduce.
const std::vector<WeightKktRow>& expected_weight_rows();

// The eight optimal weight decompositions (value 16/7): strategy notations in
// weight order 3/7, 2/7, 2/7; the equality multiplier is 18/7 for all of them.
using WeightOptimumSupport = std::array<const char*, 3>;
const std::vector<WeightOptimumSupport>& expected_weight_optima();
Rational expected_weight_optimum_mu();  // 18/7
const std::vector<Rational>& expected_weight_optimum_weights();  // 3/7,2/7,2/7

// The eight optimal points of the expectation-space certification, in the
// variable order [<A0B0>, <A0B1>, <A1B0>, <A1B1>, <A0>, <A1>, <B0>, <B1>];
// the shared multiplier is 5/7.
const std::vector<std::array<Rational, 8>>& expected_expectation_optima();
Rational expected_expectation_lambda();  // 5/7

}  // namespace covbell::refs
