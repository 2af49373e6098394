#pragma once

#include <string>
#include <vector>

#include "covbell/correlations.hpp"

namespace covbell {

// A local deterministic response. Index encoding: bits A0..A_{nX-1} then
// B0..B_{nY-1}, least significant first, bit = 1 <=> output +1.
struct DeterministicStrategy {
  std::vector<int> a_out;  // +-1 per Alice input
  std::vector<int> b_out;  // +-1 per Bob input
  int index = 0;
};

DeterministicStrategy strategy_from_index(int nx, int ny, int index);
int strategy_index(const DeterministicStrategy& s);

// All 2^(nx+ny) strategies sorted by index.
std::vector<DeterministicStrategy> enumerate_deterministic(int nx, int ny);

// "(++/+-)" notation: Alice outputs, slash, Bob outputs.
std::string strategy_notation(const DeterministicStrategy& s);
DeterministicStrategy strategy_from_notation(const std::string& text);

// Point-mass distribution of one strategy (binary alphabets, outcome order
// [+1, -1] for both parties).
JointDistribution strategy_distribution(const DeterministicStrategy& s);

// Convex weights over all deterministic strategies of a scenario.
struct LocalDecomposition {
  int nx = 2;
  int ny = 2;
  std::vector<double> weights;  // size 2^(nx+ny), simplex within 1e-12

  int strategy_count() const { return 1 << (nx + ny); }
};

// Throws invariant_error if the weights leave the simplex beyond 1e-12.
void validate_decomposition(const LocalDecomposition& d);

// The mixture sum_k q_k P_k as a distribution.
JointDistribution mixture_distribution(const LocalDecomposition& d);

}  // namespace covbell
