#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace covbell {

// Derivative-free minimization utilities shared by the local-bound, quantum,
// and witness searches. Everything here is deterministic given the seed.

struct NelderMeadOptions {
  int max_iter = 4000;
  double f_tol = 1e-12;     // stop when the simplex value spread drops below
  double init_step = 0.15;  // initial simplex edge length
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Minimizes f. If `project` is non-null every candidate point is projected
// back into the feasible set before evaluation, which keeps the whole search
// inside e.g. the probability simplex.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const NelderMeadOptions& opts,
    const std::function<void(std::vector<double>&)>& project = nullptr);

// Golden-section minimum of f on [a, b] (unimodal assumption).
double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12);

// Euclidean projection of v onto { q : q_i >= 0, sum q = 1 }.
void project_to_simplex(std::vector<double>& v);

// Uniform sample from the simplex (via normalized exponentials).
std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t n);

// Independent engine for restart k under a base seed; restart-parallel code
// uses this so scheduling cannot change the stream any worker sees.
std::mt19937_64 rng_for_restart(std::uint64_t base_seed, std::uint64_t k);

// Deterministically partitions [0, n) into `jobs` chunks, runs `work` on each
// (possibly on worker threads), and calls `merge` chunk-by-chunk in order.
// jobs <= 1 runs inline. Results are identical for any job count.
void parallel_chunks(std::size_t n, int jobs,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& work,
                     const std::function<void(std::size_t)>& merge);

}  // namespace covbell
