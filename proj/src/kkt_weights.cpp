#include <algorithm>
#include <numeric>
#include <set>

#include "covbell/errors.hpp"
#include "covbell/kkt.hpp"
#include "covbell/linalg_exact.hpp"
#include "covbell/local_bound.hpp"
#include "covbell/optim.hpp"

namespace covbell {

namespace {

std::vector<std::vector<int>> all_supports(int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> comb(d);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    out.push_back(comb);
    int i = d - 1;
    while (i >= 0 && comb[i] == 16 - d + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
  }
  return out;
}

Rational objective_on_support(const std::vector<int>& support,
                              const RationalVector& q) {
  std::vector<Rational> q16(16, Rational(0));
  for (std::size_t i = 0; i < support.size(); ++i) q16[support[i]] = q[i];
  return covchsh_of_weights_exact(q16);
}

struct ChunkOut {
  long long consistent = 0;
  long long feasible = 0;
  std::set<Rational> maxima;
  std::vector<WeightKktSolution> sols;
  bool fallback = false;
};

// Exact maximum of the quadratic objective on a non-constant affine family's
// feasible polytope: vertices of the closure plus the stationary point of the
// restricted quadratic, whichever feasible candidate scores highest.
Rational family_max_fallback(const std::vector<int>& support,
                             const LinearSolution& sol,
                             const std::vector<AffineConstraint>& closure,
                             const RationalVector& grad,
                             const RationalMatrix& hess) {
  const std::size_t ndim = sol.null_basis.size();
  const int d = static_cast<int>(support.size());
  auto family_point = [&](const RationalVector& t) {
    RationalVector q(d);
    for (int i = 0; i < d; ++i) {
      q[i] = sol.particular[i];
      for (std::size_t m = 0; m < ndim; ++m) q[i] += t[m] * sol.null_basis[m][i];
    }
    return q;
  };
  auto satisfies_closure = [&](const RationalVector& t) {
    for (const auto& c : closure) {
      Rational v = c.constant;
      for (std::size_t m = 0; m < ndim; ++m) v += c.coeffs[m] * t[m];
      if (v < 0) return false;
    }
    return true;
  };
  std::vector<RationalVector> candidates = polytope_vertices(closure, ndim);
  RationalMatrix sym(ndim, RationalVector(ndim));
  RationalVector rhs(ndim);
  for (std::size_t m = 0; m < ndim; ++m) {
    rhs[m] = -grad[m];
    for (std::size_t n = 0; n < ndim; ++n) sym[m][n] = hess[m][n] + hess[n][m];
  }
  auto stat = solve_linear_exact(sym, rhs);
  if (stat.kind == SolveKind::unique && satisfies_closure(stat.particular)) {
    candidates.push_back(stat.particular);
  }
  bool have = false;
  Rational best = 0;
  for (const auto& t : candidates) {
    Rational v = objective_on_support(support, family_point(t));
    if (!have || v > best) {
      best = v;
      have = true;
    }
  }
  if (!have) {
    throw invariant_error("feasible family with no closure vertex");
  }
  return best;
}

void process_support(const std::vector<int>& support, ChunkOut& out) {
  const auto& c = chsh_strategy_matrix();
  const int d = static_cast<int>(support.size());
  // unknowns: q over the support, then mu
  RationalMatrix a;
  RationalVector b;
  for (int k : support) {
    RationalVector row(d + 1);
    for (int i = 0; i < d; ++i) row[i] = c[support[i]][k] + c[k][support[i]];
    row[d] = 1;
    a.push_back(std::move(row));
    b.push_back(c[k][k]);
  }
  a.emplace_back(d + 1, Rational(0));
  for (int i = 0; i < d; ++i) a.back()[i] = 1;
  b.push_back(1);
  auto sol = solve_linear_exact(a, b);
  if (sol.kind == SolveKind::inconsistent) return;
  ++out.consistent;

  std::vector<int> off;
  for (int j = 0; j < 16; ++j)
    if (!std::binary_search(support.begin(), support.end(), j)) off.push_back(j);

  if (sol.kind == SolveKind::unique) {
    const RationalVector& v = sol.particular;
    for (int i = 0; i < d; ++i)
      if (v[i] <= 0) return;  // boundary: belongs to a smaller support
    const Rational mu = v[d];
    for (int j : off) {
      Rational lam = -c[j][j] + mu;
      for (int i = 0; i < d; ++i)
        lam += v[i] * (c[support[i]][j] + c[j][support[i]]);
      if (lam < 0) return;
    }
    ++out.feasible;
    WeightKktSolution s;
    s.support = support;
    s.weights.assign(v.begin(), v.begin() + d);
    s.mu = mu;
    s.value = objective_on_support(support, s.weights);
    out.maxima.insert(s.value);
    out.sols.push_back(std::move(s));
    return;
  }

  // affine family: q_i(t) > 0 strictly, lambda_j(t) >= 0
  const std::size_t ndim = sol.null_basis.size();
  std::vector<AffineConstraint> constraints;
  for (int i = 0; i < d; ++i) {
    AffineConstraint cstr;
    cstr.constant = sol.particular[i];
    cstr.coeffs.resize(ndim);
    for (std::size_t m = 0; m < ndim; ++m) cstr.coeffs[m] = sol.null_basis[m][i];
    cstr.strict = true;
    constraints.push_back(std::move(cstr));
  }
  for (int j : off) {
    AffineConstraint cstr;
    cstr.constant = -c[j][j] + sol.particular[d];
    for (int i = 0; i < d; ++i)
      cstr.constant += sol.particular[i] * (c[support[i]][j] + c[j][support[i]]);
    cstr.coeffs.resize(ndim);
    for (std::size_t m = 0; m < ndim; ++m) {
      Rational cm = sol.null_basis[m][d];
      for (int i = 0; i < d; ++i)
        cm += sol.null_basis[m][i] * (c[support[i]][j] + c[j][support[i]]);
      cstr.coeffs[m] = cm;
    }
    cstr.strict = false;
    constraints.push_back(std::move(cstr));
  }
  if (!affine_system_feasible(constraints, ndim)) return;
  ++out.feasible;

  // objective restricted to the family: constant + grad.t + t^T hess t
  RationalVector grad(ndim, Rational(0));
  RationalMatrix hess(ndim, RationalVector(ndim, Rational(0)));
  for (std::size_t m = 0; m < ndim; ++m) {
    Rational g = 0;
    for (int k = 0; k < d; ++k)
      g += sol.null_basis[m][k] * c[support[k]][support[k]];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        g -= (sol.particular[i] * sol.null_basis[m][j] +
              sol.null_basis[m][i] * sol.particular[j]) *
             c[support[i]][support[j]];
      }
    }
    grad[m] = g;
  }
  for (std::size_t m = 0; m < ndim; ++m) {
    for (std::size_t n = 0; n < ndim; ++n) {
      Rational h = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          h -= sol.null_basis[m][i] * sol.null_basis[n][j] *
               c[support[i]][support[j]];
      hess[m][n] = h;
    }
  }
  bool constant = true;
  for (std::size_t m = 0; m < ndim && constant; ++m) {
    if (grad[m] != 0) constant = false;
    for (std::size_t n = 0; n < ndim; ++n)
      if (hess[m][n] + hess[n][m] != 0) constant = false;
  }

  WeightKktSolution s;
  s.support = support;
  s.weights.assign(sol.particular.begin(), sol.particular.begin() + d);
  s.mu = sol.particular[d];
  s.underdetermined = true;
  if (constant) {
    s.value = objective_on_support(support, s.weights);
  } else {
    out.fallback = true;
    std::vector<AffineConstraint> closure = constraints;
    for (auto& cstr : closure) cstr.strict = false;
    s.value = family_max_fallback(support, sol, closure, grad, hess);
  }
  out.maxima.insert(s.value);
  out.sols.push_back(std::move(s));
}

}  // namespace

WeightKktReport kkt_weights_enumerate(int d_min, int d_max, int jobs) {
  if (d_min < 2 || d_max > 9 || d_min > d_max) {
    throw input_error("support sizes must satisfy 2 <= d_min <= d_max <= 9");
  }
  WeightKktReport report;
  for (int d = d_min; d <= d_max; ++d) {
    auto supports = all_supports(d);
    const std::size_t nchunks =
        jobs <= 1 ? 1
                  : std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                          supports.size());
    std::vector<ChunkOut> parts(nchunks);
    ChunkOut total;
    parallel_chunks(
        supports.size(), jobs,
        [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
          ChunkOut& part = parts[chunk];
          for (std::size_t i = lo; i < hi; ++i) {
            process_support(supports[i], part);
          }
        },
        [&](std::size_t chunk) {
          ChunkOut& part = parts[chunk];
          total.consistent += part.consistent;
          total.feasible += part.feasible;
          total.maxima.insert(part.maxima.begin(), part.maxima.end());
          for (auto& s : part.sols) total.sols.push_back(std::move(s));
          total.fallback = total.fallback || part.fallback;
        });
    WeightKktRow row;
    row.d = d;
    row.systems = static_cast<long long>(supports.size());
    row.consistent_eq = total.consistent;
    row.consistent_full = total.feasible;
    row.local_maxima.assign(total.maxima.begin(), total.maxima.end());
    report.rows.push_back(std::move(row));
    for (auto& s : total.sols) report.feasible.push_back(std::move(s));
    report.used_family_fallback |= total.fallback;
  }
  if (report.feasible.empty()) {
    throw invariant_error("no feasible KKT solution found in the weight space");
  }
  report.max_value = report.feasible.front().value;
  for (const auto& s : report.feasible)
    if (s.value > report.max_value) report.max_value = s.value;
  for (const auto& s : report.feasible)
    if (s.value == report.max_value) report.optima.push_back(s);
  return report;
}

Rational certify_local_bound(int d_max, int jobs) {
  auto weights = kkt_weights_enumerate(2, d_max, jobs);
  if (d_max >= 9) {
    auto expectations = kkt_expectations_enumerate(jobs);
    if (weights.max_value != expectations.max_value) {
      throw invariant_error(
          "weight-space and expectation-space certifications disagree: " +
          to_string_ratio(weights.max_value) + " vs " +
          to_string_ratio(expectations.max_value));
    }
  }
  return weights.max_value;
}

}  // namespace covbell
