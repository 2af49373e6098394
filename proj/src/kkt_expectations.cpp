#include <array>

#include "covbell/errors.hpp"
#include "covbell/kkt.hpp"
#include "covbell/linalg_exact.hpp"
#include "covbell/optim.hpp"

namespace covbell {

namespace {

// Variables: [e00, e01, e10, e11, a0, a1, b0, b1, lambda]
constexpr int kVars = 9;
constexpr int kLam = 8;

int evar(int x, int y) { return 2 * x + y; }

struct Combo {
  int x, y, a, b;
};

// The 8 output pairs with a*b = -(-1)^(xy): the probabilities that must
// vanish at a CHSH-saturating distribution.
const std::array<Combo, 8>& combos() {
  static const std::array<Combo, 8> cs = [] {
    std::array<Combo, 8> out{};
    int i = 0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const int target = (x * y) % 2 == 1 ? 1 : -1;
        if (target == -1) {
          out[i++] = {x, y, 1, -1};
          out[i++] = {x, y, -1, 1};
        } else {
          out[i++] = {x, y, 1, 1};
          out[i++] = {x, y, -1, -1};
        }
      }
    }
    return out;
  }();
  return cs;
}

int chsh_sign(int x, int y) { return (x * y) % 2 == 1 ? -1 : 1; }

Rational objective_at(const RationalVector& v) {
  Rational total = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      total += Rational(chsh_sign(x, y)) * (v[evar(x, y)] - v[4 + x] * v[6 + y]);
  return total;
}

// The inequality side of the complementarity conditions, as affine functions
// of the solution vector: lambda >= 0, 2 - CHSH >= 0, every lambda_xyab >= 0
// (in its closed form), every constrained probability >= 0. All non-strict.
std::vector<std::pair<RationalVector, Rational>> inequality_rows() {
  std::vector<std::pair<RationalVector, Rational>> rows;
  {
    RationalVector r(kVars, Rational(0));
    r[kLam] = 1;
    rows.emplace_back(std::move(r), Rational(0));  // lambda >= 0
  }
  {
    RationalVector r(kVars, Rational(0));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) r[evar(x, y)] = -chsh_sign(x, y);
    rows.emplace_back(std::move(r), Rational(2));  // 2 - CHSH >= 0
  }
  for (const auto& c : combos()) {
    RationalVector r(kVars, Rational(0));
    r[kLam] = -2;
    r[4 + (1 - c.x)] = -2 * c.a * (c.y == 0 ? 1 : -1);
    r[6 + (1 - c.y)] = -2 * c.b * (c.x == 0 ? 1 : -1);
    rows.emplace_back(std::move(r), Rational(2));  // lambda_xyab >= 0
  }
  for (const auto& c : combos()) {
    RationalVector r(kVars, Rational(0));
    r[4 + c.x] = Rational(c.a, 4);
    r[6 + c.y] = Rational(c.b, 4);
    r[evar(c.x, c.y)] = Rational(c.a * c.b, 4);
    rows.emplace_back(std::move(r), Rational(1, 4));  // P(a,b|x,y) >= 0
  }
  return rows;
}

bool point_feasible(const RationalVector& v) {
  for (const auto& [coeffs, constant] : inequality_rows()) {
    Rational val = constant;
    for (int i = 0; i < kVars; ++i) val += coeffs[i] * v[i];
    if (val < 0) return false;
  }
  return true;
}

struct ChunkOut {
  long long consistent = 0;
  long long feasible = 0;
  std::vector<ExpectationKktSolution> sols;
  bool fallback = false;
};

Rational family_max_fallback(const LinearSolution& sol,
                             const std::vector<AffineConstraint>& closure,
                             const RationalVector& grad,
                             const RationalMatrix& hess) {
  const std::size_t ndim = sol.null_basis.size();
  auto family_point = [&](const RationalVector& t) {
    RationalVector v(kVars);
    for (int i = 0; i < kVars; ++i) {
      v[i] = sol.particular[i];
      for (std::size_t m = 0; m < ndim; ++m) v[i] += t[m] * sol.null_basis[m][i];
    }
    return v;
  };
  std::vector<RationalVector> candidates = polytope_vertices(closure, ndim);
  RationalMatrix sym(ndim, RationalVector(ndim));
  RationalVector rhs(ndim);
  for (std::size_t m = 0; m < ndim; ++m) {
    rhs[m] = -grad[m];
    for (std::size_t n = 0; n < ndim; ++n) sym[m][n] = hess[m][n] + hess[n][m];
  }
  auto stat = solve_linear_exact(sym, rhs);
  if (stat.kind == SolveKind::unique &&
      point_feasible(family_point(stat.particular))) {
    candidates.push_back(stat.particular);
  }
  bool have = false;
  Rational best = 0;
  for (const auto& t : candidates) {
    Rational v = objective_at(family_point(t));
    if (!have || v > best) {
      best = v;
      have = true;
    }
  }
  if (!have) throw invariant_error("feasible family with no closure vertex");
  return best;
}

void process_case(std::uint32_t case_id, ChunkOut& out) {
  RationalMatrix a;
  RationalVector b;
  if (case_id & 1) {
    RationalVector row(kVars, Rational(0));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) row[evar(x, y)] = chsh_sign(x, y);
    a.push_back(std::move(row));
    b.push_back(2);  // CHSH = 2
  } else {
    RationalVector row(kVars, Rational(0));
    row[kLam] = 1;
    a.push_back(std::move(row));
    b.push_back(0);  // lambda = 0
  }
  const auto& cs = combos();
  for (int ci = 0; ci < 8; ++ci) {
    const auto& c = cs[ci];
    RationalVector row(kVars, Rational(0));
    if ((case_id >> (ci + 1)) & 1) {
      // P(a,b|x,y) = 0
      row[4 + c.x] = c.a;
      row[6 + c.y] = c.b;
      row[evar(c.x, c.y)] = c.a * c.b;
      a.push_back(std::move(row));
      b.push_back(-1);
    } else {
      // lambda_xyab = 0 in its closed form
      row[kLam] = -1;
      row[4 + (1 - c.x)] = -c.a * (c.y == 0 ? 1 : -1);
      row[6 + (1 - c.y)] = -c.b * (c.x == 0 ? 1 : -1);
      a.push_back(std::move(row));
      b.push_back(-1);
    }
  }
  auto sol = solve_linear_exact(a, b);
  if (sol.kind == SolveKind::inconsistent) return;
  ++out.consistent;

  if (sol.kind == SolveKind::unique) {
    if (!point_feasible(sol.particular)) return;
    ++out.feasible;
    ExpectationKktSolution s;
    s.case_id = case_id;
    s.vars = sol.particular;
    s.value = objective_at(sol.particular);
    out.sols.push_back(std::move(s));
    return;
  }

  const std::size_t ndim = sol.null_basis.size();
  std::vector<AffineConstraint> constraints;
  for (const auto& [coeffs, constant] : inequality_rows()) {
    AffineConstraint cstr;
    cstr.constant = constant;
    for (int i = 0; i < kVars; ++i) cstr.constant += coeffs[i] * sol.particular[i];
    cstr.coeffs.resize(ndim);
    for (std::size_t m = 0; m < ndim; ++m) {
      Rational cm = 0;
      for (int i = 0; i < kVars; ++i) cm += coeffs[i] * sol.null_basis[m][i];
      cstr.coeffs[m] = cm;
    }
    cstr.strict = false;
    constraints.push_back(std::move(cstr));
  }
  if (!affine_system_feasible(constraints, ndim)) return;
  ++out.feasible;

  // restricted objective: constant + grad.t + t^T hess t
  RationalVector grad(ndim, Rational(0));
  RationalMatrix hess(ndim, RationalVector(ndim, Rational(0)));
  for (std::size_t m = 0; m < ndim; ++m) {
    Rational g = 0;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const Rational s = chsh_sign(x, y);
        g += s * sol.null_basis[m][evar(x, y)];
        g -= s * (sol.particular[4 + x] * sol.null_basis[m][6 + y] +
                  sol.null_basis[m][4 + x] * sol.particular[6 + y]);
      }
    }
    grad[m] = g;
    for (std::size_t n = 0; n < ndim; ++n) {
      Rational h = 0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          h -= Rational(chsh_sign(x, y)) * sol.null_basis[m][4 + x] *
               sol.null_basis[n][6 + y];
      hess[m][n] = h;
    }
  }
  bool constant = true;
  for (std::size_t m = 0; m < ndim && constant; ++m) {
    if (grad[m] != 0) constant = false;
    for (std::size_t n = 0; n < ndim; ++n)
      if (hess[m][n] + hess[n][m] != 0) constant = false;
  }

  ExpectationKktSolution s;
  s.case_id = case_id;
  s.vars = sol.particular;
  s.underdetermined = true;
  if (constant) {
    s.value = objective_at(sol.particular);
  } else {
    out.fallback = true;
    std::vector<AffineConstraint> closure = constraints;
    s.value = family_max_fallback(sol, closure, grad, hess);
  }
  out.sols.push_back(std::move(s));
}

}  // namespace

ExpectationKktReport kkt_expectations_enumerate(int jobs) {
  ExpectationKktReport report;
  report.cases = 512;
  const std::size_t nchunks =
      jobs <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(jobs), 512);
  std::vector<ChunkOut> parts(nchunks);
  ChunkOut total;
  parallel_chunks(
      512, jobs,
      [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
        ChunkOut& part = parts[chunk];
        for (std::size_t i = lo; i < hi; ++i) {
          process_case(static_cast<std::uint32_t>(i), part);
        }
      },
      [&](std::size_t chunk) {
        ChunkOut& part = parts[chunk];
        total.consistent += part.consistent;
        total.feasible += part.feasible;
        for (auto& s : part.sols) total.sols.push_back(std::move(s));
        total.fallback = total.fallback || part.fallback;
      });
  report.consistent = total.consistent;
  report.feasible = total.feasible;
  report.used_family_fallback = total.fallback;
  if (total.sols.empty()) {
    throw invariant_error("no feasible KKT solution in the expectation space");
  }
  report.max_value = total.sols.front().value;
  for (const auto& s : total.sols)
    if (s.value > report.max_value) report.max_value = s.value;
  for (const auto& s : total.sols)
    if (s.value == report.max_value) report.optima.push_back(s);
  return report;
}

}  // namespace covbell
