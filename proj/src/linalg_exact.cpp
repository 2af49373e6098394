#include "covbell/linalg_exact.hpp"

#include <algorithm>
#include <cstddef>

namespace covbell {

namespace {

// Gauss-Jordan on the augmented matrix; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t rr = r; rr < rows; ++rr) {
      if (m[rr][c] != 0) {
        piv = rr;
        break;
      }
    }
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    const Rational inv = m[r][c];
    for (auto& v : m[r]) v /= inv;
    for (std::size_t rr = 0; rr < rows; ++rr) {
      if (rr == r || m[rr][c] == 0) continue;
      const Rational f = m[rr][c];
      for (std::size_t cc = 0; cc < cols; ++cc) m[rr][cc] -= f * m[r][cc];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

LinearSolution solve_linear_exact(const RationalMatrix& a,
                                  const RationalVector& b) {
  const std::size_t rows = a.size();
  const std::size_t n = rows ? a[0].size() : 0;
  RationalMatrix aug(rows, RationalVector(n + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  auto pivots = rref(aug);

  LinearSolution sol;
  for (std::size_t i = 0; i < rows; ++i) {
    bool zero_row = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (aug[i][j] != 0) {
        zero_row = false;
        break;
      }
    }
    if (zero_row && aug[i][n] != 0) {
      sol.kind = SolveKind::inconsistent;
      return sol;
    }
  }

  std::vector<std::size_t> pivot_cols;
  for (std::size_t c : pivots) {
    if (c < n) pivot_cols.push_back(c);
  }
  sol.particular.assign(n, Rational(0));
  for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
    sol.particular[pivot_cols[r]] = aug[r][n];
  }
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    RationalVector v(n, Rational(0));
    v[fc] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
      v[pivot_cols[r]] = -aug[r][fc];
    }
    sol.null_basis.push_back(std::move(v));
  }
  sol.kind = sol.null_basis.empty() ? SolveKind::unique : SolveKind::affine;
  return sol;
}

namespace {

// Normalize so identical half-spaces collapse: divide by the first nonzero
// coefficient magnitude is wrong for inequalities (sign matters), so scale by
// a positive factor only: the absolute value of the first nonzero entry.
void normalize(AffineConstraint& c) {
  Rational scale = 0;
  for (const auto& v : c.coeffs) {
    if (v != 0) {
      scale = boost::multiprecision::abs(v);
      break;
    }
  }
  if (scale == 0 && c.constant != 0) {
    scale = boost::multiprecision::abs(c.constant);
  }
  if (scale == 0) return;
  for (auto& v : c.coeffs) v /= scale;
  c.constant /= scale;
}

bool same_direction(const AffineConstraint& a, const AffineConstraint& b) {
  return a.coeffs == b.coeffs && a.constant == b.constant;
}

}  // namespace

bool affine_system_feasible(std::vector<AffineConstraint> constraints,
                            std::size_t dim) {
  // Eliminate variables one at a time. Combining a lower bound (positive
  // coefficient) with an upper bound (negative coefficient) yields a new
  // constraint without the variable; strictness is inherited if either
  // parent is strict.
  for (std::size_t var = dim; var-- > 0;) {
    std::vector<AffineConstraint> pos, neg, rest;
    for (auto& c : constraints) {
      const Rational& a = c.coeffs[var];
      if (a > 0) {
        pos.push_back(std::move(c));
      } else if (a < 0) {
        neg.push_back(std::move(c));
      } else {
        rest.push_back(std::move(c));
      }
    }
    for (const auto& p : pos) {
      for (const auto& q : neg) {
        AffineConstraint combined;
        combined.coeffs.assign(var, Rational(0));
        const Rational ap = p.coeffs[var];
        const Rational aq = -q.coeffs[var];  // positive
        for (std::size_t j = 0; j < var; ++j) {
          combined.coeffs[j] = aq * p.coeffs[j] + ap * q.coeffs[j];
        }
        combined.constant = aq * p.constant + ap * q.constant;
        combined.strict = p.strict || q.strict;
        normalize(combined);
        rest.push_back(std::move(combined));
      }
    }
    // Dedupe: keep one copy per direction, preferring the strict version
    // (strict implies the non-strict one).
    std::vector<AffineConstraint> dedup;
    for (auto& c : rest) {
      bool merged = false;
      for (auto& d : dedup) {
        if (same_direction(c, d)) {
          d.strict = d.strict || c.strict;
          merged = true;
          break;
        }
      }
      if (!merged) {
        // Truncate coefficient storage to the remaining variables.
        c.coeffs.resize(var);
        dedup.push_back(std::move(c));
      }
    }
    constraints = std::move(dedup);
  }
  for (const auto& c : constraints) {
    if (c.strict ? !(c.constant > 0) : !(c.constant >= 0)) return false;
  }
  return true;
}

std::vector<RationalVector> polytope_vertices(
    const std::vector<AffineConstraint>& constraints, std::size_t dim) {
  std::vector<RationalVector> vertices;
  const std::size_t n = constraints.size();
  if (dim == 0 || n < dim) return vertices;

  std::vector<std::size_t> idx(dim);
  // Iterate over all dim-subsets of constraint indices.
  for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
  auto advance = [&]() {
    for (std::size_t i = dim; i-- > 0;) {
      if (idx[i] < n - dim + i) {
        ++idx[i];
        for (std::size_t j = i + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
        return true;
      }
    }
    return false;
  };

  do {
    RationalMatrix a(dim, RationalVector(dim));
    RationalVector b(dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        a[r][c] = constraints[idx[r]].coeffs[c];
      }
      b[r] = -constraints[idx[r]].constant;
    }
    auto sol = solve_linear_exact(a, b);
    if (sol.kind != SolveKind::unique) continue;
    bool ok = true;
    for (const auto& c : constraints) {
      Rational v = c.constant;
      for (std::size_t j = 0; j < dim; ++j) v += c.coeffs[j] * sol.particular[j];
      if (v < 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (std::find(vertices.begin(), vertices.end(), sol.particular) ==
        vertices.end()) {
      vertices.push_back(std::move(sol.particular));
    }
  } while (advance());
  return vertices;
}

}  // namespace covbell
