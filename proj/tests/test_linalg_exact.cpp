#include "covbell/linalg_exact.hpp"

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

using covbell::AffineConstraint;
using covbell::affine_system_feasible;
using covbell::LinearSolution;
using covbell::polytope_vertices;
using covbell::Rational;
using covbell::RationalMatrix;
using covbell::RationalVector;
using covbell::solve_linear_exact;
using covbell::SolveKind;

namespace {

RationalVector rv(std::initializer_list<int> vals) {
  RationalVector v;
  for (int x : vals) v.emplace_back(x);
  return v;
}

AffineConstraint ge(std::initializer_list<int> coeffs, int constant) {
  return {rv(coeffs), Rational(constant), false};
}

AffineConstraint gt(std::initializer_list<int> coeffs, int constant) {
  return {rv(coeffs), Rational(constant), true};
}

}  // namespace

TEST_CASE("unique solve") {
  // 2x + y = 5, x - y = 1  ->  x = 2, y = 1
  RationalMatrix a = {rv({2, 1}), rv({1, -1})};
  LinearSolution s = solve_linear_exact(a, rv({5, 1}));
  REQUIRE(s.kind == SolveKind::unique);
  CHECK(s.particular == rv({2, 1}));
  CHECK(s.null_basis.empty());
}

TEST_CASE("inconsistent solve") {
  RationalMatrix a = {rv({1, 1}), rv({2, 2})};
  LinearSolution s = solve_linear_exact(a, rv({1, 3}));
  CHECK(s.kind == SolveKind::inconsistent);
}

TEST_CASE("affine solve spans the full solution set") {
  // x + y + z = 1 stated twice -> a 2-parameter family.
  RationalMatrix a = {rv({1, 1, 1}), rv({2, 2, 2})};
  LinearSolution s = solve_linear_exact(a, rv({1, 2}));
  REQUIRE(s.kind == SolveKind::affine);
  REQUIRE(s.null_basis.size() == 2);
  auto apply = [&](const RationalVector& x) {
    RationalVector out;
    for (const RationalVector& row : a) {
      Rational acc = 0;
      for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * x[i];
      out.push_back(acc);
    }
    return out;
  };
  CHECK(apply(s.particular) == rv({1, 2}));
  for (const RationalVector& n : s.null_basis) {
    RationalVector shifted = s.particular;
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += n[i];
    CHECK(apply(shifted) == rv({1, 2}));
  }
}

TEST_CASE("rational pivots stay exact") {
  // Hilbert-style 3x3 with known exact solution (1, 1, 1).
  auto h = [](int i, int j) { return Rational(1, i + j + 1); };
  RationalMatrix a(3, RationalVector(3));
  RationalVector b(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = h(i, j);
    b[i] = h(i, 0) + h(i, 1) + h(i, 2);
  }
  LinearSolution s = solve_linear_exact(a, b);
  REQUIRE(s.kind == SolveKind::unique);
  CHECK(s.particular == rv({1, 1, 1}));
}

TEST_CASE("fourier-motzkin honors strict against non-strict") {
  // 0 < x < 1: feasible.
  CHECK(affine_system_feasible({gt({1}, 0), gt({-1}, 1)}, 1));
  // x > 0 and x <= 0: infeasible only because of strictness.
  CHECK_FALSE(affine_system_feasible({gt({1}, 0), ge({-1}, 0)}, 1));
  // x >= 0 and x <= 0: the point x = 0 remains.
  CHECK(affine_system_feasible({ge({1}, 0), ge({-1}, 0)}, 1));
  // x >= 1 and x <= 0: empty.
  CHECK_FALSE(affine_system_feasible({ge({1}, -1), ge({-1}, 0)}, 1));
}

TEST_CASE("fourier-motzkin in more dimensions") {
  // Open simplex x, y, z > 0, x + y + z < 1: feasible.
  CHECK(affine_system_feasible(
      {gt({1, 0, 0}, 0), gt({0, 1, 0}, 0), gt({0, 0, 1}, 0),
       gt({-1, -1, -1}, 1)},
      3));
  // Forcing the open simplex onto its closed face x + y + z >= 1 leaves only
  // boundary points of the strict constraints: infeasible.
  CHECK_FALSE(affine_system_feasible(
      {gt({1, 0, 0}, 0), gt({0, 1, 0}, 0), gt({0, 0, 1}, 0),
       gt({-1, -1, -1}, 1), ge({1, 1, 1}, -1)},
      3));
  // Equality via two non-strict rows combined with open bounds.
  CHECK(affine_system_feasible(
      {ge({1, 1}, -1), ge({-1, -1}, 1), gt({1, 0}, 0), gt({0, 1}, 0)}, 2));
  // Degenerate: constraint on no variables, constant decides.
  CHECK(affine_system_feasible({ge({0, 0}, 0)}, 2));
  CHECK_FALSE(affine_system_feasible({ge({0, 0}, -1)}, 2));
  CHECK_FALSE(affine_system_feasible({gt({0, 0}, 0)}, 2));
}

TEST_CASE("polytope vertices of the unit square") {
  std::vector<AffineConstraint> square = {ge({1, 0}, 0), ge({-1, 0}, 1),
                                          ge({0, 1}, 0), ge({0, -1}, 1)};
  std::vector<RationalVector> verts = polytope_vertices(square, 2);
  REQUIRE(verts.size() == 4);
  auto has = [&](int x, int y) {
    return std::find(verts.begin(), verts.end(), rv({x, y})) != verts.end();
  };
  CHECK(has(0, 0));
  CHECK(has(0, 1));
  CHECK(has(1, 0));
  CHECK(has(1, 1));
}

TEST_CASE("polytope vertices of a segment in 1-d") {
  std::vector<RationalVector> verts =
      polytope_vertices({ge({2}, 1), ge({-3}, 2)}, 1);
  REQUIRE(verts.size() == 2);
  CHECK(std::find(verts.begin(), verts.end(),
                  RationalVector{Rational(-1, 2)}) != verts.end());
  CHECK(std::find(verts.begin(), verts.end(),
                  RationalVector{Rational(2, 3)}) != verts.end());
}

TEST_CASE("strictness is ignored for the closure's vertices") {
  std::vector<RationalVector> verts =
      polytope_vertices({gt({1}, 0), gt({-1}, 1)}, 1);
  REQUIRE(verts.size() == 2);
}
