#include "covbell/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covbell/errors.hpp"
#include "covbell/local_bound.hpp"
#include "covbell/optim.hpp"

namespace covbell {

namespace {

constexpr double kMaxC = 16.0 / 7.0;
constexpr double kRangeSlack = 1e-12;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void require_range(double c) {
  if (!(c >= -kRangeSlack) || c > kMaxC + kRangeSlack) {
    throw input_error("covCHSH target outside the locally reachable [0, 16/7]");
  }
}

LocalDecomposition decomposition_from(const std::vector<int>& support,
                                      const std::vector<double>& weights) {
  LocalDecomposition d;
  d.nx = 2;
  d.ny = 2;
  d.weights.assign(16, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double w = std::max(0.0, weights[i]);
    d.weights[support[i]] = w;
    sum += w;
  }
  for (double& w : d.weights) w /= sum;
  return d;
}

struct Best {
  double entropy = std::numeric_limits<double>::infinity();
  std::vector<int> support;
  std::vector<double> weights;
};

void offer(Best& best, double h, std::vector<int> support,
           std::vector<double> weights) {
  if (h < best.entropy) {
    best.entropy = h;
    best.support = std::move(support);
    best.weights = std::move(weights);
  }
}

// ---- pairs: covCHSH(q on i, 1-q on j) = K q(1-q) with integer K -----------
void search_pairs(double c, Best& best) {
  const auto& m = chsh_strategy_matrix();
  for (int i = 0; i < 16; ++i) {
    for (int j = i + 1; j < 16; ++j) {
      const int k = m[i][i] + m[j][j] - m[i][j] - m[j][i];
      if (k <= 0) continue;
      const double ratio = 4.0 * c / k;
      if (ratio > 1.0) continue;
      const double x = std::sqrt(1.0 - ratio);  // bias of the best root
      const double q = 0.5 * (1.0 + x);
      offer(best, binary_entropy_bias(x), {i, j}, {q, 1.0 - q});
    }
  }
}

// ---- triples: q = (u, s/2 + d, s/2 - d) with s = 1 - u --------------------
// covCHSH restricted to the triple is A(u) + beta*u*d + D*d^2 where
//   A(u) = a2 u^2 + a1 u + a0  (quarter-integer coefficients)
//   beta = (Mbb - Mcc) - (Mab + Mba) + (Mac + Mca)   (integer)
//   D    = (Mbc + Mcb) - (Mbb + Mcc)                 (integer)
// all read off the strategy C-matrix block of the triple. Solving f = c for d
// at fixed u is a quadratic with these exact coefficients, which avoids the
// cancellation that plagues a floated 3-point fit.
struct TripleForm {
  double a2, a1, a0;
  double beta;
  double d2;  // the coefficient D
};

TripleForm triple_form(int a, int b, int c3) {
  const auto& m = chsh_strategy_matrix();
  const double maa = m[a][a];
  const double s1 = m[b][b] + m[c3][c3];
  const double s2 = m[a][b] + m[b][a] + m[a][c3] + m[c3][a];
  const double s3 = m[b][c3] + m[c3][b];
  TripleForm f;
  f.a0 = (s1 - s3) / 4.0;
  f.a1 = maa + (s3 - s2) / 2.0;
  f.a2 = -maa - (s1 + s3) / 4.0 + s2 / 2.0;
  f.beta = (m[b][b] - m[c3][c3]) - (m[a][b] + m[b][a]) + (m[a][c3] + m[c3][a]);
  f.d2 = s3 - s1;
  return f;
}

// Entropy of the best delta-root at a given u; +inf when no valid root.
double triple_entropy_at(const TripleForm& f, double c, double u) {
  if (u < 0.0 || u > 1.0) return std::numeric_limits<double>::infinity();
  const double s = 1.0 - u;
  const double av = (f.a2 * u + f.a1) * u + f.a0;
  const double bq = f.beta * u;
  const double cq = av - c;
  double roots[2];
  int nroots = 0;
  if (f.d2 == 0.0) {
    if (bq != 0.0) {
      roots[nroots++] = -cq / bq;
    } else if (std::abs(cq) < 1e-12) {
      roots[nroots++] = 0.0;
    }
  } else {
    double disc = bq * bq - 4.0 * f.d2 * cq;
    const double scale = std::max({1.0, bq * bq, std::abs(4.0 * f.d2 * cq)});
    if (disc < 0.0 && disc > -1e-12 * scale) disc = 0.0;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double t = -0.5 * (bq + std::copysign(sq, bq));
      if (t != 0.0) {
        roots[nroots++] = t / f.d2;
        roots[nroots++] = cq / t;
      } else {
        roots[nroots++] = 0.0;
      }
    }
  }
  double h = std::numeric_limits<double>::infinity();
  for (int r = 0; r < nroots; ++r) {
    double d = roots[r];
    if (std::abs(d) > s / 2.0 + 1e-12) continue;
    d = std::clamp(d, -s / 2.0, s / 2.0);
    h = std::min(h, -xlog2x(u) - xlog2x(s / 2.0 + d) - xlog2x(s / 2.0 - d));
  }
  return h;
}

// Real roots of p2 x^2 + p1 x + p0 = 0, in ascending order.
int solve_quadratic(double p2, double p1, double p0, double out[2]) {
  if (std::abs(p2) < 1e-14) {
    if (std::abs(p1) < 1e-14) return 0;
    out[0] = -p0 / p1;
    return 1;
  }
  double disc = p1 * p1 - 4.0 * p2 * p0;
  const double scale = std::max({1.0, p1 * p1, std::abs(4.0 * p2 * p0)});
  if (disc < 0.0 && disc > -1e-12 * scale) disc = 0.0;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double t = -0.5 * (p1 + std::copysign(sq, p1));
  double r0, r1;
  if (t == 0.0) {
    r0 = r1 = 0.0;
  } else {
    r0 = t / p2;
    r1 = p0 / t;
  }
  out[0] = std::min(r0, r1);
  out[1] = std::max(r0, r1);
  return 2;
}

void search_triple_role(int a, int b, int c3, double c, Best& best) {
  const TripleForm f = triple_form(a, b, c3);
  // u-window where the delta-quadratic has real roots:
  //   disc(u) = (beta^2 - 4 D a2) u^2 - 4 D a1 u - 4 D (a0 - c) >= 0
  std::vector<std::pair<double, double>> windows;
  if (f.d2 == 0.0) {
    windows.emplace_back(0.0, 1.0);
  } else {
    const double p2 = f.beta * f.beta - 4.0 * f.d2 * f.a2;
    const double p1 = -4.0 * f.d2 * f.a1;
    const double p0 = -4.0 * f.d2 * (f.a0 - c);
    double r[2];
    const int n = solve_quadratic(p2, p1, p0, r);
    auto disc_at = [&](double u) { return (p2 * u + p1) * u + p0; };
    if (n == 0) {
      if (disc_at(0.5) >= 0.0) windows.emplace_back(0.0, 1.0);
    } else if (n == 1) {
      if (disc_at(r[0] - 1.0) >= 0.0) windows.emplace_back(0.0, r[0]);
      else windows.emplace_back(r[0], 1.0);
    } else {
      if (p2 > 0.0 || (p2 == 0.0 && p1 != 0.0)) {
        // positive outside the roots (or one-sided for the linear case)
        windows.emplace_back(0.0, r[0]);
        windows.emplace_back(r[1], 1.0);
      } else if (p2 < 0.0) {
        windows.emplace_back(r[0], r[1]);  // positive between the roots
      } else {
        windows.emplace_back(0.0, 1.0);
      }
    }
  }
  for (auto [lo, hi] : windows) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    if (!(lo <= hi)) continue;
    // coarse grid including the exact endpoints, then a golden refinement
    constexpr int kGrid = 128;
    double best_u = lo, best_h = std::numeric_limits<double>::infinity();
    for (int g = 0; g <= kGrid; ++g) {
      const double u = lo + (hi - lo) * g / kGrid;
      const double h = triple_entropy_at(f, c, u);
      if (h < best_h) {
        best_h = h;
        best_u = u;
      }
    }
    if (!std::isfinite(best_h)) continue;
    const double span = (hi - lo) / kGrid;
    const double u_ref = golden_section_min(
        [&](double u) { return triple_entropy_at(f, c, u); },
        std::max(lo, best_u - span), std::min(hi, best_u + span), 1e-12);
    const double h_ref = triple_entropy_at(f, c, u_ref);
    double u_star = best_u, h_star = best_h;
    if (h_ref < h_star) {
      u_star = u_ref;
      h_star = h_ref;
    }
    if (h_star < best.entropy) {
      // reconstruct the winning weights at u_star
      const double s = 1.0 - u_star;
      double pick_d = 0.0, pick_h = std::numeric_limits<double>::infinity();
      const double av = (f.a2 * u_star + f.a1) * u_star + f.a0;
      const double bq = f.beta * u_star;
      const double cq = av - c;
      std::vector<double> cand;
      if (f.d2 == 0.0) {
        if (bq != 0.0) cand.push_back(-cq / bq);
        else cand.push_back(0.0);
      } else {
        double disc = bq * bq - 4.0 * f.d2 * cq;
        if (disc < 0.0) disc = 0.0;
        const double sq = std::sqrt(disc);
        const double t = -0.5 * (bq + std::copysign(sq, bq));
        if (t != 0.0) {
          cand.push_back(t / f.d2);
          cand.push_back(cq / t);
        } else {
          cand.push_back(0.0);
        }
      }
      for (double d : cand) {
        if (std::abs(d) > s / 2.0 + 1e-12) continue;
        d = std::clamp(d, -s / 2.0, s / 2.0);
        const double h = -xlog2x(u_star) - xlog2x(s / 2.0 + d) -
                         xlog2x(s / 2.0 - d);
        if (h < pick_h) {
          pick_h = h;
          pick_d = d;
        }
      }
      if (std::isfinite(pick_h)) {
        offer(best, pick_h, {a, b, c3},
              {u_star, s / 2.0 + pick_d, s / 2.0 - pick_d});
      }
    }
  }
}

void search_triples(double c, Best& best) {
  for (int p = 0; p < 16; ++p) {
    for (int q = p + 1; q < 16; ++q) {
      for (int r = q + 1; r < 16; ++r) {
        search_triple_role(p, q, r, c, best);
        search_triple_role(q, p, r, c, best);
        search_triple_role(r, p, q, c, best);
      }
    }
  }
}

}  // namespace

double shannon_entropy(const std::vector<double>& q) {
  double h = 0.0;
  for (double p : q) h -= xlog2x(p);
  return h;
}

double binary_entropy_bias(double x) {
  return -xlog2x((1.0 + x) / 2.0) - xlog2x((1.0 - x) / 2.0);
}

double closed_form_min_entropy_pair(double c) {
  if (c < 0.0 || c > 2.0 + kRangeSlack) {
    throw input_error("pair closed form needs c in [0, 2]");
  }
  return binary_entropy_bias(std::sqrt(std::max(0.0, 1.0 - c / 2.0)));
}

double closed_form_min_entropy_triple(double c) {
  require_range(c);
  if (c < 2.0) throw input_error("triple closed form needs c in [2, 16/7]");
  const double root = std::sqrt(std::max(0.0, 16.0 - 7.0 * c));
  const double lo = (3.0 - root) / 7.0, hi = (3.0 + root) / 7.0;
  auto entropy_at = [&](double q1) {
    const double rad = std::max(0.0, (1.0 - q1) * (1.0 + 7.0 * q1) - c);
    const double delta = std::sqrt(rad);
    const double q2 = (1.0 - q1 + delta) / 2.0;
    const double q3 = (1.0 - q1 - delta) / 2.0;
    return -xlog2x(q1) - xlog2x(q2) - xlog2x(std::max(0.0, q3));
  };
  constexpr int kGrid = 256;
  double best_u = lo, best_h = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= kGrid; ++g) {
    const double u = lo + (hi - lo) * g / kGrid;
    const double h = entropy_at(u);
    if (h < best_h) {
      best_h = h;
      best_u = u;
    }
  }
  const double span = (hi - lo) / kGrid;
  const double u_ref =
      golden_section_min(entropy_at, std::max(lo, best_u - span),
                         std::min(hi, best_u + span), 1e-13);
  return std::min(best_h, entropy_at(u_ref));
}

WitnessPoint min_shannon_entropy(double c, double tol) {
  require_range(c);
  WitnessPoint point;
  point.c = c;
  point.min_max_entropy = min_max_entropy(std::max(0.0, c));
  if (c <= 1e-15) {
    point.min_shannon = 0.0;
    point.decomposition = decomposition_from({0}, {1.0});
    return point;
  }
  Best best;
  search_pairs(c, best);
  search_triples(c, best);
  if (!std::isfinite(best.entropy)) {
    throw non_convergence("no decomposition found for the requested value");
  }
  point.min_shannon = best.entropy;
  point.decomposition = decomposition_from(best.support, best.weights);
  const double achieved = covchsh_of_weights(point.decomposition);
  point.constraint_ok = std::abs(achieved - c) <= std::max(tol, 1e-9);
  return point;
}

double min_max_entropy(double c) {
  require_range(c);
  if (c <= kRangeSlack) return 0.0;
  if (c <= 2.0 + kRangeSlack) return 1.0;
  return std::log2(3.0);
}

std::vector<WitnessPoint> entropy_curve(double c_min, double c_max, int steps,
                                        double tol) {
  require_range(c_min);
  require_range(c_max);
  if (steps < 2) throw input_error("curve needs at least 2 steps");
  std::vector<WitnessPoint> out;
  for (int i = 0; i < steps; ++i) {
    const double c = c_min + (c_max - c_min) * i / (steps - 1);
    out.push_back(min_shannon_entropy(std::min(c, kMaxC), tol));
  }
  return out;
}

double min_shannon_entropy_search(double c, int restarts, std::uint64_t seed,
                                  double tol) {
  require_range(c);
  WeightObjective value(covchsh_expression());
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < restarts; ++k) {
    auto rng = rng_for_restart(seed, k);
    std::vector<double> q = random_simplex_point(rng, 16);
    for (double weight : {1e3, 1e5, 1e7}) {
      auto penalized = [&](const std::vector<double>& w) {
        const double gap = value.value(w.data()) - c;
        return shannon_entropy(w) + weight * gap * gap;
      };
      NelderMeadOptions opts;
      opts.max_iter = 6000;
      opts.f_tol = 1e-13;
      opts.init_step = weight == 1e3 ? 0.15 : 0.02;
      q = nelder_mead(penalized, q, opts, project_to_simplex).x;
    }
    if (std::abs(value.value(q.data()) - c) <= tol) {
      best = std::min(best, shannon_entropy(q));
    }
  }
  return best;
}

}  // namespace covbell
