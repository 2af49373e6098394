#include "covbell/local_bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "covbell/errors.hpp"
#include "covbell/kernels.hpp"
#include "covbell/optim.hpp"

namespace covbell {

namespace {

constexpr double kTieTol = 1e-9;
constexpr double kSupportTol = 1e-9;
constexpr double kSigmaZero = 1e-10;  // matches the Pearson sigma convention

}  // namespace

const std::vector<std::vector<int>>& chsh_strategy_matrix() {
  static const std::vector<std::vector<int>> c = [] {
    std::vector<std::vector<int>> m(16, std::vector<int>(16, 0));
    auto strat = enumerate_deterministic(2, 2);
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        const auto& a = strat[i].a_out;
        const auto& b = strat[j].b_out;
        m[i][j] = a[0] * b[0] + a[0] * b[1] + a[1] * b[0] - a[1] * b[1];
      }
    }
    return m;
  }();
  return c;
}

double covchsh_of_weights(const LocalDecomposition& d) {
  if (d.nx != 2 || d.ny != 2 || d.weights.size() != 16) {
    throw input_error("covchsh_of_weights expects 16 weights over 2x2 strategies");
  }
  static const std::vector<double> flat = [] {
    const auto& c = chsh_strategy_matrix();
    std::vector<double> f(256);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) f[16 * i + j] = c[i][j];
    return f;
  }();
  static const std::vector<double> diag = [] {
    const auto& c = chsh_strategy_matrix();
    std::vector<double> d16(16);
    for (int i = 0; i < 16; ++i) d16[i] = c[i][i];
    return d16;
  }();
  const double* q = d.weights.data();
  return kernels::dot(diag.data(), q, 16) - kernels::quad_form(flat.data(), q, 16);
}

Rational covchsh_of_weights_exact(const std::vector<Rational>& q16) {
  if (q16.size() != 16) throw input_error("expected 16 weights");
  const auto& c = chsh_strategy_matrix();
  Rational lin = 0, quad = 0;
  for (int i = 0; i < 16; ++i) {
    lin += q16[i] * c[i][i];
    for (int j = 0; j < 16; ++j) quad += q16[i] * q16[j] * c[i][j];
  }
  return lin - quad;
}

WeightObjective::WeightObjective(CorrKind kind,
                                 std::vector<std::vector<double>> coeffs,
                                 std::vector<double> marginal_a,
                                 std::vector<double> marginal_b)
    : kind_(kind), coeffs_(std::move(coeffs)) {
  nx_ = static_cast<int>(coeffs_.size());
  ny_ = nx_ > 0 ? static_cast<int>(coeffs_[0].size()) : 0;
  if (nx_ <= 0 || ny_ <= 0) throw input_error("empty coefficient matrix");
  marginal_a_ = marginal_a.empty() ? std::vector<double>(nx_, 0.0) : std::move(marginal_a);
  marginal_b_ = marginal_b.empty() ? std::vector<double>(ny_, 0.0) : std::move(marginal_b);
  if (static_cast<int>(marginal_a_.size()) != nx_ ||
      static_cast<int>(marginal_b_.size()) != ny_) {
    throw input_error("marginal coefficient length mismatch");
  }
  n_ = 1 << (nx_ + ny_);
  auto strat = enumerate_deterministic(nx_, ny_);
  ax_.assign(nx_, std::vector<double>(n_));
  by_.assign(ny_, std::vector<double>(n_));
  prod_.assign(static_cast<std::size_t>(nx_) * ny_, std::vector<double>(n_));
  for (int k = 0; k < n_; ++k) {
    for (int x = 0; x < nx_; ++x) ax_[x][k] = strat[k].a_out[x];
    for (int y = 0; y < ny_; ++y) by_[y][k] = strat[k].b_out[y];
    for (int x = 0; x < nx_; ++x)
      for (int y = 0; y < ny_; ++y)
        prod_[x * ny_ + y][k] = strat[k].a_out[x] * strat[k].b_out[y];
  }
}

WeightObjective::WeightObjective(const BellExpression& expr)
    : WeightObjective(expr.kind,
                      [&] {
                        std::vector<std::vector<double>> c(expr.signs.size());
                        for (std::size_t i = 0; i < expr.signs.size(); ++i)
                          c[i].assign(expr.signs[i].begin(), expr.signs[i].end());
                        return c;
                      }(),
                      std::vector<double>(expr.marginal_a.begin(), expr.marginal_a.end()),
                      std::vector<double>(expr.marginal_b.begin(), expr.marginal_b.end())) {}

double WeightObjective::value(const double* q) const {
  double ea[8], eb[8];
  for (int x = 0; x < nx_; ++x) ea[x] = kernels::dot(ax_[x].data(), q, n_);
  for (int y = 0; y < ny_; ++y) eb[y] = kernels::dot(by_[y].data(), q, n_);
  double total = 0.0;
  for (int x = 0; x < nx_; ++x) {
    for (int y = 0; y < ny_; ++y) {
      const double s = coeffs_[x][y];
      if (s == 0.0) continue;
      const double exy = kernels::dot(prod_[x * ny_ + y].data(), q, n_);
      switch (kind_) {
        case CorrKind::raw:
          total += s * exy;
          break;
        case CorrKind::covariance:
          total += s * (exy - ea[x] * eb[y]);
          break;
        case CorrKind::pearson: {
          // binary +-1 outputs: <A^2> = <B^2> = 1 exactly
          const double sa = std::sqrt(std::max(0.0, 1.0 - ea[x] * ea[x]));
          const double sb = std::sqrt(std::max(0.0, 1.0 - eb[y] * eb[y]));
          if (sa >= kSigmaZero && sb >= kSigmaZero) {
            total += s * (exy - ea[x] * eb[y]) / (sa * sb);
          }
          break;
        }
      }
    }
  }
  for (int x = 0; x < nx_; ++x) total += marginal_a_[x] * ea[x];
  for (int y = 0; y < ny_; ++y) total += marginal_b_[y] * eb[y];
  return total;
}

void WeightObjective::gradient(const double* q, double* g) const {
  double ea[8], eb[8];
  for (int x = 0; x < nx_; ++x) ea[x] = kernels::dot(ax_[x].data(), q, n_);
  for (int y = 0; y < ny_; ++y) eb[y] = kernels::dot(by_[y].data(), q, n_);
  for (int k = 0; k < n_; ++k) {
    double gk = 0.0;
    for (int x = 0; x < nx_; ++x) {
      for (int y = 0; y < ny_; ++y) {
        const double s = coeffs_[x][y];
        if (s == 0.0) continue;
        const double ab = prod_[x * ny_ + y][k];
        if (kind_ == CorrKind::raw) {
          gk += s * ab;
        } else {
          gk += s * (ab - ax_[x][k] * eb[y] - by_[y][k] * ea[x]);
        }
      }
    }
    for (int x = 0; x < nx_; ++x) gk += marginal_a_[x] * ax_[x][k];
    for (int y = 0; y < ny_; ++y) gk += marginal_b_[y] * by_[y][k];
    g[k] = gk;
  }
}

double weight_expression_value(const BellExpression& expr,
                               const LocalDecomposition& d) {
  WeightObjective obj(expr);
  if (obj.weight_count() != static_cast<int>(d.weights.size())) {
    throw input_error("weight count does not match the expression scenario");
  }
  return obj.value(d.weights);
}

namespace {

struct Candidate {
  double value = -1e300;
  std::vector<double> q;
  std::vector<int> support;
};

std::vector<int> support_of(const std::vector<double>& q) {
  std::vector<int> s;
  for (int i = 0; i < static_cast<int>(q.size()); ++i)
    if (q[i] > kSupportTol) s.push_back(i);
  return s;
}

// value desc (1e-9 window), then support size asc, then lexicographic support
bool better_candidate(const Candidate& a, const Candidate& b) {
  if (a.value > b.value + kTieTol) return true;
  if (b.value > a.value + kTieTol) return false;
  if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
  if (a.support != b.support) return a.support < b.support;
  return false;
}

// Exact line search for the quadratic kinds: f restricted to a segment is a
// parabola, recovered from three evaluations.
double segment_argmax_quadratic(const WeightObjective& f,
                                const std::vector<double>& q,
                                const std::vector<double>& d, double tmax,
                                std::vector<double>& scratch) {
  const int n = static_cast<int>(q.size());
  auto eval_at = [&](double t) {
    for (int i = 0; i < n; ++i) scratch[i] = q[i] + t * d[i];
    return f.value(scratch.data());
  };
  const double f0 = eval_at(0.0);
  const double fh = eval_at(0.5 * tmax);
  const double f1 = eval_at(tmax);
  const double c2 = 2.0 * (f0 + f1) - 4.0 * fh;  // curvature * tmax^2
  const double c1 = f1 - f0 - c2;                // slope * tmax (at t=0, scaled)
  double t;
  if (c2 < -1e-300) {
    t = std::clamp(-c1 / (2.0 * c2), 0.0, 1.0);
  } else {
    t = f1 > f0 ? 1.0 : 0.0;
  }
  return t * tmax;
}

// Frank-Wolfe climb toward the gradient-best vertex with exact line search.
void frank_wolfe_polish(const WeightObjective& f, std::vector<double>& q,
                        double& fq, int max_iter) {
  const int n = static_cast<int>(q.size());
  std::vector<double> g(n), d(n), trial(n), scratch(n);
  for (int it = 0; it < max_iter; ++it) {
    f.gradient(q.data(), g.data());
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (g[i] > g[best]) best = i;
    for (int i = 0; i < n; ++i) d[i] = (i == best ? 1.0 : 0.0) - q[i];
    const double t = segment_argmax_quadratic(f, q, d, 1.0, scratch);
    if (t <= 0.0) break;
    for (int i = 0; i < n; ++i) trial[i] = q[i] + t * d[i];
    const double fn = f.value(trial.data());
    if (fn <= fq + 1e-15) break;
    q = trial;
    fq = fn;
  }
}

// Coordinate polish that works for any kind: line searches toward each vertex
// and pairwise weight transfers, golden-section on each segment.
void coordinate_polish(const WeightObjective& f, std::vector<double>& q,
                       double& fq, int max_rounds) {
  const int n = static_cast<int>(q.size());
  std::vector<double> scratch(n);
  for (int round = 0; round < max_rounds; ++round) {
    const double before = fq;
    for (int v = 0; v < n; ++v) {
      auto seg = [&](double t) {
        for (int i = 0; i < n; ++i)
          scratch[i] = (1.0 - t) * q[i] + (i == v ? t : 0.0);
        return -f.value(scratch.data());
      };
      const double t = golden_section_min(seg, 0.0, 1.0, 1e-13);
      const double cand = -seg(t);
      if (cand > fq + 1e-15) {
        for (int i = 0; i < n; ++i) q[i] = (1.0 - t) * q[i] + (i == v ? t : 0.0);
        fq = cand;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || q[j] <= 0.0) continue;
        const double cap = q[j];
        auto seg = [&](double delta) {
          for (int k = 0; k < n; ++k) scratch[k] = q[k];
          scratch[i] += delta;
          scratch[j] -= delta;
          return -f.value(scratch.data());
        };
        const double delta = golden_section_min(seg, 0.0, cap, 1e-13);
        const double cand = -seg(delta);
        if (cand > fq + 1e-15) {
          q[i] += delta;
          q[j] -= delta;
          fq = cand;
        }
      }
    }
    if (fq <= before + 1e-13) break;
  }
}

Candidate finish_candidate(const WeightObjective& f, std::vector<double> q) {
  // trim numerically-dead weights and renormalize before judging support
  double sum = 0.0;
  for (double& w : q) {
    if (w < kSupportTol) w = 0.0;
    sum += w;
  }
  if (sum <= 0.0) {
    q.assign(q.size(), 0.0);
    q[0] = 1.0;
    sum = 1.0;
  }
  for (double& w : q) w /= sum;
  Candidate c;
  c.value = f.value(q.data());
  c.support = support_of(q);
  c.q = std::move(q);
  return c;
}

LocalBoundResult optimize_weights(const WeightObjective& f, int restarts,
                                  double tol, std::uint64_t seed, int jobs) {
  const int n = f.weight_count();
  struct ChunkOut {
    std::vector<Candidate> cands;
    bool any_converged = false;
  };
  const std::size_t nchunks =
      jobs <= 1 ? 1
                : std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                        static_cast<std::size_t>(restarts));
  std::vector<ChunkOut> parts(nchunks);
  std::vector<Candidate> all;
  all.reserve(restarts);
  bool any_converged = false;
  parallel_chunks(
      static_cast<std::size_t>(restarts), jobs,
      [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
        ChunkOut& out = parts[chunk];
        NelderMeadOptions opts;
        opts.max_iter = 400 * n;
        opts.f_tol = std::min(tol, 1e-12);
        for (std::size_t k = lo; k < hi; ++k) {
          auto rng = rng_for_restart(seed, k);
          std::vector<double> q0 =
              random_simplex_point(rng, static_cast<std::size_t>(n));
          auto neg = [&](const std::vector<double>& q) { return -f.value(q.data()); };
          auto res = nelder_mead(neg, q0, opts, project_to_simplex);
          std::vector<double> q = res.x;
          double fq = -res.value;
          if (f.is_quadratic()) frank_wolfe_polish(f, q, fq, 2000);
          Candidate c;
          c.value = fq;
          c.q = std::move(q);
          c.support = support_of(c.q);
          out.cands.push_back(std::move(c));
          out.any_converged = out.any_converged || res.converged;
        }
      },
      [&](std::size_t chunk) {
        for (auto& c : parts[chunk].cands) all.push_back(std::move(c));
        any_converged = any_converged || parts[chunk].any_converged;
      });

  // deterministic reduction in restart order, independent of chunking
  Candidate best = all.front();
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (better_candidate(all[i], best)) best = all[i];
  }

  // deep polish on the winner only
  double fq = best.value;
  if (f.is_quadratic()) frank_wolfe_polish(f, best.q, fq, 5000);
  coordinate_polish(f, best.q, fq, 50);
  Candidate final = finish_candidate(f, std::move(best.q));

  // a trimmed weight may nudge the value; keep polishing if it moved
  if (final.value < fq - tol) {
    double fv = final.value;
    coordinate_polish(f, final.q, fv, 10);
    final = finish_candidate(f, std::move(final.q));
  }

  LocalBoundResult out;
  out.bound = final.value;
  out.best.nx = f.nX();
  out.best.ny = f.nY();
  out.best.weights = std::move(final.q);
  out.converged = any_converged;
  out.restarts = restarts;
  return out;
}

}  // namespace

LocalBoundResult numeric_local_bound(const BellExpression& expr, int nx, int ny,
                                     int restarts, double tol,
                                     std::uint64_t seed, int jobs) {
  if (static_cast<int>(expr.signs.size()) != nx ||
      static_cast<int>(expr.signs[0].size()) != ny) {
    throw input_error("scenario size does not match the expression");
  }
  if (restarts <= 0) throw input_error("restarts must be positive");
  WeightObjective f(expr);
  return optimize_weights(f, restarts, tol, seed, jobs);
}

std::vector<ScanPoint> localset_scan(int directions, int restarts, double tol,
                                     std::uint64_t seed, int jobs) {
  if (directions <= 0) throw input_error("directions must be positive");
  const auto covchsh = expression_by_name("covchsh");
  const auto covchsh_p = expression_by_name("covchsh_prime");
  WeightObjective eval_main(covchsh);
  WeightObjective eval_prime(covchsh_p);
  std::vector<ScanPoint> points;
  points.reserve(directions);
  for (int i = 0; i < directions; ++i) {
    const double theta = 2.0 * M_PI * i / directions;
    const double ct = std::cos(theta), st = std::sin(theta);
    std::vector<std::vector<double>> coeffs(2, std::vector<double>(2));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        coeffs[x][y] = ct * covchsh.signs[x][y] + st * covchsh_p.signs[x][y];
    WeightObjective f(CorrKind::covariance, coeffs, {}, {});
    auto res = optimize_weights(f, restarts, tol, seed + static_cast<std::uint64_t>(i), jobs);
    ScanPoint p;
    p.theta = theta;
    p.covchsh = eval_main.value(res.best.weights);
    p.covchsh_prime = eval_prime.value(res.best.weights);
    points.push_back(p);
  }
  return points;
}

}  // namespace covbell
