#include "covbell/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "covbell/errors.hpp"
#include "covbell/optim.hpp"

namespace covbell {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

const Matrix2c& pauli_x() {
  static const Matrix2c m = (Matrix2c() << 0, 1, 1, 0).finished();
  return m;
}
const Matrix2c& pauli_y() {
  static const Matrix2c m = (Matrix2c() << 0, -kI, kI, 0).finished();
  return m;
}
const Matrix2c& pauli_z() {
  static const Matrix2c m = (Matrix2c() << 1, 0, 0, -1).finished();
  return m;
}

Matrix4c kron2(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

double trace_with(const Matrix4c& rho, const Matrix4c& op) {
  return (rho * op).trace().real();
}

void require_theta(double theta) {
  if (!(theta > 0.0) || theta > M_PI / 2 + 1e-12) {
    throw input_error("theta must lie in (0, pi/2]");
  }
}

}  // namespace

TwoQubitState TwoQubitState::pure(const Vector4c& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw input_error("pure state vector must have unit norm");
  }
  return TwoQubitState(psi * psi.adjoint(), true);
}

TwoQubitState TwoQubitState::density(const Matrix4c& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw input_error("density matrix must be Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-12 ||
      std::abs(rho.trace().imag()) > 1e-12) {
    throw input_error("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw input_error("density matrix must be positive semidefinite");
  }
  const bool pure = (rho * rho - rho).cwiseAbs().maxCoeff() < 1e-10;
  return TwoQubitState(rho, pure);
}

TwoQubitState phi_theta(double theta) {
  require_theta(theta);
  Vector4c psi = Vector4c::Zero();
  psi(0) = std::cos(theta / 2);
  psi(3) = std::sin(theta / 2);
  return TwoQubitState::pure(psi);
}

TwoQubitState psi_theta(double theta) {
  require_theta(theta);
  Vector4c psi = Vector4c::Zero();
  psi(0) = std::sin(theta / 2);
  psi(3) = std::cos(theta / 2);
  return TwoQubitState::pure(psi);
}

TwoQubitState rho_theta(double theta) {
  require_theta(theta);
  const Matrix4c mix =
      0.5 * (phi_theta(theta).rho() + psi_theta(theta).rho());
  return TwoQubitState::density(mix);
}

TwoQubitState phi_plus() { return phi_theta(M_PI / 2); }

Matrix2c Observable::matrix() const {
  const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (n + std::abs(bias) > 1.0 + 1e-9) {
    throw input_error("observable eigenvalues exceed [-1, 1]");
  }
  return nx * pauli_x() + ny * pauli_y() + nz * pauli_z() +
         bias * Matrix2c::Identity();
}

Observable Observable::from_angles(double polar, double azimuth) {
  Observable o;
  o.nx = std::sin(polar) * std::cos(azimuth);
  o.ny = std::sin(polar) * std::sin(azimuth);
  o.nz = std::cos(polar);
  o.bias = 0.0;
  return o;
}

Correlators quantum_correlators(const QuantumStrategy& strat) {
  const int nx = static_cast<int>(strat.a_obs.size());
  const int ny = static_cast<int>(strat.b_obs.size());
  if (nx == 0 || ny == 0) throw input_error("empty observable list");
  const Matrix4c& rho = strat.state.rho();
  const Matrix2c id = Matrix2c::Identity();
  Correlators corr;
  corr.exy.assign(nx, std::vector<double>(ny, 0.0));
  corr.ex.assign(nx, 0.0);
  corr.ey.assign(ny, 0.0);
  corr.ex2.assign(nx, 0.0);
  corr.ey2.assign(ny, 0.0);
  std::vector<Matrix2c> a_ops, b_ops;
  for (const auto& o : strat.a_obs) a_ops.push_back(o.matrix());
  for (const auto& o : strat.b_obs) b_ops.push_back(o.matrix());
  for (int x = 0; x < nx; ++x) {
    corr.ex[x] = trace_with(rho, kron2(a_ops[x], id));
    corr.ex2[x] = trace_with(rho, kron2(a_ops[x] * a_ops[x], id));
  }
  for (int y = 0; y < ny; ++y) {
    corr.ey[y] = trace_with(rho, kron2(id, b_ops[y]));
    corr.ey2[y] = trace_with(rho, kron2(id, b_ops[y] * b_ops[y]));
  }
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      corr.exy[x][y] = trace_with(rho, kron2(a_ops[x], b_ops[y]));
  return corr;
}

namespace {

// parameter block per observable: 2 angles, or 4 values when unsharp
// (polar, azimuth, length channel, bias channel)
Observable observable_from_params(const double* p, bool unsharp) {
  if (!unsharp) return Observable::from_angles(p[0], p[1]);
  Observable o = Observable::from_angles(p[0], p[1]);
  const double r = std::abs(std::cos(p[2]));
  o.nx *= r;
  o.ny *= r;
  o.nz *= r;
  o.bias = (1.0 - r) * std::sin(p[3]);
  return o;
}

QuantumStrategy strategy_from_params(const TwoQubitState& state, int nx, int ny,
                                     const std::vector<double>& p,
                                     bool unsharp) {
  const int per = unsharp ? 4 : 2;
  QuantumStrategy s{state, {}, {}};
  for (int x = 0; x < nx; ++x)
    s.a_obs.push_back(observable_from_params(p.data() + per * x, unsharp));
  for (int y = 0; y < ny; ++y)
    s.b_obs.push_back(
        observable_from_params(p.data() + per * (nx + y), unsharp));
  return s;
}

}  // namespace

QuantumOptimum optimize_measurements(const TwoQubitState& state,
                                     const BellExpression& expr, int restarts,
                                     std::uint64_t seed, int jobs,
                                     bool allow_unsharp) {
  if (restarts <= 0) throw input_error("restarts must be positive");
  const int nx = expr.nX(), ny = expr.nY();
  const int per = allow_unsharp ? 4 : 2;
  const int dim = per * (nx + ny);
  auto objective = [&](const std::vector<double>& p) {
    return -evaluate(expr,
                     quantum_correlators(
                         strategy_from_params(state, nx, ny, p, allow_unsharp)));
  };

  struct Cand {
    double value = -1e300;
    std::vector<double> p;
    bool converged = false;
  };
  const std::size_t nchunks =
      jobs <= 1 ? 1
                : std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                        static_cast<std::size_t>(restarts));
  std::vector<std::vector<Cand>> parts(nchunks);
  std::vector<Cand> cands;
  cands.reserve(restarts);
  parallel_chunks(
      static_cast<std::size_t>(restarts), jobs,
      [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
        std::vector<Cand>& part = parts[chunk];
        for (std::size_t k = lo; k < hi; ++k) {
          auto rng = rng_for_restart(seed, k);
          std::uniform_real_distribution<double> unif(0.0, 1.0);
          std::vector<double> p0(dim);
          for (int i = 0; i < dim; ++i) {
            p0[i] = (i % per == 0) ? unif(rng) * M_PI : unif(rng) * 2.0 * M_PI;
          }
          NelderMeadOptions opts;
          opts.max_iter = 500 * dim;
          opts.f_tol = 1e-12;
          opts.init_step = 0.5;
          auto res = nelder_mead(objective, p0, opts);
          Cand c;
          c.value = -res.value;
          c.p = res.x;
          c.converged = res.converged;
          part.push_back(std::move(c));
        }
      },
      [&](std::size_t chunk) {
        for (auto& c : parts[chunk]) cands.push_back(std::move(c));
      });

  Cand best = cands.front();
  bool any_converged = false;
  for (const auto& c : cands) {
    any_converged = any_converged || c.converged;
    if (c.value > best.value) best = c;
  }
  // refine the winner with shrinking steps
  for (double step : {0.05, 0.005}) {
    NelderMeadOptions opts;
    opts.max_iter = 4000;
    opts.f_tol = 1e-14;
    opts.init_step = step;
    auto res = nelder_mead(objective, best.p, opts);
    if (-res.value > best.value) {
      best.value = -res.value;
      best.p = res.x;
    }
  }

  return QuantumOptimum{best.value,
                        strategy_from_params(state, nx, ny, best.p, allow_unsharp),
                        any_converged};
}

namespace {

ArcsinCheck arcsin_check(const std::vector<std::vector<double>>& c) {
  if (c.size() != 2 || c[0].size() != 2 || c[1].size() != 2) {
    throw input_error("arcsin conditions need a 2x2 scenario");
  }
  double asn[2][2];
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double v = c[x][y];
      if (std::abs(v) > 1.0 + 1e-12) {
        throw input_error("correlation magnitude exceeds 1");
      }
      asn[x][y] = std::asin(std::clamp(v, -1.0, 1.0));
    }
  }
  double worst = 1e300;
  for (int mx = 0; mx < 2; ++mx) {
    for (int my = 0; my < 2; ++my) {
      double s = 0.0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          s += (x == mx && y == my) ? -asn[x][y] : asn[x][y];
      worst = std::min(worst, M_PI - std::abs(s));
    }
  }
  ArcsinCheck out;
  out.worst_margin = worst;
  out.pass = worst >= -kArcsinSlack;
  return out;
}

}  // namespace

ArcsinCheck tsirelson_check_cov(const Correlators& corr) {
  std::vector<std::vector<double>> c(2, std::vector<double>(2));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) c[x][y] = covariance(corr, x, y);
  return arcsin_check(c);
}

ArcsinCheck tsirelson_check_pearson(const Correlators& corr) {
  std::vector<std::vector<double>> c(2, std::vector<double>(2));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) c[x][y] = pearson(corr, x, y);
  return arcsin_check(c);
}

Matrix4c gamma_matrix(const QuantumStrategy& strat) {
  if (strat.a_obs.size() != 2 || strat.b_obs.size() != 2) {
    throw input_error("gamma matrix is defined for the 2x2 scenario");
  }
  const Matrix4c& rho = strat.state.rho();
  const Matrix2c id = Matrix2c::Identity();
  auto corr = quantum_correlators(strat);
  std::vector<Matrix4c> g;
  for (int x = 0; x < 2; ++x)
    g.push_back(kron2(strat.a_obs[x].matrix() - corr.ex[x] * id, id));
  for (int y = 0; y < 2; ++y)
    g.push_back(kron2(id, strat.b_obs[y].matrix() - corr.ey[y] * id));
  Matrix4c gamma;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      gamma(i, j) = (rho * g[i].adjoint() * g[j]).trace();
  return gamma;
}

double gamma_min_eigenvalue(const QuantumStrategy& strat) {
  const Matrix4c gamma = gamma_matrix(strat);
  const Matrix4c herm = 0.5 * (gamma + gamma.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm);
  return es.eigenvalues().minCoeff();
}

double activation_reference_pure(double theta) {
  return 2.0 * std::sqrt(2.0) * std::sin(theta);
}

double activation_reference_mixed(double theta) {
  const double s = std::sin(theta);
  return 2.0 * std::sqrt(1.0 + s * s);
}

std::vector<ActivationPoint> activation_curve(double from, double to, int steps,
                                              int restarts, std::uint64_t seed,
                                              int jobs) {
  if (steps < 2) throw input_error("curve needs at least 2 steps");
  require_theta(from);
  require_theta(to);
  const auto expr = covchsh_expression();
  std::vector<ActivationPoint> out;
  for (int i = 0; i < steps; ++i) {
    const double theta = from + (to - from) * i / (steps - 1);
    ActivationPoint p;
    p.theta = theta;
    p.pure_opt =
        optimize_measurements(phi_theta(theta), expr, restarts, seed, jobs)
            .value;
    p.mixed_opt =
        optimize_measurements(rho_theta(theta), expr, restarts, seed, jobs)
            .value;
    p.pure_ref = activation_reference_pure(theta);
    p.mixed_ref = activation_reference_mixed(theta);
    out.push_back(p);
  }
  return out;
}

double pure_crossing_reference() { return std::asin(8.0 / (7.0 * std::sqrt(2.0))); }
double mixed_crossing_reference() { return std::asin(std::sqrt(15.0) / 7.0); }

ActivationCrossings activation_crossings(int restarts, std::uint64_t seed,
                                         int jobs) {
  const auto expr = covchsh_expression();
  const double bound = 16.0 / 7.0;
  auto bisect = [&](auto state_of, double lo, double hi) {
    auto above = [&](double theta) {
      return optimize_measurements(state_of(theta), expr, restarts, seed, jobs)
                 .value > bound;
    };
    if (above(lo) || !above(hi)) {
      throw non_convergence("activation crossing not bracketed");
    }
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      (above(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  ActivationCrossings out;
  out.mixed_crossing =
      bisect([](double t) { return rho_theta(t); }, 0.3, 0.9);
  out.pure_crossing =
      bisect([](double t) { return phi_theta(t); }, 0.7, 1.2);
  return out;
}

QuantumStrategy pure_reference_strategy(double theta) {
  const double r = 1.0 / std::sqrt(2.0);
  QuantumStrategy s{phi_theta(theta), {}, {}};
  s.a_obs.push_back({1, 0, 0, 0});
  s.a_obs.push_back({0, 1, 0, 0});
  s.b_obs.push_back({r, -r, 0, 0});
  s.b_obs.push_back({r, r, 0, 0});
  return s;
}

QuantumStrategy mixed_reference_strategy(double theta) {
  const double sn = std::sin(theta);
  const double norm = std::sqrt(1.0 + sn * sn);
  QuantumStrategy s{rho_theta(theta), {}, {}};
  s.a_obs.push_back({0, 0, 1, 0});
  s.a_obs.push_back({1, 0, 0, 0});
  s.b_obs.push_back({sn / norm, 0, 1.0 / norm, 0});
  s.b_obs.push_back({-sn / norm, 0, 1.0 / norm, 0});
  return s;
}

QuantumStrategy chsh_reference_strategy() {
  const double r = 1.0 / std::sqrt(2.0);
  QuantumStrategy s{phi_plus(), {}, {}};
  s.a_obs.push_back({0, 0, 1, 0});
  s.a_obs.push_back({1, 0, 0, 0});
  s.b_obs.push_back({r, 0, r, 0});
  s.b_obs.push_back({-r, 0, r, 0});
  return s;
}

QuantumStrategy rotated_chsh_strategy(double phi) {
  QuantumStrategy s = chsh_reference_strategy();
  const double c = std::cos(phi), sn = std::sin(phi);
  for (auto& o : s.b_obs) {
    const double x = o.nx, z = o.nz;
    o.nx = x * c + z * sn;
    o.nz = -x * sn + z * c;
  }
  return s;
}

QuantumStrategy i3322_reference_strategy() {
  QuantumStrategy s{phi_plus(), {}, {}};
  const double a_az[3] = {0.0, M_PI / 3, 2 * M_PI / 3};
  const double b_az[3] = {-M_PI / 3, 0.0, M_PI / 3};
  for (double az : a_az) s.a_obs.push_back({std::cos(az), std::sin(az), 0, 0});
  for (double az : b_az) s.b_obs.push_back({std::cos(az), std::sin(az), 0, 0});
  return s;
}

}  // namespace covbell
