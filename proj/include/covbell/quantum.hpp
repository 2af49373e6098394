#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "covbell/correlations.hpp"
#include "covbell/expressions.hpp"

namespace covbell {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Two-qubit state, stored as a density matrix. Construction validates:
// unit norm within 1e-12 for pure states; Hermitian, trace 1 within 1e-12,
// eigenvalues >= -1e-12 for density matrices.
class TwoQubitState {
 public:
  static TwoQubitState pure(const Vector4c& psi);
  static TwoQubitState density(const Matrix4c& rho);

  const Matrix4c& rho() const { return rho_; }
  bool is_pure() const { return pure_; }

 private:
  TwoQubitState(Matrix4c rho, bool pure) : rho_(std::move(rho)), pure_(pure) {}
  Matrix4c rho_;
  bool pure_;
};

// The partially-entangled pair cos(theta/2)|00> + sin(theta/2)|11>, its
// coefficient-swapped twin, and their equal mixture. theta in (0, pi/2].
TwoQubitState phi_theta(double theta);
TwoQubitState psi_theta(double theta);
TwoQubitState rho_theta(double theta);
TwoQubitState phi_plus();  // the maximally entangled (|00>+|11>)/sqrt(2)

// Qubit observable n.sigma + bias*I with eigenvalues bias +- |n| in [-1, 1].
struct Observable {
  double nx = 0.0, ny = 0.0, nz = 1.0;
  double bias = 0.0;

  Matrix2c matrix() const;
  static Observable from_angles(double polar, double azimuth);  // |n| = 1
};

struct QuantumStrategy {
  TwoQubitState state;
  std::vector<Observable> a_obs;
  std::vector<Observable> b_obs;
};

// <AxBy> = Tr[rho (Ax x By)], marginals and second moments likewise.
Correlators quantum_correlators(const QuantumStrategy& strat);

struct QuantumOptimum {
  double value = 0.0;
  QuantumStrategy strategy;
  bool converged = false;
};

// Multi-start Nelder-Mead over the observables' spherical angles (plus length
// and bias when allow_unsharp). Deterministic for fixed seed/restarts,
// independent of jobs.
QuantumOptimum optimize_measurements(const TwoQubitState& state,
                                     const BellExpression& expr,
                                     int restarts = 100,
                                     std::uint64_t seed = 42, int jobs = 1,
                                     bool allow_unsharp = false);

// Second-order necessary condition on quantum 2x2 correlations: every signed
// arcsin sum (one minus sign, any position, either overall orientation) stays
// within pi. worst_margin = min over placements of pi - |sum|.
struct ArcsinCheck {
  bool pass = false;
  double worst_margin = 0.0;
};
ArcsinCheck tsirelson_check_cov(const Correlators& corr);
ArcsinCheck tsirelson_check_pearson(const Correlators& corr);
inline constexpr double kArcsinSlack = 1e-9;

// Gram matrix of the centered measurement vectors (A0, A1, B0, B1 order):
// diagonal carries variances, AB off-diagonals the covariances, AA/BB entries
// the simulated cross inner products. Positive semidefinite for any strategy.
Matrix4c gamma_matrix(const QuantumStrategy& strat);
double gamma_min_eigenvalue(const QuantumStrategy& strat);

// Best covCHSH as a function of theta, for the pure state and the mixture,
// against the closed-form references 2*sqrt(2)*sin(theta) and
// 2*sqrt(1+sin(theta)^2).
struct ActivationPoint {
  double theta = 0.0;
  double pure_opt = 0.0;
  double mixed_opt = 0.0;
  double pure_ref = 0.0;
  double mixed_ref = 0.0;
};
std::vector<ActivationPoint> activation_curve(double from, double to, int steps,
                                              int restarts = 100,
                                              std::uint64_t seed = 42,
                                              int jobs = 1);
double activation_reference_pure(double theta);
double activation_reference_mixed(double theta);

// Where the optimized curves cross the local bound 16/7, found by bisection
// on the numeric optimizer.
struct ActivationCrossings {
  double pure_crossing = 0.0;
  double mixed_crossing = 0.0;
};
ActivationCrossings activation_crossings(int restarts = 40,
                                         std::uint64_t seed = 42, int jobs = 1);
double pure_crossing_reference();   // asin(8/(7 sqrt 2))  ~ 0.9409
double mixed_crossing_reference();  // asin(sqrt(15)/7)    ~ 0.5864

// Settings attaining the closed-form optima at a given theta: phi_theta with
// A in {x, y}, B along (x -+ y)/sqrt2 gives covCHSH = 2 sqrt(2) sin(theta);
// rho_theta with A in {z, x}, B along z +- sin(theta) x (normalized) gives
// covCHSH = 2 sqrt(1 + sin(theta)^2).
QuantumStrategy pure_reference_strategy(double theta);
QuantumStrategy mixed_reference_strategy(double theta);

// Maximal-violation settings: phi+ with A in {z, x} and B in {(z+x)/sqrt2,
// (z-x)/sqrt2}; all marginals vanish and CHSH-type values reach 2*sqrt(2).
QuantumStrategy chsh_reference_strategy();

// Same state with Bob's settings rotated by phi about the Bloch y-axis;
// sweeps the circle of radius 2*sqrt(2) in the (covCHSH, covCHSH') plane.
QuantumStrategy rotated_chsh_strategy(double phi);

// Equatorial settings reaching 5 on both the three-input inequality and its
// covariance form: azimuths (0, pi/3, 2pi/3) for A, (-pi/3, 0, pi/3) for B.
QuantumStrategy i3322_reference_strategy();

}  // namespace covbell
