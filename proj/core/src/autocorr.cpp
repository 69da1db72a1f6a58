#include "netlds/autocorr.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace netlds {

Eigen::MatrixXd AutocorrSequence::at(int tau) const {
  const int abs_tau = tau < 0 ? -tau : tau;
  if (abs_tau >= static_cast<int>(lags.size())) {
    throw std::out_of_range("AutocorrSequence::at(): lag " + std::to_string(tau) + " not stored");
  }
  if (tau >= 0) return lags[abs_tau];
  return lags[abs_tau].transpose();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

AugmentedSystem augmented_system(const LdsModel& model) {
  const int p1 = model.node_count();
  const Eigen::MatrixXd gain = model.noise_gain.asDiagonal();

  AugmentedSystem sys;
  sys.transition = Eigen::MatrixXd::Zero(2 * p1, 2 * p1);
  sys.transition.topLeftCorner(p1, p1) = model.h;
  sys.transition.topRightCorner(p1, p1) = model.theta1 * gain;

  sys.input = Eigen::MatrixXd::Zero(2 * p1, p1);
  sys.input.topRows(p1) = model.theta0 * gain;
  sys.input.bottomRows(p1) = Eigen::MatrixXd::Identity(p1, p1);

  // Block-triangular with a zero lower-right block: the spectrum is that
  // of h plus zeros.
  sys.spectral_radius = model.spectral_radius();
  return sys;
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& transition, const Eigen::MatrixXd& rhs,
                                        double residual_tol) {
  if (transition.rows() != transition.cols() || rhs.rows() != rhs.cols() ||
      transition.rows() != rhs.rows()) {
    throw std::invalid_argument("solve_discrete_lyapunov(): dimension mismatch");
  }
  // Doubling: after step k, sigma equals the partial sum of A^j Q A^jT over
  // j < 2^k, the same series the plain iteration accumulates one term at a
  // time. Convergence requires rho(A) < 1.
  Eigen::MatrixXd sigma = rhs;
  Eigen::MatrixXd power = transition;
  constexpr int kMaxDoublings = 200;
  for (int iter = 0; iter < kMaxDoublings; ++iter) {
    const Eigen::MatrixXd update = power * sigma * power.transpose();
    sigma += update;
    if (!sigma.allFinite()) break;
    const Eigen::MatrixXd residual = transition * sigma * transition.transpose() + rhs - sigma;
    if (spectral_norm(residual) <= residual_tol) {
      return 0.5 * (sigma + sigma.transpose());
    }
    power = power * power;
  }
  throw std::runtime_error(
      "solve_discrete_lyapunov(): no convergence; transition is likely unstable");
}

AutocorrSequence analytic_autocorr(const LdsModel& model, int max_lag) {
  model.validate();
  if (max_lag < 0) {
    throw std::invalid_argument("analytic_autocorr(): max_lag must be >= 0");
  }
  const int p1 = model.node_count();
  const AugmentedSystem sys = augmented_system(model);
  const Eigen::MatrixXd q = sys.input * sys.input.transpose();
  const Eigen::MatrixXd sigma = solve_discrete_lyapunov(sys.transition, q);

  AutocorrSequence seq;
  seq.lags.reserve(max_lag + 1);
  Eigen::MatrixXd lagged = sigma;  // E[z(tau) z(0)^T] = A^tau Sigma
  seq.lags.push_back(lagged.topLeftCorner(p1, p1));
  for (int tau = 1; tau <= max_lag; ++tau) {
    lagged = sys.transition * lagged;
    seq.lags.push_back(lagged.topLeftCorner(p1, p1));
  }
  return seq;
}

AutocorrSequence analytic_autocorr_auto(const LdsModel& model) {
  model.validate();
  constexpr int kLagCap = 100000;
  const int p1 = model.node_count();
  const AugmentedSystem sys = augmented_system(model);
  const Eigen::MatrixXd q = sys.input * sys.input.transpose();
  const Eigen::MatrixXd sigma = solve_discrete_lyapunov(sys.transition, q);

  AutocorrSequence seq;
  Eigen::MatrixXd lagged = sigma;
  seq.lags.push_back(lagged.topLeftCorner(p1, p1));
  const double floor = 1e-12 * spectral_norm(seq.lags[0]);
  for (int tau = 1; tau <= kLagCap; ++tau) {
    lagged = sys.transition * lagged;
    Eigen::MatrixXd r = lagged.topLeftCorner(p1, p1);
    if (spectral_norm(r) < floor) break;
    seq.lags.push_back(std::move(r));
  }
  return seq;
}

}  // namespace netlds
