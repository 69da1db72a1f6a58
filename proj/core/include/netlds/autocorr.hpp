#pragma once

#include <Eigen/Core>
#include <vector>

#include "netlds/lds_model.hpp"

namespace netlds {

/// Stationary lagged covariances R_x(tau) = E[x(tau) x(0)^T] for
/// tau = 0..max_lag. Negative lags follow from R_x(-tau) = R_x(tau)^T.
struct AutocorrSequence {
  std::vector<Eigen::MatrixXd> lags;

  int max_lag() const { return static_cast<int>(lags.size()) - 1; }

  /// R_x(tau) for any integer tau within the stored range.
  Eigen::MatrixXd at(int tau) const;
};

/// State-space form of the model with the MA(1) memory appended:
/// z(k) = [x(k); w(k-1)], z(k+1) = A z(k) + B w(k), w white with unit
/// covariance. transition has spectral radius equal to the model's.
struct AugmentedSystem {
  Eigen::MatrixXd transition;  // A, (2 p1) x (2 p1)
  Eigen::MatrixXd input;       // B, (2 p1) x p1
  double spectral_radius = 0.0;
};

AugmentedSystem augmented_system(const LdsModel& model);

/// Stationary solution of S = A S A^T + Q for rho(A) < 1, computed by the
/// doubling form of the fixed-point iteration S <- A S A^T + Q. The
/// returned matrix satisfies the equation with spectral-norm residual at
/// most `residual_tol`; throws if that cannot be reached.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& transition, const Eigen::MatrixXd& rhs,
                                        double residual_tol = 1e-10);

/// Exact stationary autocovariances of the model: R_x(0) from the Lyapunov
/// equation of the augmented system, then R_x(tau) by repeated application
/// of the augmented transition.
AutocorrSequence analytic_autocorr(const LdsModel& model, int max_lag);

/// Picks the lag cutoff as the smallest tau with
/// ||R_x(tau)||_2 < 1e-12 ||R_x(0)||_2, capped at 1e5.
AutocorrSequence analytic_autocorr_auto(const LdsModel& model);

double spectral_norm(const Eigen::MatrixXd& m);

}  // namespace netlds
