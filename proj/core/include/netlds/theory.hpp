#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>

#include "netlds/graph.hpp"
#include "netlds/lds_model.hpp"
#include "netlds/spectral.hpp"
#include "netlds/trajectory.hpp"
#include "netlds/wiener.hpp"

namespace netlds {

/// Scalar summaries of a model at one analysis frequency, computed for the
/// unit-PSD-diagonal rescaled process (the scale the estimator sees after
/// column normalization):
///   L, U     extreme eigenvalues of the inverse spectral density,
///   C, delta autocovariance envelope ||R_x(tau)||_2 <= C delta^-|tau|,
///   d        maximum two-hop degree,
///   m_i      per-node minimum |Im| of the regression coefficient over
///            true edges; m is the minimum over nodes.
/// delta is stored through delta_inv in [0, 1); delta_inv = 0 encodes a
/// white-state process (envelope vanishes beyond lag 0).
struct ModelConstants {
  double L = 0.0;
  double U = 0.0;
  double C = 0.0;
  double delta_inv = 0.0;
  int d = 0;
  double m = 0.0;
  Eigen::VectorXd m_i;
  double frequency = 0.0;

  double delta() const { return delta_inv > 0.0 ? 1.0 / delta_inv : std::numeric_limits<double>::infinity(); }
};

ModelConstants compute_constants(const LdsModel& model, const Graph& graph, double frequency);

/// Smallest trajectory length with a certified spectral gap:
/// ceil(4 C U delta^-1 / (1 - delta^-1)^2), clamped to at least 1.
int bound_N_min(const ModelConstants& constants);

/// The unspecified universal constants of the sample bounds; both default
/// to 1 and reports must flag terms that depend on them.
struct UniversalConstants {
  double c = 1.0;
  double c_prime = 1.0;
};

struct TheoryBounds {
  Regime regime = Regime::restart_record;
  double epsilon = 0.05;
  double lambda_lo = 0.0;   // evaluated at n = n_min
  double lambda_hi = 0.0;   // m / (1536 U sqrt(d))
  long long n_min = 0;
  int N_min = 0;
  double kappa = 0.0;       // 1 / (256 U)
  std::array<double, 3> epsilon_splits{};  // per-node eps1, eps2, eps3
  UniversalConstants universal;
  bool feasible = false;    // lambda_lo <= lambda_hi at n = n_min
};

/// Sufficient (lambda, n, N) thresholds for exact recovery of the whole
/// graph with probability 1 - epsilon. The consecutive regime requires
/// epsilon > 8/p. Throws on invalid epsilon.
TheoryBounds bound_lambda_and_n(const ModelConstants& constants, int p, double epsilon,
                                Regime regime, const UniversalConstants& universal = {});

/// Lower sufficient lambda at a given sample count n.
double lambda_lower(const ModelConstants& constants, int p, long long n, double epsilon,
                    Regime regime);

struct LambdaConditionReport {
  bool holds = false;
  double lhs = 0.0;  // (2/n) ||X^H (y - X w)||_inf
};

/// Checks the regularizer-dominance condition for a given lambda against
/// the exact coefficients `oracle` (already in the design's scale).
LambdaConditionReport diagnose_lambda_condition(const SpectralDesign& design,
                                                const WienerEstimate& oracle, double lambda);

struct RestrictedEigenvalueReport {
  double kappa_hat = 0.0;
};

/// Smallest (1/n)||X delta||^2 / ||delta||^2 over sampled members of the
/// error cone of the oracle's support (random in-support directions plus
/// off-support mass at the 3x cone boundary), optionally including a
/// measured error vector.
RestrictedEigenvalueReport diagnose_restricted_eigenvalue(
    const SpectralDesign& design, const WienerEstimate& oracle, int trials,
    std::uint64_t seed = 0x5eedULL,
    const Eigen::VectorXcd* measured_error = nullptr);

struct PsdGapReport {
  double gap = 0.0;         // ||Phi_x - Phi_hat||_2, unit-diagonal scale
  double bound = 0.0;       // 2 C delta^-1 / (N (1 - delta^-1)^2)
  double half_inv_U = 0.0;  // 1 / (2U)
  bool lemma_holds = false; // gap <= bound, and gap <= 1/(2U) when N >= N_min
};

PsdGapReport diagnose_psd_gap(const LdsModel& model, double frequency, int N);

}  // namespace netlds
