#include "netlds/theory.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netlds/rng.hpp"

namespace netlds {

namespace {

constexpr double kDegenerateMargin = 1e-12;

// Envelope fit: delta^-1 from the asymptotic decay rate with a 1e-6
// multiplicative margin; when the transition is (numerically) nilpotent
// the rate is read off the computed lag ratios instead, since no
// multiplicative margin of zero yields a finite C.
double fit_delta_inv(const AutocorrSequence& seq, double rho_aug) {
  if (rho_aug >= 1e-9) return std::min(rho_aug * (1.0 + 1e-6), 1.0 - 1e-12);
  const double base = spectral_norm(seq.lags[0]);
  double rate = 0.0;
  for (int tau = 1; tau <= seq.max_lag(); ++tau) {
    const double norm = spectral_norm(seq.lags[tau]);
    if (norm <= 1e-12 * base) continue;
    rate = std::max(rate, std::pow(norm / base, 1.0 / tau));
  }
  return rate;
}

// L, U and the (C, delta) envelope of the unit-diagonal rescaled process;
// shared by compute_constants and diagnose_psd_gap (the latter has no use
// for the margin part and must work on edgeless models).
ModelConstants envelope_constants(const LdsModel& model, const NormalizedPsd& normalized,
                                  double frequency) {
  ModelConstants out;
  out.frequency = frequency;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(normalized.psd.matrix);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("compute_constants(): eigendecomposition failed");
  }
  const double eig_min = es.eigenvalues().minCoeff();
  const double eig_max = es.eigenvalues().maxCoeff();
  if (eig_min <= 0.0) {
    throw std::runtime_error("compute_constants(): spectral density is not positive definite");
  }
  out.L = 1.0 / eig_max;
  out.U = 1.0 / eig_min;

  // Envelope of the rescaled autocovariances D^-1 R_x(tau) D^-1.
  AutocorrSequence seq = analytic_autocorr_auto(model);
  const Eigen::VectorXd inv_scales = normalized.scales.cwiseInverse();
  for (auto& lag : seq.lags) lag = inv_scales.asDiagonal() * lag * inv_scales.asDiagonal();

  const AugmentedSystem sys = augmented_system(model);
  out.delta_inv = fit_delta_inv(seq, sys.spectral_radius);
  out.C = spectral_norm(seq.lags[0]);
  if (out.delta_inv > 0.0) {
    for (int tau = 1; tau <= seq.max_lag(); ++tau) {
      out.C = std::max(out.C, spectral_norm(seq.lags[tau]) * std::pow(out.delta_inv, -tau));
    }
  }
  return out;
}

}  // namespace

ModelConstants compute_constants(const LdsModel& model, const Graph& graph, double frequency) {
  model.validate();
  model.validate_support(graph);
  if (graph.edge_count() == 0) {
    throw std::invalid_argument("compute_constants(): graph has no edges; separation margin undefined");
  }
  const int p1 = model.node_count();

  // All quantities refer to the unit-diagonal rescaled process: divide the
  // state by the square root of its spectral density at the analysis
  // frequency, which is the population analogue of column normalization.
  const SpectralMatrix raw_psd = analytic_psd(model, frequency);
  const NormalizedPsd normalized = normalize_unit_diagonal(raw_psd);

  ModelConstants out = envelope_constants(model, normalized, frequency);
  out.d = max_two_hop_degree(graph);

  out.m_i = Eigen::VectorXd::Constant(p1, std::numeric_limits<double>::infinity());
  for (int i = 0; i < p1; ++i) {
    if (graph.degree(i) == 0) continue;
    const WienerEstimate w = exact_wiener(normalized.psd, i);
    for (int j : graph.neighbors(i)) {
      const int l = j < i ? j : j - 1;
      out.m_i(i) = std::min(out.m_i(i), std::abs(w.coefficients(l).imag()));
    }
  }
  out.m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p1; ++i) out.m = std::min(out.m, out.m_i(i));
  if (!(out.m > kDegenerateMargin)) {
    throw std::runtime_error(
        "compute_constants(): a true edge has a vanishing imaginary regression coefficient "
        "(m = " + std::to_string(out.m) + "); thresholds cannot separate edges at this frequency");
  }
  return out;
}

int bound_N_min(const ModelConstants& constants) {
  const double di = constants.delta_inv;
  if (di <= 0.0) return 1;
  const double value = 4.0 * constants.C * constants.U * di / ((1.0 - di) * (1.0 - di));
  return std::max(1, static_cast<int>(std::ceil(value)));
}

namespace {

// 3 + 24 sqrt(3) U C / (delta - 1); collapses to 3 for white states.
double consecutive_multiplier(const ModelConstants& constants) {
  if (constants.delta_inv <= 0.0) return 3.0;
  const double delta_minus_1 = 1.0 / constants.delta_inv - 1.0;
  return 3.0 + 24.0 * std::sqrt(3.0) * constants.U * constants.C / delta_minus_1;
}

long long ceil_to_count(double value) {
  if (!std::isfinite(value)) {
    throw std::runtime_error("bound_lambda_and_n(): sample bound overflow");
  }
  const double c = std::ceil(value);
  if (c >= 9.0e18) return static_cast<long long>(9.0e18);
  return std::max(1LL, static_cast<long long>(c));
}

}  // namespace

double lambda_lower(const ModelConstants& constants, int p, long long n, double epsilon,
                    Regime regime) {
  const double log_term = std::log(8.0 * p * p / epsilon);
  const double multiplier = regime == Regime::restart_record ? 3.0 : consecutive_multiplier(constants);
  return 4.0 * std::sqrt(multiplier * log_term / (static_cast<double>(n) * constants.L));
}

TheoryBounds bound_lambda_and_n(const ModelConstants& constants, int p, double epsilon,
                                Regime regime, const UniversalConstants& universal) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("bound_lambda_and_n(): epsilon must lie in (0, 0.5)");
  }
  if (p < 1) {
    throw std::invalid_argument("bound_lambda_and_n(): p must be >= 1");
  }
  if (regime == Regime::consecutive && p * epsilon - 8.0 <= 0.0) {
    throw std::invalid_argument(
        "bound_lambda_and_n(): consecutive regime needs epsilon > 8/p (per-node tolerance at "
        "least 8/p^2); got epsilon = " + std::to_string(epsilon) + ", p = " + std::to_string(p));
  }

  const double L = constants.L;
  const double U = constants.U;
  const double C = constants.C;
  const double m = constants.m;
  const double d = static_cast<double>(constants.d);

  TheoryBounds out;
  out.regime = regime;
  out.epsilon = epsilon;
  out.universal = universal;
  out.kappa = 1.0 / (256.0 * U);
  out.N_min = bound_N_min(constants);
  const double eps1 = epsilon / p;
  out.epsilon_splits = {eps1, eps1 / 2.0, eps1 / 2.0};
  out.lambda_hi = m / (1536.0 * U * std::sqrt(d));

  const double log_p2 = std::log(8.0 * p * p / epsilon);
  double n_bound;
  if (regime == Regime::restart_record) {
    const double term1 = (1.0 / universal.c) * std::log(4.0 * universal.c_prime * p / epsilon);
    const double term2 = 3456.0 * 3456.0 * (U / L + 0.5) * std::log(2.0 * p) * d;
    const double term3 = 3.0 * 6144.0 * 6144.0 * (U * U / L) * d * log_p2 / (m * m);
    n_bound = std::max({term1, term2, term3});
  } else {
    const double corr = C * U / (1.0 / constants.delta_inv - 1.0);  // C U / (delta - 1)
    const double term1 =
        33.0 * 33.0 * std::log(static_cast<double>(p)) *
        std::pow(U / L + 0.5 + 4.0 * std::sqrt(8.0) * corr, 2.0);
    const double term2 = 2.0 * std::log(8.0 * p * p / (p * epsilon - 8.0));
    const double term3 =
        consecutive_multiplier(constants) * 6144.0 * 6144.0 * (U * U / L) * d * log_p2 / (m * m);
    n_bound = std::max({term1, term2, term3});
  }
  out.n_min = ceil_to_count(n_bound);
  out.lambda_lo = lambda_lower(constants, p, out.n_min, epsilon, regime);
  out.feasible = out.lambda_lo <= out.lambda_hi;
  return out;
}

LambdaConditionReport diagnose_lambda_condition(const SpectralDesign& design,
                                                const WienerEstimate& oracle, double lambda) {
  if (oracle.node != design.node || oracle.coefficients.size() != design.regressor_count()) {
    throw std::invalid_argument(
        "diagnose_lambda_condition(): oracle does not match the design (node or length)");
  }
  const double n = static_cast<double>(design.sample_count());
  const Eigen::VectorXcd residual = design.response - design.design * oracle.coefficients;
  LambdaConditionReport out;
  out.lhs = (2.0 / n) * (design.design.adjoint() * residual).cwiseAbs().maxCoeff();
  out.holds = lambda >= out.lhs;
  return out;
}

RestrictedEigenvalueReport diagnose_restricted_eigenvalue(const SpectralDesign& design,
                                                          const WienerEstimate& oracle, int trials,
                                                          std::uint64_t seed,
                                                          const Eigen::VectorXcd* measured_error) {
  if (trials < 1) {
    throw std::invalid_argument("diagnose_restricted_eigenvalue(): trials must be >= 1");
  }
  if (oracle.node != design.node || oracle.coefficients.size() != design.regressor_count()) {
    throw std::invalid_argument(
        "diagnose_restricted_eigenvalue(): oracle does not match the design");
  }
  const int p = design.regressor_count();
  const double n = static_cast<double>(design.sample_count());

  std::vector<int> support, complement;
  for (int l = 0; l < p; ++l) {
    if (std::abs(oracle.coefficients(l)) > 1e-10) {
      support.push_back(l);
    } else {
      complement.push_back(l);
    }
  }

  auto ratio = [&](const Eigen::VectorXcd& delta) {
    const double denom = delta.squaredNorm();
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return (design.design * delta).squaredNorm() / (n * denom);
  };

  double kappa_hat = std::numeric_limits<double>::infinity();
  GaussianStream stream(derive_seed(seed, 0x4e5ULL));
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(p);
    double support_l1 = 0.0;
    for (int l : support) {
      delta(l) = Complex(stream.next(), stream.next());
      support_l1 += std::abs(delta(l));
    }
    if (support.empty()) {
      // Degenerate cone: only the zero off-support vector qualifies.
      for (int l = 0; l < p; ++l) delta(l) = Complex(stream.next(), stream.next());
      kappa_hat = std::min(kappa_hat, ratio(delta));
      continue;
    }
    // Off-support mass scaled onto the 3x cone boundary.
    if (!complement.empty()) {
      Eigen::VectorXcd off = Eigen::VectorXcd::Zero(p);
      double off_l1 = 0.0;
      for (int l : complement) {
        off(l) = Complex(stream.next(), stream.next());
        off_l1 += std::abs(off(l));
      }
      if (off_l1 > 0.0) delta += off * (3.0 * support_l1 / off_l1);
    }
    kappa_hat = std::min(kappa_hat, ratio(delta));
  }
  if (measured_error != nullptr && measured_error->size() == p && measured_error->squaredNorm() > 0.0) {
    kappa_hat = std::min(kappa_hat, ratio(*measured_error));
  }

  RestrictedEigenvalueReport out;
  out.kappa_hat = kappa_hat;
  return out;
}

PsdGapReport diagnose_psd_gap(const LdsModel& model, double frequency, int N) {
  if (N < 1) {
    throw std::invalid_argument("diagnose_psd_gap(): N must be >= 1");
  }
  model.validate();
  const SpectralMatrix raw = analytic_psd(model, frequency);
  const NormalizedPsd normalized = normalize_unit_diagonal(raw);
  const SpectralMatrix finite = expected_finite_psd(model, frequency, N);
  const Eigen::VectorXd inv_scales = normalized.scales.cwiseInverse();
  const Eigen::MatrixXcd finite_scaled =
      inv_scales.asDiagonal() * finite.matrix * inv_scales.asDiagonal();

  const ModelConstants constants = envelope_constants(model, normalized, frequency);

  PsdGapReport out;
  out.gap = spectral_norm(Eigen::MatrixXcd(normalized.psd.matrix - finite_scaled));
  out.half_inv_U = 1.0 / (2.0 * constants.U);
  const double di = constants.delta_inv;
  out.bound = di > 0.0 ? 2.0 * constants.C * di / (N * (1.0 - di) * (1.0 - di)) : 0.0;
  out.lemma_holds = out.gap <= out.bound + 1e-12;
  if (N >= bound_N_min(constants)) {
    out.lemma_holds = out.lemma_holds && out.gap <= out.half_inv_U + 1e-12;
  }
  return out;
}

}  // namespace netlds
