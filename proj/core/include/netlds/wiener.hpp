#pragma once

#include <Eigen/Core>
#include <set>
#include <string>
#include <vector>

#include "netlds/graph.hpp"
#include "netlds/spectral.hpp"

namespace netlds {

struct SolverStats {
  int iterations = 0;
  double kkt_residual = 0.0;
  double objective = 0.0;
  std::vector<double> objective_trace;  // filled when requested
};

/// Coefficients of the regression of one node's transform onto all other
/// nodes'. Ordering matches SpectralDesign columns (design_column_nodes).
/// lambda is 0 for exact / unregularized estimates.
struct WienerEstimate {
  int node = 0;
  Eigen::VectorXcd coefficients;
  double lambda = 0.0;
  SolverStats stats;
};

/// Population regression read off a positive definite spectral matrix:
/// coefficient for node j is -inv(Phi)(i,j) / inv(Phi)(i,i). The same
/// vector is recomputed through the covariance route
/// conj(Phi_rest^-1 Phi_rest,i) and both must agree to 1e-10.
WienerEstimate exact_wiener(const SpectralMatrix& psd, int node);

struct LassoOptions {
  double tol = 1e-8;           // KKT residual target
  int max_iters = 50000;
  bool record_objective = false;
};

/// Thrown when the iteration budget is exhausted; carries the last
/// residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, double residual)
      : std::runtime_error(message), last_residual(residual) {}
  double last_residual;
};

/// Minimizer of
///   (1/2n) ||y - X beta||_2^2 + lambda sum_j |beta_j|
/// over complex beta (the penalty is the 1,2-group norm over real and
/// imaginary parts). Accelerated proximal gradient with a monotone
/// objective safeguard and momentum restart; step size 1/L with
/// L = lambda_max((1/n) X^H X) from power iteration.
WienerEstimate solve_regularized_wiener(const SpectralDesign& design, double lambda,
                                        const LassoOptions& options = {});

/// Minimum-norm least squares via complete orthogonal decomposition.
WienerEstimate unregularized_wiener(const SpectralDesign& design);

/// Smallest lambda with an all-zero solution: (1/n) ||X^H y||_inf.
double lambda_max(const SpectralDesign& design);

/// Group-lasso stationarity residual of `coefficients` for the design at
/// `lambda`: max over coordinates of the subgradient violation.
double kkt_residual(const SpectralDesign& design, const Eigen::VectorXcd& coefficients,
                    double lambda);

/// Converts a raw-scale coefficient vector (ordering of
/// design_column_nodes) into the design's normalized scale, and back.
WienerEstimate to_design_scale(const WienerEstimate& raw, const SpectralDesign& design);
WienerEstimate to_raw_scale(const WienerEstimate& estimate, const SpectralDesign& design);

/// Support of the inverse of a spectral matrix: pairs (i, j), i < j, with
/// |inv(Phi)(i,j)| >= threshold. Recovers the conditional-independence
/// pairs, i.e. the two-hop set rather than the edge set.
EdgeSet cig_baseline(const SpectralMatrix& psd, double threshold);

struct PairScore {
  int i = 0, j = 0;
  double magnitude_score = 0.0;  // |W_i[j]| + |W_j[i]|
  double imag_score = 0.0;       // |Im W_i[j]| + |Im W_j[i]|
};

struct RecoveryResult {
  EdgeSet E_M_hat;
  EdgeSet E_hat;
  double tau1 = 0.0;
  double tau2 = 0.0;
  std::vector<PairScore> scores;
};

/// Two-stage decoder: pairs with magnitude score >= tau1 form the two-hop
/// estimate; among those, pairs with imaginary score >= tau2 form the edge
/// estimate. Boundary values are included. Requires one estimate per node
/// with consistent column mapping.
RecoveryResult threshold_topology(const std::vector<WienerEstimate>& estimates, double tau1,
                                  double tau2);

/// Model-free threshold heuristic: splits sorted scores at their largest
/// relative gap. Labeled heuristic; prefer ground-truth separation margins
/// when a model is available.
double suggest_threshold_by_gap(std::vector<double> scores);

/// CSV: "i,j,magnitude_score,imag_score,in_E_M_hat,in_E_hat" with 1-based
/// node ids.
void export_recovery_csv(const RecoveryResult& result, const std::string& path);

}  // namespace netlds
