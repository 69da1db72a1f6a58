#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "netlds/autocorr.hpp"
#include "netlds/lds_model.hpp"
#include "netlds/trajectory.hpp"

namespace netlds {

using Complex = std::complex<double>;

/// Normalized transform of one nodal sample path at frequency f:
///   (1/sqrt(N)) sum_k x(k) exp(-i f k).
Complex dft_coefficient(const Eigen::Ref<const Eigen::VectorXd>& samples, double frequency);

/// Per-node complex regression pair at one frequency. Row r holds the
/// transform of trajectory r; `design` columns follow the ascending node
/// order with `node` removed (see design_column_nodes). Columns and the
/// response are rescaled to norm exactly sqrt(n); the recorded scales
/// recover raw-scale coefficients as
///   beta_raw[l] = (response_scale / column_scales[l]) * beta[l].
struct SpectralDesign {
  int node = 0;
  double frequency = 0.0;
  Eigen::VectorXcd response;       // n
  Eigen::MatrixXcd design;         // n x p
  Eigen::VectorXd column_scales;   // p
  double response_scale = 1.0;

  int sample_count() const { return static_cast<int>(response.size()); }
  int regressor_count() const { return static_cast<int>(design.cols()); }
};

/// Ascending node ids with `node` removed: the column -> node mapping of a
/// SpectralDesign over p1 nodes.
std::vector<int> design_column_nodes(int node, int p1);

SpectralDesign build_design(const TrajectoryBatch& batch, int node, double frequency);

enum class SpectralKind { analytic_psd, expected_finite, empirical };

/// Hermitian (p1 x p1) spectral matrix at one frequency.
struct SpectralMatrix {
  double frequency = 0.0;
  Eigen::MatrixXcd matrix;
  SpectralKind kind = SpectralKind::analytic_psd;

  int node_count() const { return static_cast<int>(matrix.rows()); }
};

/// Exact stationary power spectral density
///   Phi_x(f) = (e^{if} I - h)^{-1} Phi_e(f) (e^{if} I - h)^{-H},
/// with the diagonal input spectrum Phi_e(i,i) = gain_i^2 |theta0 +
/// theta1 e^{-if}|^2.
SpectralMatrix analytic_psd(const LdsModel& model, double frequency);

/// Exact expectation of the outer product of length-N transform rows:
/// the Bartlett-windowed sum (1/N) sum_{|q|<N} (N-|q|) R_x(q) e^{-ifq},
/// evaluated in closed form from the augmented state space.
SpectralMatrix expected_finite_psd(const LdsModel& model, double frequency, int N);

/// Sample covariance (1/n) sum_r z_r z_r^H of the full-node transform rows
/// of a batch (mean not subtracted; the process is zero-mean).
SpectralMatrix empirical_psd(const TrajectoryBatch& batch, double frequency);

/// Rescales a spectral matrix to unit diagonal, D^-1 Phi D^-1 with
/// D = sqrt(diag Phi). `scales` returns diag(D).
struct NormalizedPsd {
  SpectralMatrix psd;
  Eigen::VectorXd scales;
};
NormalizedPsd normalize_unit_diagonal(const SpectralMatrix& psd);

/// Truncated transform sum_{|tau| <= max_lag} R_x(tau) e^{-if tau} of an
/// autocovariance sequence. Test oracle for analytic_psd.
Eigen::MatrixXcd autocorr_dtft(const AutocorrSequence& seq, double frequency);

void assert_hermitian(const Eigen::MatrixXcd& m, double relative_tol, const char* who);

double spectral_norm(const Eigen::MatrixXcd& m);

/// CSV with interleaved Re/Im columns: "row,y_re,y_im,x0_re,x0_im,...".
void export_design_csv(const SpectralDesign& design, const std::string& path);

}  // namespace netlds
