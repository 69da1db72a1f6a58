#include "netlds/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace netlds {

Complex dft_coefficient(const Eigen::Ref<const Eigen::VectorXd>& samples, double frequency) {
  const int n = static_cast<int>(samples.size());
  if (n < 1) {
    throw std::invalid_argument("dft_coefficient(): need at least one sample");
  }
  const Complex step = std::polar(1.0, -frequency);
  Complex phase(1.0, 0.0);
  Complex acc(0.0, 0.0);
  for (int k = 0; k < n; ++k) {
    acc += samples(k) * phase;
    phase *= step;
  }
  return acc / std::sqrt(static_cast<double>(n));
}

std::vector<int> design_column_nodes(int node, int p1) {
  std::vector<int> cols;
  cols.reserve(p1 - 1);
  for (int j = 0; j < p1; ++j) {
    if (j != node) cols.push_back(j);
  }
  return cols;
}

namespace {

// Transform rows for all nodes of a batch: out(r, i) = transform of node i
// in trajectory r. The phase table is shared across nodes and rows.
Eigen::MatrixXcd transform_rows(const TrajectoryBatch& batch, double frequency) {
  const int n = batch.trajectory_count();
  const int N = batch.samples_per_trajectory();
  const int p1 = batch.node_count();

  Eigen::VectorXd phase_re(N), phase_im(N);
  const Complex step = std::polar(1.0, -frequency);
  Complex phase(1.0, 0.0);
  for (int k = 0; k < N; ++k) {
    phase_re(k) = phase.real();
    phase_im(k) = phase.imag();
    phase *= step;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));

  Eigen::MatrixXcd rows(n, p1);
  Eigen::VectorXd re(p1), im(p1);
  for (int r = 0; r < n; ++r) {
    re.noalias() = batch.trajectory(r) * phase_re;
    im.noalias() = batch.trajectory(r) * phase_im;
    for (int i = 0; i < p1; ++i) rows(r, i) = Complex(re(i) * scale, im(i) * scale);
  }
  return rows;
}

}  // namespace

SpectralDesign build_design(const TrajectoryBatch& batch, int node, double frequency) {
  const int p1 = batch.node_count();
  if (node < 0 || node >= p1) {
    throw std::invalid_argument("build_design(): node out of range");
  }
  const Eigen::MatrixXcd rows = transform_rows(batch, frequency);
  const int n = batch.trajectory_count();
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  SpectralDesign out;
  out.node = node;
  out.frequency = frequency;
  out.response = rows.col(node);
  const double response_norm = out.response.norm();
  if (response_norm == 0.0) {
    throw std::runtime_error("build_design(): node " + std::to_string(node) +
                             " has an identically zero transform column");
  }
  out.response_scale = response_norm / sqrt_n;
  out.response /= out.response_scale;

  const std::vector<int> cols = design_column_nodes(node, p1);
  out.design.resize(n, p1 - 1);
  out.column_scales.resize(p1 - 1);
  for (int l = 0; l < p1 - 1; ++l) {
    const double norm = rows.col(cols[l]).norm();
    if (norm == 0.0) {
      throw std::runtime_error("build_design(): node " + std::to_string(cols[l]) +
                               " has an identically zero transform column");
    }
    out.column_scales(l) = norm / sqrt_n;
    out.design.col(l) = rows.col(cols[l]) / out.column_scales(l);
  }
  return out;
}

void assert_hermitian(const Eigen::MatrixXcd& m, double relative_tol, const char* who) {
  const double scale = std::max(1.0, m.norm());
  const double dev = (m - m.adjoint()).norm();
  if (dev > relative_tol * scale) {
    throw std::runtime_error(std::string(who) + ": matrix is not Hermitian (relative deviation " +
                             std::to_string(dev / scale) + ")");
  }
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

SpectralMatrix analytic_psd(const LdsModel& model, double frequency) {
  model.validate();
  const Complex z = std::polar(1.0, frequency);

  Eigen::MatrixXcd a = -model.h.cast<Complex>();
  a.diagonal().array() += z;

  const double input_spectrum = std::norm(model.theta0 + model.theta1 * std::polar(1.0, -frequency));
  Eigen::VectorXd phi_e = model.noise_gain.array().square() * input_spectrum;

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (std::abs(lu.determinant()) < 1e-300) {
    throw std::runtime_error("analytic_psd(): e^{if} I - h is singular; model is ill-posed");
  }
  const Eigen::MatrixXcd a_inv = lu.inverse();

  SpectralMatrix out;
  out.frequency = frequency;
  out.kind = SpectralKind::analytic_psd;
  out.matrix = a_inv * phi_e.asDiagonal() * a_inv.adjoint();
  out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
  assert_hermitian(out.matrix, 1e-12, "analytic_psd()");
  return out;
}

SpectralMatrix expected_finite_psd(const LdsModel& model, double frequency, int N) {
  model.validate();
  if (N < 1) {
    throw std::invalid_argument("expected_finite_psd(): N must be >= 1");
  }
  const int p1 = model.node_count();
  const AugmentedSystem sys = augmented_system(model);
  const int dim = static_cast<int>(sys.transition.rows());
  const Eigen::MatrixXd q = sys.input * sys.input.transpose();
  const Eigen::MatrixXd sigma = solve_discrete_lyapunov(sys.transition, q);

  // T = sum_{q=0}^{N-1} (N-q) M^q Sigma with M = e^{-if} A; then the
  // windowed sum over both lag signs is T + T^H - N R(0).
  const Eigen::MatrixXcd m = std::polar(1.0, -frequency) * sys.transition.cast<Complex>();
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);

  Eigen::MatrixXcd m_pow_n = eye;  // M^N by binary exponentiation
  {
    Eigen::MatrixXcd base = m;
    int e = N;
    while (e > 0) {
      if (e & 1) m_pow_n = m_pow_n * base;
      base = base * base;
      e >>= 1;
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(eye - m);
  const Eigen::MatrixXcd geom = lu.solve(eye - m_pow_n);           // (I-M)^-1 (I-M^N)
  const Eigen::MatrixXcd weighted = lu.solve(static_cast<double>(N) * eye - m * geom);
  const Eigen::MatrixXcd t_full = weighted * sigma.cast<Complex>();

  const Eigen::MatrixXcd t = t_full.topLeftCorner(p1, p1);
  const Eigen::MatrixXd r0 = sigma.topLeftCorner(p1, p1);

  SpectralMatrix out;
  out.frequency = frequency;
  out.kind = SpectralKind::expected_finite;
  out.matrix = (t + t.adjoint()) / static_cast<double>(N) - r0.cast<Complex>();
  out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
  assert_hermitian(out.matrix, 1e-12, "expected_finite_psd()");
  return out;
}

SpectralMatrix empirical_psd(const TrajectoryBatch& batch, double frequency) {
  const Eigen::MatrixXcd rows = transform_rows(batch, frequency);
  SpectralMatrix out;
  out.frequency = frequency;
  out.kind = SpectralKind::empirical;
  out.matrix = (rows.adjoint() * rows) / static_cast<double>(batch.trajectory_count());
  out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
  return out;
}

NormalizedPsd normalize_unit_diagonal(const SpectralMatrix& psd) {
  const int p1 = psd.node_count();
  Eigen::VectorXd scales(p1);
  for (int i = 0; i < p1; ++i) {
    const double d = psd.matrix(i, i).real();
    if (d <= 0.0) {
      throw std::runtime_error("normalize_unit_diagonal(): non-positive diagonal at node " +
                               std::to_string(i));
    }
    scales(i) = std::sqrt(d);
  }
  NormalizedPsd out;
  out.scales = scales;
  out.psd.frequency = psd.frequency;
  out.psd.kind = psd.kind;
  out.psd.matrix = scales.cwiseInverse().asDiagonal() * psd.matrix * scales.cwiseInverse().asDiagonal();
  return out;
}

Eigen::MatrixXcd autocorr_dtft(const AutocorrSequence& seq, double frequency) {
  if (seq.lags.empty()) {
    throw std::invalid_argument("autocorr_dtft(): empty sequence");
  }
  Eigen::MatrixXcd acc = seq.lags[0].cast<Complex>();
  for (int tau = 1; tau <= seq.max_lag(); ++tau) {
    const Complex w = std::polar(1.0, -frequency * tau);
    acc += w * seq.lags[tau].cast<Complex>();
    acc += std::conj(w) * seq.lags[tau].transpose().cast<Complex>();
  }
  return acc;
}

void export_design_csv(const SpectralDesign& design, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("export_design_csv(): cannot open " + path);
  }
  out << "row,y_re,y_im";
  for (int l = 0; l < design.regressor_count(); ++l) out << ",x" << l << "_re,x" << l << "_im";
  out << "\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << "," << buf;
  };
  for (int r = 0; r < design.sample_count(); ++r) {
    out << r;
    put(design.response(r).real());
    put(design.response(r).imag());
    for (int l = 0; l < design.regressor_count(); ++l) {
      put(design.design(r, l).real());
      put(design.design(r, l).imag());
    }
    out << "\n";
  }
  if (!out) {
    throw std::runtime_error("export_design_csv(): write failed for " + path);
  }
}

}  // namespace netlds
