#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "netlds/wiener.hpp"

namespace netlds {

namespace {

// Largest eigenvalue of the Hermitian PSD Gram matrix by power iteration:
// 30 rounds or relative change below 1e-10, whichever comes first.
double gram_top_eigenvalue(const Eigen::MatrixXcd& gram) {
  const int p = static_cast<int>(gram.rows());
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(p, Complex(1.0, 0.0));
  for (int j = 0; j < p; ++j) v(j) += Complex(0.0, 1e-3 * (j + 1));  // break symmetry
  v.normalize();
  double eig = 0.0;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXcd w = gram * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = norm;  // Rayleigh quotient of the normalized iterate
    v = w / norm;
    if (it > 0 && std::abs(next - eig) <= 1e-10 * std::max(1.0, std::abs(next))) {
      eig = next;
      break;
    }
    eig = next;
  }
  return eig;
}

// Modulus soft-thresholding: each coordinate is shrunk toward zero along
// its own phase, beta_j <- beta_j max(0, 1 - t/|beta_j|).
void prox_l1(Eigen::VectorXcd& beta, double t) {
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double mag = std::abs(beta(j));
    if (mag <= t) {
      beta(j) = Complex(0.0, 0.0);
    } else {
      beta(j) *= (1.0 - t / mag);
    }
  }
}

double l1_norm(const Eigen::VectorXcd& beta) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) acc += std::abs(beta(j));
  return acc;
}

}  // namespace

double lambda_max(const SpectralDesign& design) {
  const double n = static_cast<double>(design.sample_count());
  return ((design.design.adjoint() * design.response) / n).cwiseAbs().maxCoeff();
}

double kkt_residual(const SpectralDesign& design, const Eigen::VectorXcd& coefficients,
                    double lambda) {
  const double n = static_cast<double>(design.sample_count());
  const Eigen::VectorXcd grad =
      (design.design.adjoint() * (design.design * coefficients - design.response)) / n;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
    const double mag = std::abs(coefficients(j));
    double violation;
    if (mag == 0.0) {
      violation = std::max(0.0, std::abs(grad(j)) - lambda);
    } else {
      violation = std::abs(grad(j) + lambda * coefficients(j) / mag);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

WienerEstimate solve_regularized_wiener(const SpectralDesign& design, double lambda,
                                        const LassoOptions& options) {
  if (lambda < 0.0) {
    throw std::invalid_argument("solve_regularized_wiener(): lambda must be >= 0");
  }
  if (!design.design.allFinite() || !design.response.allFinite()) {
    throw std::invalid_argument("solve_regularized_wiener(): design contains non-finite entries");
  }
  const int p = design.regressor_count();
  const double n = static_cast<double>(design.sample_count());

  const Eigen::MatrixXcd gram = (design.design.adjoint() * design.design) / n;
  const Eigen::VectorXcd corr = (design.design.adjoint() * design.response) / n;
  const double y_energy = design.response.squaredNorm() / (2.0 * n);

  // Smooth part and its gradient in Gram form; O(p^2) per iteration.
  auto objective = [&](const Eigen::VectorXcd& beta) {
    const double quad = 0.5 * std::real(beta.dot(gram * beta)) - std::real(corr.dot(beta)) + y_energy;
    return quad + lambda * l1_norm(beta);
  };

  // Stationarity violation from a precomputed gradient; O(p).
  auto kkt_from_grad = [lambda](const Eigen::VectorXcd& grad, const Eigen::VectorXcd& beta) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      const double mag = std::abs(beta(j));
      const double violation = mag == 0.0 ? std::max(0.0, std::abs(grad(j)) - lambda)
                                          : std::abs(grad(j) + lambda * beta(j) / mag);
      worst = std::max(worst, violation);
    }
    return worst;
  };

  const double lipschitz = gram_top_eigenvalue(gram);
  WienerEstimate out;
  out.node = design.node;
  out.lambda = lambda;
  out.coefficients = Eigen::VectorXcd::Zero(p);

  if (lipschitz == 0.0) {
    out.stats.kkt_residual = kkt_residual(design, out.coefficients, lambda);
    out.stats.objective = objective(out.coefficients);
    return out;
  }
  // Two percent headroom keeps the step valid if the eigenvalue estimate
  // is slightly low.
  const double step = 1.0 / (1.02 * lipschitz);

  Eigen::VectorXcd beta = out.coefficients;
  Eigen::VectorXcd y = beta;
  double momentum = 1.0;
  double best_obj = objective(beta);
  if (options.record_objective) out.stats.objective_trace.push_back(best_obj);

  int iter = 0;
  double residual = kkt_from_grad(gram * beta - corr, beta);
  for (; iter < options.max_iters && residual > 0.5 * options.tol; ++iter) {
    Eigen::VectorXcd candidate = y - step * (gram * y - corr);
    prox_l1(candidate, lambda * step);
    double cand_obj = objective(candidate);

    if (cand_obj > best_obj) {
      // Momentum overshoot: fall back to a plain proximal step from the
      // last iterate (never increases the objective) and restart.
      candidate = beta - step * (gram * beta - corr);
      prox_l1(candidate, lambda * step);
      cand_obj = objective(candidate);
      momentum = 1.0;
      y = candidate;
    } else {
      const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = candidate + ((momentum - 1.0) / momentum_next) * (candidate - beta);
      momentum = momentum_next;
    }
    beta = candidate;
    best_obj = std::min(best_obj, cand_obj);
    if (options.record_objective) out.stats.objective_trace.push_back(cand_obj);
    residual = kkt_from_grad(gram * beta - corr, beta);
  }

  const double exact_residual = kkt_residual(design, beta, lambda);
  if (exact_residual > options.tol) {
    throw SolverError("solve_regularized_wiener(): no convergence after " +
                          std::to_string(options.max_iters) + " iterations; KKT residual " +
                          std::to_string(exact_residual),
                      exact_residual);
  }

  out.coefficients = beta;
  out.stats.iterations = iter;
  out.stats.kkt_residual = exact_residual;
  out.stats.objective = objective(beta);
  return out;
}

WienerEstimate unregularized_wiener(const SpectralDesign& design) {
  WienerEstimate out;
  out.node = design.node;
  out.lambda = 0.0;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(design.design);
  out.coefficients = cod.solve(design.response);
  out.stats.iterations = 0;
  out.stats.kkt_residual = kkt_residual(design, out.coefficients, 0.0);
  const double n = static_cast<double>(design.sample_count());
  out.stats.objective = (design.response - design.design * out.coefficients).squaredNorm() / (2.0 * n);
  return out;
}

}  // namespace netlds
