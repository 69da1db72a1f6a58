#include <doctest.h>

#include <Eigen/Dense>
#include <fstream>
#include <numbers>

#include "netlds/simulate.hpp"
#include "netlds/theory.hpp"
#include "netlds/wiener.hpp"
#include "support.hpp"

using namespace netlds;
using netlds::testing::chain3_graph;
using netlds::testing::chain3_model;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralMatrix psd_from_matrix(Eigen::MatrixXcd m, double f = 0.5) {
  SpectralMatrix out;
  out.frequency = f;
  out.matrix = std::move(m);
  out.kind = SpectralKind::analytic_psd;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("estimator");

TEST_CASE("diagonal spectral density has zero regression coefficients") {
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
  diag.diagonal() << 1.0, 2.0, 0.5, 3.0;
  for (int i = 0; i < 4; ++i) {
    const WienerEstimate w = exact_wiener(psd_from_matrix(diag), i);
    CHECK(w.coefficients.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("two-node regression reads off the inverse density") {
  Eigen::MatrixXcd precision(2, 2);
  precision << Complex(2.0, 0.0), Complex(1.0, 1.0), Complex(1.0, -1.0), Complex(3.0, 0.0);
  const Eigen::MatrixXcd phi = precision.inverse();
  const WienerEstimate w = exact_wiener(psd_from_matrix(phi), 0);
  CHECK(std::abs(w.coefficients(0) - Complex(-0.5, -0.5)) < 1e-12);
}

TEST_CASE("chain filter support is the two-hop set, imaginary support the edges") {
  const auto model = chain3_model();
  const SpectralMatrix psd = analytic_psd(model, 2.0 * kPi / 64);
  const WienerEstimate w0 = exact_wiener(psd, 0);
  // node 0: coefficient 0 is node 1 (edge), coefficient 1 is node 2 (two hops)
  CHECK(std::abs(w0.coefficients(0)) > 1e-8);
  CHECK(std::abs(w0.coefficients(1)) > 1e-8);
  CHECK(std::abs(w0.coefficients(0).imag()) > 1e-8);
  CHECK(std::abs(w0.coefficients(1).imag()) < 1e-8);
}

TEST_CASE("filter support matches the two-hop structure on random stable models") {
  int checked = 0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    for (const Graph& g : {chain_graph(6), grid_graph(3, 3), random_tree(8, seed + 10)}) {
      const LdsModel model = random_stable_model(g, seed, 0.55);
      const SpectralMatrix psd = analytic_psd(model, 2.0 * kPi / 64);
      const TwoHopSet th = two_hop_closure(g);
      for (int i = 0; i < g.node_count(); ++i) {
        const WienerEstimate w = exact_wiener(psd, i);
        const auto cols = design_column_nodes(i, g.node_count());
        for (std::size_t l = 0; l < cols.size(); ++l) {
          const bool in_two_hop = th.pairs.count(canonical_pair(i, cols[l])) > 0;
          const bool is_edge = g.has_edge(i, cols[l]);
          CHECK((std::abs(w.coefficients(l)) > 1e-8) == in_two_hop);
          CHECK((std::abs(w.coefficients(l).imag()) > 1e-8) == is_edge);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("singular spectral densities are rejected") {
  Eigen::MatrixXcd singular = Eigen::MatrixXcd::Ones(3, 3);
  CHECK_THROWS_AS(exact_wiener(psd_from_matrix(singular), 0), std::runtime_error);
}

TEST_CASE("estimates convert between raw and normalized design scales") {
  const auto model = chain3_model();
  const TrajectoryBatch batch = simulate(model, chain3_graph(), Regime::restart_record, 64, 32, 3);
  const SpectralDesign d = build_design(batch, 1, 2.0 * kPi / 32);
  const SpectralMatrix psd = analytic_psd(model, 2.0 * kPi / 32);
  const WienerEstimate raw = exact_wiener(psd, 1);
  const WienerEstimate scaled = to_design_scale(raw, d);
  const WienerEstimate back = to_raw_scale(scaled, d);
  CHECK((back.coefficients - raw.coefficients).cwiseAbs().maxCoeff() < 1e-12);

  WienerEstimate wrong = raw;
  wrong.node = 0;
  CHECK_THROWS_AS(to_design_scale(wrong, d), std::invalid_argument);
}

TEST_CASE("finite-sample least squares approaches the exact filter") {
  const auto model = chain3_model();
  const double f = 2.0 * kPi / 32;
  const SpectralMatrix psd = analytic_psd(model, f);
  const WienerEstimate exact = exact_wiener(psd, 0);

  double prev_err = std::numeric_limits<double>::infinity();
  std::vector<double> errs;
  for (int n : {100, 1000, 10000}) {
    const TrajectoryBatch batch =
        simulate(model, chain3_graph(), Regime::restart_record, n, 32, 1234);
    const SpectralDesign d = build_design(batch, 0, f);
    const WienerEstimate est = unregularized_wiener(d);
    const WienerEstimate est_raw = to_raw_scale(est, d);
    const double err = (est_raw.coefficients - exact.coefficients).norm();
    errs.push_back(err);
    CHECK(err < prev_err);
    prev_err = err;
  }
  // two decades of n: expect about one decade of error decay
  const double slope = std::log10(errs[2] / errs[0]) / 2.0;
  CHECK(slope < -0.25);
  CHECK(slope > -0.85);
}

TEST_CASE("inverse-density support baseline") {
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Identity(3, 3);
  CHECK(cig_baseline(psd_from_matrix(diag), 0.1).empty());

  const auto model = chain3_model();
  const SpectralMatrix psd = analytic_psd(model, 2.0 * kPi / 64);
  // the inverse of a chain density carries the two-hop pair as well
  const EdgeSet pairs = cig_baseline(psd, 1e-6);
  CHECK(pairs == EdgeSet{{0, 1}, {0, 2}, {1, 2}});

  // triangle: the two-hop set equals the edges, so the baseline is exact
  EdgeSet tri{{0, 1}, {0, 2}, {1, 2}};
  const LdsModel tri_model = random_stable_model(Graph(3, tri), 5, 0.5);
  const SpectralMatrix tri_psd = analytic_psd(tri_model, 2.0 * kPi / 64);
  CHECK(cig_baseline(tri_psd, 1e-6) == tri);
}

TEST_CASE("thresholding on all-zero estimates yields empty sets") {
  std::vector<WienerEstimate> zeros;
  for (int i = 0; i < 3; ++i) {
    WienerEstimate w;
    w.node = i;
    w.coefficients = Eigen::VectorXcd::Zero(2);
    zeros.push_back(w);
  }
  const RecoveryResult rec = threshold_topology(zeros, 0.1, 0.1);
  CHECK(rec.E_M_hat.empty());
  CHECK(rec.E_hat.empty());
  CHECK(rec.scores.size() == 3);
}

TEST_CASE("exact chain estimates with margin thresholds recover the chain") {
  const auto model = chain3_model();
  const Graph g = chain3_graph();
  const double f = 2.0 * kPi / 64;
  const ModelConstants constants = compute_constants(model, g, f);
  const NormalizedPsd norm = normalize_unit_diagonal(analytic_psd(model, f));
  std::vector<WienerEstimate> estimates;
  for (int i = 0; i < 3; ++i) estimates.push_back(exact_wiener(norm.psd, i));
  const RecoveryResult rec = threshold_topology(estimates, constants.m, constants.m);
  CHECK(rec.E_hat == g.edges());
  CHECK(rec.E_M_hat.count({0, 2}) == 1);  // strict two-hop pair retained upstream
}

TEST_CASE("threshold boundaries are inclusive") {
  std::vector<WienerEstimate> estimates(2);
  estimates[0].node = 0;
  estimates[0].coefficients = Eigen::VectorXcd::Zero(1);
  estimates[0].coefficients(0) = Complex(0.0, 0.25);
  estimates[1].node = 1;
  estimates[1].coefficients = Eigen::VectorXcd::Zero(1);
  estimates[1].coefficients(0) = Complex(0.0, 0.25);
  // scores are exactly 0.5; thresholds equal to the score must include
  const RecoveryResult rec = threshold_topology(estimates, 0.5, 0.5);
  CHECK(rec.E_M_hat == EdgeSet{{0, 1}});
  CHECK(rec.E_hat == EdgeSet{{0, 1}});
}

TEST_CASE("missing node estimates are rejected") {
  std::vector<WienerEstimate> estimates(2);
  estimates[0].node = 0;
  estimates[0].coefficients = Eigen::VectorXcd::Zero(1);
  estimates[1].node = 0;  // duplicate, node 1 missing
  estimates[1].coefficients = Eigen::VectorXcd::Zero(1);
  CHECK_THROWS_AS(threshold_topology(estimates, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("error vectors live in the cone when the penalty dominates") {
  // whenever lambda >= (2/n)||X^H (y - X w)||_inf, the solved error
  // satisfies the 3x off-support mass bound
  const auto model = chain3_model();
  const Graph g = chain3_graph();
  const double f = 2.0 * kPi / 32;
  int cone_checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const TrajectoryBatch batch =
        simulate(model, g, Regime::restart_record, 512, 32, 9000 + trial);
    for (int i = 0; i < 3; ++i) {
      const SpectralDesign d = build_design(batch, i, f);
      const WienerEstimate oracle =
          to_design_scale(exact_wiener(analytic_psd(model, f), i), d);
      const auto cond = diagnose_lambda_condition(d, oracle, 0.0);
      const double lambda = cond.lhs * 1.05;
      const WienerEstimate est = solve_regularized_wiener(d, lambda);
      const Eigen::VectorXcd delta = est.coefficients - oracle.coefficients;

      double on = 0.0, off = 0.0;
      const auto cols = design_column_nodes(i, 3);
      for (int l = 0; l < 2; ++l) {
        const bool supported = two_hop_closure(g).pairs.count(canonical_pair(i, cols[l])) > 0;
        (supported ? on : off) += std::abs(delta(l));
      }
      CHECK(off <= 3.0 * on + 1e-9);
      ++cone_checked;
    }
  }
  CHECK(cone_checked == 30);
}

TEST_CASE("largest-gap threshold heuristic splits separated score groups") {
  std::vector<double> scores{0.01, 0.02, 0.015, 0.4, 0.45, 0.5};
  const double tau = suggest_threshold_by_gap(scores);
  CHECK(tau > 0.02);
  CHECK(tau < 0.4);
}

TEST_CASE("recovery table export uses one-based node ids") {
  std::vector<WienerEstimate> estimates(2);
  estimates[0].node = 0;
  estimates[0].coefficients = Eigen::VectorXcd::Constant(1, Complex(0.0, 0.3));
  estimates[1].node = 1;
  estimates[1].coefficients = Eigen::VectorXcd::Constant(1, Complex(0.0, 0.3));
  const RecoveryResult rec = threshold_topology(estimates, 0.1, 0.1);
  const auto path = netlds::testing::temp_path("scores.csv");
  export_recovery_csv(rec, path);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "i,j,magnitude_score,imag_score,in_E_M_hat,in_E_hat");
  CHECK(row.substr(0, 4) == "1,2,");
}

TEST_SUITE_END();
