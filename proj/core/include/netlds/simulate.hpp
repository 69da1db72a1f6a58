#pragma once

#include <cstdint>

#include "netlds/graph.hpp"
#include "netlds/lds_model.hpp"
#include "netlds/trajectory.hpp"

namespace netlds {

/// Number of warm-up steps after a zero state initialization so the
/// recorded samples carry less than 1e-8 relative initialization bias.
int burn_in_length(const LdsModel& model);

/// Runs the model and records a batch under the requested regime.
/// Pure in (model, regime, n, N, seed): identical inputs reproduce
/// bit-identical batches regardless of thread count or call order.
TrajectoryBatch simulate(const LdsModel& model, const Graph& graph, Regime regime, int n, int N,
                         std::uint64_t seed);

}  // namespace netlds
