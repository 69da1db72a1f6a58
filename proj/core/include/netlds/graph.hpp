#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace netlds {

using NodePair = std::pair<int, int>;
using EdgeSet = std::set<NodePair>;

NodePair canonical_pair(int i, int j);

/// Undirected graph on nodes 0..node_count-1. Edges are stored canonically
/// (first < second); self-loops and out-of-range endpoints are rejected.
/// Immutable after construction.
class Graph {
 public:
  Graph(int node_count, EdgeSet edges);

  int node_count() const { return node_count_; }
  const EdgeSet& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool has_edge(int i, int j) const;
  int degree(int i) const;
  int max_degree() const;
  const std::vector<int>& neighbors(int i) const;

 private:
  int node_count_;
  EdgeSet edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Pairs at graph distance <= 2: every edge plus every pair sharing a
/// common neighbor. strict_two_hop holds the non-edge part.
struct TwoHopSet {
  EdgeSet pairs;
  EdgeSet strict_two_hop;
};

Graph grid_graph(int rows, int cols);
Graph chain_graph(int nodes);
Graph random_tree(int nodes, std::uint64_t seed);

TwoHopSet two_hop_closure(const Graph& g);

int two_hop_degree(const TwoHopSet& two_hop, int node);
int max_two_hop_degree(const Graph& g);

/// Edge-list text format: first line node count, then one "i j" pair per
/// line (0-based, i < j).
void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace netlds
