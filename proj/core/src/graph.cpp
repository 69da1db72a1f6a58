#include "netlds/graph.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "netlds/rng.hpp"

namespace netlds {

NodePair canonical_pair(int i, int j) {
  if (i == j) {
    throw std::invalid_argument("canonical_pair(): self-loop " + std::to_string(i));
  }
  return i < j ? NodePair{i, j} : NodePair{j, i};
}

Graph::Graph(int node_count, EdgeSet edges) : node_count_(node_count) {
  if (node_count < 1) {
    throw std::invalid_argument("Graph(): node_count must be >= 1");
  }
  for (const auto& [i, j] : edges) {
    if (i == j) {
      throw std::invalid_argument("Graph(): self-loop at node " + std::to_string(i));
    }
    if (i > j) {
      throw std::invalid_argument("Graph(): edge not in canonical (i < j) order");
    }
    if (i < 0 || j >= node_count) {
      throw std::invalid_argument("Graph(): edge endpoint out of range");
    }
  }
  edges_ = std::move(edges);
  adjacency_.resize(node_count_);
  for (const auto& [i, j] : edges_) {
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  return edges_.count(canonical_pair(i, j)) > 0;
}

int Graph::degree(int i) const { return static_cast<int>(adjacency_.at(i).size()); }

int Graph::max_degree() const {
  int d = 0;
  for (const auto& nbrs : adjacency_) d = std::max(d, static_cast<int>(nbrs.size()));
  return d;
}

const std::vector<int>& Graph::neighbors(int i) const { return adjacency_.at(i); }

Graph grid_graph(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("grid_graph(): rows and cols must be >= 1");
  }
  EdgeSet edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.insert(canonical_pair(id(r, c), id(r, c + 1)));
      if (r + 1 < rows) edges.insert(canonical_pair(id(r, c), id(r + 1, c)));
    }
  }
  return Graph(rows * cols, std::move(edges));
}

Graph chain_graph(int nodes) {
  if (nodes < 1) {
    throw std::invalid_argument("chain_graph(): nodes must be >= 1");
  }
  EdgeSet edges;
  for (int i = 0; i + 1 < nodes; ++i) edges.insert({i, i + 1});
  return Graph(nodes, std::move(edges));
}

Graph random_tree(int nodes, std::uint64_t seed) {
  if (nodes < 1) {
    throw std::invalid_argument("random_tree(): nodes must be >= 1");
  }
  // Each node k >= 1 attaches to a uniformly random earlier node.
  CounterRng rng(derive_seed(seed, 0x747265u));
  EdgeSet edges;
  for (int k = 1; k < nodes; ++k) {
    int parent = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k));
    edges.insert(canonical_pair(parent, k));
  }
  return Graph(nodes, std::move(edges));
}

TwoHopSet two_hop_closure(const Graph& g) {
  TwoHopSet out;
  out.pairs = g.edges();
  const int n = g.node_count();
  for (int k = 0; k < n; ++k) {
    const auto& nbrs = g.neighbors(k);
    for (size_t a = 0; a < nbrs.size(); ++a) {
      for (size_t b = a + 1; b < nbrs.size(); ++b) {
        out.pairs.insert(canonical_pair(nbrs[a], nbrs[b]));
      }
    }
  }
  for (const auto& pr : out.pairs) {
    if (!g.edges().count(pr)) out.strict_two_hop.insert(pr);
  }
  return out;
}

int two_hop_degree(const TwoHopSet& two_hop, int node) {
  int d = 0;
  for (const auto& [i, j] : two_hop.pairs) {
    if (i == node || j == node) ++d;
  }
  return d;
}

int max_two_hop_degree(const Graph& g) {
  const TwoHopSet th = two_hop_closure(g);
  int d = 0;
  for (int i = 0; i < g.node_count(); ++i) d = std::max(d, two_hop_degree(th, i));
  return d;
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_graph(): cannot open " + path);
  }
  out << g.node_count() << "\n";
  for (const auto& [i, j] : g.edges()) out << i << " " << j << "\n";
  if (!out) {
    throw std::runtime_error("save_graph(): write failed for " + path);
  }
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_graph(): cannot open " + path);
  }
  int node_count = 0;
  if (!(in >> node_count)) {
    throw std::runtime_error("load_graph(): missing node count in " + path);
  }
  EdgeSet edges;
  int i, j;
  while (in >> i >> j) edges.insert(canonical_pair(i, j));
  return Graph(node_count, std::move(edges));
}

}  // namespace netlds
