#include <doctest.h>

#include <algorithm>
#include <queue>

#include "netlds/graph.hpp"
#include "support.hpp"

using namespace netlds;

namespace {

// Independent oracle: all-pairs shortest path by BFS.
std::vector<std::vector<int>> bfs_distances(const Graph& g) {
  const int n = g.node_count();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    dist[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : g.neighbors(u)) {
        if (dist[s][v] < 0) {
          dist[s][v] = dist[s][u] + 1;
          q.push(v);
        }
      }
    }
  }
  return dist;
}

// Oracle for the two-hop closure: brute-force over the definition.
EdgeSet two_hop_oracle(const Graph& g) {
  EdgeSet out = g.edges();
  const int n = g.node_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (k != i && k != j && g.has_edge(i, k) && g.has_edge(j, k)) {
          out.insert({i, j});
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("grid generator node and edge counts") {
  const Graph g55 = grid_graph(5, 5);
  CHECK(g55.node_count() == 25);
  CHECK(g55.edge_count() == 40);

  const Graph g11 = grid_graph(1, 1);
  CHECK(g11.node_count() == 1);
  CHECK(g11.edge_count() == 0);

  const Graph g22 = grid_graph(2, 2);
  CHECK(g22.node_count() == 4);
  CHECK(g22.edge_count() == 4);
  // 4-cycle: every node has degree 2
  for (int i = 0; i < 4; ++i) CHECK(g22.degree(i) == 2);
}

TEST_CASE("grid rejects empty dimensions") {
  CHECK_THROWS_AS(grid_graph(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(grid_graph(3, -1), std::invalid_argument);
}

TEST_CASE("graph construction validates edges") {
  CHECK_THROWS_AS(Graph(3, EdgeSet{{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, EdgeSet{{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, EdgeSet{{2, 1}}), std::invalid_argument);
}

TEST_CASE("two-hop closure on a path") {
  const Graph path = chain_graph(3);
  const TwoHopSet th = two_hop_closure(path);
  CHECK(th.pairs == EdgeSet{{0, 1}, {0, 2}, {1, 2}});
  CHECK(th.strict_two_hop == EdgeSet{{0, 2}});
}

TEST_CASE("two-hop closure on a complete graph adds nothing") {
  EdgeSet k4_edges;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) k4_edges.insert({i, j});
  }
  const Graph k4(4, k4_edges);
  const TwoHopSet th = two_hop_closure(k4);
  CHECK(th.pairs == k4.edges());
  CHECK(th.strict_two_hop.empty());
}

TEST_CASE("two-hop closure on the 2x2 grid matches brute force") {
  const Graph g = grid_graph(2, 2);
  const TwoHopSet th = two_hop_closure(g);
  CHECK(th.pairs == two_hop_oracle(g));
  CHECK(th.strict_two_hop.size() == 2);  // both diagonals
}

TEST_CASE("two-hop closure matches brute force on assorted graphs") {
  const Graph graphs[] = {grid_graph(3, 4), chain_graph(7), random_tree(12, 3),
                          random_tree(20, 9), grid_graph(4, 4)};
  for (const auto& g : graphs) {
    const TwoHopSet th = two_hop_closure(g);
    CHECK(th.pairs == two_hop_oracle(g));
    // recomputing yields the same set
    CHECK(two_hop_closure(g).pairs == th.pairs);
    // strict part is disjoint from edges and unions back
    for (const auto& pr : th.strict_two_hop) CHECK(!g.edges().count(pr));
    EdgeSet unioned = g.edges();
    unioned.insert(th.strict_two_hop.begin(), th.strict_two_hop.end());
    CHECK(unioned == th.pairs);
  }
}

TEST_CASE("strict two-hop pairs sit at graph distance exactly two") {
  const Graph graphs[] = {grid_graph(3, 3), random_tree(15, 4), chain_graph(9)};
  for (const auto& g : graphs) {
    const auto dist = bfs_distances(g);
    for (const auto& [i, j] : two_hop_closure(g).strict_two_hop) {
      CHECK(dist[i][j] == 2);
    }
  }
}

TEST_CASE("two-hop degree is bounded by the squared maximum degree") {
  const Graph graphs[] = {grid_graph(4, 5), random_tree(18, 7), chain_graph(10)};
  for (const auto& g : graphs) {
    const TwoHopSet th = two_hop_closure(g);
    const int dmax = g.max_degree();
    for (int i = 0; i < g.node_count(); ++i) {
      CHECK(two_hop_degree(th, i) <= dmax * dmax);
    }
    CHECK(max_two_hop_degree(g) >= g.max_degree());
  }
}

TEST_CASE("chain and tree generators") {
  const Graph chain = chain_graph(5);
  CHECK(chain.edge_count() == 4);
  CHECK(chain.degree(0) == 1);
  CHECK(chain.degree(2) == 2);

  const Graph tree = random_tree(10, 42);
  CHECK(tree.edge_count() == 9);
  const auto dist = bfs_distances(tree);
  for (int i = 0; i < 10; ++i) CHECK(dist[0][i] >= 0);  // connected

  // determinism
  CHECK(random_tree(10, 42).edges() == tree.edges());
  CHECK(random_tree(10, 43).edges() != tree.edges());
}

TEST_CASE("edge-list file round trip") {
  const Graph g = grid_graph(3, 3);
  const auto path = netlds::testing::temp_path("graph.edges");
  save_graph(g, path);
  const Graph loaded = load_graph(path);
  CHECK(loaded.node_count() == g.node_count());
  CHECK(loaded.edges() == g.edges());

  CHECK_THROWS_AS(load_graph(netlds::testing::temp_path("missing.edges")), std::runtime_error);
}

TEST_SUITE_END();
