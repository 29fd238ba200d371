#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace xgraph {

// Nodes are 0-based in the C++ API; the text formats read and write 1-based
// labels (see read_edge_list / write_edge_list).
using NodeSet = std::set<int>;
// Stored with first < second inside UndirectedGraph; path and arc results
// keep traversal order.
using Edge = std::pair<int, int>;

class UndirectedGraph {
 public:
  explicit UndirectedGraph(int num_nodes);

  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::set<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const;

  bool is_connected() const;
  // Connected components as sorted node lists.
  std::vector<std::vector<int>> components() const;
  // Connected with exactly d-1 edges.
  bool is_tree() const;

  bool operator==(const UndirectedGraph& other) const {
    return num_nodes_ == other.num_nodes_ && edges_ == other.edges_;
  }

 private:
  void check_node(int i) const;

  int num_nodes_;
  std::set<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

class Dag {
 public:
  explicit Dag(int num_nodes);

  // Throws DataError if the arc closes a directed cycle.
  void add_arc(int from, int to);
  bool has_arc(int from, int to) const;
  int num_nodes() const { return num_nodes_; }
  const std::set<Edge>& arcs() const { return arcs_; }
  const std::vector<int>& parents(int i) const;
  const std::vector<int>& children(int i) const;
  std::vector<int> topological_order() const;

  // Nodes with a directed path to any member of `nodes`, including the
  // members themselves.
  NodeSet ancestral_closure(const NodeSet& nodes) const;

 private:
  void check_node(int i) const;
  bool reaches(int from, int to) const;

  int num_nodes_;
  std::set<Edge> arcs_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

struct WeightedEdge {
  int i;
  int j;
  double weight;
};

// True iff every path between A and B meets C. A and B must be nonempty and
// A, B, C pairwise disjoint.
bool separates(const UndirectedGraph& g, const NodeSet& a, const NodeSet& b,
               const NodeSet& c);

// Pearl's d-separation: every path between A and B is blocked by C (chain or
// fork node in C, or collider whose descendants all avoid C).
bool d_separates(const Dag& dag, const NodeSet& a, const NodeSet& b,
                 const NodeSet& c);

// De-orient all arcs and marry the parents of every collider.
UndirectedGraph moralized_skeleton(const Dag& dag);

// Sub-DAG on the ancestral closure of `nodes`; other nodes stay isolated.
Dag ancestral_subgraph(const Dag& dag, const NodeSet& nodes);

// Kruskal with ties broken by lexicographic (i, j) edge order. Throws
// DataError when the edges do not connect all d nodes.
UndirectedGraph minimum_spanning_tree(const std::vector<WeightedEdge>& edges,
                                      int num_nodes);

struct DecomposableCheck {
  bool decomposable = false;
  // Perfect elimination ordering when decomposable (first node eliminated
  // first); a maximum-cardinality-search ordering otherwise.
  std::vector<int> elimination_order;
};

DecomposableCheck is_decomposable(const UndirectedGraph& g);

// All maximal cliques (Bron-Kerbosch with pivoting), each sorted, the list
// sorted lexicographically. Isolated nodes appear as singletons.
std::vector<std::vector<int>> cliques(const UndirectedGraph& g);

// Edges of the unique path between i and j in a tree; empty for i == j.
std::vector<Edge> unique_tree_path(const UndirectedGraph& tree, int i, int j);

// All directed paths from `from` to `to`, each as an arc list; empty when
// from == to or no path exists.
std::vector<std::vector<Edge>> directed_paths(const Dag& dag, int from,
                                              int to);

// Text format: one edge per line, "i j" (undirected) or "i -> j" (directed),
// '#' starts a comment, labels are 1-based. The node count is the maximum
// label seen unless a larger num_nodes is given.
UndirectedGraph read_edge_list(std::istream& in, int num_nodes = 0);
Dag read_dag_edge_list(std::istream& in, int num_nodes = 0);
void write_edge_list(std::ostream& out, const UndirectedGraph& g);
void write_edge_list(std::ostream& out, const Dag& dag);

}  // namespace xgraph
