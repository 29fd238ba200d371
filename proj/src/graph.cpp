#include "xgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "xgraph/errors.hpp"

namespace xgraph {

namespace {

Edge ordered(int i, int j) { return i < j ? Edge{i, j} : Edge{j, i}; }

void require_disjoint(const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  auto overlap = [](const NodeSet& x, const NodeSet& y) {
    for (int v : x) {
      if (y.count(v)) return true;
    }
    return false;
  };
  if (overlap(a, b) || overlap(a, c) || overlap(b, c)) {
    throw DataError("separation query requires pairwise disjoint node sets");
  }
  if (a.empty() || b.empty()) {
    throw DataError("separation query requires nonempty A and B");
  }
}

}  // namespace

UndirectedGraph::UndirectedGraph(int num_nodes) : num_nodes_(num_nodes) {
  if (num_nodes <= 0) {
    throw DataError("graph needs a positive number of nodes");
  }
  adj_.resize(num_nodes);
}

void UndirectedGraph::check_node(int i) const {
  if (i < 0 || i >= num_nodes_) {
    throw DataError("node index " + std::to_string(i) + " out of range [0, " +
                    std::to_string(num_nodes_) + ")");
  }
}

void UndirectedGraph::add_edge(int i, int j) {
  check_node(i);
  check_node(j);
  if (i == j) {
    throw DataError("self-loops are not allowed");
  }
  if (edges_.insert(ordered(i, j)).second) {
    adj_[i].push_back(j);
    adj_[j].push_back(i);
    std::sort(adj_[i].begin(), adj_[i].end());
    std::sort(adj_[j].begin(), adj_[j].end());
  }
}

bool UndirectedGraph::has_edge(int i, int j) const {
  check_node(i);
  check_node(j);
  return i != j && edges_.count(ordered(i, j)) > 0;
}

const std::vector<int>& UndirectedGraph::neighbors(int i) const {
  check_node(i);
  return adj_[i];
}

std::vector<std::vector<int>> UndirectedGraph::components() const {
  std::vector<int> label(num_nodes_, -1);
  int next = 0;
  for (int start = 0; start < num_nodes_; ++start) {
    if (label[start] >= 0) continue;
    std::deque<int> queue{start};
    label[start] = next;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : adj_[v]) {
        if (label[w] < 0) {
          label[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  std::vector<std::vector<int>> comps(next);
  for (int v = 0; v < num_nodes_; ++v) comps[label[v]].push_back(v);
  return comps;
}

bool UndirectedGraph::is_connected() const { return components().size() == 1; }

bool UndirectedGraph::is_tree() const {
  return num_edges() == num_nodes_ - 1 && is_connected();
}

Dag::Dag(int num_nodes) : num_nodes_(num_nodes) {
  if (num_nodes <= 0) {
    throw DataError("graph needs a positive number of nodes");
  }
  parents_.resize(num_nodes);
  children_.resize(num_nodes);
}

void Dag::check_node(int i) const {
  if (i < 0 || i >= num_nodes_) {
    throw DataError("node index " + std::to_string(i) + " out of range [0, " +
                    std::to_string(num_nodes_) + ")");
  }
}

bool Dag::reaches(int from, int to) const {
  if (from == to) return true;
  std::vector<char> seen(num_nodes_, 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : children_[v]) {
      if (w == to) return true;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

void Dag::add_arc(int from, int to) {
  check_node(from);
  check_node(to);
  if (from == to) {
    throw DataError("self-loops are not allowed");
  }
  if (arcs_.count({from, to})) return;
  if (reaches(to, from)) {
    throw DataError("arc " + std::to_string(from) + "->" + std::to_string(to) +
                    " would close a directed cycle");
  }
  arcs_.insert({from, to});
  parents_[to].push_back(from);
  children_[from].push_back(to);
  std::sort(parents_[to].begin(), parents_[to].end());
  std::sort(children_[from].begin(), children_[from].end());
}

bool Dag::has_arc(int from, int to) const {
  check_node(from);
  check_node(to);
  return arcs_.count({from, to}) > 0;
}

const std::vector<int>& Dag::parents(int i) const {
  check_node(i);
  return parents_[i];
}

const std::vector<int>& Dag::children(int i) const {
  check_node(i);
  return children_[i];
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> indeg(num_nodes_);
  for (int v = 0; v < num_nodes_; ++v) {
    indeg[v] = static_cast<int>(parents_[v].size());
  }
  std::deque<int> ready;
  for (int v = 0; v < num_nodes_; ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  std::vector<int> order;
  order.reserve(num_nodes_);
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (int w : children_[v]) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != num_nodes_) {
    throw DataError("directed graph contains a cycle");
  }
  return order;
}

NodeSet Dag::ancestral_closure(const NodeSet& nodes) const {
  NodeSet closure = nodes;
  std::deque<int> queue(nodes.begin(), nodes.end());
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    check_node(v);
    for (int p : parents_[v]) {
      if (closure.insert(p).second) queue.push_back(p);
    }
  }
  return closure;
}

bool separates(const UndirectedGraph& g, const NodeSet& a, const NodeSet& b,
               const NodeSet& c) {
  require_disjoint(a, b, c);
  // Delete C and test reachability from A to B.
  std::vector<char> blocked(g.num_nodes(), 0);
  for (int v : c) blocked[v] = 1;
  std::vector<char> seen(g.num_nodes(), 0);
  std::deque<int> queue;
  for (int v : a) {
    seen[v] = 1;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (b.count(v)) return false;
    for (int w : g.neighbors(v)) {
      if (!seen[w] && !blocked[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return true;
}

bool d_separates(const Dag& dag, const NodeSet& a, const NodeSet& b,
                 const NodeSet& c) {
  require_disjoint(a, b, c);
  const int n = dag.num_nodes();
  // Nodes whose descendant set meets C (equivalently: C and its ancestors);
  // a collider on a path is traversable exactly when it lies in this set.
  const NodeSet collider_open = dag.ancestral_closure(c);

  // Reachability over states (node, entered-from-parent?), the standard
  // active-trail traversal.
  std::vector<std::array<char, 2>> seen(n, {0, 0});
  std::deque<std::pair<int, bool>> queue;
  for (int v : a) {
    queue.emplace_back(v, false);  // treated as entered from a child
    seen[v][0] = 1;
  }
  auto push = [&](int v, bool from_parent) {
    auto& flag = seen[v][from_parent ? 1 : 0];
    if (!flag) {
      flag = 1;
      queue.emplace_back(v, from_parent);
    }
  };
  while (!queue.empty()) {
    auto [v, from_parent] = queue.front();
    queue.pop_front();
    if (b.count(v)) return false;
    const bool in_c = c.count(v) > 0;
    if (!from_parent) {
      if (in_c) continue;
      for (int p : dag.parents(v)) push(p, false);
      for (int w : dag.children(v)) push(w, true);
    } else {
      if (!in_c) {
        for (int w : dag.children(v)) push(w, true);
      }
      if (collider_open.count(v)) {
        for (int p : dag.parents(v)) push(p, false);
      }
    }
  }
  return true;
}

UndirectedGraph moralized_skeleton(const Dag& dag) {
  UndirectedGraph g(dag.num_nodes());
  for (const auto& [from, to] : dag.arcs()) g.add_edge(from, to);
  for (int v = 0; v < dag.num_nodes(); ++v) {
    const auto& pa = dag.parents(v);
    for (std::size_t x = 0; x < pa.size(); ++x) {
      for (std::size_t y = x + 1; y < pa.size(); ++y) {
        g.add_edge(pa[x], pa[y]);
      }
    }
  }
  return g;
}

Dag ancestral_subgraph(const Dag& dag, const NodeSet& nodes) {
  const NodeSet keep = dag.ancestral_closure(nodes);
  Dag sub(dag.num_nodes());
  for (const auto& [from, to] : dag.arcs()) {
    if (keep.count(from) && keep.count(to)) sub.add_arc(from, to);
  }
  return sub;
}

UndirectedGraph minimum_spanning_tree(const std::vector<WeightedEdge>& edges,
                                      int num_nodes) {
  for (const auto& e : edges) {
    if (!(e.weight >= 0) || !std::isfinite(e.weight)) {
      throw DataError("spanning tree weights must be finite and nonnegative");
    }
  }
  std::vector<WeightedEdge> sorted = edges;
  for (auto& e : sorted) {
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const WeightedEdge& x, const WeightedEdge& y) {
                     if (x.weight != y.weight) return x.weight < y.weight;
                     if (x.i != y.i) return x.i < y.i;
                     return x.j < y.j;
                   });

  std::vector<int> root(num_nodes);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  };

  UndirectedGraph tree(num_nodes);
  for (const auto& e : sorted) {
    const int ri = find(e.i);
    const int rj = find(e.j);
    if (ri == rj) continue;
    root[ri] = rj;
    tree.add_edge(e.i, e.j);
    if (tree.num_edges() == num_nodes - 1) break;
  }
  if (tree.num_edges() != num_nodes - 1) {
    throw DataError("edge weights do not span a connected graph; no spanning "
                    "tree exists");
  }
  return tree;
}

DecomposableCheck is_decomposable(const UndirectedGraph& g) {
  const int n = g.num_nodes();
  // Maximum cardinality search, visiting ties in ascending node order.
  std::vector<int> weight(n, 0);
  std::vector<char> visited(n, 0);
  std::vector<int> mcs_order;  // visit order, later reversed
  mcs_order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (!visited[v] && (best < 0 || weight[v] > weight[best])) best = v;
    }
    visited[best] = 1;
    mcs_order.push_back(best);
    for (int w : g.neighbors(best)) {
      if (!visited[w]) ++weight[w];
    }
  }

  // The reverse of an MCS visit order is a perfect elimination ordering iff
  // the graph is chordal.
  DecomposableCheck check;
  check.elimination_order.assign(mcs_order.rbegin(), mcs_order.rend());
  std::vector<int> position(n);
  for (int idx = 0; idx < n; ++idx) position[check.elimination_order[idx]] = idx;

  check.decomposable = true;
  for (int idx = 0; idx < n && check.decomposable; ++idx) {
    const int v = check.elimination_order[idx];
    // Neighbors eliminated after v must form a clique.
    std::vector<int> later;
    for (int w : g.neighbors(v)) {
      if (position[w] > idx) later.push_back(w);
    }
    for (std::size_t x = 0; x < later.size() && check.decomposable; ++x) {
      for (std::size_t y = x + 1; y < later.size(); ++y) {
        if (!g.has_edge(later[x], later[y])) {
          check.decomposable = false;
          break;
        }
      }
    }
  }
  return check;
}

namespace {

void bron_kerbosch(const UndirectedGraph& g, std::vector<int>& r, NodeSet p,
                   NodeSet x, std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  // Pivot on the vertex with the most neighbors in P.
  int pivot = -1;
  std::size_t best = 0;
  for (const NodeSet* s : {&p, &x}) {
    for (int u : *s) {
      std::size_t cnt = 0;
      for (int w : g.neighbors(u)) cnt += p.count(w);
      if (pivot < 0 || cnt > best) {
        pivot = u;
        best = cnt;
      }
    }
  }
  NodeSet candidates;
  for (int v : p) {
    if (pivot < 0 || !g.has_edge(pivot, v)) candidates.insert(v);
  }
  for (int v : candidates) {
    NodeSet pv, xv;
    for (int w : g.neighbors(v)) {
      if (p.count(w)) pv.insert(w);
      if (x.count(w)) xv.insert(w);
    }
    r.push_back(v);
    bron_kerbosch(g, r, pv, xv, out);
    r.pop_back();
    p.erase(v);
    x.insert(v);
  }
}

}  // namespace

std::vector<std::vector<int>> cliques(const UndirectedGraph& g) {
  NodeSet p;
  for (int v = 0; v < g.num_nodes(); ++v) p.insert(v);
  std::vector<int> r;
  std::vector<std::vector<int>> out;
  bron_kerbosch(g, r, p, {}, out);
  for (auto& clique : out) std::sort(clique.begin(), clique.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> unique_tree_path(const UndirectedGraph& tree, int i, int j) {
  if (!tree.is_tree()) {
    throw DataError("unique_tree_path requires a tree");
  }
  if (i == j) return {};
  std::vector<int> prev(tree.num_nodes(), -1);
  std::deque<int> queue{i};
  prev[i] = i;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == j) break;
    for (int w : tree.neighbors(v)) {
      if (prev[w] < 0) {
        prev[w] = v;
        queue.push_back(w);
      }
    }
  }
  std::vector<Edge> path;
  for (int v = j; v != i; v = prev[v]) path.emplace_back(prev[v], v);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

void collect_paths(const Dag& dag, int v, int target, std::vector<char>& used,
                   std::vector<Edge>& arcs,
                   std::vector<std::vector<Edge>>& out) {
  if (v == target) {
    out.push_back(arcs);
    return;
  }
  for (int w : dag.children(v)) {
    if (used[w]) continue;
    used[w] = 1;
    arcs.emplace_back(v, w);
    collect_paths(dag, w, target, used, arcs, out);
    arcs.pop_back();
    used[w] = 0;
  }
}

}  // namespace

std::vector<std::vector<Edge>> directed_paths(const Dag& dag, int from,
                                              int to) {
  if (from == to) return {};
  std::vector<char> used(dag.num_nodes(), 0);
  used[from] = 1;
  std::vector<Edge> arcs;
  std::vector<std::vector<Edge>> out;
  collect_paths(dag, from, to, used, arcs, out);
  return out;
}

namespace {

struct ParsedEdges {
  std::vector<std::pair<int, int>> pairs;  // 0-based
  bool directed = false;
  int max_label = 0;
};

ParsedEdges parse_edge_lines(std::istream& in, bool expect_directed) {
  ParsedEdges parsed;
  parsed.directed = expect_directed;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int i = 0;
    if (!(ls >> i)) continue;  // blank or comment-only line
    std::string token;
    int j = 0;
    if (!(ls >> token)) {
      throw DataError("edge list line " + std::to_string(lineno) +
                      ": missing second node");
    }
    if (token == "->") {
      if (!expect_directed) {
        throw DataError("edge list line " + std::to_string(lineno) +
                        ": directed arc in an undirected edge list");
      }
      if (!(ls >> j)) {
        throw DataError("edge list line " + std::to_string(lineno) +
                        ": missing arc head");
      }
    } else {
      if (expect_directed) {
        throw DataError("edge list line " + std::to_string(lineno) +
                        ": expected 'i -> j' arcs");
      }
      try {
        j = std::stoi(token);
      } catch (const std::exception&) {
        throw DataError("edge list line " + std::to_string(lineno) +
                        ": bad node label '" + token + "'");
      }
    }
    std::string extra;
    if (ls >> extra) {
      throw DataError("edge list line " + std::to_string(lineno) +
                      ": trailing content '" + extra + "'");
    }
    if (i < 1 || j < 1) {
      throw DataError("edge list line " + std::to_string(lineno) +
                      ": labels are 1-based");
    }
    parsed.max_label = std::max({parsed.max_label, i, j});
    parsed.pairs.emplace_back(i - 1, j - 1);
  }
  return parsed;
}

}  // namespace

UndirectedGraph read_edge_list(std::istream& in, int num_nodes) {
  const ParsedEdges parsed = parse_edge_lines(in, false);
  const int n = std::max(num_nodes, parsed.max_label);
  if (n == 0) {
    throw DataError("edge list defines no nodes");
  }
  UndirectedGraph g(n);
  for (const auto& [i, j] : parsed.pairs) g.add_edge(i, j);
  return g;
}

Dag read_dag_edge_list(std::istream& in, int num_nodes) {
  const ParsedEdges parsed = parse_edge_lines(in, true);
  const int n = std::max(num_nodes, parsed.max_label);
  if (n == 0) {
    throw DataError("edge list defines no nodes");
  }
  Dag dag(n);
  for (const auto& [i, j] : parsed.pairs) dag.add_arc(i, j);
  return dag;
}

void write_edge_list(std::ostream& out, const UndirectedGraph& g) {
  out << "# undirected, " << g.num_nodes() << " nodes, " << g.num_edges()
      << " edges\n";
  for (const auto& [i, j] : g.edges()) {
    out << (i + 1) << " " << (j + 1) << "\n";
  }
}

void write_edge_list(std::ostream& out, const Dag& dag) {
  out << "# directed, " << dag.num_nodes() << " nodes, " << dag.arcs().size()
      << " arcs\n";
  for (const auto& [i, j] : dag.arcs()) {
    out << (i + 1) << " -> " << (j + 1) << "\n";
  }
}

}  // namespace xgraph
