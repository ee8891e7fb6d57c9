#include "ricci/tree.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace ricci {

namespace {

void check_label(const std::string& label) {
  if (label.empty())
    fail(ErrorKind::InvalidLabel, "empty vertex label");
  for (unsigned char c : label) {
    if (std::isspace(c))
      fail(ErrorKind::InvalidLabel, "label contains whitespace: '" + label + "'");
  }
  if (label.find('~') != std::string::npos)
    fail(ErrorKind::InvalidLabel,
         "label contains reserved character '~': '" + label + "'");
}

Edge canonical(const std::string& a, const std::string& b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

}  // namespace

Tree Tree::assemble(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  Tree t;
  std::set<std::string> vset;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (i > 0 && edges[i] == edges[i - 1])
      fail(ErrorKind::DuplicateEdge,
           "duplicate edge {" + edges[i].first + ", " + edges[i].second + "}");
    vset.insert(edges[i].first);
    vset.insert(edges[i].second);
  }
  t.vertices_.assign(vset.begin(), vset.end());
  t.edges_ = std::move(edges);
  for (const auto& v : t.vertices_) {
    t.degree_[v] = 0;
    t.incident_[v] = {};
  }
  for (int i = 0; i < t.n_edges(); ++i) {
    const Edge& e = t.edges_[i];
    t.degree_[e.first]++;
    t.degree_[e.second]++;
    t.incident_[e.first].push_back(i);
    t.incident_[e.second].push_back(i);
    t.index_[e] = i;
  }

  if (t.n_edges() != t.n_vertices() - 1)
    fail(ErrorKind::NotATree, "edge count " + std::to_string(t.n_edges()) +
                                  " != vertex count - 1 (cycle present)");
  // connectivity sweep from the first vertex
  std::set<std::string> seen;
  std::queue<std::string> q;
  q.push(t.vertices_.front());
  seen.insert(t.vertices_.front());
  while (!q.empty()) {
    std::string v = q.front();
    q.pop();
    for (int ei : t.incident_[v]) {
      const Edge& e = t.edges_[ei];
      const std::string& other = (e.first == v) ? e.second : e.first;
      if (seen.insert(other).second) q.push(other);
    }
  }
  if (static_cast<int>(seen.size()) != t.n_vertices())
    fail(ErrorKind::NotATree, "input is disconnected");
  return t;
}

int Tree::degree_of(const std::string& v) const {
  auto it = degree_.find(v);
  if (it == degree_.end())
    fail(ErrorKind::UnknownVertex, "unknown vertex '" + v + "'");
  return it->second;
}

int Tree::max_degree() const {
  int best = 0;
  for (const auto& [v, d] : degree_) best = std::max(best, d);
  return best;
}

const std::vector<int>& Tree::edges_at(const std::string& v) const {
  auto it = incident_.find(v);
  if (it == incident_.end())
    fail(ErrorKind::UnknownVertex, "unknown vertex '" + v + "'");
  return it->second;
}

std::string Tree::edge_label(int i) const {
  return edges_[i].first + "~" + edges_[i].second;
}

int Tree::edge_index(const std::string& u, const std::string& v) const {
  auto it = index_.find(canonical(u, v));
  return it == index_.end() ? -1 : it->second;
}

Tree build_tree(const std::vector<Edge>& edge_pairs) {
  if (edge_pairs.empty())
    fail(ErrorKind::NotATree, "empty edge list");
  std::vector<Edge> edges;
  edges.reserve(edge_pairs.size());
  for (const auto& [a, b] : edge_pairs) {
    check_label(a);
    check_label(b);
    if (a == b) fail(ErrorKind::SelfLoop, "self-loop at '" + a + "'");
    edges.push_back(canonical(a, b));
  }
  return Tree::assemble(std::move(edges));
}

Tree read_tree(std::istream& in) {
  std::vector<Edge> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra))
      fail(ErrorKind::ParseError,
           "line " + std::to_string(lineno) + ": expected exactly two labels");
    pairs.emplace_back(a, b);
  }
  if (pairs.empty())
    fail(ErrorKind::ParseError, "no edges in input");
  return build_tree(pairs);
}

Tree read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open tree file '" + path + "'");
  return read_tree(in);
}

Tree attach_leaves(const Tree& t, const std::string& v, int k) {
  if (!t.has_vertex(v))
    fail(ErrorKind::UnknownVertex, "unknown vertex '" + v + "'");
  if (k < 0) fail(ErrorKind::InvalidK, "negative leaf count");
  // continue numbering past any generated leaves already present
  long long next = 0;
  for (const auto& label : t.vertices()) {
    if (label.rfind("~leaf", 0) == 0) {
      try {
        next = std::max(next, std::stoll(label.substr(5)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
  std::vector<Edge> edges = t.edges();
  for (int i = 0; i < k; ++i) {
    std::string leaf = "~leaf" + std::to_string(next + i);
    edges.push_back(canonical(v, leaf));
  }
  // assemble directly: generated labels legitimately contain '~'
  return Tree::assemble(std::move(edges));
}

BranchDecomposition branch_decomposition(const Tree& t, const std::string& v) {
  const int d = t.degree_of(v);  // throws UnknownVertex
  BranchDecomposition out;
  out.pivot = v;
  out.pivot_degree = d;

  // neighbors in label order
  std::vector<std::pair<std::string, int>> roots;  // (neighbor, root edge idx)
  for (int ei : t.edges_at(v)) {
    const Edge& e = t.edge(ei);
    roots.emplace_back(e.first == v ? e.second : e.first, ei);
  }
  std::sort(roots.begin(), roots.end());

  for (const auto& [u, root_edge] : roots) {
    Branch b;
    b.root_neighbor = u;
    b.root_edge = root_edge;
    b.edges.push_back(root_edge);
    // collect the component of u with v removed
    std::set<std::string> seen{v, u};
    std::queue<std::string> q;
    q.push(u);
    while (!q.empty()) {
      std::string x = q.front();
      q.pop();
      for (int ei : t.edges_at(x)) {
        if (ei == root_edge) continue;
        const Edge& e = t.edge(ei);
        const std::string& other = (e.first == x) ? e.second : e.first;
        if (other == v) continue;
        b.edges.push_back(ei);
        if (seen.insert(other).second) q.push(other);
      }
    }
    std::sort(b.edges.begin(), b.edges.end());
    b.edges.erase(std::unique(b.edges.begin(), b.edges.end()), b.edges.end());
    out.branches.push_back(std::move(b));
  }
  return out;
}

}  // namespace ricci
