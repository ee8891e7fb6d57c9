#ifndef RICCI_TREE_HPP
#define RICCI_TREE_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ricci/errors.hpp"

namespace ricci {

/// An edge stored as (min endpoint, max endpoint) by label order.
using Edge = std::pair<std::string, std::string>;

/// Labeled finite tree with a canonical edge indexing: edges are sorted
/// lexicographically by (min endpoint, max endpoint) and referred to by their
/// position in that order. All matrices in the library inherit this index, so
/// identical input produces identical matrices across runs.
///
/// Trees are immutable after construction and safe to share across threads.
class Tree {
 public:
  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int i) const { return edges_[i]; }

  bool has_vertex(const std::string& v) const { return degree_.count(v) != 0; }
  int degree_of(const std::string& v) const;
  int max_degree() const;

  /// Indices (canonical) of the edges incident to v.
  const std::vector<int>& edges_at(const std::string& v) const;

  /// "min~max" label for edge i; used by CSV dumps and orbit files.
  std::string edge_label(int i) const;

  /// Canonical index of the edge {u, v}; -1 if absent.
  int edge_index(const std::string& u, const std::string& v) const;

  friend Tree build_tree(const std::vector<Edge>& edge_pairs);
  friend Tree attach_leaves(const Tree& t, const std::string& v, int k);

 private:
  // validates connectivity/acyclicity and builds the canonical indexing;
  // expects edges already in (min, max) endpoint form
  static Tree assemble(std::vector<Edge> edges);

  std::vector<std::string> vertices_;        // sorted
  std::vector<Edge> edges_;                  // canonical order
  std::map<std::string, int> degree_;
  std::map<std::string, std::vector<int>> incident_;
  std::map<Edge, int> index_;
};

/// Validates and canonicalizes an edge list into a Tree.
/// Rejects self-loops, duplicate edges, cycles, disconnected input, and
/// labels that are empty, contain whitespace, or contain '~' (reserved for
/// generated leaf names).
Tree build_tree(const std::vector<Edge>& edge_pairs);

/// Reads the edge-list format: one edge per line as two whitespace-separated
/// labels; blank lines and lines starting with '#' are ignored.
Tree read_tree(std::istream& in);
Tree read_tree_file(const std::string& path);

/// Returns the tree with k new pendant edges at v. Generated leaves are named
/// "~leaf0", "~leaf1", ... continuing past any that already exist, so
/// repeated growth never collides. k = 0 returns a copy.
Tree attach_leaves(const Tree& t, const std::string& v, int k);

/// One branch of the decomposition at a pivot: the component hanging off one
/// neighbor, identified by edge indices into the *base* tree (degrees are
/// always read from the base tree, never from the fragment).
struct Branch {
  std::string root_neighbor;     // u_j
  int root_edge = -1;            // index of {pivot, u_j}
  std::vector<int> edges;        // sorted, includes root_edge
};

struct BranchDecomposition {
  std::string pivot;
  int pivot_degree = 0;
  std::vector<Branch> branches;  // ordered by root_neighbor label
};

/// Splits E(T) into the branches hanging off v; every edge lands in exactly
/// one branch and each root edge belongs to its own branch.
BranchDecomposition branch_decomposition(const Tree& t, const std::string& v);

}  // namespace ricci

#endif
