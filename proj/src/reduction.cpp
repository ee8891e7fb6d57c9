#include "ricci/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "ricci/ricci_matrix.hpp"

namespace ricci {

OrbitPartition read_orbit_partition(std::istream& in, const Tree& t) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("orbit file: ") + e.what());
  }
  if (!doc.is_array())
    fail(ErrorKind::ParseError, "orbit file: expected a list of lists");
  OrbitPartition p;
  for (const auto& cls : doc) {
    if (!cls.is_array())
      fail(ErrorKind::ParseError, "orbit file: each class must be a list");
    std::vector<int> ids;
    for (const auto& item : cls) {
      if (!item.is_string())
        fail(ErrorKind::ParseError, "orbit file: edge labels must be strings");
      const std::string label = item.get<std::string>();
      const size_t sep = label.find('~');
      if (sep == std::string::npos)
        fail(ErrorKind::ParseError, "orbit file: bad edge label '" + label + "'");
      const int idx = t.edge_index(label.substr(0, sep), label.substr(sep + 1));
      if (idx < 0)
        fail(ErrorKind::ParseError, "orbit file: no such edge '" + label + "'");
      ids.push_back(idx);
    }
    p.classes.push_back(std::move(ids));
  }
  return p;
}

OrbitPartition read_orbit_partition_file(const std::string& path, const Tree& t) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open orbit file '" + path + "'");
  return read_orbit_partition(in, t);
}

Matrix dirichlet_branch_matrix(const Tree& t, const std::string& pivot,
                               const Branch& branch) {
  const Matrix full = ricci_matrix(t);
  const int n = static_cast<int>(branch.edges.size());
  Matrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = full(branch.edges[r], branch.edges[c]);
  // only the root edge touches the pivot inside a branch, so the Dirichlet
  // condition affects exactly its diagonal entry
  const int root_pos =
      static_cast<int>(std::lower_bound(branch.edges.begin(), branch.edges.end(),
                                        branch.root_edge) -
                       branch.edges.begin());
  a(root_pos, root_pos) += 1.0 / t.degree_of(pivot);
  return a;
}

namespace {

// Class-level quotient of a branch block: entry (O, O') is the row sum of the
// edge-level matrix over O' from any representative of O. The caller has
// already verified representative independence.
Matrix quotient(const Matrix& edge_level, const std::vector<std::vector<int>>& classes,
                const std::vector<int>& position) {
  const int m = static_cast<int>(classes.size());
  Matrix q(m, m);
  for (int a = 0; a < m; ++a) {
    const int rep = position[classes[a].front()];
    for (int b = 0; b < m; ++b) {
      double s = 0.0;
      for (int e : classes[b]) s += edge_level(rep, position[e]);
      q(a, b) = s;
    }
  }
  return q;
}

}  // namespace

SymmetrizationScaling ReducedSystem::scaling_for(long long k) const {
  SymmetrizationScaling s;
  s.weights.reserve(dim());
  for (int sz : class_sizes) s.weights.push_back(std::sqrt(static_cast<double>(sz)));
  s.weights.push_back(std::sqrt(static_cast<double>(k)));
  return s;
}

BlockTriangular ReducedSystem::block_triangular() const {
  BlockTriangular bt;
  bt.blocks = branch_blocks;
  bt.couplings = interface_cols;
  for (size_t j = 0; j < branch_classes.size(); ++j) {
    SymmetrizationScaling s;
    for (const auto& cls : branch_classes[j])
      s.weights.push_back(std::sqrt(static_cast<double>(cls.size())));
    bt.scalings.push_back(std::move(s));
  }
  return bt;
}

ReducedSystem reduced_system(const Tree& t, const std::string& v,
                             const std::optional<OrbitPartition>& extra) {
  ReducedSystem rs;
  rs.base = t;
  rs.pivot = v;
  rs.d = t.degree_of(v);
  rs.decomposition = branch_decomposition(t, v);
  const int d = rs.d;

  // edge -> branch
  std::vector<int> branch_of(t.n_edges(), -1);
  for (size_t j = 0; j < rs.decomposition.branches.size(); ++j)
    for (int e : rs.decomposition.branches[j].edges) branch_of[e] = static_cast<int>(j);

  // start from singletons, then merge the user-supplied classes
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of(t.n_edges(), -1);
  if (extra) {
    std::vector<bool> used(t.n_edges(), false);
    for (const auto& cls : extra->classes) {
      if (cls.empty()) continue;
      for (int e : cls) {
        if (e < 0 || e >= t.n_edges())
          fail(ErrorKind::IncompatiblePartition, "edge index out of range");
        if (used[e])
          fail(ErrorKind::IncompatiblePartition,
               "edge " + t.edge_label(e) + " listed in two classes");
        used[e] = true;
      }
      for (int e : cls)
        if (branch_of[e] != branch_of[cls.front()])
          fail(ErrorKind::IncompatiblePartition,
               "class spans two branches at the pivot (contains " +
                   t.edge_label(cls.front()) + " and " + t.edge_label(e) +
                   "); only within-branch symmetries reduce");
      classes.push_back(cls);
    }
    for (int e = 0; e < t.n_edges(); ++e)
      if (!used[e]) classes.push_back({e});
  } else {
    for (int e = 0; e < t.n_edges(); ++e) classes.push_back({e});
  }
  for (auto& cls : classes) std::sort(cls.begin(), cls.end());

  // the root edge of each branch couples to the leaf cluster and the other
  // branches; merging it with interior edges never commutes with the matrix
  for (const auto& br : rs.decomposition.branches)
    for (const auto& cls : classes)
      if (std::binary_search(cls.begin(), cls.end(), br.root_edge) && cls.size() > 1)
        fail(ErrorKind::IncompatiblePartition,
             "class containing the root edge " + t.edge_label(br.root_edge) +
                 " must be a singleton");

  // group classes by branch, order branches as in the decomposition and
  // classes by their smallest edge
  rs.branch_classes.resize(rs.decomposition.branches.size());
  std::sort(classes.begin(), classes.end());
  for (auto& cls : classes) {
    rs.branch_classes[branch_of[cls.front()]].push_back(cls);
  }

  // per-branch blocks, with the row-sum compatibility test
  int total_coords = 0;
  for (size_t j = 0; j < rs.decomposition.branches.size(); ++j) {
    const Branch& br = rs.decomposition.branches[j];
    const auto& bcls = rs.branch_classes[j];
    const Matrix edge_level = dirichlet_branch_matrix(t, v, br);
    std::vector<int> position(t.n_edges(), -1);
    for (size_t p = 0; p < br.edges.size(); ++p) position[br.edges[p]] = static_cast<int>(p);

    for (const auto& target : bcls) {
      for (const auto& source : bcls) {
        double ref = 0.0;
        bool first = true;
        for (int e : source) {
          double s = 0.0;
          for (int e2 : target) s += edge_level(position[e], position[e2]);
          if (first) {
            ref = s;
            first = false;
          } else if (std::fabs(s - ref) > 1e-12) {
            fail(ErrorKind::IncompatiblePartition,
                 "row sums differ inside a class (edge " + t.edge_label(e) +
                     "): the partition is not a symmetry");
          }
        }
      }
    }

    rs.branch_blocks.push_back(quotient(edge_level, bcls, position));
    Vec c(bcls.size(), 0.0);
    int root_pos = -1;
    for (size_t p = 0; p < bcls.size(); ++p)
      if (bcls[p].size() == 1 && bcls[p][0] == br.root_edge) root_pos = static_cast<int>(p);
    if (root_pos < 0)
      fail(ErrorKind::IncompatiblePartition, "root edge missing from its branch classes");
    c[root_pos] = 1.0;
    rs.interface_cols.push_back(std::move(c));
    rs.root_class.push_back(root_pos);
    for (const auto& cls : bcls) rs.class_sizes.push_back(static_cast<int>(cls.size()));
    total_coords += static_cast<int>(bcls.size());
  }

  // assemble the limit matrix and the coupling
  const int dim = total_coords + 1;
  rs.limit = Matrix(dim, dim);
  rs.coupling = Matrix(dim, dim);
  std::vector<int> offsets(rs.branch_blocks.size());
  {
    int off = 0;
    for (size_t j = 0; j < rs.branch_blocks.size(); ++j) {
      offsets[j] = off;
      off += rs.branch_blocks[j].rows();
    }
  }
  for (size_t j = 0; j < rs.branch_blocks.size(); ++j) {
    const Matrix& a = rs.branch_blocks[j];
    const int off = offsets[j];
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c) rs.limit(off + r, off + c) = a(r, c);
    const int root = offsets[j] + rs.root_class[j];
    rs.limit(root, dim - 1) = 1.0;
    rs.coupling(root, root) = -1.0;
    rs.coupling(root, dim - 1) = -static_cast<double>(d);
    rs.coupling(dim - 1, root) = 1.0;
    for (size_t i = 0; i < rs.branch_blocks.size(); ++i) {
      if (i == j) continue;
      rs.coupling(offsets[i] + rs.root_class[i], root) = 1.0;
    }
  }
  rs.coupling(dim - 1, dim - 1) = -static_cast<double>(d + 2);

  // the scaling must symmetrize the whole family; verified here once rather
  // than assumed downstream
  {
    const Matrix q1 = reduced_matrix(rs, 1);
    const SymmetrizationScaling s = rs.scaling_for(1);
    Matrix sym(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        sym(r, c) = s.weights[r] * q1(r, c) / s.weights[c];
    if (max_asymmetry(sym) > 1e-12)
      fail(ErrorKind::IncompatiblePartition,
           "reduced matrix is not symmetrizable; partition is not a symmetry");
  }
  return rs;
}

Matrix reduced_matrix(const ReducedSystem& rs, long long k) {
  if (k < 1)
    fail(ErrorKind::InvalidK,
         "k must be >= 1 (the leaf-cluster coordinate is empty at k = 0; "
         "use the full matrix)");
  const int dim = rs.dim();
  const double eps = 1.0 / static_cast<double>(rs.d + k);
  Matrix q(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) q(r, c) = rs.limit(r, c) + rs.coupling(r, c) * eps;
  // root-to-cluster entries are k/(d+k) exactly; the affine form 1 - d/(d+k)
  // agrees only up to rounding, so they are written directly
  {
    int off = 0;
    for (size_t j = 0; j < rs.branch_blocks.size(); ++j) {
      const int root = off + rs.root_class[j];
      q(root, dim - 1) =
          static_cast<double>(k) / static_cast<double>(rs.d + k);
      off += rs.branch_blocks[j].rows();
    }
  }
  return q;
}

double reduced_lambda(const ReducedSystem& rs, long long k) {
  const Matrix q = reduced_matrix(rs, k);
  return top_pair_symmetrizable(q, rs.scaling_for(k)).lambda;
}

OracleCheck reduction_oracle_check(const Tree& t, const std::string& v, int k) {
  if (k < 1) fail(ErrorKind::InvalidK, "oracle check needs k >= 1");
  if (t.n_edges() + k > kOracleDimensionCap)
    fail(ErrorKind::DimensionCap,
         "full matrix would have " + std::to_string(t.n_edges() + k) +
             " edges (cap " + std::to_string(kOracleDimensionCap) + ")");
  OracleCheck out;
  const ReducedSystem rs = reduced_system(t, v);
  out.reduced = reduced_lambda(rs, k);
  const Tree grown = attach_leaves(t, v, k);
  out.full = sym_eigen(ricci_matrix(grown)).values[0];
  out.diff = std::fabs(out.reduced - out.full);
  return out;
}

}  // namespace ricci
