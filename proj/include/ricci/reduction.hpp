#ifndef RICCI_REDUCTION_HPP
#define RICCI_REDUCTION_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ricci/eigen.hpp"
#include "ricci/linalg.hpp"
#include "ricci/tree.hpp"

namespace ricci {

/// Disjoint classes of base-tree edge indices that are to share one reduced
/// coordinate. Classes must be genuine symmetries of the curvature matrix;
/// reduced_system verifies this with the row-sum test below and rejects
/// anything else.
struct OrbitPartition {
  std::vector<std::vector<int>> classes;
};

/// Reads the orbit file format: a JSON list of lists of edge labels "u~v".
/// Edges not mentioned stay in singleton classes.
OrbitPartition read_orbit_partition(std::istream& in, const Tree& t);
OrbitPartition read_orbit_partition_file(const std::string& path, const Tree& t);

/// Curvature matrix of one branch with the pivot treated as an absorbing
/// boundary: every 1/d_pivot term is dropped, so the root-edge diagonal is
/// -1/d(u_j) and all other entries agree with the full matrix. Rows/columns
/// follow the branch's edge list order (ascending base-tree index).
Matrix dirichlet_branch_matrix(const Tree& t, const std::string& pivot,
                               const Branch& branch);

/// The k-independent data describing the whole family of reduced growth
/// matrices at a pivot. Reduced coordinates are: one per old-edge class,
/// grouped by branch (branches in root-neighbor order, classes by smallest
/// edge index, the root edge always alone in its class), followed by one
/// coordinate for the cluster of new leaves. In these coordinates
///
///     Q(k) = limit + coupling / (d + k),        k >= 1,
///
/// where `limit` is block upper-triangular with the Dirichlet branch blocks
/// on the diagonal and `coupling` carries all interaction through the pivot.
struct ReducedSystem {
  Tree base;
  std::string pivot;
  int d = 0;                                   // pivot degree in the base tree
  BranchDecomposition decomposition;
  std::vector<std::vector<std::vector<int>>> branch_classes;
  std::vector<Matrix> branch_blocks;           // class-level Dirichlet blocks
  std::vector<Vec> interface_cols;             // c_j: root-class indicator
  std::vector<int> root_class;                 // position of the root class in branch j
  Matrix limit;                                // dim m+1
  Matrix coupling;                             // dim m+1
  std::vector<int> class_sizes;                // old-edge classes, coordinate order

  int n_old_coords() const { return static_cast<int>(class_sizes.size()); }
  int dim() const { return n_old_coords() + 1; }

  /// sqrt(class size) per coordinate; the trailing coordinate's weight is
  /// sqrt(k), the size of the leaf cluster.
  SymmetrizationScaling scaling_for(long long k) const;

  /// The eigen-module view of `limit`.
  BlockTriangular block_triangular() const;
};

/// Builds the reduced system at pivot v. Optional extra classes merge
/// symmetric old edges (for example sibling leaves); the mandatory collapse
/// of the new-leaf cluster is always applied. Throws IncompatiblePartition
/// when the classes are not a symmetry: every class must lie inside one
/// branch, the root edges must stay alone, and for every pair of classes the
/// row sums of the curvature matrix must not depend on the representative.
ReducedSystem reduced_system(const Tree& t, const std::string& v,
                             const std::optional<OrbitPartition>& extra = std::nullopt);

/// Q(k) = limit + coupling / (d + k). The root-to-cluster column entries are
/// computed directly as k / (d + k), which the affine form equals exactly in
/// exact arithmetic. Throws InvalidK for k < 1 (there is no cluster
/// coordinate at k = 0; use the full matrix).
Matrix reduced_matrix(const ReducedSystem& rs, long long k);

/// Largest eigenvalue of Q(k) via the symmetrization scaling.
double reduced_lambda(const ReducedSystem& rs, long long k);

/// Cross-check of the reduction against the explicitly grown tree.
struct OracleCheck {
  double reduced = 0;
  double full = 0;
  double diff = 0;
};

/// Compares lambda_max of Q(k) with lambda_max of the full matrix of the
/// grown tree. The full solve is capped at kOracleDimensionCap edges.
OracleCheck reduction_oracle_check(const Tree& t, const std::string& v, int k);

inline constexpr int kOracleDimensionCap = 2000;

}  // namespace ricci

#endif
