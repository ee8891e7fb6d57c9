#ifndef RICCI_RICCI_MATRIX_HPP
#define RICCI_RICCI_MATRIX_HPP

#include <iosfwd>

#include "ricci/linalg.hpp"
#include "ricci/tree.hpp"

namespace ricci {

/// Real-valued function on the edge set, in canonical edge order.
using EdgeVector = Vec;

/// The edge-indexed curvature matrix of a tree. For an edge e = {x, y} the
/// diagonal entry is -(1/d_x + 1/d_y); two distinct edges sharing vertex z
/// couple with 1/d_z; vertex-disjoint edges do not couple. Assembled once and
/// mirrored, so the result is symmetric exactly.
Matrix ricci_matrix(const Tree& t);

/// Splitting of the curvature matrix into a weighted line-graph Laplacian
/// minus a diagonal potential.
struct SchrodingerSplit {
  Matrix laplacian;   // off-diagonal entries match the curvature matrix,
                      // diagonal is 1/d_x + 1/d_y - 2; every row sums to zero
  Vec potential;      // V_e = 2/d_x + 2/d_y - 2
};

SchrodingerSplit schrodinger_split(const Tree& t);

/// Quadratic form <f, R f> evaluated through the per-vertex decomposition
///   sum_w (1/d_w) (S_w(f)^2 - 2 A_w(f)),
/// where S_w and A_w are the sum and sum of squares of f over edges at w.
/// Debug builds cross-check against the explicit matrix product.
double quadratic_form(const Tree& t, const EdgeVector& f);

/// Per-edge Lin-Lu-Yau curvature of the weighted tree:
///   kappa_xy = -((S_x - 2 w_xy) / (w_xy d_x) + (S_y - 2 w_xy) / (w_xy d_y)).
/// All weights must be positive.
EdgeVector lly_curvature(const Tree& t, const EdgeVector& w);

/// Solves for the constant-curvature weighting: the positive unit top
/// eigenvector of the curvature matrix, the attained eigenvalue, and the
/// worst deviation of the per-edge curvature from -lambda_max.
struct EinsteinCheck {
  double lambda_max = 0.0;
  EdgeVector weights;       // unit Perron vector
  double max_deviation = 0.0;
};

EinsteinCheck einstein_check(const Tree& t);

/// CSV dump with a header row of "min~max" edge labels; used for debugging.
void write_matrix_csv(std::ostream& out, const Tree& t, const Matrix& m);

}  // namespace ricci

#endif
