#ifndef RICCI_EIGEN_HPP
#define RICCI_EIGEN_HPP

#include <vector>

#include "ricci/linalg.hpp"

namespace ricci {

/// Full spectrum of a symmetric matrix.
struct EigenResult {
  Vec values;       // descending
  Matrix vectors;   // orthonormal columns, values[i] <-> column i
  double gap = 0;   // values[0] - values[1]; +inf for a 1x1 input
};

/// Cyclic Jacobi eigensolver. Deterministic: fixed rotation order, fixed
/// convergence test (off-diagonal Frobenius mass below 1e-14 * ||M||_F,
/// at most 100 sweeps), eigenvectors sign-normalized so the entry of largest
/// magnitude is positive. Dispatches to the OpenMP kernel for larger inputs
/// and to the serial reference below the cutover; both kernels satisfy the
/// same contracts and are compared directly in the test suite and benchmark.
///
/// Throws NotSymmetric when the input deviates from symmetry by more than
/// 1e-12, NoConvergence if the sweep cap is exceeded.
EigenResult sym_eigen(const Matrix& m);

/// Serial reference: textbook cyclic-by-rows sweeps, one rotation at a time.
EigenResult sym_eigen_serial(const Matrix& m);

/// OpenMP kernel: round-robin rotation sets of pairwise-disjoint pivots, each
/// set applied as a parallel row phase followed by a parallel column phase.
/// Output does not depend on the thread count.
EigenResult sym_eigen_parallel(const Matrix& m);

/// Input size at and above which sym_eigen uses the parallel kernel.
inline constexpr int kParallelCutover = 64;

/// Diagonal similarity weights (square roots of orbit sizes) that turn a
/// quotient matrix into a symmetric one: S = D M D^(-1) with D = diag(w).
struct SymmetrizationScaling {
  Vec weights;   // all >= 1
};

struct TopPair {
  double lambda = 0;
  Vec right;     // M right = lambda right
  Vec left;      // left^T M = lambda left^T, left^T right = 1
  double gap = 0;
};

/// Top eigenpair of a diagonally symmetrizable matrix: symmetrize, solve with
/// sym_eigen, and pull the eigenvector back through the scaling (right =
/// D^(-1) u, left = D u for the unit symmetric eigenvector u, so the pair is
/// bi-normalized by construction). Throws NotSymmetrizable when D M D^(-1)
/// deviates from symmetry by more than 1e-10.
TopPair top_pair_symmetrizable(const Matrix& m, const SymmetrizationScaling& s);

/// Block upper-triangular matrix of the shape produced by orbit reduction:
/// diagonal blocks, one coupling column per block into a trailing scalar
/// coordinate whose diagonal entry and row are zero.
///
///   [ A_1           c_1 ]
///   [      ...      ... ]
///   [          A_d  c_d ]
///   [  0   ...  0    0  ]
///
/// Its spectrum is {0} together with the spectra of the blocks. Each block
/// carries its own symmetrization scaling, so all eigenvalues are real.
struct BlockTriangular {
  std::vector<Matrix> blocks;
  std::vector<Vec> couplings;
  std::vector<SymmetrizationScaling> scalings;

  int dim() const;
};

/// Every eigenvalue (block spectra plus the scalar 0), descending.
Vec triangular_spectrum(const BlockTriangular& bt);

/// Same, with each value labeled by the block that contributes it
/// (-1 for the scalar coordinate).
std::vector<std::pair<double, int>> triangular_labeled_spectrum(const BlockTriangular& bt);

/// Relative gap below which an eigenvalue is treated as degenerate.
inline constexpr double kSimpleGapTol = 1e-9;

struct TriangularPair {
  double lambda = 0;
  int achiever = -1;   // block index, or -1 for the scalar coordinate
  Vec right;           // full dimension
  Vec left;            // bi-normalized: left^T right = 1
  double gap = 0;
};

/// Top eigenpair of the block-triangular matrix, assembled blockwise:
/// when the scalar 0 wins, right = (-A_1^{-1} c_1, ..., -A_d^{-1} c_d, 1) and
/// left is the unit vector on the scalar coordinate; when a block wins, the
/// pair is block-local apart from the left vector's scalar component.
/// Throws DegenerateEigenvalue when the top of the spectrum is not simple
/// (relative gap below kSimpleGapTol) and SingularBlockSolve if a required
/// block solve degenerates.
TriangularPair triangular_top_pair(const BlockTriangular& bt);

/// All top-eigenvalue members when the top is degenerate: one bi-orthogonal
/// (right, left) pair per achieving block. A tie that involves the scalar
/// coordinate at 0 has no eigenvector basis of matching dimension (the zero
/// eigenvalue is defective there); the scalar member's solve then throws
/// SingularBlockSolve.
struct TriangularEigenspace {
  double lambda = 0;
  std::vector<int> achievers;
  std::vector<Vec> rights;
  std::vector<Vec> lefts;
};

TriangularEigenspace triangular_top_eigenspace(const BlockTriangular& bt);

}  // namespace ricci

#endif
