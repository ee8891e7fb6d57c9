#ifndef RICCI_JACOBI_DETAIL_HPP
#define RICCI_JACOBI_DETAIL_HPP

#include <cmath>

#include "ricci/linalg.hpp"

namespace ricci::detail {

inline constexpr int kMaxSweeps = 100;
inline constexpr double kOffTol = 1e-14;   // relative to ||M||_F

struct JacobiState {
  Matrix a;        // diagonalized in place
  Matrix v;        // accumulated rotations, columns are eigenvectors
  int sweeps = 0;
  bool converged = false;
};

inline double offdiag_frob(const Matrix& a) {
  double s = 0.0;
  const int n = a.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Rotation parameters (c, s) annihilating the (p, q) entry of a symmetric 2x2
// principal submatrix, following the standard symmetric Schur decomposition.
inline void schur_rotation(double app, double aqq, double apq, double& c, double& s) {
  const double tau = (aqq - app) / (2.0 * apq);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
  c = 1.0 / std::sqrt(1.0 + t * t);
  s = t * c;
}

JacobiState jacobi_serial(Matrix m);
JacobiState jacobi_parallel(Matrix m);

}  // namespace ricci::detail

#endif
