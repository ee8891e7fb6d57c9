#ifndef RICCI_LINALG_HPP
#define RICCI_LINALG_HPP

#include <vector>

#include "ricci/errors.hpp"

namespace ricci {

using Vec = std::vector<double>;

/// Dense row-major matrix. Small by design: every matrix in this library is
/// either edge-indexed (a few hundred rows at most) or a fixed-size reduced
/// block, so no sparse machinery is provided.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  double* row(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }
  const double* row(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

Vec matvec(const Matrix& m, const Vec& x);
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double max_abs(const Vec& v);

double inf_norm(const Matrix& m);   // max absolute row sum
double frob_norm(const Matrix& m);
double max_asymmetry(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);

/// Solves a x = b by LU with partial pivoting; throws `on_singular` when a
/// pivot collapses below 1e-13 * inf_norm(a).
Vec solve_dense(Matrix a, Vec b, ErrorKind on_singular, const std::string& context);

/// Inverse via column-wise solves; same singularity contract as solve_dense.
Matrix inverse(Matrix a, ErrorKind on_singular, const std::string& context);

/// Infinity-norm condition number; +inf when the solve fails.
double cond_inf(const Matrix& a);

}  // namespace ricci

#endif
