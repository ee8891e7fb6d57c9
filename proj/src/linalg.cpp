#include "ricci/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace ricci {

Vec matvec(const Matrix& m, const Vec& x) {
  if (static_cast<int>(x.size()) != m.cols())
    fail(ErrorKind::DimensionMismatch, "matvec: vector length does not match matrix");
  Vec y(m.rows(), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    const double* r = m.row(i);
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    fail(ErrorKind::DimensionMismatch, "dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double inf_norm(const Matrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double frob_norm(const Matrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

double max_asymmetry(const Matrix& m) {
  double worst = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      worst = std::max(worst, std::fabs(m(i, j) - m(j, i)));
  return worst;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::DimensionMismatch, "max_abs_diff: shape mismatch");
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::fabs(a(i, j) - b(i, j)));
  return worst;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    fail(ErrorKind::DimensionMismatch, "matmul: inner dimension mismatch");
  Matrix c(a.rows(), b.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

namespace {

// In-place LU with partial pivoting. Returns false on pivot collapse.
bool lu_factor(Matrix& a, std::vector<int>& perm, double pivot_floor) {
  const int n = a.rows();
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int best = col;
    double best_val = std::fabs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::fabs(a(r, col));
      if (v > best_val) {
        best_val = v;
        best = r;
      }
    }
    if (best_val <= pivot_floor) return false;
    if (best != col) {
      std::swap(perm[col], perm[best]);
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
    }
    const double piv = a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / piv;
      a(r, col) = f;
      for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return true;
}

Vec lu_solve(const Matrix& lu, const std::vector<int>& perm, const Vec& b) {
  const int n = lu.rows();
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
    x[i] /= lu(i, i);
  }
  return x;
}

}  // namespace

Vec solve_dense(Matrix a, Vec b, ErrorKind on_singular, const std::string& context) {
  if (!a.square() || static_cast<int>(b.size()) != a.rows())
    fail(ErrorKind::DimensionMismatch, "solve_dense: shape mismatch (" + context + ")");
  const double floor = 1e-13 * std::max(1.0, inf_norm(a));
  std::vector<int> perm;
  if (!lu_factor(a, perm, floor))
    fail(on_singular, "singular linear system: " + context);
  return lu_solve(a, perm, b);
}

Matrix inverse(Matrix a, ErrorKind on_singular, const std::string& context) {
  const int n = a.rows();
  if (!a.square()) fail(ErrorKind::DimensionMismatch, "inverse: not square (" + context + ")");
  const double floor = 1e-13 * std::max(1.0, inf_norm(a));
  std::vector<int> perm;
  Matrix lu = a;
  if (!lu_factor(lu, perm, floor))
    fail(on_singular, "singular matrix: " + context);
  Matrix inv(n, n);
  Vec e(n, 0.0);
  for (int col = 0; col < n; ++col) {
    e[col] = 1.0;
    Vec x = lu_solve(lu, perm, e);
    for (int i = 0; i < n; ++i) inv(i, col) = x[i];
    e[col] = 0.0;
  }
  return inv;
}

double cond_inf(const Matrix& a) {
  try {
    Matrix inv = inverse(a, ErrorKind::SingularBlockSolve, "cond_inf");
    return inf_norm(a) * inf_norm(inv);
  } catch (const RicciError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace ricci
