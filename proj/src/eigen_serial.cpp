#include <cmath>

#include "jacobi_detail.hpp"

namespace ricci::detail {

// Classic cyclic-by-rows Jacobi. Kept as the reference implementation the
// parallel kernel is tested against.
JacobiState jacobi_serial(Matrix m) {
  const int n = m.rows();
  JacobiState st{std::move(m), Matrix::identity(n)};
  Matrix& a = st.a;
  Matrix& v = st.v;

  const double fro = frob_norm(a);
  if (n < 2 || fro == 0.0) {
    st.converged = true;
    return st;
  }
  const double thresh = kOffTol * fro;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_frob(a) <= thresh) {
      st.converged = true;
      break;
    }
    ++st.sweeps;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        double c, s;
        schur_rotation(a(p, p), a(q, q), apq, c, s);
        const double t = s / c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = a(p, i) = c * aip - s * aiq;
          a(i, q) = a(q, i) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (!st.converged && offdiag_frob(a) <= thresh) st.converged = true;
  return st;
}

}  // namespace ricci::detail
