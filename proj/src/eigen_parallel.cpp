#include <cmath>
#include <utility>
#include <vector>

#include "jacobi_detail.hpp"

namespace ricci::detail {

namespace {

// Round-robin schedule (circle method): n players, one fixed, the rest
// rotating, giving n-1 rounds of n/2 pairwise-disjoint pivots per sweep.
// Disjointness is what makes the row/column phases below safe to run in
// parallel: each phase writes a set of rows (resp. columns) no other pair in
// the round touches, so the result is independent of the thread count.
std::vector<std::pair<int, int>> round_pairs(int players, int round) {
  const int m = players;          // even
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(m / 2);
  auto pos = [&](int slot) {      // slot in 0..m-2 rotated by round
    return (slot + round) % (m - 1);
  };
  {
    int p = m - 1, q = pos(0);
    pairs.emplace_back(std::min(p, q), std::max(p, q));
  }
  for (int i = 1; i < m / 2; ++i) {
    int p = pos(i), q = pos(m - 1 - i);
    pairs.emplace_back(std::min(p, q), std::max(p, q));
  }
  return pairs;
}

struct Rotation {
  int p, q;
  double c, s;
};

}  // namespace

JacobiState jacobi_parallel(Matrix m) {
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

  const int players = (n % 2 == 0) ? n : n + 1;   // pad with a bye
  std::vector<Rotation> rots;
  rots.reserve(players / 2);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_frob(a) <= thresh) {
      st.converged = true;
      break;
    }
    ++st.sweeps;
    for (int round = 0; round < players - 1; ++round) {
      rots.clear();
      for (auto [p, q] : round_pairs(players, round)) {
        if (q >= n) continue;                     // bye
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        Rotation r{p, q, 0.0, 0.0};
        schur_rotation(a(p, p), a(q, q), apq, r.c, r.s);
        rots.push_back(r);
      }
      const int nr = static_cast<int>(rots.size());

      // row phase: pair (p, q) owns rows p and q
#pragma omp parallel for schedule(static)
      for (int k = 0; k < nr; ++k) {
        const auto [p, q, c, s] = rots[k];
        double* rp = a.row(p);
        double* rq = a.row(q);
        for (int j = 0; j < n; ++j) {
          const double x = rp[j], y = rq[j];
          rp[j] = c * x - s * y;
          rq[j] = s * x + c * y;
        }
      }
      // column phase: pair (p, q) owns columns p and q, in both a and v
#pragma omp parallel for schedule(static)
      for (int k = 0; k < nr; ++k) {
        const auto [p, q, c, s] = rots[k];
        for (int i = 0; i < n; ++i) {
          const double x = a(i, p), y = a(i, q);
          a(i, p) = c * x - s * y;
          a(i, q) = s * x + c * y;
        }
        for (int i = 0; i < n; ++i) {
          const double x = v(i, p), y = v(i, q);
          v(i, p) = c * x - s * y;
          v(i, q) = s * x + c * y;
        }
        a(rots[k].p, rots[k].q) = 0.0;   // annihilated by construction
        a(rots[k].q, rots[k].p) = 0.0;
      }
    }
    // the two-phase updates round (i,j) and (j,i) in different orders;
    // restore exact symmetry before the next sweep
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (a(i, j) + a(j, i));
        a(i, j) = a(j, i) = avg;
      }
  }
  if (!st.converged && offdiag_frob(a) <= thresh) st.converged = true;
  return st;
}

}  // namespace ricci::detail
