#include "ricci/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "jacobi_detail.hpp"

namespace ricci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sort eigenvalues descending (ties by original position), reorder columns,
// and fix the sign so the entry of largest magnitude is positive.
EigenResult finalize(detail::JacobiState&& st) {
  const int n = st.a.rows();
  if (!st.converged)
    fail(ErrorKind::NoConvergence,
         "Jacobi sweep cap (" + std::to_string(detail::kMaxSweeps) + ") exceeded");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return st.a(i, i) > st.a(j, j); });

  EigenResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int col = 0; col < n; ++col) {
    const int src = order[col];
    out.values[col] = st.a(src, src);
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mag = std::fabs(st.v(i, src));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    const double flip = (st.v(arg, src) < 0.0) ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) out.vectors(i, col) = flip * st.v(i, src);
  }
  out.gap = (n >= 2) ? out.values[0] - out.values[1] : kInf;
  return out;
}

void require_symmetric(const Matrix& m, double tol, const char* who) {
  if (!m.square())
    fail(ErrorKind::DimensionMismatch, std::string(who) + ": matrix not square");
  const double asym = max_asymmetry(m);
  if (asym > tol)
    fail(ErrorKind::NotSymmetric,
         std::string(who) + ": asymmetry " + std::to_string(asym));
}

}  // namespace

EigenResult sym_eigen_serial(const Matrix& m) {
  require_symmetric(m, 1e-12, "sym_eigen_serial");
  return finalize(detail::jacobi_serial(m));
}

EigenResult sym_eigen_parallel(const Matrix& m) {
  require_symmetric(m, 1e-12, "sym_eigen_parallel");
  return finalize(detail::jacobi_parallel(m));
}

EigenResult sym_eigen(const Matrix& m) {
  require_symmetric(m, 1e-12, "sym_eigen");
  if (m.rows() >= kParallelCutover) return finalize(detail::jacobi_parallel(m));
  return finalize(detail::jacobi_serial(m));
}

TopPair top_pair_symmetrizable(const Matrix& m, const SymmetrizationScaling& s) {
  const int n = m.rows();
  if (!m.square() || static_cast<int>(s.weights.size()) != n)
    fail(ErrorKind::DimensionMismatch, "top_pair_symmetrizable: shape mismatch");
  for (double w : s.weights)
    if (!(w > 0.0))
      fail(ErrorKind::NotSymmetrizable, "nonpositive symmetrization weight");

  Matrix sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym(i, j) = s.weights[i] * m(i, j) / s.weights[j];
  const double asym = max_asymmetry(sym);
  if (asym > 1e-10)
    fail(ErrorKind::NotSymmetrizable,
         "scaling does not symmetrize the matrix (asymmetry " + std::to_string(asym) + ")");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (sym(i, j) + sym(j, i));
      sym(i, j) = sym(j, i) = avg;
    }

  const EigenResult eig = sym_eigen(sym);
  Vec u(n);
  for (int i = 0; i < n; ++i) u[i] = eig.vectors(i, 0);
  const double nrm = norm2(u);
  for (double& x : u) x /= nrm;

  TopPair out;
  out.lambda = eig.values[0];
  out.gap = eig.gap;
  out.right.resize(n);
  out.left.resize(n);
  for (int i = 0; i < n; ++i) {
    out.right[i] = u[i] / s.weights[i];
    out.left[i] = u[i] * s.weights[i];
  }
  return out;
}

int BlockTriangular::dim() const {
  int d = 1;
  for (const auto& b : blocks) d += b.rows();
  return d;
}

namespace {

struct BlockSpectra {
  std::vector<EigenResult> eigs;          // per block, in symmetrized coordinates
  std::vector<std::pair<double, int>> all;   // (value, block or -1), descending
};

BlockSpectra block_spectra(const BlockTriangular& bt) {
  if (bt.couplings.size() != bt.blocks.size() || bt.scalings.size() != bt.blocks.size())
    fail(ErrorKind::DimensionMismatch, "block structure arrays disagree");
  BlockSpectra out;
  out.all.emplace_back(0.0, -1);
  for (size_t j = 0; j < bt.blocks.size(); ++j) {
    const Matrix& a = bt.blocks[j];
    const Vec& w = bt.scalings[j].weights;
    const int n = a.rows();
    if (static_cast<int>(bt.couplings[j].size()) != n ||
        static_cast<int>(w.size()) != n)
      fail(ErrorKind::DimensionMismatch, "block " + std::to_string(j) + " shape mismatch");
    Matrix sym(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) sym(r, c) = w[r] * a(r, c) / w[c];
    if (max_asymmetry(sym) > 1e-10)
      fail(ErrorKind::NotSymmetrizable, "block " + std::to_string(j) + " not symmetrizable");
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) {
        const double avg = 0.5 * (sym(r, c) + sym(c, r));
        sym(r, c) = sym(c, r) = avg;
      }
    out.eigs.push_back(sym_eigen(sym));
    for (double v : out.eigs.back().values) out.all.emplace_back(v, static_cast<int>(j));
  }
  std::stable_sort(out.all.begin(), out.all.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  return out;
}

int block_offset(const BlockTriangular& bt, int j) {
  int off = 0;
  for (int b = 0; b < j; ++b) off += bt.blocks[b].rows();
  return off;
}

// (right, left) pair for one achiever of eigenvalue lambda; `column` selects
// the eigenvector within the achieving block (always 0 for irreducible
// blocks, where the top is simple).
void member_pair(const BlockTriangular& bt, const BlockSpectra& sp, double lambda,
                 int achiever, int column, Vec& right, Vec& left) {
  const int dim = bt.dim();
  right.assign(dim, 0.0);
  left.assign(dim, 0.0);
  if (achiever < 0) {
    // scalar coordinate: right solves A_j r_j = -c_j blockwise; left is the
    // unit vector on the scalar coordinate, giving left^T right = 1 exactly
    int off = 0;
    for (size_t j = 0; j < bt.blocks.size(); ++j) {
      Matrix shifted = bt.blocks[j];
      if (lambda != 0.0)
        for (int i = 0; i < shifted.rows(); ++i) shifted(i, i) -= lambda;
      Vec rhs(bt.couplings[j]);
      for (double& x : rhs) x = -x;
      Vec rj = solve_dense(std::move(shifted), std::move(rhs),
                           ErrorKind::SingularBlockSolve,
                           "block " + std::to_string(j) + " at the scalar eigenvalue");
      for (size_t i = 0; i < rj.size(); ++i) right[off + i] = rj[i];
      off += bt.blocks[j].rows();
    }
    right[dim - 1] = 1.0;
    left[dim - 1] = 1.0;
    return;
  }

  // block achiever: the pair is local to the block except for the left
  // vector's scalar component, fixed by the coupling column
  const int t = achiever;
  const int off = block_offset(bt, t);
  const int n = bt.blocks[t].rows();
  const EigenResult& eig = sp.eigs[t];
  Vec u(n);
  for (int i = 0; i < n; ++i) u[i] = eig.vectors(i, column);
  const double nrm = norm2(u);
  for (double& x : u) x /= nrm;

  const Vec& w = bt.scalings[t].weights;
  double lc = 0.0;   // left_t . c_t
  for (int i = 0; i < n; ++i) {
    right[off + i] = u[i] / w[i];
    left[off + i] = u[i] * w[i];
    lc += u[i] * w[i] * bt.couplings[t][i];
  }
  if (std::fabs(lambda) < 1e-300)
    fail(ErrorKind::SingularBlockSolve,
         "zero eigenvalue achieved by a block is defective (scalar coordinate ties)");
  left[dim - 1] = lc / lambda;
}

}  // namespace

Vec triangular_spectrum(const BlockTriangular& bt) {
  const BlockSpectra sp = block_spectra(bt);
  Vec values;
  values.reserve(sp.all.size());
  for (const auto& [v, j] : sp.all) values.push_back(v);
  return values;
}

std::vector<std::pair<double, int>> triangular_labeled_spectrum(const BlockTriangular& bt) {
  return block_spectra(bt).all;
}

TriangularPair triangular_top_pair(const BlockTriangular& bt) {
  const BlockSpectra sp = block_spectra(bt);
  const double lambda = sp.all.front().first;
  const int achiever = sp.all.front().second;
  const double gap =
      sp.all.size() >= 2 ? lambda - sp.all[1].first : kInf;
  if (gap <= kSimpleGapTol * std::max(1.0, std::fabs(lambda)))
    fail(ErrorKind::DegenerateEigenvalue,
         "top eigenvalue " + std::to_string(lambda) + " is not simple (gap " +
             std::to_string(gap) + ")");

  TriangularPair out;
  out.lambda = lambda;
  out.achiever = achiever;
  out.gap = gap;
  member_pair(bt, sp, lambda, achiever, 0, out.right, out.left);
  return out;
}

TriangularEigenspace triangular_top_eigenspace(const BlockTriangular& bt) {
  const BlockSpectra sp = block_spectra(bt);
  const double lambda = sp.all.front().first;
  const double tol = kSimpleGapTol * std::max(1.0, std::fabs(lambda));

  TriangularEigenspace out;
  out.lambda = lambda;
  std::vector<std::pair<int, int>> members;   // (block, eigenvector column)
  std::vector<int> seen(bt.blocks.size(), 0);
  for (const auto& [v, j] : sp.all) {
    if (lambda - v > tol) break;
    if (j < 0) {
      members.emplace_back(-1, 0);
    } else {
      members.emplace_back(j, seen[j]);
      ++seen[j];
    }
  }
  for (const auto& [block, col] : members) {
    Vec r, l;
    member_pair(bt, sp, lambda, block, col, r, l);
    out.achievers.push_back(block);
    out.rights.push_back(std::move(r));
    out.lefts.push_back(std::move(l));
  }
  return out;
}

}  // namespace ricci
