#include "ricci/ricci_matrix.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ricci/eigen.hpp"

namespace ricci {

Matrix ricci_matrix(const Tree& t) {
  const int n = t.n_edges();
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& [x, y] = t.edge(i);
    m(i, i) = -(1.0 / t.degree_of(x) + 1.0 / t.degree_of(y));
  }
  // off-diagonals: every unordered pair of distinct edges at a vertex shares
  // exactly that vertex (a tree has no parallel edges)
  for (const auto& z : t.vertices()) {
    const auto& inc = t.edges_at(z);
    const double coupling = 1.0 / t.degree_of(z);
    for (size_t a = 0; a < inc.size(); ++a)
      for (size_t b = a + 1; b < inc.size(); ++b) {
        m(inc[a], inc[b]) = coupling;
        m(inc[b], inc[a]) = coupling;
      }
  }
  return m;
}

SchrodingerSplit schrodinger_split(const Tree& t) {
  const int n = t.n_edges();
  SchrodingerSplit s;
  s.laplacian = ricci_matrix(t);
  s.potential.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& [x, y] = t.edge(i);
    const double dx = t.degree_of(x), dy = t.degree_of(y);
    s.potential[i] = 2.0 / dx + 2.0 / dy - 2.0;
    s.laplacian(i, i) = 1.0 / dx + 1.0 / dy - 2.0;
  }
  return s;
}

double quadratic_form(const Tree& t, const EdgeVector& f) {
  if (static_cast<int>(f.size()) != t.n_edges())
    fail(ErrorKind::DimensionMismatch,
         "quadratic_form: expected " + std::to_string(t.n_edges()) + " entries");
  double total = 0.0;
  for (const auto& w : t.vertices()) {
    double s = 0.0, a = 0.0;
    for (int ei : t.edges_at(w)) {
      s += f[ei];
      a += f[ei] * f[ei];
    }
    total += (s * s - 2.0 * a) / t.degree_of(w);
  }
#ifndef NDEBUG
  {
    const double product = dot(f, matvec(ricci_matrix(t), f));
    assert(std::fabs(total - product) <= 1e-10 * std::max(1.0, std::fabs(total)));
  }
#endif
  return total;
}

EdgeVector lly_curvature(const Tree& t, const EdgeVector& w) {
  const int n = t.n_edges();
  if (static_cast<int>(w.size()) != n)
    fail(ErrorKind::DimensionMismatch, "lly_curvature: weight length mismatch");
  for (int i = 0; i < n; ++i)
    if (!(w[i] > 0.0))
      fail(ErrorKind::NonpositiveWeight,
           "nonpositive weight on edge " + t.edge_label(i));

  // S_v = sum of weights over edges at v
  std::map<std::string, double> sums;
  for (const auto& v : t.vertices()) {
    double s = 0.0;
    for (int ei : t.edges_at(v)) s += w[ei];
    sums[v] = s;
  }

  EdgeVector kappa(n);
  for (int i = 0; i < n; ++i) {
    const auto& [x, y] = t.edge(i);
    kappa[i] = -((sums[x] - 2.0 * w[i]) / (w[i] * t.degree_of(x)) +
                 (sums[y] - 2.0 * w[i]) / (w[i] * t.degree_of(y)));
  }
  return kappa;
}

EinsteinCheck einstein_check(const Tree& t) {
  const EigenResult eig = sym_eigen(ricci_matrix(t));
  EinsteinCheck out;
  out.lambda_max = eig.values[0];
  out.weights.resize(t.n_edges());
  for (int i = 0; i < t.n_edges(); ++i) out.weights[i] = eig.vectors(i, 0);
  const EdgeVector kappa = lly_curvature(t, out.weights);
  double worst = 0.0;
  for (double k : kappa) worst = std::max(worst, std::fabs(k + out.lambda_max));
  out.max_deviation = worst;
  return out;
}

void write_matrix_csv(std::ostream& out, const Tree& t, const Matrix& m) {
  char buf[64];
  for (int j = 0; j < m.cols(); ++j) out << ',' << t.edge_label(j);
  out << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    out << t.edge_label(i);
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", m(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace ricci
