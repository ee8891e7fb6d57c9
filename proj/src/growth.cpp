#include "ricci/growth.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "ricci/eigen.hpp"

namespace ricci {

namespace {

void vertex_sums(const Tree& t, const std::string& v, const EdgeVector& f,
                 double& s, double& a) {
  if (static_cast<int>(f.size()) != t.n_edges())
    fail(ErrorKind::DimensionMismatch, "edge function length mismatch");
  s = 0.0;
  a = 0.0;
  for (int ei : t.edges_at(v)) {
    s += f[ei];
    a += f[ei] * f[ei];
  }
}

}  // namespace

double rayleigh_difference(const Tree& t, const std::string& v,
                           const EdgeVector& f, double y) {
  const double d = t.degree_of(v);
  double s, a;
  vertex_sums(t, v, f, s, a);
  const double value =
      -(s * s - 2.0 * a) / (d * (d + 1.0)) + 2.0 * s * y / (d + 1.0) -
      (d + 2.0) / (d + 1.0) * y * y;
#ifndef NDEBUG
  {
    const Tree grown = attach_leaves(t, v, 1);
    EdgeVector fy(grown.n_edges(), y);
    for (int i = 0; i < t.n_edges(); ++i) {
      const auto& [x1, x2] = t.edge(i);
      fy[grown.edge_index(x1, x2)] = f[i];
    }
    const double oracle = quadratic_form(grown, fy) - quadratic_form(t, f);
    assert(std::fabs(value - oracle) <= 1e-10 * std::max(1.0, std::fabs(value)));
  }
#endif
  return value;
}

OneStepAnalysis sharp_criterion(const Tree& t, const std::string& v,
                                const EdgeVector& f) {
  OneStepAnalysis out;
  out.d = t.degree_of(v);
  const double norm = norm2(f);
  if (std::fabs(norm - 1.0) > 1e-10)
    fail(ErrorKind::NotUnitVector,
         "sharp test needs a unit function (norm " + std::to_string(norm) + ")");
  vertex_sums(t, v, f, out.S, out.A);
  if (out.A <= 0.0)
    fail(ErrorKind::ZeroAtVertex,
         "f vanishes on every edge at '" + v + "'; the spread ratio is undefined");
  out.rho = out.S * out.S / out.A;
  out.mu = quadratic_form(t, f);

  const double d = out.d;
  const double mu = out.mu;
  // gain(y) - mu y^2 is a parabola with leading coefficient
  // -((d+2)/(d+1) + mu); the test only makes sense while it opens downward
  const double lead = (d + 2.0) / (d + 1.0) + mu;
  if (lead <= 0.0) {
    out.applicable = false;
    out.y_star = std::numeric_limits<double>::quiet_NaN();
    out.max_gain = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const double lhs = 2.0 * (d + 2.0 + mu * (d + 1.0));
  const double rhs = out.rho * (2.0 + mu * (d + 1.0));
  out.criterion_holds = lhs >= rhs;
  out.y_star = out.S / (d + 2.0 + mu * (d + 1.0));
  out.max_gain = out.A / (d * (d + 1.0)) * (lhs - rhs) / (d + 2.0 + mu * (d + 1.0));
  return out;
}

double theta(int d) {
  if (d < 1) fail(ErrorKind::InvalidK, "degree must be >= 1");
  if (d <= 2) return std::numeric_limits<double>::infinity();
  return 4.0 / ((d + 1.0) * (d - 2.0));
}

GuaranteeResult one_step_guarantee(const Tree& t, const std::string& v) {
  GuaranteeResult out;
  if (t.n_edges() == 1) {
    // lambda_max jumps from -2 to -1 when the first leaf is added; the sharp
    // test's concavity premise fails here, so answer by direct construction
    const EigenResult eig = sym_eigen(ricci_matrix(t));
    out.analysis.d = t.degree_of(v);
    out.analysis.mu = eig.values[0];
    out.analysis.S = out.analysis.A = out.analysis.rho = 1.0;
    out.analysis.applicable = false;
    out.analysis.y_star = std::numeric_limits<double>::quiet_NaN();
    out.analysis.max_gain = std::numeric_limits<double>::quiet_NaN();
    out.guaranteed = true;
    return out;
  }
  const EigenResult eig = sym_eigen(ricci_matrix(t));
  EdgeVector perron(t.n_edges());
  for (int i = 0; i < t.n_edges(); ++i) perron[i] = eig.vectors(i, 0);
  out.analysis = sharp_criterion(t, v, perron);
  out.guaranteed = out.analysis.applicable && out.analysis.criterion_holds;
  return out;
}

}  // namespace ricci
