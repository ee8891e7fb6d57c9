#ifndef RICCI_GROWTH_HPP
#define RICCI_GROWTH_HPP

#include <string>

#include "ricci/ricci_matrix.hpp"
#include "ricci/tree.hpp"

namespace ricci {

/// What one pendant edge at a vertex can do to the Rayleigh quotient of a
/// given test function.
struct OneStepAnalysis {
  int d = 0;           // degree of the vertex
  double S = 0;        // sum of f over edges at the vertex
  double A = 0;        // sum of squares
  double rho = 0;      // S^2 / A, in [1, d] for nonnegative f
  double mu = 0;       // <f, R f> for the unit test function
  bool applicable = true;    // the gain function is concave (mu >= -1 suffices)
  bool criterion_holds = false;
  double y_star = 0;   // maximizing value on the new edge
  double max_gain = 0; // max over y of the quotient-gain numerator
};

/// Change of the quadratic form when one pendant edge carrying value y is
/// attached at v:
///   -(S^2 - 2A) / (d (d+1)) + 2 S y / (d+1) - (d+2) y^2 / (d+1).
/// Debug builds verify the closed form against the explicitly grown tree.
double rayleigh_difference(const Tree& t, const std::string& v,
                           const EdgeVector& f, double y);

/// Sharp sufficient test: for a unit f with quotient mu, some extension to
/// the grown tree does not lower the quotient iff
///   2 (d + 2 + mu (d+1)) >= rho (2 + mu (d+1)).
/// Requires ||f|| = 1 and f not vanishing on every edge at v (rho would be
/// undefined; ZeroAtVertex). When mu < -(d+2)/(d+1) the gain function is not
/// concave and the test is reported as not applicable.
OneStepAnalysis sharp_criterion(const Tree& t, const std::string& v,
                                const EdgeVector& f);

/// Degree-only threshold: a quotient at or below theta(d) passes the sharp
/// test no matter how the function spreads over the vertex. +infinity for
/// d <= 2, then 4 / ((d+1)(d-2)), strictly decreasing to 0.
double theta(int d);

struct GuaranteeResult {
  bool guaranteed = false;
  OneStepAnalysis analysis;
};

/// Runs the sharp test with the Perron vector, so a positive verdict
/// guarantees lambda_max does not decrease when one leaf is attached at v.
/// The single-edge tree is special-cased: its quotient -2 is below the
/// concavity range, but attaching the leaf provably raises lambda_max, so the
/// verdict is still positive.
GuaranteeResult one_step_guarantee(const Tree& t, const std::string& v);

}  // namespace ricci

#endif
