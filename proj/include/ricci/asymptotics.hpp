#ifndef RICCI_ASYMPTOTICS_HPP
#define RICCI_ASYMPTOTICS_HPP

#include <string>
#include <vector>

#include "ricci/reduction.hpp"

namespace ricci {

enum class Direction {
  DecreasingFromAbove,   // first-order coefficient > 0
  IncreasingFromBelow,   // first-order coefficient < 0
  Undetermined,          // |coefficient| below tolerance
};

std::string to_string(Direction d);

/// |alpha| at or below this is reported as Undetermined.
inline constexpr double kDirectionTol = 1e-9;

struct LimitValue {
  double value = 0;        // max(0, top of every branch block)
  int achiever = -1;       // block index, -1 for the leaf-cluster floor 0
  bool degenerate = false; // top attained more than once (relative gap test)
};

/// Limit of the growth sequence, read off the reduced system: the largest
/// eigenvalue of the limit matrix.
LimitValue lambda_infinity(const ReducedSystem& rs);

struct AsymptoticsReport {
  double lambda_inf = 0;
  int achiever = -1;
  bool simple = true;
  double alpha = 0;        // first-order coefficient; lambda_max of the
                           // compression in the degenerate case
  int multiplicity = 1;
  Direction direction = Direction::Undetermined;
  Vec r, l;                // bi-normalized eigenvectors (simple case)
};

/// First-order growth coefficient alpha = l^T coupling r at the simple limit
/// eigenvalue, with (r, l) assembled blockwise from the limit matrix. Throws
/// DegenerateEigenvalue when the limit is not simple; use
/// degenerate_coefficient (or analyze, which routes) instead.
AsymptoticsReport first_order_coefficient(const ReducedSystem& rs);

/// Degenerate counterpart: compresses the coupling onto the limit eigenspace
/// through bi-orthogonal left/right bases and reports the largest eigenvalue
/// of the compression. Throws IllConditionedEigenspace if the bases cannot be
/// bi-normalized (condition above 1e8), which is also how the defective
/// branch/scalar tie at 0 surfaces.
AsymptoticsReport degenerate_coefficient(const ReducedSystem& rs);

/// first_order_coefficient with automatic fallback to the degenerate path.
AsymptoticsReport analyze(const ReducedSystem& rs);

/// lambda_max of the grown tree for each requested k, in input order.
/// k = 0 uses the full matrix; k >= 1 the reduced family. Independent k are
/// solved in parallel.
std::vector<std::pair<long long, double>> lambda_sequence(
    const Tree& t, const std::string& v, const std::vector<long long>& ks);

struct DiagnosticsRow {
  long long k = 0;
  double lambda_k = 0;
  double g_k = 0;          // (lambda_k - lambda_inf) * (d + k)
};

struct Diagnostics {
  std::vector<DiagnosticsRow> rows;
  double lambda_inf = 0;
  double alpha = 0;        // algebraic value from analyze()
  double alpha_hat = 0;    // intercept of the linear fit of g against 1/(d+k)
                           // over the three largest k
  double fit_error = 0;    // |alpha_hat - alpha|
};

/// Slope cross-check. The algebraic alpha is the trusted value; the fitted
/// alpha_hat converges to it only slowly in k (the scaled residual is still
/// far from alpha at k ~ 100 when the limit matrix has a small spectral gap),
/// so callers should fit at k of order 10^3..10^5, where the reduced solve
/// costs the same as at k = 1. Requires at least three k values.
Diagnostics convergence_diagnostics(const Tree& t, const std::string& v,
                                    const std::vector<long long>& ks);

struct TailCheck {
  bool monotone = false;       // strict, in the predicted direction, over the
                               // whole window
  long long first_monotone_k = -1;  // smallest k from which the direction holds
  Direction direction = Direction::Undetermined;
};

/// Verifies strict monotonicity of the growth sequence over
/// [k_start, k_start + window] in the direction predicted by the sign of the
/// first-order coefficient.
TailCheck tail_check(const Tree& t, const std::string& v, long long k_start,
                     int window);

}  // namespace ricci

#endif
