#include "ricci/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "ricci/ricci_matrix.hpp"

namespace ricci {

std::string to_string(Direction d) {
  switch (d) {
    case Direction::DecreasingFromAbove: return "decreasing_from_above";
    case Direction::IncreasingFromBelow: return "increasing_from_below";
    default: return "undetermined";
  }
}

namespace {

Direction direction_of(double alpha) {
  if (alpha > kDirectionTol) return Direction::DecreasingFromAbove;
  if (alpha < -kDirectionTol) return Direction::IncreasingFromBelow;
  return Direction::Undetermined;
}

}  // namespace

LimitValue lambda_infinity(const ReducedSystem& rs) {
  const auto spectrum = triangular_labeled_spectrum(rs.block_triangular());
  LimitValue out;
  out.value = spectrum.front().first;
  out.achiever = spectrum.front().second;
  if (spectrum.size() >= 2) {
    const double gap = spectrum[0].first - spectrum[1].first;
    out.degenerate = gap <= kSimpleGapTol * std::max(1.0, std::fabs(out.value));
  }
  return out;
}

AsymptoticsReport first_order_coefficient(const ReducedSystem& rs) {
  const TriangularPair pair = triangular_top_pair(rs.block_triangular());
  AsymptoticsReport out;
  out.lambda_inf = pair.lambda;
  out.achiever = pair.achiever;
  out.simple = true;
  out.multiplicity = 1;
  out.r = pair.right;
  out.l = pair.left;
  out.alpha = dot(pair.left, matvec(rs.coupling, pair.right));
  out.direction = direction_of(out.alpha);
  return out;
}

AsymptoticsReport degenerate_coefficient(const ReducedSystem& rs) {
  TriangularEigenspace space;
  try {
    space = triangular_top_eigenspace(rs.block_triangular());
  } catch (const RicciError& e) {
    if (e.kind() == ErrorKind::SingularBlockSolve)
      fail(ErrorKind::IllConditionedEigenspace,
           std::string("limit eigenvalue is defective: ") + e.what());
    throw;
  }
  const int m = static_cast<int>(space.rights.size());
  if (m == 1) {
    // not actually degenerate; same answer as the simple path
    return first_order_coefficient(rs);
  }

  AsymptoticsReport out;
  out.lambda_inf = space.lambda;
  out.achiever = space.achievers.front();
  out.simple = false;
  out.multiplicity = m;

  // bi-normalize: G = L^T R should be the identity already (members live in
  // different blocks and each pair is bi-normalized); solve anyway and treat
  // a bad condition number as the defective case
  Matrix g(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) g(a, b) = dot(space.lefts[a], space.rights[b]);
  if (cond_inf(g) > 1e8)
    fail(ErrorKind::IllConditionedEigenspace,
         "left/right eigenspace bases cannot be bi-normalized");
  const Matrix ginv = inverse(g, ErrorKind::IllConditionedEigenspace,
                              "eigenspace bi-normalization");

  // W = L^T coupling R G^{-1}
  Matrix w(m, m);
  for (int b = 0; b < m; ++b) {
    const Vec br = matvec(rs.coupling, space.rights[b]);
    for (int a = 0; a < m; ++a) w(a, b) = dot(space.lefts[a], br);
  }
  w = matmul(w, ginv);

  // the compression is symmetric in this basis (the root classes are
  // singletons, so left and right root components coincide); fall back to the
  // 2x2 closed form if rounding spoiled that
  double alpha_max;
  if (max_asymmetry(w) <= 1e-8 * std::max(1.0, inf_norm(w))) {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const double avg = 0.5 * (w(a, b) + w(b, a));
        w(a, b) = w(b, a) = avg;
      }
    alpha_max = sym_eigen(w).values[0];
  } else if (m == 2) {
    const double tr = w(0, 0) + w(1, 1);
    const double disc = (w(0, 0) - w(1, 1)) * (w(0, 0) - w(1, 1)) +
                        4.0 * w(0, 1) * w(1, 0);
    if (disc < 0.0)
      fail(ErrorKind::IllConditionedEigenspace,
           "complex eigenvalues in the eigenspace compression");
    alpha_max = 0.5 * (tr + std::sqrt(disc));
  } else {
    fail(ErrorKind::IllConditionedEigenspace,
         "eigenspace compression is not symmetric");
  }

  out.alpha = alpha_max;
  out.direction = direction_of(alpha_max);
  return out;
}

AsymptoticsReport analyze(const ReducedSystem& rs) {
  try {
    return first_order_coefficient(rs);
  } catch (const RicciError& e) {
    if (e.kind() != ErrorKind::DegenerateEigenvalue) throw;
    return degenerate_coefficient(rs);
  }
}

std::vector<std::pair<long long, double>> lambda_sequence(
    const Tree& t, const std::string& v, const std::vector<long long>& ks) {
  const ReducedSystem rs = reduced_system(t, v);
  std::vector<std::pair<long long, double>> out(ks.size());
  std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < ks.size(); ++i) {
    try {
      const long long k = ks[i];
      double lambda;
      if (k == 0) {
        lambda = sym_eigen(ricci_matrix(t)).values[0];
      } else if (k < 0) {
        fail(ErrorKind::InvalidK, "negative k in sequence");
      } else {
        lambda = reduced_lambda(rs, k);
      }
      out[i] = {k, lambda};
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

Diagnostics convergence_diagnostics(const Tree& t, const std::string& v,
                                    const std::vector<long long>& ks) {
  if (ks.size() < 3)
    fail(ErrorKind::NeedAtLeastThreeK,
         "slope fit needs at least three k values");
  const ReducedSystem rs = reduced_system(t, v);
  const AsymptoticsReport report = analyze(rs);

  Diagnostics diag;
  diag.lambda_inf = report.lambda_inf;
  diag.alpha = report.alpha;

  const auto seq = lambda_sequence(t, v, ks);
  for (const auto& [k, lambda] : seq)
    diag.rows.push_back({k, lambda,
                         (lambda - report.lambda_inf) * static_cast<double>(rs.d + k)});

  // least-squares line g = alpha_hat + slope * x with x = 1/(d+k), fitted on
  // the three largest k
  std::vector<DiagnosticsRow> rows = diag.rows;
  std::sort(rows.begin(), rows.end(),
            [](const DiagnosticsRow& a, const DiagnosticsRow& b) { return a.k > b.k; });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 3;
  for (int i = 0; i < n; ++i) {
    const double x = 1.0 / static_cast<double>(rs.d + rows[i].k);
    const double y = rows[i].g_k;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  diag.alpha_hat = (sy - slope * sx) / n;
  diag.fit_error = std::fabs(diag.alpha_hat - diag.alpha);
  return diag;
}

TailCheck tail_check(const Tree& t, const std::string& v, long long k_start,
                     int window) {
  if (window < 2) fail(ErrorKind::InvalidK, "window must be >= 2");
  if (k_start < 0) fail(ErrorKind::InvalidK, "k_start must be >= 0");

  const ReducedSystem rs = reduced_system(t, v);
  const AsymptoticsReport report = analyze(rs);

  TailCheck out;
  out.direction = report.direction;
  if (report.direction == Direction::Undetermined) return out;

  std::vector<long long> ks;
  for (long long k = k_start; k <= k_start + window; ++k) ks.push_back(k);
  const auto seq = lambda_sequence(t, v, ks);

  const bool want_decreasing = report.direction == Direction::DecreasingFromAbove;
  // smallest k from which the predicted strict direction holds to the end
  long long first = -1;
  for (int i = static_cast<int>(seq.size()) - 2; i >= 0; --i) {
    const bool ok = want_decreasing ? seq[i + 1].second < seq[i].second
                                    : seq[i + 1].second > seq[i].second;
    if (!ok) break;
    first = seq[i].first;
  }
  out.first_monotone_k = first;
  out.monotone = (first == k_start);
  return out;
}

}  // namespace ricci
