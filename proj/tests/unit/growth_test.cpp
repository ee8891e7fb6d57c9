#include <cmath>
#include <random>

#include "doctest.h"
#include "ricci/eigen.hpp"
#include "ricci/growth.hpp"
#include "support/checks.hpp"
#include "support/corpus.hpp"

using namespace ricci;
namespace tc = ricci::testing;
using tc::thrown_kind;

namespace {

// change of the quadratic form measured on the explicitly grown tree
double difference_oracle(const Tree& t, const std::string& v, const EdgeVector& f,
                         double y) {
  const Tree grown = attach_leaves(t, v, 1);
  EdgeVector fy(grown.n_edges(), y);
  for (int i = 0; i < t.n_edges(); ++i) {
    const auto& [a, b] = t.edge(i);
    fy[grown.edge_index(a, b)] = f[i];
  }
  return quadratic_form(grown, fy) - quadratic_form(t, f);
}

EdgeVector unit_perron(const Tree& t) {
  const EigenResult eig = sym_eigen(ricci_matrix(t));
  EdgeVector f(t.n_edges());
  for (int i = 0; i < t.n_edges(); ++i) f[i] = eig.vectors(i, 0);
  return f;
}

// two adjacent hubs carrying m leaves each
Tree double_star(int m) {
  std::vector<Edge> edges{{"u", "w"}};
  for (int i = 1; i <= m; ++i) {
    edges.push_back({"u", "a" + std::to_string(i)});
    edges.push_back({"w", "b" + std::to_string(i)});
  }
  return build_tree(edges);
}

}  // namespace

TEST_CASE("rayleigh difference: constant term and closed form") {
  const Tree t = tc::path3();
  const EdgeVector f{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  const double s = std::sqrt(2.0), a = 1.0, d = 2.0;
  CHECK(rayleigh_difference(t, "b", f, 0.0) ==
        doctest::Approx(-(s * s - 2 * a) / (d * (d + 1))).epsilon(1e-14));

  // the y = 1 extension measured on the explicitly built 4-vertex star
  const double closed = rayleigh_difference(t, "b", f, 1.0);
  CHECK(closed == doctest::Approx((2.0 * std::sqrt(2.0) - 4.0) / 3.0).epsilon(1e-13));
  CHECK(std::fabs(closed - difference_oracle(t, "b", f, 1.0)) <= 1e-10);

  CHECK(thrown_kind([&] { rayleigh_difference(t, "zz", f, 0.0); }) ==
        ErrorKind::UnknownVertex);
  CHECK(thrown_kind([&] { rayleigh_difference(t, "b", {1.0}, 0.0); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("rayleigh difference is concave in y") {
  std::mt19937 rng(tc::corpus_seed() + 50);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Tree t = tc::fork_chain();
  EdgeVector f(t.n_edges());
  for (double& x : f) x = gauss(rng);
  for (double y : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    const double mid = rayleigh_difference(t, "v", f, y);
    const double lo = rayleigh_difference(t, "v", f, y - 0.1);
    const double hi = rayleigh_difference(t, "v", f, y + 0.1);
    CHECK(lo + hi < 2.0 * mid);
  }
}

TEST_CASE("rayleigh difference matches the oracle on random cases") {
  std::mt19937 rng(tc::corpus_seed() + 51);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> yd(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> size(1, 10);
    const Tree t = tc::random_tree(size(rng), rng);
    const std::string v = tc::random_vertex(t, rng);
    EdgeVector f(t.n_edges());
    for (double& x : f) x = gauss(rng);
    const double y = yd(rng);
    CHECK(std::fabs(rayleigh_difference(t, v, f, y) - difference_oracle(t, v, f, y)) <
          1e-9);
  }
}

TEST_CASE("sharp test preconditions") {
  const Tree t = tc::path4();
  CHECK(thrown_kind([&] { sharp_criterion(t, "a", {1.0, 1.0, 1.0}); }) ==
        ErrorKind::NotUnitVector);
  // unit function vanishing on the only edge at 'a'
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(thrown_kind([&] { sharp_criterion(t, "a", {0.0, r, r}); }) ==
        ErrorKind::ZeroAtVertex);
}

TEST_CASE("sharp test at low degree always passes with the top eigenvector") {
  for (const auto& entry : tc::corpus()) {
    if (entry.tree.n_edges() < 2) continue;
    if (entry.tree.degree_of(entry.pivot) > 2) continue;
    const OneStepAnalysis a = sharp_criterion(entry.tree, entry.pivot,
                                              unit_perron(entry.tree));
    CHECK(a.applicable);
    CHECK(a.criterion_holds);
  }
}

TEST_CASE("worked example: criterion holds and the eigenvalue indeed rises") {
  const Tree t = tc::fork_chain();
  const OneStepAnalysis a = sharp_criterion(t, "v", unit_perron(t));
  CHECK(a.criterion_holds);
  CHECK(std::fabs(a.mu - (-0.1731)) < 1e-4);
  const double lam1 = sym_eigen(ricci_matrix(attach_leaves(t, "v", 1))).values[0];
  CHECK(std::fabs(lam1 - (-0.0312)) < 1e-4);
  CHECK(lam1 > a.mu);
}

TEST_CASE("large twin hubs: the sharp test fails and the eigenvalue drops") {
  // hubs of degree 15: the top eigenvalue exceeds the coarse threshold and
  // the top eigenvector spreads too evenly at the hub
  const Tree t = double_star(14);
  const OneStepAnalysis a = sharp_criterion(t, "u", unit_perron(t));
  CHECK(a.d == 15);
  CHECK(a.mu > theta(a.d));
  CHECK(a.applicable);
  CHECK_FALSE(a.criterion_holds);
  CHECK(a.max_gain < 0.0);

  const double before = sym_eigen(ricci_matrix(t)).values[0];
  const double after = sym_eigen(ricci_matrix(attach_leaves(t, "u", 1))).values[0];
  CHECK(after < before);

  // one size down the margin is still positive and the eigenvalue rises
  const Tree t13 = double_star(13);
  const OneStepAnalysis a13 = sharp_criterion(t13, "u", unit_perron(t13));
  CHECK(a13.criterion_holds);
  const double before13 = sym_eigen(ricci_matrix(t13)).values[0];
  const double after13 =
      sym_eigen(ricci_matrix(attach_leaves(t13, "u", 1))).values[0];
  CHECK(after13 >= before13 - 1e-10);
}

TEST_CASE("gain maximum: closed form equals grid search") {
  std::mt19937 rng(tc::corpus_seed() + 52);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto grid_max = [](const Tree& t, const std::string& v, const EdgeVector& f,
                     double mu) {
    double best = -1e18;
    for (int i = -40000; i <= 40000; ++i) {
      const double y = i * 1e-4;
      best = std::max(best, rayleigh_difference(t, v, f, y) - mu * y * y);
    }
    return best;
  };
  int checked = 0;
  for (int trial = 0; trial < 24; ++trial) {
    std::uniform_int_distribution<int> size(2, 9);
    const Tree t = tc::random_tree(size(rng), rng);
    const std::string v = tc::random_vertex(t, rng);
    EdgeVector f(t.n_edges());
    for (double& x : f) x = gauss(rng);
    const double norm = norm2(f);
    if (norm < 1e-9) continue;
    for (double& x : f) x /= norm;
    OneStepAnalysis a;
    try {
      a = sharp_criterion(t, v, f);
    } catch (const RicciError&) {
      continue;   // f happened to vanish at v
    }
    if (!a.applicable) continue;
    ++checked;
    CHECK(std::fabs(a.max_gain - grid_max(t, v, f, a.mu)) < 1e-7);
    CHECK(a.criterion_holds == (a.max_gain >= -1e-12));
  }
  CHECK(checked >= 10);
}

TEST_CASE("spread ratio bounds and the equality case") {
  std::mt19937 rng(tc::corpus_seed() + 53);
  std::uniform_real_distribution<double> pos(0.05, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> size(1, 10);
    const Tree t = tc::random_tree(size(rng), rng);
    const std::string v = tc::random_vertex(t, rng);
    EdgeVector f(t.n_edges());
    for (double& x : f) x = pos(rng);
    const double norm = norm2(f);
    for (double& x : f) x /= norm;
    const OneStepAnalysis a = sharp_criterion(t, v, f);
    const int d = t.degree_of(v);
    CHECK(a.rho >= 1.0 - 1e-10);
    CHECK(a.rho <= d + 1e-10);
  }
  // constant values on the edges at v attain the upper bound
  const Tree t = tc::star(6);
  EdgeVector f(t.n_edges(), 1.0 / std::sqrt(5.0));
  const OneStepAnalysis a = sharp_criterion(t, "c", f);
  CHECK(std::fabs(a.rho - 5.0) <= 1e-12);
}

TEST_CASE("certified extension does not lower the quotient") {
  for (const auto& entry : tc::corpus()) {
    if (entry.tree.n_edges() < 2) continue;
    const EdgeVector f = unit_perron(entry.tree);
    const OneStepAnalysis a = sharp_criterion(entry.tree, entry.pivot, f);
    if (!a.applicable || !a.criterion_holds) continue;
    const double gained = difference_oracle(entry.tree, entry.pivot, f, a.y_star);
    const double quotient = (a.mu + gained) / (1.0 + a.y_star * a.y_star);
    CHECK(quotient >= a.mu - 1e-10);
  }
}

TEST_CASE("degree threshold") {
  CHECK(std::isinf(theta(1)));
  CHECK(std::isinf(theta(2)));
  CHECK(theta(3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(theta(5) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  for (int d = 3; d < 30; ++d) CHECK(theta(d + 1) < theta(d));
  CHECK(theta(1000) < 1e-4);
}

TEST_CASE("one-step guarantee") {
  // star centers: the eigenvalue strictly climbs toward zero
  for (int n = 3; n <= 10; ++n) {
    const Tree s = tc::star(n);
    const GuaranteeResult g = one_step_guarantee(s, "c");
    CHECK(g.guaranteed);
    const double before = sym_eigen(ricci_matrix(s)).values[0];
    const double after = sym_eigen(ricci_matrix(attach_leaves(s, "c", 1))).values[0];
    CHECK(before == doctest::Approx(-2.0 / (n - 1)).epsilon(1e-12));
    CHECK(after == doctest::Approx(-2.0 / n).epsilon(1e-12));
    CHECK(after > before);
  }

  // the single edge bypasses the sharp test
  const GuaranteeResult single = one_step_guarantee(tc::single_edge(), "v");
  CHECK(single.guaranteed);
  CHECK_FALSE(single.analysis.applicable);
  CHECK(single.analysis.mu == doctest::Approx(-2.0).epsilon(1e-14));

  const GuaranteeResult fork = one_step_guarantee(tc::fork_chain(), "v");
  CHECK(fork.guaranteed);
}

TEST_CASE("a positive verdict never lies about the eigenvalue") {
  std::mt19937 rng(tc::corpus_seed() + 54);
  auto verify = [](const Tree& t, const std::string& v) {
    const GuaranteeResult g = one_step_guarantee(t, v);
    // the degree-only threshold subsumes the sharp test
    if (t.n_edges() >= 2 && g.analysis.mu <= theta(g.analysis.d))
      CHECK(g.guaranteed);
    if (!g.guaranteed) return;
    const double before = sym_eigen(ricci_matrix(t)).values[0];
    const double after = sym_eigen(ricci_matrix(attach_leaves(t, v, 1))).values[0];
    CHECK(after >= before - 1e-10);
  };
  for (const auto& entry : tc::corpus()) verify(entry.tree, entry.pivot);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> size(1, 10);
    const Tree t = tc::random_tree(size(rng), rng);
    verify(t, tc::random_vertex(t, rng));
  }
}
