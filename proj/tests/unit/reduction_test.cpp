#include <map>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ricci/reduction.hpp"
#include "ricci/ricci_matrix.hpp"
#include "support/checks.hpp"
#include "support/corpus.hpp"
#include "support/rational.hpp"

using namespace ricci;
namespace tc = ricci::testing;
using tc::thrown_kind;

namespace {

// worked example with the sibling leaves z1, z2 (edge indices 3, 4) merged
ReducedSystem worked_example_system() {
  OrbitPartition orbits;
  orbits.classes = {{3, 4}};
  return reduced_system(tc::fork_chain(), "v", orbits);
}

void check_close(const Matrix& got, const std::vector<std::vector<double>>& want,
                 double tol) {
  REQUIRE(got.rows() == static_cast<int>(want.size()));
  for (int i = 0; i < got.rows(); ++i)
    for (int j = 0; j < got.cols(); ++j)
      CHECK(std::fabs(got(i, j) - want[i][j]) <= tol);
}

}  // namespace

TEST_CASE("Dirichlet branch matrices of the worked example") {
  const Tree t = tc::fork_chain();
  const BranchDecomposition bd = branch_decomposition(t, "v");

  const Matrix a1 = dirichlet_branch_matrix(t, "v", bd.branches[0]);
  check_close(a1, {{-0.5, 0.5}, {0.5, -1.5}}, 0.0);

  // edge level, before the sibling orbit is merged
  const Matrix a2 = dirichlet_branch_matrix(t, "v", bd.branches[1]);
  const double third = 1.0 / 3.0;
  check_close(a2,
              {{-third, third, third},
               {third, -4 * third, third},
               {third, third, -4 * third}},
              1e-15);

  // a single-edge branch rooted at a leaf
  const Tree single = tc::single_edge();
  const BranchDecomposition sd = branch_decomposition(single, "v");
  const Matrix a = dirichlet_branch_matrix(single, "v", sd.branches[0]);
  CHECK(a(0, 0) == -1.0);
}

TEST_CASE("worked example: block data matches the exact rational route") {
  const ReducedSystem rs = worked_example_system();
  REQUIRE(rs.dim() == 5);
  CHECK(rs.d == 2);
  CHECK(rs.class_sizes == std::vector<int>{1, 1, 1, 2});

  // branch blocks, exact fractions
  using tc::Rat;
  const tc::RatMat a1 = tc::rat_branch_block(rs, 0);
  CHECK(a1[0][0] == Rat(-1, 2));
  CHECK(a1[0][1] == Rat(1, 2));
  CHECK(a1[1][0] == Rat(1, 2));
  CHECK(a1[1][1] == Rat(-3, 2));
  const tc::RatMat a2 = tc::rat_branch_block(rs, 1);
  CHECK(a2[0][0] == Rat(-1, 3));
  CHECK(a2[0][1] == Rat(2, 3));
  CHECK(a2[1][0] == Rat(1, 3));
  CHECK(a2[1][1] == Rat(-1));

  // float route agrees with the rational route
  for (int b = 0; b < 2; ++b) {
    const tc::RatMat exact = tc::rat_branch_block(rs, b);
    for (int i = 0; i < rs.branch_blocks[b].rows(); ++i)
      for (int j = 0; j < rs.branch_blocks[b].cols(); ++j)
        CHECK(std::fabs(rs.branch_blocks[b](i, j) - exact[i][j].to_double()) <= 1e-10);
  }

  // limit matrix and coupling, exact displays
  tc::RatMat limit, coupling;
  tc::rat_reduced_pair(rs, limit, coupling);
  const int lim[5][5] = {{0, 0, 0, 0, 1},
                         {0, 0, 0, 0, 0},
                         {0, 0, 0, 0, 1},
                         {0, 0, 0, 0, 0},
                         {0, 0, 0, 0, 0}};
  const Rat lim_blocks[2][2][2] = {{{Rat(-1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(-3, 2)}},
                                   {{Rat(-1, 3), Rat(2, 3)}, {Rat(1, 3), Rat(-1)}}};
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(limit[2 * b + i][2 * b + j] == lim_blocks[b][i][j]);
  for (int i = 0; i < 5; ++i) CHECK(limit[i][4] == Rat(lim[i][4]));
  for (int j = 0; j < 5; ++j) CHECK(limit[4][j] == Rat(0));

  const long long bmat[5][5] = {{-1, 0, 1, 0, -2},
                                {0, 0, 0, 0, 0},
                                {1, 0, -1, 0, -2},
                                {0, 0, 0, 0, 0},
                                {1, 0, 1, 0, -4}};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(coupling[i][j] == Rat(bmat[i][j]));

  // float matrices within 1e-10 of the exact ones (the coupling is integral,
  // so it matches bit for bit)
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      CHECK(std::fabs(rs.limit(i, j) - limit[i][j].to_double()) <= 1e-10);
      CHECK(rs.coupling(i, j) == static_cast<double>(bmat[i][j]));
    }

  // interface data
  CHECK(rs.interface_cols[0] == Vec{1.0, 0.0});
  CHECK(rs.interface_cols[1] == Vec{1.0, 0.0});
  CHECK(rs.root_class == std::vector<int>{0, 0});
}

TEST_CASE("worked example: exact null extension and first-order value") {
  const ReducedSystem rs = worked_example_system();
  const tc::RatFirstOrder fo = tc::rat_first_order(rs);
  using tc::Rat;
  CHECK(fo.r == tc::RatVec{Rat(3), Rat(1), Rat(9), Rat(3), Rat(1)});
  CHECK(fo.alpha == Rat(8));
}

TEST_CASE("star base: exact block data") {
  const ReducedSystem rs = reduced_system(tc::single_edge(), "v");
  REQUIRE(rs.dim() == 2);
  tc::RatMat limit, coupling;
  tc::rat_reduced_pair(rs, limit, coupling);
  using tc::Rat;
  CHECK(limit[0][0] == Rat(-1));
  CHECK(limit[0][1] == Rat(1));
  CHECK(limit[1][0] == Rat(0));
  CHECK(limit[1][1] == Rat(0));
  CHECK(coupling[0][0] == Rat(-1));
  CHECK(coupling[0][1] == Rat(-1));
  CHECK(coupling[1][0] == Rat(1));
  CHECK(coupling[1][1] == Rat(-3));

  CHECK(rs.limit(0, 0) == -1.0);
  CHECK(rs.limit(0, 1) == 1.0);
  CHECK(rs.coupling(1, 1) == -3.0);

  const tc::RatFirstOrder fo = tc::rat_first_order(rs);
  CHECK(fo.r == tc::RatVec{Rat(1), Rat(1)});
  CHECK(fo.alpha == Rat(-2));
}

TEST_CASE("default classes keep one coordinate per edge") {
  const ReducedSystem rs = reduced_system(tc::fork_chain(), "v");
  REQUIRE(rs.branch_blocks.size() == 2);
  CHECK(rs.branch_blocks[0].rows() == 2);
  CHECK(rs.branch_blocks[1].rows() == 3);
  CHECK(rs.dim() == 6);
}

TEST_CASE("reduced matrix: affine family") {
  const ReducedSystem rs = worked_example_system();

  // spot value from the displayed matrix at k = 1
  const Matrix q1 = reduced_matrix(rs, 1);
  CHECK(q1(0, 0) == doctest::Approx(-0.5 - 1.0 / 3.0).epsilon(1e-14));

  CHECK(thrown_kind([&] { reduced_matrix(rs, 0); }) == ErrorKind::InvalidK);

  for (long long k : {1LL, 3LL, 17LL, 1000LL}) {
    const Matrix q = reduced_matrix(rs, k);
    const double eps = 1.0 / (rs.d + k);
    const int y = rs.dim() - 1;
    for (int i = 0; i < q.rows(); ++i)
      for (int j = 0; j < q.cols(); ++j) {
        const bool root_to_cluster =
            j == y && (i == 0 || i == 2);   // root coordinates of the branches
        if (root_to_cluster) {
          // written directly as k/(d+k)
          CHECK(q(i, j) == static_cast<double>(k) / static_cast<double>(rs.d + k));
        } else {
          CHECK(q(i, j) == rs.limit(i, j) + rs.coupling(i, j) * eps);
        }
      }
    // the cluster row couples back with exactly 1/(d+k)
    CHECK(q(y, 0) == eps);
    CHECK(q(y, 2) == eps);

    // recovering the coupling from two different k agrees to rounding
    // (the deviation scales with (d+k) times the entry rounding)
    const Matrix q2 = reduced_matrix(rs, k + 5);
    const double tol = 1e-15 * static_cast<double>(rs.d + k + 5);
    for (int i = 0; i < q.rows(); ++i)
      for (int j = 0; j < q.cols(); ++j) {
        const double b1 = (q(i, j) - rs.limit(i, j)) * (rs.d + k);
        const double b2 = (q2(i, j) - rs.limit(i, j)) * (rs.d + k + 5);
        CHECK(std::fabs(b1 - b2) <= tol * std::max(1.0, std::fabs(b1)));
      }
  }
}

TEST_CASE("scaling symmetrizes the whole family") {
  for (const auto& entry : tc::corpus()) {
    if (entry.tree.n_edges() > 12) continue;
    const ReducedSystem rs = reduced_system(entry.tree, entry.pivot);
    for (long long k : {1LL, 2LL, 10LL, 100000LL}) {
      const Matrix q = reduced_matrix(rs, k);
      const SymmetrizationScaling s = rs.scaling_for(k);
      Matrix sym(q.rows(), q.cols());
      for (int i = 0; i < q.rows(); ++i)
        for (int j = 0; j < q.cols(); ++j)
          sym(i, j) = s.weights[i] * q(i, j) / s.weights[j];
      CHECK(max_asymmetry(sym) <= 1e-12);
    }
  }
}

TEST_CASE("partition validation") {
  const Tree t = tc::fork_chain();

  // class spanning two branches
  {
    OrbitPartition p;
    p.classes = {{0, 2}};
    CHECK(thrown_kind([&] { reduced_system(t, "v", p); }) ==
          ErrorKind::IncompatiblePartition);
  }
  // root edge merged with an interior edge
  {
    OrbitPartition p;
    p.classes = {{2, 3}};
    CHECK(thrown_kind([&] { reduced_system(t, "v", p); }) ==
          ErrorKind::IncompatiblePartition);
  }
  // duplicate listing
  {
    OrbitPartition p;
    p.classes = {{3, 4}, {4}};
    CHECK(thrown_kind([&] { reduced_system(t, "v", p); }) ==
          ErrorKind::IncompatiblePartition);
  }
  // structurally fine but not a symmetry: a leaf edge merged with the
  // interior hub edge of the supercritical branch
  {
    const Tree sc = tc::supercritical();
    const int leaf = sc.edge_index("u", "ua1");
    const int hub = sc.edge_index("u", "w");
    REQUIRE(leaf >= 0);
    REQUIRE(hub >= 0);
    OrbitPartition p;
    p.classes = {{leaf, hub}};
    CHECK(thrown_kind([&] { reduced_system(sc, "v", p); }) ==
          ErrorKind::IncompatiblePartition);
  }
  // genuine symmetry: the three sibling leaves at the first hub
  {
    const Tree sc = tc::supercritical();
    OrbitPartition p;
    p.classes = {{sc.edge_index("u", "ua1"), sc.edge_index("u", "ua2"),
                  sc.edge_index("u", "ua3")}};
    const ReducedSystem rs = reduced_system(sc, "v", p);
    CHECK(rs.dim() == 7);   // 8 edges, 3 merged into 1, plus the cluster
    // collapsing preserves the growth eigenvalues
    const ReducedSystem full = reduced_system(sc, "v");
    for (long long k : {1LL, 7LL}) {
      CHECK(std::fabs(reduced_lambda(rs, k) - reduced_lambda(full, k)) <= 1e-10);
    }
  }
}

TEST_CASE("orbit file parsing") {
  const Tree t = tc::fork_chain();
  {
    std::istringstream in(R"([["u2~z1", "u2~z2"]])");
    const OrbitPartition p = read_orbit_partition(in, t);
    REQUIRE(p.classes.size() == 1);
    CHECK(p.classes[0] == std::vector<int>{3, 4});
  }
  {
    std::istringstream in(R"({"not": "a list"})");
    CHECK(thrown_kind([&] { read_orbit_partition(in, t); }) == ErrorKind::ParseError);
  }
  {
    std::istringstream in(R"([["u2-z1"]])");
    CHECK(thrown_kind([&] { read_orbit_partition(in, t); }) == ErrorKind::ParseError);
  }
  {
    std::istringstream in(R"([["u2~missing"]])");
    CHECK(thrown_kind([&] { read_orbit_partition(in, t); }) == ErrorKind::ParseError);
  }
}

TEST_CASE("oracle check on worked cases") {
  {
    const OracleCheck oc = reduction_oracle_check(tc::fork_chain(), "v", 5);
    CHECK(oc.diff < 1e-10);
    CHECK(std::fabs(oc.reduced - 0.0906) < 1e-4);
  }
  {
    const OracleCheck oc = reduction_oracle_check(tc::single_edge(), "v", 9);
    CHECK(std::fabs(oc.reduced + 0.2) <= 1e-10);
    CHECK(std::fabs(oc.full + 0.2) <= 1e-10);
  }
  {
    // growing the middle of a path gives a star on four vertices
    const OracleCheck oc = reduction_oracle_check(tc::path3(), "b", 1);
    CHECK(std::fabs(oc.reduced + 2.0 / 3.0) <= 1e-10);
    CHECK(oc.diff < 1e-10);
  }
  CHECK(thrown_kind([] {
          Tree big = attach_leaves(tc::single_edge(), "v", 1995);
          return reduction_oracle_check(big, "v", 10);
        }) == ErrorKind::DimensionCap);
}

TEST_CASE("reduction agrees with the full matrix on random trees") {
  std::mt19937 rng(tc::corpus_seed() + 30);
  for (int trial = 0; trial < 15; ++trial) {
    std::uniform_int_distribution<int> size(1, 10);
    const Tree t = tc::random_tree(size(rng), rng);
    const std::string v = tc::random_vertex(t, rng);
    for (int k : {1, 2, 3, 7, 15, 30}) {
      const OracleCheck oc = reduction_oracle_check(t, v, k);
      CHECK(oc.diff < 1e-9);
    }
  }
}

TEST_CASE("top pair equals the eigensolve of the symmetrized matrix") {
  const ReducedSystem rs = worked_example_system();
  for (long long k : {1LL, 10LL, 500LL}) {
    const Matrix q = reduced_matrix(rs, k);
    const SymmetrizationScaling s = rs.scaling_for(k);
    Matrix sym(q.rows(), q.cols());
    for (int i = 0; i < q.rows(); ++i)
      for (int j = 0; j < q.cols(); ++j)
        sym(i, j) = s.weights[i] * q(i, j) / s.weights[j];
    for (int i = 0; i < sym.rows(); ++i)
      for (int j = i + 1; j < sym.cols(); ++j) {
        const double avg = 0.5 * (sym(i, j) + sym(j, i));
        sym(i, j) = sym(j, i) = avg;
      }
    const double via_pair = top_pair_symmetrizable(q, s).lambda;
    const double via_sym = sym_eigen(sym).values[0];
    CHECK(std::fabs(via_pair - via_sym) <= 1e-12);
  }
}

TEST_CASE("collapsing sibling leaves never changes the growth eigenvalues") {
  std::mt19937 rng(tc::corpus_seed() + 32);
  int collapsed_trees = 0;
  for (int trial = 0; trial < 20 && collapsed_trees < 8; ++trial) {
    std::uniform_int_distribution<int> size(4, 12);
    const Tree t = tc::random_tree(size(rng), rng);
    const std::string v = tc::random_vertex(t, rng);

    // group the leaf edges hanging off each vertex other than the pivot
    std::map<std::string, std::vector<int>> siblings;
    for (int e = 0; e < t.n_edges(); ++e) {
      const auto& [a, b] = t.edge(e);
      if (a == v || b == v) continue;
      if (t.degree_of(a) == 1) siblings[b].push_back(e);
      if (t.degree_of(b) == 1) siblings[a].push_back(e);
    }
    OrbitPartition p;
    for (auto& [parent, edges] : siblings)
      if (edges.size() >= 2) p.classes.push_back(edges);
    if (p.classes.empty()) continue;
    ++collapsed_trees;

    const ReducedSystem merged = reduced_system(t, v, p);
    const ReducedSystem plain = reduced_system(t, v);
    CHECK(merged.dim() < plain.dim());
    for (long long k : {1LL, 6LL, 50LL})
      CHECK(std::fabs(reduced_lambda(merged, k) - reduced_lambda(plain, k)) <= 1e-10);
  }
  CHECK(collapsed_trees >= 4);
}

TEST_CASE("every reduced eigenvalue appears in the full spectrum") {
  std::mt19937 rng(tc::corpus_seed() + 31);
  for (int trial = 0; trial < 8; ++trial) {
    std::uniform_int_distribution<int> size(2, 8);
    const Tree t = tc::random_tree(size(rng), rng);
    const std::string v = tc::random_vertex(t, rng);
    const ReducedSystem rs = reduced_system(t, v);
    for (int k : {1, 4, 9}) {
      const Matrix q = reduced_matrix(rs, k);
      const SymmetrizationScaling s = rs.scaling_for(k);
      Matrix sym(q.rows(), q.cols());
      for (int i = 0; i < q.rows(); ++i)
        for (int j = 0; j < q.cols(); ++j)
          sym(i, j) = s.weights[i] * q(i, j) / s.weights[j];
      for (int i = 0; i < sym.rows(); ++i)
        for (int j = i + 1; j < sym.cols(); ++j) {
          const double avg = 0.5 * (sym(i, j) + sym(j, i));
          sym(i, j) = sym(j, i) = avg;
        }
      const Vec reduced_spec = sym_eigen(sym).values;
      const Vec full_spec =
          sym_eigen(ricci_matrix(attach_leaves(t, v, k))).values;
      for (double rv : reduced_spec) {
        double best = 1e9;
        for (double fv : full_spec) best = std::min(best, std::fabs(rv - fv));
        CHECK(best < 1e-9);
      }
    }
  }
}
