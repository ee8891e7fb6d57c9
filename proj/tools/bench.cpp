// Times the serial and OpenMP Jacobi kernels on curvature matrices of grown
// trees and reports the eigenvalue agreement between the two paths.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ricci/eigen.hpp"
#include "ricci/ricci_matrix.hpp"
#include "ricci/tree.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// random recursive tree with n edges, then a burst of leaves at vertex v0 so
// the matrix picks up the dense coupling rows typical of grown trees
ricci::Tree bench_tree(int n_edges, std::mt19937& rng) {
  std::vector<ricci::Edge> edges;
  std::vector<std::string> verts{"v0"};
  const int backbone = n_edges / 2;
  for (int i = 0; i < backbone; ++i) {
    std::uniform_int_distribution<size_t> pick(0, verts.size() - 1);
    std::string child = "v" + std::to_string(i + 1);
    edges.emplace_back(verts[pick(rng)], child);
    verts.push_back(child);
  }
  ricci::Tree t = ricci::build_tree(edges);
  return ricci::attach_leaves(t, "v0", n_edges - backbone);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> sizes{128, 256, 512};
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--sizes" && i + 1 < argc) {
      sizes.clear();
      std::string spec = argv[++i];
      size_t pos = 0;
      while (pos != std::string::npos) {
        size_t comma = spec.find(',', pos);
        sizes.push_back(std::stoi(spec.substr(pos, comma - pos)));
        pos = comma == std::string::npos ? comma : comma + 1;
      }
    } else if (arg == "--reps" && i + 1 < argc) {
      reps = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--sizes 128,256,512] [--reps N]\n", argv[0]);
      return 2;
    }
  }

#ifdef _OPENMP
  std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled\n");
#endif
  std::printf("%8s %6s %12s %12s %9s %12s\n", "edges", "reps", "serial_ms",
              "parallel_ms", "speedup", "max_dlambda");

  std::mt19937 rng(7);
  for (int n : sizes) {
    ricci::Tree t = bench_tree(n, rng);
    const ricci::Matrix m = ricci::ricci_matrix(t);

    double serial_ms = 0.0, parallel_ms = 0.0, worst = 0.0;
    for (int r = 0; r < reps; ++r) {
      auto t0 = Clock::now();
      const ricci::EigenResult se = ricci::sym_eigen_serial(m);
      serial_ms += ms_since(t0);

      t0 = Clock::now();
      const ricci::EigenResult pe = ricci::sym_eigen_parallel(m);
      parallel_ms += ms_since(t0);

      for (size_t i = 0; i < se.values.size(); ++i)
        worst = std::max(worst, std::fabs(se.values[i] - pe.values[i]));
    }
    serial_ms /= reps;
    parallel_ms /= reps;
    std::printf("%8d %6d %12.2f %12.2f %9.2f %12.3e\n", m.rows(), reps,
                serial_ms, parallel_ms, serial_ms / parallel_ms, worst);
  }
  return 0;
}
