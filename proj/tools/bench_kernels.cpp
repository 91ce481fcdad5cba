// Benchmark of the parallel sweep kernels against their serial reference
// implementations. The two paths must agree bitwise; the table reports
// timings and the verification outcome.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ptsym/pais_uhlenbeck.hpp"
#include "ptsym/pt_analysis.hpp"

using namespace ptsym;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool identical(const std::vector<SweepPoint>& a, const std::vector<SweepPoint>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i].logdet, &b[i].logdet, sizeof(double)) != 0) return false;
    if (std::memcmp(&a[i].e0_estimate, &b[i].e0_estimate, sizeof(double)) != 0) return false;
    if (a[i].positive != b[i].positive) return false;
  }
  return true;
}

void bench_sweep(int points, int n_sites, bool with_energy) {
  std::vector<double> omegas;
  for (int k = 0; k < points; ++k) omegas.push_back(0.5 + 1.0 * k / points);
  const PUParams base{1.0, 1.0, 0.5, 0.0};
  const LatticeSpec lattice{n_sites, 0.1};

  const double t0 = now_seconds();
  const auto serial = sweep_omega2(base, lattice, omegas, with_energy, Execution::Serial);
  const double t1 = now_seconds();
  const auto parallel = sweep_omega2(base, lattice, omegas, with_energy, Execution::Parallel);
  const double t2 = now_seconds();

  const double ts = t1 - t0, tp = t2 - t1;
  std::printf("%-34s %6d pts  serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n",
              with_energy ? "omega2 sweep (logdet + E0)" : "omega2 sweep (logdet)", points,
              ts, tp, tp > 0 ? ts / tp : 0.0,
              identical(serial, parallel) ? "bitwise-identical" : "MISMATCH");
}

void bench_symmetry_corpus(int instances) {
  std::mt19937_64 rng(77);
  std::vector<ComplexMatrix> hs;
  for (int k = 0; k < instances; ++k) {
    ComplexMatrix b(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) b(i, j) = Complex(u(rng), u(rng));
    hs.push_back(b + b.conjugate());
  }

  std::vector<int> found_serial(instances), found_parallel(instances);
  const double t0 = now_seconds();
  for (int k = 0; k < instances; ++k)
    found_serial[k] = find_antilinear_symmetry(hs[k], 1e-9).found() ? 1 : 0;
  const double t1 = now_seconds();
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < instances; ++k)
    found_parallel[k] = find_antilinear_symmetry(hs[k], 1e-9).found() ? 1 : 0;
  const double t2 = now_seconds();

  const bool same = found_serial == found_parallel;
  const double ts = t1 - t0, tp = t2 - t1;
  std::printf("%-34s %6d pts  serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n",
              "antilinear symmetry search corpus", instances, ts, tp, tp > 0 ? ts / tp : 0.0,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const bool smoke = argc > 1 && std::string(argv[1]) == "--smoke";
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both paths run serially\n");
#endif
  if (smoke) {
    bench_sweep(50, 60, true);
    bench_symmetry_corpus(20);
  } else {
    bench_sweep(1000, 200, false);
    bench_sweep(1000, 200, true);
    bench_sweep(200, 2000, true);
    bench_symmetry_corpus(400);
  }
  return 0;
}
