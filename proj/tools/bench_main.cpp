#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tamealg/action.hpp"
#include "tamealg/census.hpp"
#include "tamealg/rng.hpp"

// Timing comparison between the OpenMP kernels and their serial reference
// implementations. Both paths produce identical results (see
// tests/test_parallel.cpp); this target only reports throughput.

using namespace tamealg;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-42s %10.1f ms %10.1f ms %8.2fx\n", name.c_str(), serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

} // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d (set OMP_NUM_THREADS to change)\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP: both columns run the serial path\n");
#endif
  std::printf("%-42s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    CensusParams params{Signature::from_spec("b2,b2"), 2, 5, CensusMode::Sampled, 4000, 42};
    ScanRequest req;
    req.with_aut = true;
    double s = time_ms([&] { scan_structures(params, req, false); });
    double p = time_ms([&] { scan_structures(params, req, true); });
    row("census scan, sampled k=2 p=5 n=4000", s, p);
  }
  {
    CensusParams params{Signature::from_spec("b2,b2"), 2, 2, CensusMode::Exhaustive, 0, 0};
    ScanRequest req;
    req.with_minimality_oracle = true;
    req.with_aut = true;
    double s = time_ms([&] { scan_structures(params, req, false); });
    double p = time_ms([&] { scan_structures(params, req, true); });
    row("census scan, exhaustive k=2 p=2 (65536)", s, p);
  }
  {
    // minimal structure with scalar-only automorphisms on GF(3)^2, n=5:
    // 3^10 = 59049 tuples
    Signature sig = Signature::from_spec("b2,b2");
    AlgebraStructure A = AlgebraStructure::random(sig, 2, 3, 1);
    for (uint64_t seed = 1; !is_minimal(A) || automorphisms(A).size() != 1; ++seed)
      A = AlgebraStructure::random(sig, 2, 3, seed);
    AutGroup aut = automorphisms(A);
    GammaGenerators gens(5, 1, sig);
    OmegaIndex om = build_omega(A, 5, aut, true);
    double s = time_ms([&] { build_omega(A, 5, aut, false); });
    double p = time_ms([&] { build_omega(A, 5, aut, true); });
    row("omega build, k=2 p=3 n=5 (59049 tuples)", s, p);

    double si = 0, pi = 0;
    for (size_t id = 0; id < gens.count(); ++id) {
      GroupWord w{GenRef{static_cast<uint32_t>(id), false}};
      si += time_ms([&] { permutation_image(w, om, A, gens, false); });
      pi += time_ms([&] { permutation_image(w, om, A, gens, true); });
    }
    row("generator images, 7 gens at degree 59048", si, pi);
  }
  return 0;
}
