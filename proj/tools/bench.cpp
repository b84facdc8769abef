// Times the bootstrap engine serially and under OpenMP on one simulated
// dataset and checks that both paths produce identical replicate matrices.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "fusereg/bootstrap.hpp"
#include "fusereg/sim_engine.hpp"

using namespace fusereg;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int B = argc > 1 ? std::atoi(argv[1]) : 400;
  std::uint64_t seed = 20240817;

  auto spec = sim::DgpSpec::sim2();
  FusedDataset ds = sim::generate(spec, mix64(seed, 1));
  bootstrap::CtxSpec ctx{sim::working_model(spec, sim::Scenario::II),
                         sim::default_strategy(spec), spec.c};

  std::printf("dataset: %lld rows, %d bootstrap replicates, %d threads available\n",
              static_cast<long long>(ds.size()), B, max_threads());

  auto t0 = std::chrono::steady_clock::now();
  auto serial = bootstrap::run_bootstrap(ds, ctx, B, seed, Execution::Serial);
  double serial_s = seconds_since(t0);
  std::printf("serial:   %.3f s  (%d failures)\n", serial_s, serial.failures);

  t0 = std::chrono::steady_clock::now();
  auto parallel = bootstrap::run_bootstrap(ds, ctx, B, seed, Execution::Parallel);
  double parallel_s = seconds_since(t0);
  std::printf("parallel: %.3f s  (%d failures)  speedup %.2fx\n", parallel_s, parallel.failures,
              serial_s / parallel_s);

  bool identical = serial.ls == parallel.ls && serial.eff == parallel.eff &&
                   serial.failures == parallel.failures;
  std::printf("replicate matrices identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
