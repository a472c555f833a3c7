// Compares the serial reference batch runner against the OpenMP one on a
// fixed monitored workload and checks that both produce the same rows.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "feistel/harness.hpp"

using namespace feistel;

namespace {

double run_ms(const std::function<std::vector<TrialSummary>()>& f,
              std::vector<TrialSummary>& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = f();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  int trials = argc > 1 ? std::atoi(argv[1]) : 400;
  TrialConfig cfg;
  cfg.bits = 16;
  cfg.seed = 7;
  cfg.scenario = ScenarioId::S2;
  cfg.monitor = true;
  cfg.complete_chains = true;
  auto gen = [](std::uint64_t s, int idx) {
    return random_distinguisher(1 + (idx % 8), s, 16);
  };

  std::vector<TrialSummary> serial, parallel;
  double t_serial =
      run_ms([&] { return run_script_batch_serial(cfg, trials, gen); }, serial);
  double t_parallel =
      run_ms([&] { return run_script_batch(cfg, trials, gen, 0); }, parallel);

  bool equal = serial.size() == parallel.size();
  for (std::size_t i = 0; equal && i < serial.size(); ++i)
    equal = serial[i].csv_row().substr(0, serial[i].csv_row().rfind(',')) ==
            parallel[i].csv_row().substr(0, parallel[i].csv_row().rfind(','));

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("trials            : %d\n", trials);
  std::printf("serial reference  : %8.1f ms\n", t_serial);
  std::printf("openmp (%2d thr)   : %8.1f ms\n", threads, t_parallel);
  std::printf("speedup           : %8.2fx\n",
              t_parallel > 0 ? t_serial / t_parallel : 0.0);
  std::printf("rows identical    : %s\n", equal ? "yes" : "NO");
  return equal ? 0 : 1;
}
