// Acceptance runs: every release-gating claim, each printed as one PASS or
// FAIL line with its measured numbers.

#include <chrono>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "feistel/chains.hpp"
#include "feistel/harness.hpp"
#include "feistel/tau.hpp"

using namespace feistel;

namespace {

int failures = 0;

void report(int idx, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", idx,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- criterion 1: the seven-query attack aborts almost always ----
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  TrialConfig cfg;
  cfg.bits = 16;
  cfg.seed = 1;
  cfg.scenario = ScenarioId::S1;
  auto rows = run_attack_batch(cfg, 200, false, 0);
  int aborts = 0;
  for (const auto& r : rows) aborts += r.abort ? 1 : 0;
  double rate = aborts / 200.0;
  double secs = seconds_since(t0);
  report(1, rate >= 0.97 && secs < 30.0,
         "attack abort rate " + fmt("%.3f", rate) + " (>= 0.97) in " +
             fmt("%.1f", secs) + "s (< 30s), n=16, 200 trials");
}

// ---- criterion 2: the stronger attack aborts, and accepts the real world --
void criterion_2() {
  TrialConfig cfg;
  cfg.bits = 16;
  cfg.seed = 2;
  cfg.scenario = ScenarioId::S1;
  auto rows = run_attack_batch(cfg, 200, true, 0);
  int aborts = 0;
  for (const auto& r : rows) aborts += r.abort ? 1 : 0;
  double rate = aborts / 200.0;

  TrialConfig real = cfg;
  real.scenario = ScenarioId::S4;
  auto rrows = run_attack_batch(real, 200, true, 0);
  int ones = 0;
  for (const auto& r : rrows) ones += r.output;

  report(2, rate >= 0.97 && ones == 200,
         "strong attack abort rate " + fmt("%.3f", rate) +
             " (>= 0.97); real world accepts " + std::to_string(ones) +
             "/200");
}

// ---- criteria 3, 4: one monitored random-script batch ----
void criteria_3_4() {
  TrialConfig cfg;
  cfg.bits = 16;
  cfg.seed = 3;
  cfg.scenario = ScenarioId::S2;
  cfg.monitor = true;
  const int kTrials = 1000;

  int good = 0, counts_fail = 0, overwrite_in_good = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (int i = 0; i < kTrials; ++i) {
    TrialConfig c = cfg;
    c.seed = derive_trial_seed(cfg.seed, 1, static_cast<std::uint64_t>(i));
    Script s = random_distinguisher(
        1 + (i % 8),
        derive_trial_seed(cfg.seed, 3, static_cast<std::uint64_t>(i)), 16);
    auto res = run_script_trial(c, s);
    auto rep = assert_invariants(res.transcript, InvariantLevel::Counts);
    bool cfail = !rep.counts_ok();
    bool ofail = res.summary.good && !rep.no_overwrite;
#ifdef _OPENMP
#pragma omp critical
#endif
    {
      good += res.summary.good ? 1 : 0;
      counts_fail += cfail ? 1 : 0;
      overwrite_in_good += ofail ? 1 : 0;
    }
  }
  double good_frac = static_cast<double>(good) / kTrials;
  report(3, counts_fail == 0,
         "efficiency bounds exact on 1000/1000 runs (violations: " +
             std::to_string(counts_fail) + "), n=16, q <= 8");
  report(4, overwrite_in_good == 0 && good_frac >= 0.99,
         "overwrites in monitored-good runs: " +
             std::to_string(overwrite_in_good) + "; good fraction " +
             fmt("%.4f", good_frac) + " (>= 0.99)");
}

// ---- criterion 5: chain-completing runs reproduce every queried mapping --
void criterion_5() {
  TrialConfig cfg;
  cfg.bits = 16;
  cfg.seed = 5;
  cfg.scenario = ScenarioId::S2;
  cfg.monitor = true;
  cfg.complete_chains = true;
  const int kTrials = 1000;

  int good = 0, consistency_fail = 0, adapt_fail = 0, counts_fail = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (int i = 0; i < kTrials; ++i) {
    TrialConfig c = cfg;
    c.seed = derive_trial_seed(cfg.seed, 1, static_cast<std::uint64_t>(i));
    Script s = random_distinguisher(
        1 + (i % 8),
        derive_trial_seed(cfg.seed, 3, static_cast<std::uint64_t>(i)), 16);
    auto res = run_script_trial(c, s);
    auto rep = assert_invariants(res.transcript, InvariantLevel::Full);
    bool kfail = res.summary.good && !rep.consistency;
    bool afail = res.summary.good && !rep.adapt_count;
    bool cfail = !rep.counts_ok();
#ifdef _OPENMP
#pragma omp critical
#endif
    {
      good += res.summary.good ? 1 : 0;
      consistency_fail += kfail ? 1 : 0;
      adapt_fail += afail ? 1 : 0;
      counts_fail += cfail ? 1 : 0;
    }
  }
  report(5, consistency_fail == 0 && adapt_fail == 0 && counts_fail == 0 &&
                good > 0,
         "mapping reproduction failures: " + std::to_string(consistency_fail) +
             ", adapt-count mismatches: " + std::to_string(adapt_fail) +
             " over " + std::to_string(good) +
             " monitored-good chain-completing runs");
}

// ---- criterion 6: randomness translation round-trips byte-identically ----
void criterion_6() {
  int used = 0, attempts = 0, mismatches = 0, size_fail = 0;
  for (std::uint64_t s = 0; used < 200 && attempts < 5000; ++s, ++attempts) {
    std::uint64_t seed = derive_trial_seed(6, 1, s);
    Script scr = random_distinguisher(1 + static_cast<int>(s % 4), seed, 16);
    TauResult res = tau_roundtrip(16, seed, scr);
    if (!res.good) continue;
    ++used;
    if (!res.transcripts_match) ++mismatches;
    if (!res.size_identity) ++size_fail;
  }
  report(6, used == 200 && mismatches == 0 && size_fail == 0,
         std::to_string(used) + " monitored-good seeds, " +
             std::to_string(mismatches) + " transcript mismatches, " +
             std::to_string(size_fail) + " size-identity failures");
}

// ---- criterion 7: permutation vs two-sided function within the bound ----
void criterion_7() {
  auto est = urp_vs_tsrf_advantage(8, 16, 100000, 7, 0);
  double bound = 6.0 * 16 * 16 / 65536.0;
  double limit = bound + 3 * est.stderr_;
  report(7, est.estimate <= limit,
         "birthday distinguisher advantage " + fmt("%.5f", est.estimate) +
             " <= " + fmt("%.5f", limit) + " (bound " + fmt("%.5f", bound) +
             " + 3*stderr), n=8, q'=16, 1e5 trials/side");
}

// ---- criterion 8: script corpus advantage plus exhaustive small suites ----
void criterion_8() {
  TrialConfig a, b;
  a.bits = b.bits = 12;
  a.seed = b.seed = 8;
  a.scenario = ScenarioId::S1;
  b.scenario = ScenarioId::S4;
  auto gen = [](std::uint64_t s, int) { return random_distinguisher(4, s, 12); };
  auto est = estimate_advantage(a, b, 10000, gen, 0);

  // exhaustive property suites at n = 2
  bool small_ok = true;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    PermRandom p(seed, 2);
    Urp urp(2, p, seed, nullptr);
    std::set<std::pair<Word, Word>> img;
    for (Word x = 0; x < 4; ++x)
      for (Word y = 0; y < 4; ++y) {
        WordPair o = urp.p(x, y, Source::Distinguisher);
        img.insert({o.a, o.b});
        small_ok = small_ok &&
                   urp.p_inv(o.a, o.b, Source::Distinguisher) == WordPair{x, y};
      }
    small_ok = small_ok && img.size() == 16;
  }
  int states = 0;
  for (std::uint64_t seed = 1; seed <= 60 && states < 10; ++seed) {
    Transcript tr(2);
    PermRandom p(seed, 2);
    RoundTable f(seed, 2);
    Tsrf tsrf(2, p, &tr);
    Simulator14 sim(2, tsrf, f, tr);
    ChainMonitor mon(sim, tr);
    sim.set_hooks(&mon);
    tsrf.set_hooks(&mon);
    struct Sys : QueryInterface {
      Simulator14& sim;
      Tsrf& tsrf;
      Sys(Simulator14& s, Tsrf& t) : sim(s), tsrf(t) {}
      Word f(int i, Word x) override { return sim.f_query(i, x); }
      WordPair p(Word x, Word y) override {
        return tsrf.p(x, y, Source::Distinguisher);
      }
      WordPair p_inv(Word x, Word y) override {
        return tsrf.p_inv(x, y, Source::Distinguisher);
      }
    } sys{sim, tsrf};
    run_script(random_distinguisher(4, seed, 2), sys);
    if (!mon.good()) continue;
    ++states;
    StateView v = sim.view();
    for (int k = 0; k <= 14; ++k)
      for (Word x = 0; x < 4; ++x)
        for (Word y = 0; y < 4; ++y) {
          Chain c{x, y, k};
          auto n = next_chain(v, c);
          if (n) small_ok = small_ok && prev_chain(v, *n) == c;
          auto pr = prev_chain(v, c);
          if (pr) small_ok = small_ok && next_chain(v, *pr) == c;
        }
    auto chains = enumerate_table_defined(v);
    for (std::size_t i = 0; i < chains.size(); ++i)
      for (std::size_t j = 0; j < chains.size(); ++j) {
        bool ij = equivalent(v, chains[i], chains[j]);
        small_ok = small_ok && ij == equivalent(v, chains[j], chains[i]);
        if (!ij) continue;
        for (std::size_t k = 0; k < chains.size(); ++k)
          if (equivalent(v, chains[j], chains[k]))
            small_ok = small_ok && equivalent(v, chains[i], chains[k]);
      }
  }
  small_ok = small_ok && states >= 10;

  report(8, est.estimate <= 0.05 && small_ok,
         "corpus advantage " + fmt("%.4f", est.estimate) +
             " <= 0.05 (n=12, q<=4, 1e4/side); exhaustive n=2 suites " +
             (small_ok ? "clean" : "FAILED"));
}

// ---- criterion 9: stored transcripts replay byte-identically ----
void criterion_9() {
  bool ok = true;
  {
    TrialConfig cfg;
    cfg.bits = 16;
    cfg.seed = 9;
    cfg.scenario = ScenarioId::S1;
    auto first = run_attack_trial(cfg, false);
    auto again = run_attack_trial(cfg, false);
    ok = ok && first.transcript.to_json_lines() ==
                   again.transcript.to_json_lines();
  }
  {
    TrialConfig cfg;
    cfg.bits = 16;
    cfg.seed = 10;
    cfg.scenario = ScenarioId::S2;
    cfg.complete_chains = true;
    Script s = random_distinguisher(5, 10, 16);
    auto first = run_script_trial(cfg, s);
    auto again = run_script_trial(cfg, s);
    ok = ok &&
         first.transcript.to_json_lines() == again.transcript.to_json_lines();
    ok = ok && first.transcript.byte_hash() == again.transcript.byte_hash();
  }
  report(9, ok, "stored transcripts replay byte-identically");
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criteria_3_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%d criterion failure(s), total %.1fs\n", failures,
              seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
