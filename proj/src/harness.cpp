#include "feistel/harness.hpp"

#include <cmath>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace feistel {

namespace {

constexpr std::uint64_t kStreamWorldA = 1;
constexpr std::uint64_t kStreamWorldB = 2;
constexpr std::uint64_t kStreamScript = 3;

TrialSummary one_script_trial(const TrialConfig& base, int index,
                              std::uint64_t world_stream,
                              const ScriptGen& gen) {
  TrialConfig cfg = base;
  cfg.seed = derive_trial_seed(base.seed, world_stream,
                               static_cast<std::uint64_t>(index));
  Script s = gen(derive_trial_seed(base.seed, kStreamScript,
                                   static_cast<std::uint64_t>(index)),
                 index);
  return run_script_trial(cfg, s).summary;
}

}  // namespace

std::vector<TrialSummary> run_script_batch_serial(const TrialConfig& base,
                                                  int trials,
                                                  const ScriptGen& gen) {
  std::vector<TrialSummary> out(static_cast<size_t>(trials));
  for (int i = 0; i < trials; ++i)
    out[static_cast<size_t>(i)] = one_script_trial(base, i, kStreamWorldA, gen);
  return out;
}

std::vector<TrialSummary> run_script_batch(const TrialConfig& base, int trials,
                                           const ScriptGen& gen, int jobs) {
  if (jobs == 1) return run_script_batch_serial(base, trials, gen);
  std::vector<TrialSummary> out(static_cast<size_t>(trials));
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < trials; ++i)
    out[static_cast<size_t>(i)] = one_script_trial(base, i, kStreamWorldA, gen);
#else
  for (int i = 0; i < trials; ++i)
    out[static_cast<size_t>(i)] = one_script_trial(base, i, kStreamWorldA, gen);
#endif
  return out;
}

std::vector<TrialSummary> run_attack_batch_serial(const TrialConfig& base,
                                                  int trials, bool strong) {
  std::vector<TrialSummary> out(static_cast<size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    TrialConfig cfg = base;
    cfg.seed = derive_trial_seed(base.seed, kStreamWorldA,
                                 static_cast<std::uint64_t>(i));
    out[static_cast<size_t>(i)] = run_attack_trial(cfg, strong).summary;
  }
  return out;
}

std::vector<TrialSummary> run_attack_batch(const TrialConfig& base, int trials,
                                           bool strong, int jobs) {
  if (jobs == 1) return run_attack_batch_serial(base, trials, strong);
  std::vector<TrialSummary> out(static_cast<size_t>(trials));
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < trials; ++i) {
    TrialConfig cfg = base;
    cfg.seed = derive_trial_seed(base.seed, kStreamWorldA,
                                 static_cast<std::uint64_t>(i));
    out[static_cast<size_t>(i)] = run_attack_trial(cfg, strong).summary;
  }
#else
  for (int i = 0; i < trials; ++i) {
    TrialConfig cfg = base;
    cfg.seed = derive_trial_seed(base.seed, kStreamWorldA,
                                 static_cast<std::uint64_t>(i));
    out[static_cast<size_t>(i)] = run_attack_trial(cfg, strong).summary;
  }
#endif
  return out;
}

AdvantageEstimate estimate_advantage(const TrialConfig& side_a,
                                     const TrialConfig& side_b, int trials,
                                     const ScriptGen& gen, int jobs,
                                     std::vector<TrialSummary>* rows_out) {
  std::vector<TrialSummary> rows_a(static_cast<size_t>(trials)),
      rows_b(static_cast<size_t>(trials));
  auto run_side = [&](const TrialConfig& base, std::uint64_t stream,
                      std::vector<TrialSummary>& rows) {
    auto body = [&](int i) {
      TrialConfig cfg = base;
      cfg.seed = derive_trial_seed(base.seed, stream,
                                   static_cast<std::uint64_t>(i));
      Script s = gen(derive_trial_seed(base.seed, kStreamScript,
                                       static_cast<std::uint64_t>(i)),
                     i);
      rows[static_cast<size_t>(i)] = run_script_trial(cfg, s).summary;
    };
#ifdef _OPENMP
    if (jobs != 1) {
      if (jobs > 0) omp_set_num_threads(jobs);
#pragma omp parallel for schedule(dynamic, 16)
      for (int i = 0; i < trials; ++i) body(i);
      return;
    }
#endif
    for (int i = 0; i < trials; ++i) body(i);
  };
  run_side(side_a, kStreamWorldA, rows_a);
  run_side(side_b, kStreamWorldB, rows_b);

  AdvantageEstimate est;
  est.trials = trials;
  double sa = 0, sb = 0;
  for (const auto& r : rows_a) sa += r.output;
  for (const auto& r : rows_b) sb += r.output;
  est.p1_a = sa / trials;
  est.p1_b = sb / trials;
  est.estimate = std::fabs(est.p1_a - est.p1_b);
  est.stderr_ = std::sqrt(est.p1_a * (1 - est.p1_a) / trials +
                          est.p1_b * (1 - est.p1_b) / trials);
  if (rows_out) {
    *rows_out = std::move(rows_a);
    rows_out->insert(rows_out->end(), rows_b.begin(), rows_b.end());
  }
  return est;
}

int birthday_probe(PermBackend& pb, int bits, int qprime, std::uint64_t seed) {
  Word mask = word_mask(bits);
  CounterStream rng(seed, Tag::Script);
  int half = qprime / 2;
  std::vector<WordPair> ins, outs;
  ins.reserve(static_cast<size_t>(half));
  while (static_cast<int>(ins.size()) < half) {
    WordPair cand{rng.next() & mask, rng.next() & mask};
    bool dup = false;
    for (const auto& v : ins) dup = dup || v == cand;
    if (!dup) ins.push_back(cand);
  }
  bool artifact = false;
  for (const auto& in : ins) {
    WordPair o = pb.p(in.a, in.b, Source::Distinguisher);
    for (const auto& prev : outs) artifact = artifact || prev == o;
    outs.push_back(o);
  }
  for (std::size_t i = 0; i < outs.size(); ++i) {
    WordPair back = pb.p_inv(outs[i].a, outs[i].b, Source::Distinguisher);
    if (!(back == ins[i])) artifact = true;
  }
  return artifact ? 1 : 0;
}

AdvantageEstimate urp_vs_tsrf_advantage(int bits, int qprime, int trials,
                                        std::uint64_t base_seed, int jobs,
                                        std::vector<TrialSummary>* rows_out) {
  std::vector<int> outs_a(static_cast<size_t>(trials)),
      outs_b(static_cast<size_t>(trials));
  std::vector<TrialSummary> rows_a(static_cast<size_t>(trials)),
      rows_b(static_cast<size_t>(trials));
  auto body = [&](int i) {
    std::uint64_t probe_seed = derive_trial_seed(base_seed, kStreamScript,
                                                 static_cast<std::uint64_t>(i));
    {
      std::uint64_t ws = derive_trial_seed(base_seed, kStreamWorldA,
                                           static_cast<std::uint64_t>(i));
      PermRandom p(ws, bits);
      Urp urp(bits, p, ws, nullptr);
      int out = birthday_probe(urp, bits, qprime, probe_seed);
      outs_a[static_cast<size_t>(i)] = out;
      TrialSummary& sm = rows_a[static_cast<size_t>(i)];
      sm.seed = ws;
      sm.scenario = 1;
      sm.output = out;
      sm.d_queries = static_cast<std::size_t>(qprime);
      sm.p_calls = urp.calls();
    }
    {
      std::uint64_t ws = derive_trial_seed(base_seed, kStreamWorldB,
                                           static_cast<std::uint64_t>(i));
      PermRandom p(ws, bits);
      Tsrf tsrf(bits, p, nullptr);
      int out = birthday_probe(tsrf, bits, qprime, probe_seed);
      outs_b[static_cast<size_t>(i)] = out;
      TrialSummary& sm = rows_b[static_cast<size_t>(i)];
      sm.seed = ws;
      sm.scenario = 2;
      sm.output = out;
      sm.d_queries = static_cast<std::size_t>(qprime);
      sm.p_calls = tsrf.query_count(false) + tsrf.query_count(true);
      sm.p_reads = tsrf.p_reads();
      sm.overwrites = tsrf.overwrites();
    }
  };
#ifdef _OPENMP
  if (jobs != 1) {
    if (jobs > 0) omp_set_num_threads(jobs);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < trials; ++i) body(i);
  } else {
    for (int i = 0; i < trials; ++i) body(i);
  }
#else
  for (int i = 0; i < trials; ++i) body(i);
#endif
  AdvantageEstimate est;
  est.trials = trials;
  double sa = 0, sb = 0;
  for (int v : outs_a) sa += v;
  for (int v : outs_b) sb += v;
  est.p1_a = sa / trials;
  est.p1_b = sb / trials;
  est.estimate = std::fabs(est.p1_a - est.p1_b);
  est.stderr_ = std::sqrt(est.p1_a * (1 - est.p1_a) / trials +
                          est.p1_b * (1 - est.p1_b) / trials);
  if (rows_out) {
    *rows_out = std::move(rows_a);
    rows_out->insert(rows_out->end(), rows_b.begin(), rows_b.end());
  }
  return est;
}

InvariantReport assert_invariants(const Transcript& tr, InvariantLevel level) {
  InvariantReport rep;
  // reconstruct tables and counters from the event stream
  std::unordered_map<Word, Word> g[15];
  OrderedTable<std::uint64_t, WordPair> down, up;
  std::size_t q_eff = 0, p_calls = 0, checks = 0, p_reads = 0;
  std::size_t forcevals = 0, fresh_outer_dequeues = 0;
  long pending = 0;
  std::vector<WordPair> d_down_queries;  // distinguisher-side mappings

  for (const auto& e : tr.events()) {
    switch (e.ev) {
      case Ev::FQuery:
        ++q_eff;
        if (pending != 0) {
          rep.queue_drain = false;
          rep.witness = "queue not drained at a public query";
        }
        break;
      case Ev::Sample:
        g[e.i][e.x] = e.y;
        break;
      case Ev::Enqueue:
        ++pending;
        break;
      case Ev::Dequeue:
        --pending;
        if (e.i == 1 && !e.flag) ++fresh_outer_dequeues;
        break;
      case Ev::ForceVal:
        ++forcevals;
        g[e.l][e.x] = e.y;
        break;
      case Ev::Overwrite:
        ++rep.overwrites;
        break;
      case Ev::PQuery: {
        ++p_calls;
        if (e.src) ++q_eff;
        WordPair in{e.x, e.y}, out{e.z, e.w};
        WordPair dn = (e.i == 0) ? in : out;
        WordPair upv = (e.i == 0) ? out : in;
        bool fresh = (e.i == 0) ? !down.contains(pack_pair(in.a, in.b))
                                : !up.contains(pack_pair(in.a, in.b));
        if (fresh) {
          ++p_reads;
          down.set(pack_pair(dn.a, dn.b), upv);
          up.set(pack_pair(upv.a, upv.b), dn);
        }
        if (e.src) d_down_queries.push_back(dn);
        break;
      }
      case Ev::Check:
        ++checks;
        if (e.src) ++q_eff;
        break;
      default:
        break;
    }
  }

  std::size_t q2 = q_eff * q_eff;
  for (int i = 1; i <= 14; ++i) {
    if (g[i].size() > 6 * q2) {
      rep.efficiency_tables = false;
      rep.witness = "table " + std::to_string(i) + " exceeds 6q^2";
    }
  }
  if (p_calls > 6 * q2) rep.efficiency_pqueries = false;
  if (checks > 1296 * q2 * q2 * q2 * q2) rep.efficiency_checks = false;
  if (fresh_outer_dequeues > q_eff) rep.outer_chains = false;
  if (forcevals % 2 != 0 || forcevals / 2 != p_reads) rep.adapt_count = false;
  rep.no_overwrite = rep.overwrites == 0;

  if (level == InvariantLevel::Full) {
    for (const auto& m : d_down_queries) {
      const WordPair* img = down.find(pack_pair(m.a, m.b));
      if (!img) continue;
      Word a = m.a, b = m.b;
      bool ok = true;
      for (int i = 1; i <= 14; ++i) {
        auto it = g[i].find(b);
        if (it == g[i].end()) {
          ok = false;
          break;
        }
        Word nxt = a ^ it->second;
        a = b;
        b = nxt;
      }
      if (!ok || !(WordPair{a, b} == *img)) {
        rep.consistency = false;
        rep.witness = "mapping not reproduced from " + word_hex(m.a, tr.bits()) +
                      ":" + word_hex(m.b, tr.bits());
      }
    }
  }
  return rep;
}

}  // namespace feistel
