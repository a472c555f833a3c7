// Command-line workbench: attack reproduction, Monte-Carlo comparisons,
// invariant batches, randomness-translation checks and transcript replay.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "feistel/harness.hpp"
#include "feistel/tau.hpp"

using namespace feistel;

namespace {

constexpr const char* kSchema = "\"schema\":\"1\"";

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FEISTEL_INDIFF_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return 1;
}

void write_csv(const std::string& path, const std::vector<TrialSummary>& rows) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << TrialSummary::csv_header() << "\n";
  for (const auto& r : rows) out << r.csv_row() << "\n";
}

std::string bool_json(bool b) { return b ? "true" : "false"; }

struct CommonOpts {
  int n = 16;
  std::uint64_t seed = default_seed();
  int trials = 200;
  int jobs = 0;
  std::string csv;

  void attach(CLI::App* cmd, int def_trials) {
    trials = def_trials;
    cmd->add_option("--n", n, "word width in bits")->check(CLI::Range(2, 32));
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--trials", trials, "number of trials");
    cmd->add_option("--jobs", jobs, "worker threads (0 = all)");
    cmd->add_option("--csv", csv, "write per-trial rows to this file");
  }
};

// ---- stored trial files: one header line, then the transcript ----

std::string trial_header(const std::string& kind, const TrialConfig& cfg,
                         const Script* script) {
  std::string h = "{";
  h += kSchema;
  h += ",\"kind\":\"" + kind + "\"";
  h += ",\"n\":" + std::to_string(cfg.bits);
  h += ",\"seed\":" + std::to_string(cfg.seed);
  h += ",\"scenario\":" + std::to_string(static_cast<int>(cfg.scenario));
  h += ",\"complete_chains\":" + bool_json(cfg.complete_chains);
  h += ",\"guard_disabled\":" + bool_json(cfg.guard_disabled);
  h += ",\"random_order\":" + bool_json(cfg.random_order);
  if (script) h += ",\"script\":" + script->to_json();
  h += "}";
  return h;
}

void dump_trial(const std::string& path, const std::string& kind,
                const TrialConfig& cfg, const Script* script,
                const Transcript& tr) {
  std::ofstream out(path);
  out << trial_header(kind, cfg, script) << "\n";
  out << tr.to_json_lines();
}

int run_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  std::string header, line;
  std::getline(in, header);
  std::ostringstream body;
  while (std::getline(in, line)) body << line << "\n";
  std::string rest = body.str();

  auto j = nlohmann::json::parse(header, nullptr, false);
  if (j.is_discarded()) {
    std::cerr << "bad trial header\n";
    return 2;
  }
  TrialConfig cfg;
  cfg.bits = j.value("n", 16);
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.scenario = static_cast<ScenarioId>(j.value("scenario", 2));
  cfg.complete_chains = j.value("complete_chains", false);
  cfg.guard_disabled = j.value("guard_disabled", false);
  cfg.random_order = j.value("random_order", false);
  std::string kind = j.value("kind", std::string("script"));

  TrialResult res;
  if (kind == "attack6" || kind == "attack6-strong") {
    res = run_attack_trial(cfg, kind == "attack6-strong");
  } else {
    auto script = Script::from_json(j["script"].dump());
    if (!script) {
      std::cerr << "bad script\n";
      return 2;
    }
    res = run_script_trial(cfg, *script);
  }
  bool match = res.transcript.to_json_lines() == rest;
  std::printf("{%s,\"match\":%s,\"events\":%zu}\n", kSchema,
              match ? "true" : "false", res.transcript.size());
  return match ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chain-completion simulation workbench for ideal-permutation "
               "experiments"};
  app.require_subcommand(1);

  // ---- attack6 / attack6-strong ----
  CommonOpts atk;
  double min_rate = 0.97;
  bool guard_disabled = false, random_order = false, diagnose = false;
  std::size_t hmax = 7000, budget = 1ull << 20;
  std::string dump_path;

  auto add_attack_cmd = [&](const char* name, const char* desc) {
    CLI::App* c = app.add_subcommand(name, desc);
    atk.attach(c, 200);
    c->add_option("--min-rate", min_rate, "required abort rate");
    c->add_flag("--guard-disabled", guard_disabled,
                "drop the completed-tuple guard");
    c->add_flag("--random-order", random_order,
                "randomize chain and recursion processing order");
    c->add_option("--hmax", hmax, "history cap");
    c->add_option("--budget", budget, "permutation query budget");
    c->add_flag("--diagnose", diagnose, "attach bad-event attribution");
    c->add_option("--dump", dump_path, "store the first trial's transcript");
    return c;
  };
  CLI::App* c_attack = add_attack_cmd("attack6", "run the seven-query attack");
  CLI::App* c_strong =
      add_attack_cmd("attack6-strong", "run the three-phase attack");

  // ---- indiff-mc ----
  CommonOpts mc;
  int mc_q = 4;
  double max_adv = 0.05;
  std::string mc_dump;
  CLI::App* c_mc = app.add_subcommand(
      "indiff-mc", "estimate the advantage of a random-script corpus");
  mc.attach(c_mc, 10000);
  c_mc->add_option("--q", mc_q, "queries per script")->check(CLI::Range(1, 64));
  c_mc->add_option("--max-adv", max_adv, "acceptance threshold");
  c_mc->add_option("--dump", mc_dump, "store the first trial's transcript");

  // ---- invariants ----
  CommonOpts inv;
  int inv_q = 8;
  double min_good = 0.99;
  bool inv_wrap = false;
  CLI::App* c_inv = app.add_subcommand(
      "invariants", "batch-check the runtime guarantees of the simulator");
  inv.attach(c_inv, 1000);
  c_inv->add_option("--q", inv_q, "query budget per script")
      ->check(CLI::Range(1, 64));
  c_inv->add_option("--min-good", min_good, "required fraction of good runs");
  c_inv->add_flag("--complete-chains", inv_wrap,
                  "wrap scripts to complete all chains; also check mapping "
                  "reproduction and adapt counts");

  // ---- tau-check ----
  CommonOpts tau;
  int tau_q = 4;
  CLI::App* c_tau = app.add_subcommand(
      "tau-check", "translate randomness and replay; require byte equality");
  tau.attach(c_tau, 200);
  c_tau->add_option("--q", tau_q, "queries per script")
      ->check(CLI::Range(1, 16));

  // ---- urp-vs-tsrf ----
  CommonOpts uvt;
  int qprime = 16;
  CLI::App* c_uvt = app.add_subcommand(
      "urp-vs-tsrf", "birthday probe against both permutation stand-ins");
  uvt.attach(c_uvt, 100000);
  c_uvt->add_option("--qprime", qprime, "probe queries per trial")
      ->check(CLI::Range(2, 4096));

  // ---- replay ----
  std::string replay_path;
  CLI::App* c_replay =
      app.add_subcommand("replay", "re-run a stored transcript and compare");
  c_replay->add_option("transcript", replay_path, "stored trial file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (c_attack->parsed() || c_strong->parsed()) {
    bool strong = c_strong->parsed();
    TrialConfig cfg;
    cfg.bits = atk.n;
    cfg.seed = atk.seed;
    cfg.scenario = ScenarioId::S1;
    cfg.guard_disabled = guard_disabled;
    cfg.random_order = random_order;
    cfg.hmax = hmax;
    cfg.budget = budget;
    cfg.monitor = diagnose;

    auto rows = run_attack_batch(cfg, atk.trials, strong, atk.jobs);
    write_csv(atk.csv, rows);
    int aborts = 0, flagged_nonabort = 0;
    for (const auto& r : rows) {
      aborts += r.abort ? 1 : 0;
      if (!r.abort && r.bad_events > 0) ++flagged_nonabort;
    }
    double rate = static_cast<double>(aborts) / atk.trials;

    int real_ones = -1;
    if (strong) {
      TrialConfig real = cfg;
      real.scenario = ScenarioId::S4;
      auto rrows = run_attack_batch(real, atk.trials, true, atk.jobs);
      real_ones = 0;
      for (const auto& r : rrows) real_ones += r.output;
    }
    if (!dump_path.empty()) {
      TrialConfig first = cfg;
      first.seed = derive_trial_seed(cfg.seed, 1, 0);
      auto res = run_attack_trial(first, strong);
      dump_trial(dump_path, strong ? "attack6-strong" : "attack6", first,
                 nullptr, res.transcript);
    }
    std::printf("{%s,\"abort_rate\":%.6f,\"aborts\":%d,\"trials\":%d,"
                "\"n\":%d,\"seed\":%llu,\"flagged_nonabort\":%d",
                kSchema, rate, aborts, atk.trials, atk.n,
                static_cast<unsigned long long>(atk.seed), flagged_nonabort);
    bool pass = rate >= min_rate;
    if (strong) {
      std::printf(",\"real_world_ones\":%d", real_ones);
      pass = pass && real_ones == atk.trials;
    }
    std::printf(",\"pass\":%s}\n", pass ? "true" : "false");
    return pass ? 0 : 1;
  }

  if (c_mc->parsed()) {
    if (mc.trials < 100) {
      std::cerr << "need at least 100 trials per side\n";
      return 2;
    }
    TrialConfig a, b;
    a.bits = b.bits = mc.n;
    a.seed = b.seed = mc.seed;
    a.scenario = ScenarioId::S1;
    b.scenario = ScenarioId::S4;
    int q = mc_q;
    int bits = mc.n;
    auto gen = [q, bits](std::uint64_t s, int) {
      return random_distinguisher(q, s, bits);
    };
    std::vector<TrialSummary> rows;
    auto est = estimate_advantage(a, b, mc.trials, gen, mc.jobs,
                                  mc.csv.empty() ? nullptr : &rows);
    write_csv(mc.csv, rows);
    if (!mc_dump.empty()) {
      TrialConfig first = a;
      first.seed = derive_trial_seed(a.seed, 1, 0);
      Script s = gen(derive_trial_seed(a.seed, 3, 0), 0);
      auto res = run_script_trial(first, s);
      dump_trial(mc_dump, "script", first, &s, res.transcript);
    }
    bool pass = est.estimate <= max_adv;
    std::printf("{%s,\"p1_sim\":%.6f,\"p1_real\":%.6f,\"advantage\":%.6f,"
                "\"stderr\":%.6f,\"trials\":%d,\"q\":%d,\"n\":%d,"
                "\"pass\":%s}\n",
                kSchema, est.p1_a, est.p1_b, est.estimate, est.stderr_,
                mc.trials, mc_q, mc.n, pass ? "true" : "false");
    return pass ? 0 : 1;
  }

  if (c_inv->parsed()) {
    if (inv.n > 16) {
      std::cerr << "monitored batches need n <= 16\n";
      return 2;
    }
    TrialConfig cfg;
    cfg.bits = inv.n;
    cfg.seed = inv.seed;
    cfg.scenario = ScenarioId::S2;
    cfg.monitor = true;
    cfg.complete_chains = inv_wrap;
    int qmax = inv_q;
    int bits = inv.n;
    auto gen = [qmax, bits](std::uint64_t s, int idx) {
      return random_distinguisher(1 + (idx % qmax), s, bits);
    };

    int good = 0, counts_fail = 0, overwrite_in_good = 0;
    int consistency_fail = 0, adapt_fail = 0;
    std::vector<TrialSummary> rows(static_cast<size_t>(inv.trials));
    auto body = [&](int i) {
      TrialConfig c = cfg;
      c.seed = derive_trial_seed(cfg.seed, 1, static_cast<std::uint64_t>(i));
      Script s =
          gen(derive_trial_seed(cfg.seed, 3, static_cast<std::uint64_t>(i)), i);
      auto res = run_script_trial(c, s);
      auto rep = assert_invariants(res.transcript, inv_wrap
                                                       ? InvariantLevel::Full
                                                       : InvariantLevel::Counts);
      auto& sm = res.summary;
      rows[static_cast<size_t>(i)] = sm;
      bool cfail = !rep.counts_ok();
      bool ofail = sm.good && !rep.no_overwrite;
      bool kfail = inv_wrap && sm.good && !rep.consistency;
      bool afail = inv_wrap && sm.good && !rep.adapt_count;
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        good += sm.good ? 1 : 0;
        counts_fail += cfail ? 1 : 0;
        overwrite_in_good += ofail ? 1 : 0;
        consistency_fail += kfail ? 1 : 0;
        adapt_fail += afail ? 1 : 0;
      }
    };
#ifdef _OPENMP
    if (inv.jobs != 1) {
      if (inv.jobs > 0) omp_set_num_threads(inv.jobs);
#pragma omp parallel for schedule(dynamic, 4)
      for (int i = 0; i < inv.trials; ++i) body(i);
    } else {
      for (int i = 0; i < inv.trials; ++i) body(i);
    }
#else
    for (int i = 0; i < inv.trials; ++i) body(i);
#endif
    write_csv(inv.csv, rows);
    double good_frac = static_cast<double>(good) / inv.trials;
    bool pass = counts_fail == 0 && overwrite_in_good == 0 &&
                consistency_fail == 0 && adapt_fail == 0 &&
                good_frac >= min_good;
    std::printf(
        "{%s,\"trials\":%d,\"q\":%d,\"n\":%d,\"good\":%d,\"good_frac\":%.4f,"
        "\"efficiency_failures\":%d,\"overwrites_in_good\":%d,"
        "\"consistency_failures\":%d,\"adapt_count_failures\":%d,"
        "\"pass\":%s}\n",
        kSchema, inv.trials, inv_q, inv.n, good, good_frac, counts_fail,
        overwrite_in_good, consistency_fail, adapt_fail,
        pass ? "true" : "false");
    return pass ? 0 : 1;
  }

  if (c_tau->parsed()) {
    int used = 0, attempts = 0, mismatches = 0, size_fail = 0;
    std::vector<TrialSummary> rows;
    for (std::uint64_t s = 0; used < tau.trials && attempts < tau.trials * 50;
         ++s, ++attempts) {
      std::uint64_t seed = derive_trial_seed(tau.seed, 1, s);
      Script scr = random_distinguisher(
          1 + static_cast<int>(s % static_cast<unsigned>(tau_q)), seed, tau.n);
      TauResult res = tau_roundtrip(tau.n, seed, scr);
      TrialSummary sm;
      sm.seed = seed;
      sm.scenario = 2;
      sm.monitored = true;
      sm.good = res.good;
      sm.output = res.transcripts_match ? 1 : 0;
      sm.f_reads = res.f_reads;
      sm.p_reads = res.p_reads;
      sm.fault = res.s3_fault;
      rows.push_back(sm);
      if (!res.good) continue;
      ++used;
      if (!res.transcripts_match) ++mismatches;
      if (!res.size_identity) ++size_fail;
    }
    write_csv(tau.csv, rows);
    bool pass = used == tau.trials && mismatches == 0 && size_fail == 0;
    std::printf("{%s,\"good_runs\":%d,\"attempts\":%d,\"mismatches\":%d,"
                "\"size_identity_failures\":%d,\"n\":%d,\"pass\":%s}\n",
                kSchema, used, attempts, mismatches, size_fail, tau.n,
                pass ? "true" : "false");
    return pass ? 0 : 1;
  }

  if (c_uvt->parsed()) {
    std::vector<TrialSummary> rows;
    auto est = urp_vs_tsrf_advantage(uvt.n, qprime, uvt.trials, uvt.seed,
                                     uvt.jobs,
                                     uvt.csv.empty() ? nullptr : &rows);
    write_csv(uvt.csv, rows);
    double bound = 6.0 * qprime * qprime / std::pow(2.0, 2.0 * uvt.n);
    bool pass = est.estimate <= bound + 3 * est.stderr_;
    std::printf("{%s,\"p1_urp\":%.6f,\"p1_tsrf\":%.6f,\"advantage\":%.6f,"
                "\"stderr\":%.6f,\"bound\":%.6f,\"trials\":%d,\"qprime\":%d,"
                "\"n\":%d,\"pass\":%s}\n",
                kSchema, est.p1_a, est.p1_b, est.estimate, est.stderr_, bound,
                uvt.trials, qprime, uvt.n, pass ? "true" : "false");
    return pass ? 0 : 1;
  }

  if (c_replay->parsed()) return run_replay(replay_path);

  return 2;
}
