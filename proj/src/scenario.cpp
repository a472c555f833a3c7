#include "feistel/scenario.hpp"

#include <chrono>
#include <stdexcept>
#include <memory>

namespace feistel {

namespace {

struct Sim14Sys : QueryInterface {
  Simulator14& sim;
  PermBackend& backend;
  std::size_t calls = 0;

  Sim14Sys(Simulator14& s, PermBackend& b) : sim(s), backend(b) {}
  Word f(int i, Word x) override {
    ++calls;
    return sim.f_query(i, x);
  }
  WordPair p(Word a, Word b) override {
    ++calls;
    return backend.p(a, b, Source::Distinguisher);
  }
  WordPair p_inv(Word a, Word b) override {
    ++calls;
    return backend.p_inv(a, b, Source::Distinguisher);
  }
};

// Direct world: round functions answered from the table, permutation by the
// construction itself.
struct DirectSys : QueryInterface {
  RoundTable& h;
  FeistelPsi& psi;
  Transcript& tr;
  std::size_t calls = 0;

  DirectSys(RoundTable& h, FeistelPsi& p, Transcript& t)
      : h(h), psi(p), tr(t) {}
  Word f(int i, Word x) override {
    ++calls;
    Word y = h.at(i, x);
    Event e;
    e.ev = Ev::FQuery;
    e.i = i;
    e.x = x;
    e.y = y;
    tr.push(e);
    return y;
  }
  WordPair p(Word a, Word b) override {
    ++calls;
    return psi.p(a, b, Source::Distinguisher);
  }
  WordPair p_inv(Word a, Word b) override {
    ++calls;
    return psi.p_inv(a, b, Source::Distinguisher);
  }
};

struct Sim6Sys : QueryInterface {
  Simulator6& sim;
  Urp& urp;
  std::size_t calls = 0;

  Sim6Sys(Simulator6& s, Urp& u) : sim(s), urp(u) {}
  Word f(int i, Word x) override {
    ++calls;
    return sim.query(x, i);
  }
  WordPair p(Word a, Word b) override {
    ++calls;
    return urp.p(a, b, Source::Distinguisher);
  }
  WordPair p_inv(Word a, Word b) override {
    ++calls;
    return urp.p_inv(a, b, Source::Distinguisher);
  }
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

const char* scenario_name(ScenarioId s) {
  switch (s) {
    case ScenarioId::S1: return "s1";
    case ScenarioId::S2: return "s2";
    case ScenarioId::S3: return "s3";
    case ScenarioId::S4: return "s4";
  }
  return "?";
}

std::string TrialSummary::csv_header() {
  return "seed,scenario,output,d_queries,f_table_max,p_calls,check_calls,"
         "p_reads,f_reads,adapt_calls,overwrites,bad_events,monitored,good,"
         "abort,abort_where,fault,wall_ms";
}

std::string TrialSummary::csv_row() const {
  std::string s;
  s += std::to_string(seed) + "," + std::to_string(scenario) + "," +
       std::to_string(output) + "," + std::to_string(d_queries) + "," +
       std::to_string(f_table_max) + "," + std::to_string(p_calls) + "," +
       std::to_string(check_calls) + "," + std::to_string(p_reads) + "," +
       std::to_string(f_reads) + "," + std::to_string(adapt_calls) + "," +
       std::to_string(overwrites) + "," + std::to_string(bad_events) + "," +
       std::to_string(monitored ? 1 : 0) + "," + std::to_string(good ? 1 : 0) +
       "," + std::to_string(abort ? 1 : 0) + "," + std::to_string(abort_where) +
       "," + std::to_string(fault ? 1 : 0) + "," + std::to_string(wall_ms);
  return s;
}

TrialResult run_script_trial(const TrialConfig& cfg, const Script& script_in) {
  if (script_in.bits != cfg.bits)
    throw std::invalid_argument("script width does not match the trial width");
  auto t0 = std::chrono::steady_clock::now();
  TrialResult res;
  res.transcript = Transcript(cfg.bits);
  Transcript& tr = res.transcript;
  TrialSummary& sm = res.summary;
  sm.seed = cfg.seed;
  sm.scenario = static_cast<int>(cfg.scenario);

  Script script =
      cfg.complete_chains ? complete_all_chains(script_in) : script_in;

  auto policy = cfg.fault_fast ? Simulator14::OverwritePolicy::FaultFast
                               : Simulator14::OverwritePolicy::LogAndContinue;

  PermRandom p(cfg.seed, cfg.bits);
  RoundTable h(cfg.seed, cfg.bits);

  std::unique_ptr<PermBackend> backend;
  Tsrf* tsrf = nullptr;
  Urp* urp = nullptr;
  switch (cfg.scenario) {
    case ScenarioId::S1: {
      auto u = std::make_unique<Urp>(cfg.bits, p, cfg.seed, &tr);
      urp = u.get();
      backend = std::move(u);
      break;
    }
    case ScenarioId::S2: {
      auto t = std::make_unique<Tsrf>(cfg.bits, p, &tr);
      tsrf = t.get();
      backend = std::move(t);
      break;
    }
    case ScenarioId::S3:
    case ScenarioId::S4:
      backend = std::make_unique<FeistelPsi>(cfg.bits, 14, h, &tr);
      break;
  }

  try {
    if (cfg.scenario == ScenarioId::S4) {
      auto* psi = static_cast<FeistelPsi*>(backend.get());
      DirectSys sys(h, *psi, tr);
      ScriptResult r = run_script(script, sys);
      sm.output = r.output;
      sm.d_queries = sys.calls;
      sm.f_reads = h.reads();
    } else {
      Simulator14 sim(cfg.bits, *backend, h, tr, policy);
      ChainMonitor mon(sim, tr);
      bool monitoring = cfg.monitor && tsrf != nullptr;
      if (monitoring) {
        sm.monitored = true;
        sim.set_hooks(&mon);
        tsrf->set_hooks(&mon);
      }
      Sim14Sys sys(sim, *backend);
      ScriptResult r = run_script(script, sys);
      sm.output = r.output;
      sm.d_queries = sys.calls;
      sm.f_table_max = sim.max_table_size();
      sm.adapt_calls = sim.adapt_calls();
      sm.overwrites = sim.overwrite_events();
      sm.f_reads = h.reads();
      if (tsrf) {
        sm.p_calls = tsrf->query_count(false) + tsrf->query_count(true);
        sm.check_calls = tsrf->check_count();
        sm.p_reads = tsrf->p_reads();
      }
      if (urp) sm.p_calls = urp->calls();
      if (monitoring) {
        res.bad_events = mon.events();
        sm.bad_events = res.bad_events.size();
        sm.good = mon.good();
      }
    }
  } catch (const OverwriteFault&) {
    sm.fault = true;
  } catch (const PartialHoleFault&) {
    sm.fault = true;
  }

  sm.wall_ms = ms_since(t0);
  return res;
}

TrialResult run_attack_trial(const TrialConfig& cfg, bool strong) {
  auto t0 = std::chrono::steady_clock::now();
  TrialResult res;
  res.transcript = Transcript(cfg.bits);
  Transcript& tr = res.transcript;
  TrialSummary& sm = res.summary;
  sm.seed = cfg.seed;
  sm.scenario = static_cast<int>(cfg.scenario);

  PermRandom p(cfg.seed, cfg.bits);
  RoundTable h(cfg.seed, cfg.bits);

  if (cfg.scenario == ScenarioId::S4) {
    FeistelPsi psi(cfg.bits, 6, h, &tr);
    DirectSys sys(h, psi, tr);
    res.attack = strong ? strong_attack6(sys, cfg.bits, cfg.seed)
                        : attack6(sys, cfg.bits, cfg.seed);
    sm.d_queries = sys.calls;
  } else {
    Urp urp(cfg.bits, p, cfg.seed, &tr);
    Simulator6::Config scfg;
    scfg.hmax = cfg.hmax;
    scfg.budget = cfg.budget;
    scfg.completed_guard = !cfg.guard_disabled;
    scfg.random_order = cfg.random_order;
    scfg.order_seed = mix2(cfg.seed, 0x6u);
    Simulator6 sim(cfg.bits, urp, cfg.seed, tr, scfg);
    Sim6Sys sys(sim, urp);
    res.attack = strong ? strong_attack6(sys, cfg.bits, cfg.seed)
                        : attack6(sys, cfg.bits, cfg.seed);
    sm.d_queries = sys.calls;
    sm.p_calls = urp.calls();
    std::size_t mx = 0;
    for (int k = 1; k <= 6; ++k) mx = std::max(mx, sim.hist(k).size());
    sm.f_table_max = mx;
    if (cfg.monitor)
      res.flagged =
          attack6_bad_events(res.attack, urp.drawn(), &sim, cfg.bits);
  }
  sm.abort = res.attack.aborted;
  sm.abort_where = res.attack.aborted ? res.attack.abort.where : 0;
  sm.output = res.attack.output;
  sm.bad_events = res.flagged.size();
  sm.wall_ms = ms_since(t0);
  return res;
}

}  // namespace feistel
