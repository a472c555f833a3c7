#include "feistel/tau.hpp"

namespace feistel {

namespace {

struct S2Run {
  Transcript tr;
  PartialRoundTable h;
  bool good = true;
  std::size_t f_reads = 0, p_reads = 0;

  explicit S2Run(int bits) : tr(bits), h(bits) {}
};

S2Run run_source(int bits, std::uint64_t seed, const Script& wrapped) {
  S2Run out(bits);
  PermRandom p(seed, bits);
  RoundTable f(seed, bits);
  Tsrf tsrf(bits, p, &out.tr);
  Simulator14 sim(bits, tsrf, f, out.tr);
  ChainMonitor mon(sim, out.tr);
  sim.set_hooks(&mon);
  tsrf.set_hooks(&mon);

  struct Sys : QueryInterface {
    Simulator14& sim;
    Tsrf& tsrf;
    Sys(Simulator14& s, Tsrf& t) : sim(s), tsrf(t) {}
    Word f(int i, Word x) override { return sim.f_query(i, x); }
    WordPair p(Word a, Word b) override {
      return tsrf.p(a, b, Source::Distinguisher);
    }
    WordPair p_inv(Word a, Word b) override {
      return tsrf.p_inv(a, b, Source::Distinguisher);
    }
  } sys{sim, tsrf};
  run_script(wrapped, sys);

  out.good = mon.good();
  out.f_reads = f.reads();
  out.p_reads = tsrf.p_reads();

  // read entries first, then first force-written values
  for (const auto& [k, v] : f.realized())
    out.h.define(RoundTable::key_round(k), RoundTable::key_input(k), v);
  for (const auto& e : out.tr.events()) {
    if (e.ev != Ev::ForceVal) continue;
    if (!out.h.defined(e.l, e.x)) out.h.define(e.l, e.x, e.y);
  }
  return out;
}

}  // namespace

PartialRoundTable tau_map(int bits, std::uint64_t seed, const Script& inner,
                          bool* good_out, std::size_t* f_reads,
                          std::size_t* p_reads) {
  Script wrapped = complete_all_chains(inner);
  S2Run run = run_source(bits, seed, wrapped);
  if (good_out) *good_out = run.good;
  if (f_reads) *f_reads = run.f_reads;
  if (p_reads) *p_reads = run.p_reads;
  return run.h;
}

TauResult tau_roundtrip(int bits, std::uint64_t seed, const Script& inner) {
  TauResult res;
  Script wrapped = complete_all_chains(inner);
  S2Run src = run_source(bits, seed, wrapped);
  res.h = src.h;
  res.good = src.good;
  res.f_reads = src.f_reads;
  res.p_reads = src.p_reads;
  res.size_identity = src.h.size() == src.f_reads + 2 * src.p_reads;

  Transcript tr3(bits);
  RoundTable h_table(bits, res.h.as_generator());
  FeistelPsi psi(bits, 14, h_table, &tr3);
  Simulator14 sim(bits, psi, h_table, tr3);
  struct Sys : QueryInterface {
    Simulator14& sim;
    FeistelPsi& psi;
    Sys(Simulator14& s, FeistelPsi& p) : sim(s), psi(p) {}
    Word f(int i, Word x) override { return sim.f_query(i, x); }
    WordPair p(Word a, Word b) override {
      return psi.p(a, b, Source::Distinguisher);
    }
    WordPair p_inv(Word a, Word b) override {
      return psi.p_inv(a, b, Source::Distinguisher);
    }
  } sys{sim, psi};
  try {
    run_script(wrapped, sys);
  } catch (const PartialHoleFault&) {
    res.s3_fault = true;
  }

  res.s2_hash = src.tr.byte_hash();
  res.s3_hash = tr3.byte_hash();
  res.transcripts_match =
      !res.s3_fault && src.tr.to_json_lines() == tr3.to_json_lines();
  return res;
}

}  // namespace feistel
