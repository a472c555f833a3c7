#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "feistel/scenario.hpp"
#include "feistel/tau.hpp"

namespace feistel {

using ScriptGen = std::function<Script(std::uint64_t script_seed, int index)>;

// One row per trial; scripts are generated per index, world randomness per
// derived seed. The parallel variant must agree with the serial reference
// bit for bit.
std::vector<TrialSummary> run_script_batch_serial(const TrialConfig& base,
                                                  int trials,
                                                  const ScriptGen& gen);
std::vector<TrialSummary> run_script_batch(const TrialConfig& base, int trials,
                                           const ScriptGen& gen, int jobs);

std::vector<TrialSummary> run_attack_batch_serial(const TrialConfig& base,
                                                  int trials, bool strong);
std::vector<TrialSummary> run_attack_batch(const TrialConfig& base, int trials,
                                           bool strong, int jobs);

struct AdvantageEstimate {
  double p1_a = 0, p1_b = 0;
  double estimate = 0;
  double stderr_ = 0;
  int trials = 0;
};

// |Pr[D=1 in A] - Pr[D=1 in B]| with binomial standard error; world seeds
// are disjoint between the two sides, script corpus shared. Per-trial rows
// land in rows_out (side A then side B) when given.
AdvantageEstimate estimate_advantage(const TrialConfig& side_a,
                                     const TrialConfig& side_b, int trials,
                                     const ScriptGen& gen, int jobs,
                                     std::vector<TrialSummary>* rows_out = nullptr);

// Dedicated birthday-style distinguisher for the permutation-vs-two-sided
// comparison: forward queries on distinct inputs, backward queries on the
// answers, flags output collisions and round-trip mismatches.
int birthday_probe(PermBackend& pb, int bits, int qprime, std::uint64_t seed);
AdvantageEstimate urp_vs_tsrf_advantage(int bits, int qprime, int trials,
                                        std::uint64_t base_seed, int jobs,
                                        std::vector<TrialSummary>* rows_out = nullptr);

enum class InvariantLevel { Counts, Full };

struct InvariantReport {
  bool efficiency_tables = true;
  bool efficiency_pqueries = true;
  bool efficiency_checks = true;
  bool outer_chains = true;
  bool queue_drain = true;
  bool adapt_count = true;    // meaningful for chain-completing runs
  bool no_overwrite = true;   // unconditional count; gate on the verdict
  bool consistency = true;    // meaningful for chain-completing runs
  std::size_t overwrites = 0;
  std::string witness;

  bool counts_ok() const {
    return efficiency_tables && efficiency_pqueries && efficiency_checks &&
           outer_chains && queue_drain;
  }
};

// Per-invariant pass/fail, recomputed from the event stream alone.
InvariantReport assert_invariants(const Transcript& tr,
                                  InvariantLevel level = InvariantLevel::Full);

}  // namespace feistel
