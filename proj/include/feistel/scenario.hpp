#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "feistel/attacks.hpp"
#include "feistel/monitor.hpp"
#include "feistel/rand_tables.hpp"
#include "feistel/sim14.hpp"
#include "feistel/sim6.hpp"
#include "feistel/transcript.hpp"

namespace feistel {

enum class ScenarioId { S1 = 1, S2 = 2, S3 = 3, S4 = 4 };

struct TrialConfig {
  int bits = 16;
  std::uint64_t seed = 1;
  ScenarioId scenario = ScenarioId::S2;
  bool fault_fast = false;
  bool monitor = false;
  bool complete_chains = false;
  // six-round options
  bool guard_disabled = false;
  bool random_order = false;
  std::size_t hmax = 7000;
  std::size_t budget = 1ull << 20;
};

struct TrialSummary {
  std::uint64_t seed = 0;
  int scenario = 2;
  int output = 0;
  std::size_t d_queries = 0;   // distinguisher interface calls
  std::size_t f_table_max = 0; // max round-table size
  std::size_t p_calls = 0;     // partner P/P^-1 calls, all sources
  std::size_t check_calls = 0;
  std::size_t p_reads = 0;     // fresh permutation-randomness draws
  std::size_t f_reads = 0;     // round-randomness reads
  std::size_t adapt_calls = 0;
  std::size_t overwrites = 0;
  std::size_t bad_events = 0;
  bool monitored = false;
  bool good = true;
  bool abort = false;
  int abort_where = 0;
  bool fault = false;
  double wall_ms = 0;

  static std::string csv_header();
  std::string csv_row() const;
};

struct TrialResult {
  TrialSummary summary;
  Transcript transcript{16};
  std::vector<BadEvent> bad_events;
  std::vector<std::string> flagged;   // six-round attack diagnostics
  AttackOutcome attack;               // filled by attack trials
};

// Script-driven trial against the fourteen-round worlds.
TrialResult run_script_trial(const TrialConfig& cfg, const Script& script);

// Attack trial against the six-round worlds (S1: simulator, S4: construction).
TrialResult run_attack_trial(const TrialConfig& cfg, bool strong);

const char* scenario_name(ScenarioId s);

}  // namespace feistel
