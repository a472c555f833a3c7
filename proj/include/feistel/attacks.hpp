#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feistel/ideal.hpp"
#include "feistel/sim6.hpp"
#include "feistel/word.hpp"

namespace feistel {

// The system surface a distinguisher sees: round functions and the
// permutation-like partner.
struct QueryInterface {
  virtual ~QueryInterface() = default;
  virtual Word f(int i, Word x) = 0;
  virtual WordPair p(Word x0, Word x1) = 0;
  virtual WordPair p_inv(Word xr, Word xr1) = 0;
};

// Word expressions over earlier step results.
struct Expr {
  enum class K { Const, Ref, Xor };
  K k = K::Const;
  Word c = 0;
  int step = 0, comp = 0;
  std::vector<Expr> terms;

  static Expr cnst(Word w) {
    Expr e;
    e.k = K::Const;
    e.c = w;
    return e;
  }
  static Expr ref(int step, int comp) {
    Expr e;
    e.k = K::Ref;
    e.step = step;
    e.comp = comp;
    return e;
  }
  static Expr xr(std::vector<Expr> ts) {
    Expr e;
    e.k = K::Xor;
    e.terms = std::move(ts);
    return e;
  }
};

struct ScriptStep {
  enum class K { F, P, Pinv };
  K k = K::F;
  int round = 1;
  Expr a, b;
};

// A static distinguisher: a list of queries whose inputs are expressions
// over earlier answers; the output bit is the low bit of the xor-fold of
// all answers.
struct Script {
  int bits = 16;
  std::vector<ScriptStep> steps;

  std::string to_json() const;
  static std::optional<Script> from_json(const std::string& text);
};

struct ScriptResult {
  int output = 0;
  std::size_t f_queries = 0;
  std::size_t p_queries = 0;
};

ScriptResult run_script(const Script& s, QueryInterface& sys);

// Appends, for every permutation query of the inner script, the fourteen
// round queries tracing it through the construction.
Script complete_all_chains(const Script& inner, int rounds = 14);

// Deterministic random distinguisher: q queries mixing fresh and reused
// values, including chain-threading reuse of permutation answers.
Script random_distinguisher(int q, std::uint64_t seed, int bits,
                            int rounds = 14);

// Outcome of one attack run.
struct AttackOutcome {
  bool aborted = false;
  Abort6 abort{Abort6::AdaptCollision, 0};
  int output = 0;
  std::size_t f_queries = 0;
  std::size_t p_queries = 0;
  std::vector<std::pair<std::string, Word>> bindings;
  std::vector<std::string> flagged;  // diagnostic events, when requested

  Word binding(const std::string& name) const;
};

// The seven-query distinguisher that drives the six-round simulator into an
// adapt collision.
AttackOutcome attack6(QueryInterface& sys, int bits, std::uint64_t seed);

// The three-phase variant with the final consistency predicate.
AttackOutcome strong_attack6(QueryInterface& sys, int bits, std::uint64_t seed);

// Post-hoc attribution of non-abort runs: evaluates the attack's bad-event
// list against the realized permutation entries and simulator histories.
std::vector<std::string> attack6_bad_events(const AttackOutcome& out,
                                            const std::vector<WordPair>& drawn,
                                            const Simulator6* sim, int bits);

}  // namespace feistel
