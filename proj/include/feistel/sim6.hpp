#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "feistel/ideal.hpp"
#include "feistel/ordered_table.hpp"
#include "feistel/rng.hpp"
#include "feistel/transcript.hpp"

namespace feistel {

// Terminal failure of the six-round simulator.
struct Abort6 {
  enum Where {
    AdaptCollision = 1,  // an adapt slot was already occupied
    HistoryCap = 2,      // some history grew past hmax
    Budget = 3,          // permutation query budget exhausted
  };
  Where where;
  int round;  // for AdaptCollision: the occupied round
};

// A detected 3-chain, stored as the (y, z) partner pair of the scanned value.
struct Chain3 {
  Word y = 0, z = 0;
  bool virt = false;  // z lies outside the history (extended set member)
  friend bool operator==(const Chain3&, const Chain3&) = default;
};

// Test/diagnostic taps into the six-round simulator's control flow.
struct Sim6Probe {
  virtual ~Sim6Probe() = default;
  virtual void on_chain_set(Word /*x*/, int /*k*/, bool /*positive*/,
                            const std::vector<Chain3>&) {}
  virtual void on_xor_fire(int /*which*/, Word /*value*/, int /*k*/) {}
};

// Run-level knobs of the six-round simulator.
struct Sim6Config {
  std::size_t hmax = 7000;
  std::size_t budget = 1ull << 20;
  bool completed_guard = true;
  bool random_order = false;
  std::uint64_t order_seed = 0;
};

// Six-round chain-completion simulator with recursive completion, virtual
// chains, xor-scan procedures and abort semantics.
class Simulator6 {
 public:
  using Config = Sim6Config;

  Simulator6(int bits, Urp& urp, std::uint64_t sample_seed, Transcript& tr,
             Config cfg = Config{})
      : bits_(bits), urp_(urp), seed_(sample_seed), tr_(tr), cfg_(cfg) {}

  // Public round-function query; throws Abort6 (terminal).
  Word query(Word x, int k);

  bool aborted() const { return aborted_; }
  const Abort6& abort_info() const { return abort_; }

  const OrderedTable<Word, Word>& hist(int k) const {
    return f_[static_cast<size_t>(k)];
  }
  std::size_t completed_tuples() const { return tuples_.size(); }
  void set_probe(Sim6Probe* p) { probe_ = p; }

  // Exposed for tests: the chain set scanned for value x at round k.
  std::vector<Chain3> chain_set(Word x, int k, bool positive);

 private:
  using Defined = std::vector<std::pair<Word, int>>;  // newly defined (x', k')

  [[noreturn]] void abort_run(Abort6::Where where, int round);
  Word sample(int k, Word x);          // F_k(x) <- uniform, history checks
  Word hist_at(int k, Word x) const { return f_[static_cast<size_t>(k)].at(x); }
  bool in_hist(int k, Word x) const {
    return f_[static_cast<size_t>(k)].contains(x);
  }
  WordPair urp_fwd(Word l, Word r);
  WordPair urp_bwd(Word s, Word t);

  void chain_query(Word x, int k);
  Defined complete_chain(bool positive, Word x, Word y, Word z, int k);
  void xor_query_1(Word x, int k);
  void xor_query_2(Word x, int k);
  void xor_query_3(Word x, int k);

  bool tuple_completed(bool positive, Word x, Word y, Word z, int k) const;

  template <class T>
  void maybe_shuffle(std::vector<T>& v) {
    if (!cfg_.random_order || v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      shuffle_state_ = mix64(shuffle_state_ ^ cfg_.order_seed ^ i);
      std::swap(v[i], v[static_cast<std::size_t>(shuffle_state_ % (i + 1))]);
    }
  }

  int bits_;
  Urp& urp_;
  std::uint64_t seed_;
  Transcript& tr_;
  Config cfg_;
  Sim6Probe* probe_ = nullptr;

  std::array<OrderedTable<Word, Word>, 7> f_;  // index 1..6 used
  std::vector<std::array<Word, 6>> tuples_;    // completed (R,X,Y,Z,A,S)
  bool aborted_ = false;
  Abort6 abort_{Abort6::AdaptCollision, 0};
  std::uint64_t shuffle_state_ = 0;
};

}  // namespace feistel
