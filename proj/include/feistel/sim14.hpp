#pragma once

#include <array>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "feistel/chains.hpp"
#include "feistel/hooks.hpp"
#include "feistel/ideal.hpp"
#include "feistel/rand_tables.hpp"
#include "feistel/transcript.hpp"

namespace feistel {

struct OverwriteFault : std::runtime_error {
  OverwriteFault(Word x, int l)
      : std::runtime_error("adapted write overwrote an existing entry"),
        x(x), l(l) {}
  Word x;
  int l;
};

// Fourteen-round chain-completion simulator. Detects chains at rounds
// {2,7,8,13}, adapts at l in {4,10}, keeps a strict FIFO of pending chains
// and a set of completed (x,y,k) triples with k in {1,7}.
class Simulator14 {
 public:
  enum class OverwritePolicy { LogAndContinue, FaultFast };

  struct QueuedChain {
    Word x, y;
    int k, l;
  };

  Simulator14(int bits, PermBackend& backend, RoundTable& f, Transcript& tr,
              OverwritePolicy policy = OverwritePolicy::LogAndContinue,
              ExecHooks* hooks = nullptr)
      : bits_(bits), backend_(backend), f_(f), tr_(tr), policy_(policy),
        hooks_(hooks) {
    for (int i = 0; i <= 14; ++i) g_ptrs_[i] = &g_[static_cast<size_t>(i)];
  }

  // Public query interface: defines the value, then drains the queue.
  Word f_query(int i, Word x);

  // Internal steps, exposed for the instrumentation layer and tests.
  Word f_inner(int i, Word x);
  void enq_new_chains(int i, Word x);
  void adapt(Word x_lm2, Word x_lm1, Word x_lp2, Word x_lp3, int l);
  void force_val(Word x, Word y, int l);
  WordPair eval_fwd(Word xk, Word xk1, int k, int l);
  WordPair eval_bwd(Word xk, Word xk1, int k, int l);

  const OrderedTable<Word, Word>& table(int i) const {
    return g_[static_cast<size_t>(i)];
  }
  StateView view() const { return StateView(g_ptrs_.data(), &backend_.table()); }

  bool completed(Word x, Word y, int k) const {
    const auto& s = (k == 1) ? completed1_ : completed7_;
    return s.count(pack_pair(x, y)) != 0;
  }

  std::size_t adapt_calls() const { return adapt_calls_; }
  std::size_t overwrite_events() const { return overwrite_events_; }
  std::size_t max_table_size() const;
  int bits() const { return bits_; }
  void set_hooks(ExecHooks* h) { hooks_ = h; }

 private:
  int bits_;
  PermBackend& backend_;
  RoundTable& f_;
  Transcript& tr_;
  OverwritePolicy policy_;
  ExecHooks* hooks_;

  std::array<OrderedTable<Word, Word>, 15> g_;  // index 1..14 used
  std::array<const OrderedTable<Word, Word>*, 15> g_ptrs_{};
  std::deque<QueuedChain> q_;
  std::unordered_set<std::uint64_t> completed1_, completed7_;
  std::size_t adapt_calls_ = 0;
  std::size_t overwrite_events_ = 0;
};

}  // namespace feistel
