#pragma once

#include <array>
#include <optional>
#include <vector>

#include "feistel/ideal.hpp"
#include "feistel/ordered_table.hpp"
#include "feistel/transcript.hpp"
#include "feistel/word.hpp"

namespace feistel {

// A partial chain: two adjacent round inputs and their position.
struct Chain {
  Word a = 0, b = 0;
  int k = 0;
  friend bool operator==(const Chain&, const Chain&) = default;
};

// Read-only picture of the simulator tables and the permutation history,
// optionally with one round entry overlaid. The overlay lets instrumentation
// evaluate "state just after an assignment" without touching the real tables.
class StateView {
 public:
  StateView(const OrderedTable<Word, Word>* const* g, const PermTable* p)
      : g_(g), p_(p) {}

  StateView with_entry(int i, Word x, Word y) const {
    StateView v = *this;
    v.ov_active_ = true;
    v.ov_i_ = i;
    v.ov_x_ = x;
    v.ov_y_ = y;
    return v;
  }

  bool g_contains(int k, Word x) const {
    if (ov_active_ && ov_i_ == k && ov_x_ == x) return true;
    return g_[k]->contains(x);
  }
  std::optional<Word> g_at(int k, Word x) const {
    if (ov_active_ && ov_i_ == k && ov_x_ == x) return ov_y_;
    if (const Word* v = g_[k]->find(x)) return *v;
    return std::nullopt;
  }
  std::vector<Word> g_keys(int k) const {
    std::vector<Word> keys;
    keys.reserve(g_[k]->size() + 1);
    for (const auto& [x, y] : *g_[k]) keys.push_back(x);
    if (ov_active_ && ov_i_ == k && !g_[k]->contains(ov_x_))
      keys.push_back(ov_x_);
    return keys;
  }
  std::size_t g_size(int k) const {
    return g_[k]->size() +
           ((ov_active_ && ov_i_ == k && !g_[k]->contains(ov_x_)) ? 1 : 0);
  }

  const PermTable& perm() const { return *p_; }
  std::size_t perm_size() const { return p_->down.size() + p_->up.size(); }

 private:
  const OrderedTable<Word, Word>* const* g_;  // 1..14 valid
  const PermTable* p_;
  bool ov_active_ = false;
  int ov_i_ = 0;
  Word ov_x_ = 0, ov_y_ = 0;
};

std::optional<Chain> next_chain(const StateView& v, const Chain& c);
std::optional<Chain> prev_chain(const StateView& v, const Chain& c);

// Walk cap; long enough that only genuine cycles exhaust it.
std::size_t walk_cap(const StateView& v);

// First value the directional walk sees at each position 0..15.
using ValVec = std::array<std::optional<Word>, 16>;
ValVec val_vec(const StateView& v, const Chain& c, bool forward,
               Transcript* warn = nullptr);

std::optional<Word> val_plus(const StateView& v, int i, const Chain& c,
                             Transcript* warn = nullptr);
std::optional<Word> val_minus(const StateView& v, int i, const Chain& c,
                              Transcript* warn = nullptr);
std::optional<Word> val(const StateView& v, int i, const Chain& c,
                        Transcript* warn = nullptr);

// Reflexive-transitive closure of the step relations, bounded search with a
// visited set.
bool equivalent(const StateView& v, const Chain& c, const Chain& d);

bool table_defined(const StateView& v, const Chain& c);

// Every table-defined chain: round-table products plus the permutation-backed
// positions 0 and 14.
std::vector<Chain> enumerate_table_defined(const StateView& v);

}  // namespace feistel
