#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "feistel/ordered_table.hpp"
#include "feistel/rng.hpp"
#include "feistel/word.hpp"

namespace feistel {

// Thrown when a partial round table is read at an unused slot. Callers treat
// it as a hard fault of the trial, never as a crash.
struct PartialHoleFault : std::runtime_error {
  PartialHoleFault(int i, Word x)
      : std::runtime_error("round table read at unused entry"), round(i), x(x) {}
  int round;
  Word x;
};

// Explicit round-function randomness: one n-bit entry per (round, input).
// Entries are immutable once drawn; the draw-order log doubles as the set of
// realized entries for serialization and replay.
class RoundTable {
 public:
  using Key = std::uint64_t;  // (round << 32) | x

  // Canonical table: entry value is a pure function of (seed, round, x),
  // independent of access order.
  RoundTable(std::uint64_t seed, int bits)
      : bits_(bits), gen_([seed, bits](int i, Word x) {
          return canonical_word(seed, Tag::RoundTable,
                                static_cast<std::uint64_t>(i), x, bits);
        }) {}

  RoundTable(int bits, std::function<Word(int, Word)> gen)
      : bits_(bits), gen_(std::move(gen)) {}

  Word at(int i, Word x) {
    Key k = key(i, x);
    if (const Word* v = log_.find(k)) return *v;
    Word v = gen_(i, x);
    log_.insert(k, v);
    return v;
  }

  bool was_read(int i, Word x) const { return log_.contains(key(i, x)); }
  std::size_t reads() const { return log_.size(); }
  const OrderedTable<Key, Word>& realized() const { return log_; }
  int bits() const { return bits_; }

  static Key key(int i, Word x) {
    return (static_cast<Key>(static_cast<unsigned>(i)) << 32) | x;
  }
  static int key_round(Key k) { return static_cast<int>(k >> 32); }
  static Word key_input(Key k) { return k & 0xffffffffull; }

 private:
  int bits_;
  std::function<Word(int, Word)> gen_;
  OrderedTable<Key, Word> log_;
};

// A partial round table: explicit entries plus an "unused" marker everywhere
// else. Reading a hole faults (or falls through to a filler when one is set).
class PartialRoundTable {
 public:
  explicit PartialRoundTable(int bits) : bits_(bits) {}

  void define(int i, Word x, Word y) {
    entries_.insert(RoundTable::key(i, x), y);
  }

  bool defined(int i, Word x) const {
    return entries_.contains(RoundTable::key(i, x));
  }

  std::size_t size() const { return entries_.size(); }
  int bits() const { return bits_; }
  const OrderedTable<std::uint64_t, Word>& entries() const { return entries_; }

  // Adapts this partial table into a RoundTable generator. Holes fault.
  std::function<Word(int, Word)> as_generator() const {
    return [this](int i, Word x) -> Word {
      if (const Word* v = entries_.find(RoundTable::key(i, x))) return *v;
      throw PartialHoleFault(i, x);
    };
  }

  // Same, but holes are filled from an independent canonical stream.
  std::function<Word(int, Word)> as_filled_generator(std::uint64_t fill_seed) const {
    int bits = bits_;
    const auto* self = this;
    return [self, fill_seed, bits](int i, Word x) -> Word {
      if (const Word* v = self->entries_.find(RoundTable::key(i, x))) return *v;
      return canonical_word(fill_seed, Tag::HFill,
                            static_cast<std::uint64_t>(i), x, bits);
    };
  }

 private:
  int bits_;
  OrderedTable<std::uint64_t, Word> entries_;
};

// Explicit permutation-side randomness: a 2n-bit entry per (direction, pair).
class PermRandom {
 public:
  PermRandom(std::uint64_t seed, int bits)
      : bits_(bits), gen_([seed, bits](bool up, Word a, Word b) {
          return canonical_pair(seed, Tag::PermTable, pack_pair(a, b),
                                up ? 1 : 0, bits);
        }) {}

  PermRandom(int bits, std::function<WordPair(bool, Word, Word)> gen)
      : bits_(bits), gen_(std::move(gen)) {}

  WordPair at(bool up, Word a, Word b) {
    auto& log = up ? up_log_ : down_log_;
    std::uint64_t k = pack_pair(a, b);
    if (const WordPair* v = log.find(k)) return *v;
    WordPair v = gen_(up, a, b);
    log.insert(k, v);
    return v;
  }

  std::size_t reads() const { return down_log_.size() + up_log_.size(); }
  const OrderedTable<std::uint64_t, WordPair>& realized(bool up) const {
    return up ? up_log_ : down_log_;
  }
  int bits() const { return bits_; }

 private:
  int bits_;
  std::function<WordPair(bool, Word, Word)> gen_;
  OrderedTable<std::uint64_t, WordPair> down_log_, up_log_;
};

// JSON map {"f": {...}, "p": {...}} of the realized entries; keys rendered
// as "i:x" and "dir:x0:x1" in lowercase hex.
std::string randomness_to_json(const RoundTable* f, const PermRandom* p,
                               int bits);

// Rebuilds generator tables from such a JSON map (replay). Accesses outside
// the stored entries fault.
struct ReplayRandomness {
  int bits = 0;
  PartialRoundTable f_entries{0};
  OrderedTable<std::uint64_t, WordPair> p_down, p_up;

  RoundTable make_f() const;
  PermRandom make_p() const;
};

bool randomness_from_json(const std::string& text, int bits,
                          ReplayRandomness& out);

}  // namespace feistel
