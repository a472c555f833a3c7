#pragma once

#include <cstdint>
#include <vector>

#include "feistel/hooks.hpp"
#include "feistel/ordered_table.hpp"
#include "feistel/rand_tables.hpp"
#include "feistel/rng.hpp"
#include "feistel/transcript.hpp"
#include "feistel/word.hpp"

namespace feistel {

enum class Source : std::uint8_t { Simulator = 0, Distinguisher = 1 };

// Directional history of a permutation-like partner. Keys are packed input
// pairs; every installed mapping has entries in one or both directions.
struct PermTable {
  OrderedTable<std::uint64_t, WordPair> down, up;

  const WordPair* find(bool up_dir, Word a, Word b) const {
    return (up_dir ? up : down).find(pack_pair(a, b));
  }
};

// Common surface the fourteen-round simulator talks to.
class PermBackend {
 public:
  virtual ~PermBackend() = default;
  virtual WordPair p(Word x0, Word x1, Source src) = 0;
  virtual WordPair p_inv(Word xr, Word xr1, Source src) = 0;
  virtual bool check(Word x0, Word x1, Word xr, Word xr1, Source src) = 0;
  virtual const PermTable& table() const = 0;
};

// Lazily sampled uniform random permutation over 2n bits with a Check
// procedure. Fresh outputs are drawn from the explicit p-table first and
// resampled from an auxiliary stream on collision, so the realized mapping
// is a bijection at every point.
class Urp : public PermBackend {
 public:
  Urp(int bits, PermRandom& p, std::uint64_t aux_seed, Transcript* tr = nullptr)
      : bits_(bits), p_(p), retry_(aux_seed, Tag::UrpRetry), tr_(tr) {}

  WordPair p(Word x0, Word x1, Source src) override;
  WordPair p_inv(Word x14, Word x15, Source src) override;
  bool check(Word x0, Word x1, Word x14, Word x15, Source src) override;

  const PermTable& table() const override { return t_; }
  std::size_t calls() const { return calls_; }
  // every output value drawn for a fresh query, in draw order
  const std::vector<WordPair>& drawn() const { return drawn_; }
  int bits() const { return bits_; }

 private:
  WordPair fresh_forward(Word x0, Word x1);
  WordPair fresh_backward(Word x14, Word x15);

  int bits_;
  PermRandom& p_;
  CounterStream retry_;
  Transcript* tr_;
  PermTable t_;
  std::vector<WordPair> drawn_;
  std::size_t calls_ = 0;
};

// Two-sided random function: answers both directions from uniform tables and
// may overwrite the opposite-direction entry exactly as a fresh install
// dictates, leaving dangling mappings behind.
class Tsrf : public PermBackend {
 public:
  Tsrf(int bits, PermRandom& p, Transcript* tr = nullptr,
       ExecHooks* hooks = nullptr)
      : bits_(bits), p_(p), tr_(tr), hooks_(hooks) {}

  WordPair p(Word x0, Word x1, Source src) override;
  WordPair p_inv(Word x14, Word x15, Source src) override;
  // Consults only the installed entries; never samples.
  bool check(Word x0, Word x1, Word x14, Word x15, Source src) override;

  const PermTable& table() const override { return t_; }
  std::size_t p_reads() const { return p_reads_; }
  std::size_t overwrites() const { return overwrites_; }
  std::size_t query_count(bool up) const { return up ? n_up_ : n_down_; }
  std::size_t check_count() const { return n_check_; }
  int bits() const { return bits_; }
  void set_hooks(ExecHooks* h) { hooks_ = h; }

 private:
  int bits_;
  PermRandom& p_;
  Transcript* tr_;
  ExecHooks* hooks_;
  PermTable t_;
  std::size_t p_reads_ = 0, overwrites_ = 0;
  std::size_t n_down_ = 0, n_up_ = 0, n_check_ = 0;
};

// The r-round Feistel construction over an explicit round table h. Queries
// re-evaluate the rounds each time; the installed pair table only backs the
// Check procedure.
class FeistelPsi : public PermBackend {
 public:
  FeistelPsi(int bits, int rounds, RoundTable& h, Transcript* tr = nullptr)
      : bits_(bits), rounds_(rounds), h_(h), tr_(tr) {}

  WordPair p(Word x0, Word x1, Source src) override;
  WordPair p_inv(Word xr, Word xr1, Source src) override;
  bool check(Word x0, Word x1, Word xr, Word xr1, Source src) override;

  const PermTable& table() const override { return t_; }
  int rounds() const { return rounds_; }
  int bits() const { return bits_; }

 private:
  int bits_;
  int rounds_;
  RoundTable& h_;
  Transcript* tr_;
  PermTable t_;
};

}  // namespace feistel
