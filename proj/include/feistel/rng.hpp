#pragma once

#include <cstdint>

#include "feistel/word.hpp"

namespace feistel {

// splitmix64 finalizer; the workhorse behind all deterministic randomness.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(a ^ mix64(b ^ mix64(c)));
}

// Domain tags keep independent randomness streams disjoint under one seed.
enum class Tag : std::uint64_t {
  RoundTable = 0x11,   // f / h entries
  PermTable = 0x22,    // p entries
  UrpRetry = 0x33,     // resampling stream of the random permutation
  Script = 0x44,       // distinguisher generation
  Sim6Table = 0x55,    // six-round simulator samples
  HFill = 0x66,        // filling unused entries of a partial table
  Trial = 0x77,        // per-trial seed derivation
};

inline std::uint64_t tagged(std::uint64_t seed, Tag t) {
  return mix2(seed, static_cast<std::uint64_t>(t));
}

// Canonical entry value: a pure function of (seed, key), so replays and
// order-insensitive accesses agree.
inline Word canonical_word(std::uint64_t seed, Tag t, std::uint64_t k1,
                           std::uint64_t k2, int bits) {
  return mix3(tagged(seed, t), k1, k2) & word_mask(bits);
}

inline WordPair canonical_pair(std::uint64_t seed, Tag t, std::uint64_t k1,
                               std::uint64_t k2, int bits) {
  std::uint64_t v = mix3(tagged(seed, t), k1, k2);
  return {v & word_mask(bits), (v >> 32) & word_mask(bits)};
}

// Small counter-based stream for the rare places that need more than one
// draw per key (permutation resampling).
struct CounterStream {
  std::uint64_t state;
  explicit CounterStream(std::uint64_t seed, Tag t) : state(tagged(seed, t)) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    return mix64(state);
  }
};

inline std::uint64_t derive_trial_seed(std::uint64_t base, std::uint64_t stream,
                                       std::uint64_t index) {
  return mix3(tagged(base, Tag::Trial), stream, index);
}

}  // namespace feistel
