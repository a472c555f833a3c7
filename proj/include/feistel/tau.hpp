#pragma once

#include <cstdint>

#include "feistel/attacks.hpp"
#include "feistel/rand_tables.hpp"
#include "feistel/scenario.hpp"

namespace feistel {

// Result of translating second-scenario randomness into a partial round
// table and replaying the third scenario on it.
struct TauResult {
  PartialRoundTable h{16};
  bool good = false;            // monitor verdict of the source run
  std::size_t f_reads = 0;
  std::size_t p_reads = 0;
  bool size_identity = false;   // |h| == f_reads + 2 * p_reads
  bool transcripts_match = false;
  bool s3_fault = false;        // the replay read an unused entry
  std::uint64_t s2_hash = 0, s3_hash = 0;
};

// Builds the partial table from one chain-completing run: entries that were
// read keep their table value; entries only ever force-written take the
// first written value; everything else stays unused.
PartialRoundTable tau_map(int bits, std::uint64_t seed, const Script& inner,
                          bool* good_out = nullptr, std::size_t* f_reads = nullptr,
                          std::size_t* p_reads = nullptr);

// Full round trip: source run, table translation, replay, comparison.
TauResult tau_roundtrip(int bits, std::uint64_t seed, const Script& inner);

}  // namespace feistel
