#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "feistel/word.hpp"

namespace feistel {

enum class Ev : std::uint8_t {
  FQuery,      // distinguisher-facing round-function query + answer
  Sample,      // G_i(x) := f(i,x)
  Enqueue,     // chain queued for completion
  Dequeue,     // chain taken out of the queue (skip = previously completed)
  ForceVal,    // adapted table write
  Overwrite,   // a ForceVal hit an existing entry with a different value
  PQuery,      // permutation-side query + answer (dir 'd' or 'u')
  Check,       // permutation-side consistency probe
  XorQuery,    // six-round simulator: one of the xor scan procedures fired
  CompleteChain,  // six-round simulator: a 3-chain completion started
  Abort,       // six-round simulator gave up (terminal)
  CycleWarning,  // chain walk hit the cycle cap
};

// One transcript line. Unused fields stay zero; serialization is fixed per
// kind so equal event streams serialize byte-identically.
struct Event {
  Ev ev;
  std::uint8_t src = 0;  // PQuery/Check: 0 = simulator, 1 = distinguisher
  int i = 0;             // round / position / xorquery index / abort code
  int l = 0;
  Word x = 0, y = 0, z = 0, w = 0;
  bool flag = false;  // Dequeue: skip, Check: result

  friend bool operator==(const Event&, const Event&) = default;
};

class Transcript {
 public:
  explicit Transcript(int bits) : bits_(bits) {}

  void push(const Event& e) { events_.push_back(e); }
  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  int bits() const { return bits_; }

  std::string line(const Event& e) const;
  std::string to_json_lines() const;
  std::uint64_t byte_hash() const;

 private:
  int bits_;
  std::vector<Event> events_;
};

const char* ev_name(Ev e);

}  // namespace feistel
