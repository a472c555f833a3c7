#pragma once

#include "feistel/word.hpp"

namespace feistel {

// Instrumentation points used by the replay monitor. The default no-op
// implementation keeps the simulator hot path unchanged.
struct ExecHooks {
  virtual ~ExecHooks() = default;
  // Just before G_i(x) := y lands in the table (round-randomness read).
  virtual void on_f_assign(int /*i*/, Word /*x*/, Word /*y*/) {}
  // Between reading p(dir, in) = out and installing the pair of entries.
  virtual void on_p_draw(bool /*up*/, WordPair /*in*/, WordPair /*out*/) {}
};

}  // namespace feistel
