#pragma once

#include <string>
#include <vector>

#include "feistel/chains.hpp"
#include "feistel/hooks.hpp"
#include "feistel/sim14.hpp"
#include "feistel/transcript.hpp"

namespace feistel {

struct BadEvent {
  enum class Kind { BadP, BadlyHit, BadlyCollide };
  Kind kind;
  std::size_t location;  // transcript index at the triggering assignment
  std::string witness;

  std::string json(int bits) const;
};

const char* bad_event_name(BadEvent::Kind k);

// Monitoring knobs.
struct MonitorConfig {
  bool track_collides = true;
  int max_witnesses_per_assign = 8;
};

// Replay-side detector for the three bad events. Wire it into the simulator
// and the two-sided random function before running; the verdict is "good"
// iff nothing fired.
class ChainMonitor : public ExecHooks {
 public:
  using Config = MonitorConfig;

  ChainMonitor(const Simulator14& sim, const Transcript& tr,
               Config cfg = Config{})
      : sim_(sim), tr_(tr), cfg_(cfg) {}

  void on_f_assign(int i, Word x, Word y) override;
  void on_p_draw(bool up, WordPair in, WordPair out) override;

  bool good() const { return events_.empty(); }
  const std::vector<BadEvent>& events() const { return events_; }

 private:
  void check_badly_hit(const StateView& post, int i, Word x);
  void check_badly_collide(const StateView& pre, const StateView& post, int i,
                           Word x);

  const Simulator14& sim_;
  const Transcript& tr_;
  Config cfg_;
  std::vector<BadEvent> events_;
};

}  // namespace feistel
