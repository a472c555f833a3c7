#include <doctest.h>

#include "feistel/harness.hpp"
#include "feistel/monitor.hpp"
#include "feistel/sim14.hpp"
#include "oracle.hpp"

using namespace feistel;

namespace {

struct World {
  Transcript tr;
  PermRandom p;
  RoundTable f;
  Tsrf tsrf;
  Simulator14 sim;

  explicit World(int bits, std::uint64_t seed,
                 Simulator14::OverwritePolicy pol =
                     Simulator14::OverwritePolicy::LogAndContinue)
      : tr(bits), p(seed, bits), f(seed, bits), tsrf(bits, p, &tr),
        sim(bits, tsrf, f, tr, pol) {}
};

int count_events(const Transcript& tr, Ev kind) {
  int n = 0;
  for (const auto& e : tr.events())
    if (e.ev == kind) ++n;
  return n;
}

// straight-line evaluation through the simulator's final tables
WordPair eval_through_tables(const Simulator14& sim, Word x0, Word x1) {
  Word a = x0, b = x1;
  for (int i = 1; i <= 14; ++i) {
    REQUIRE(sim.table(i).contains(b));
    Word nxt = a ^ sim.table(i).at(b);
    a = b;
    b = nxt;
  }
  return {a, b};
}

}  // namespace

TEST_CASE("fresh query at a non-detect round leaves the queue alone") {
  World w(4, 1);
  w.sim.f_query(1, 0x5);
  CHECK(count_events(w.tr, Ev::Enqueue) == 0);
  CHECK(count_events(w.tr, Ev::Sample) == 1);
  // memoized second query: no new sample
  w.sim.f_query(1, 0x5);
  CHECK(count_events(w.tr, Ev::Sample) == 1);
}

TEST_CASE("detect round with empty partner tables enqueues nothing") {
  World w(4, 2);
  w.sim.f_inner(2, 0x1);
  w.sim.f_inner(3, 0x2);
  CHECK(count_events(w.tr, Ev::Enqueue) == 0);
}

TEST_CASE("middle detect rounds enqueue the cartesian product in order") {
  World w(4, 3);
  w.sim.f_inner(7, 0xa);
  w.sim.f_inner(7, 0xb);
  w.sim.f_inner(8, 0xc);  // pairs with both, in G7 insertion order
  std::vector<Event> enq;
  for (const auto& e : w.tr.events())
    if (e.ev == Ev::Enqueue) enq.push_back(e);
  REQUIRE(enq.size() == 2);
  CHECK(enq[0].x == 0xa);
  CHECK(enq[0].y == 0xc);
  CHECK(enq[0].i == 7);
  CHECK(enq[0].l == 10);
  CHECK(enq[1].x == 0xb);
  CHECK(enq[1].l == 10);
  // and from the other side: a fresh G7 value pairs with the G8 one, l = 4
  w.sim.f_inner(7, 0xd);
  std::vector<Event> enq2;
  for (const auto& e : w.tr.events())
    if (e.ev == Ev::Enqueue) enq2.push_back(e);
  REQUIRE(enq2.size() == 3);
  CHECK(enq2[2].x == 0xd);
  CHECK(enq2[2].y == 0xc);
  CHECK(enq2[2].l == 4);
}

TEST_CASE("scripted detection completes the chain consistently") {
  // query the permutation, feed both ends in, and let the last detect-round
  // query trigger completion
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    World w(4, seed);
    Word x0 = 0x3, x1 = 0x9;
    WordPair ends = w.tsrf.p(x0, x1, Source::Distinguisher);
    Word g1 = w.sim.f_query(1, x1);
    Word g14 = w.sim.f_query(14, ends.a);
    Word x2 = x0 ^ g1;
    Word x13 = ends.b ^ g14;
    w.sim.f_query(13, x13);
    CHECK(count_events(w.tr, Ev::Enqueue) == 0);  // G2 still empty
    w.sim.f_query(2, x2);

    std::vector<Event> enq;
    for (const auto& e : w.tr.events())
      if (e.ev == Ev::Enqueue) enq.push_back(e);
    REQUIRE(enq.size() >= 1);
    CHECK(enq[0].x == x1);
    CHECK(enq[0].y == x2);
    CHECK(enq[0].i == 1);
    CHECK(enq[0].l == 4);
    CHECK(w.sim.completed(x1, x2, 1));
    CHECK(eval_through_tables(w.sim, x0, x1) == ends);
    CHECK(w.sim.overwrite_events() == 0);
  }
}

TEST_CASE("mirrored script adapts at the lower zone") {
  World w(4, 5);
  Word x0 = 0x7, x1 = 0x2;
  WordPair ends = w.tsrf.p(x0, x1, Source::Distinguisher);
  Word g1 = w.sim.f_query(1, x1);
  Word g14 = w.sim.f_query(14, ends.a);
  Word x2 = x0 ^ g1;
  Word x13 = ends.b ^ g14;
  w.sim.f_query(2, x2);  // now round 13 sees the tuple
  w.sim.f_query(13, x13);
  std::vector<Event> enq;
  for (const auto& e : w.tr.events())
    if (e.ev == Ev::Enqueue) enq.push_back(e);
  REQUIRE(enq.size() >= 1);
  CHECK(enq[0].l == 10);
  // adapted rounds are 10 and 11
  std::vector<int> fv;
  for (const auto& e : w.tr.events())
    if (e.ev == Ev::ForceVal) fv.push_back(e.l);
  REQUIRE(fv.size() == 2);
  CHECK(fv[0] == 10);
  CHECK(fv[1] == 11);
  CHECK(eval_through_tables(w.sim, x0, x1) == ends);
}

TEST_CASE("adapt writes satisfy the defining equations") {
  World w(4, 9);
  Word x0 = 0x1, x1 = 0x4;
  WordPair ends = w.tsrf.p(x0, x1, Source::Distinguisher);
  Word x2 = x0 ^ w.sim.f_query(1, x1);
  Word x13 = ends.b ^ w.sim.f_query(14, ends.a);
  w.sim.f_query(13, x13);
  w.sim.f_query(2, x2);
  // walk the chain values through the final tables
  Word v[16];
  v[0] = x0;
  v[1] = x1;
  for (int i = 1; i <= 14; ++i) v[i + 1] = v[i - 1] ^ w.sim.table(i).at(v[i]);
  CHECK((w.sim.table(4).at(v[4]) ^ v[3]) == v[5]);
  CHECK((w.sim.table(5).at(v[5]) ^ v[4]) == v[6]);
}

TEST_CASE("force_val policies") {
  World w(8, 11);
  w.sim.force_val(0x1, 0x2, 4);
  CHECK(count_events(w.tr, Ev::Overwrite) == 0);
  w.sim.force_val(0x1, 0x2, 4);  // idempotent
  CHECK(count_events(w.tr, Ev::Overwrite) == 0);
  w.sim.force_val(0x1, 0x3, 4);
  CHECK(count_events(w.tr, Ev::Overwrite) == 1);
  CHECK(w.sim.overwrite_events() == 1);
  CHECK(w.sim.table(4).at(0x1) == 0x3);

  World wf(8, 11, Simulator14::OverwritePolicy::FaultFast);
  wf.sim.force_val(0x1, 0x2, 4);
  CHECK_THROWS_AS(wf.sim.force_val(0x1, 0x3, 4), OverwriteFault);
}

TEST_CASE("eval with zero round functions shifts nothing") {
  Transcript tr(4);
  PermRandom p(1, 4);
  RoundTable zero(4, [](int, Word) -> Word { return 0; });
  Tsrf tsrf(4, p, &tr);
  Simulator14 sim(4, tsrf, zero, tr);
  CHECK(sim.eval_fwd(0x3, 0x5, 0, 6) == WordPair{0x3, 0x5});
}

TEST_CASE("eval steps invert and match the recurrence") {
  World w(2, 21);
  WordPair mid = w.sim.eval_fwd(0x1, 0x2, 0, 5);
  CHECK(w.sim.eval_bwd(mid.a, mid.b, 5, 0) == WordPair{0x1, 0x2});
  // forward from (1,7) agrees with the direct recurrence over the tables
  for (Word a = 0; a < 4; ++a)
    for (Word b = 0; b < 4; ++b) {
      WordPair got = w.sim.eval_fwd(a, b, 1, 7);
      Word va = a, vb = b;
      for (int i = 2; i <= 7; ++i) {
        Word nxt = va ^ w.sim.table(i).at(vb);
        va = vb;
        vb = nxt;
      }
      CHECK(got == WordPair{va, vb});
    }
}

TEST_CASE("eval wraps through the partner at the ends") {
  World w(4, 31);
  WordPair top = w.sim.eval_fwd(0x1, 0x2, 12, 1);  // crosses position 14
  CHECK(count_events(w.tr, Ev::PQuery) >= 1);
  WordPair back = w.sim.eval_bwd(top.a, top.b, 1, 12);
  CHECK(back == WordPair{0x1, 0x2});
}

TEST_CASE("queue is empty whenever a public query returns") {
  // the drain loop enforces it; verify via the reconstructed invariant
  World w(4, 41);
  Word x0 = 0x2, x1 = 0xb;
  WordPair ends = w.tsrf.p(x0, x1, Source::Distinguisher);
  Word x2 = x0 ^ w.sim.f_query(1, x1);
  Word x13 = ends.b ^ w.sim.f_query(14, ends.a);
  w.sim.f_query(13, x13);
  w.sim.f_query(2, x2);
  auto rep = assert_invariants(w.tr, InvariantLevel::Counts);
  CHECK(rep.queue_drain);
  CHECK(rep.efficiency_tables);
  CHECK(rep.efficiency_pqueries);
  CHECK(rep.efficiency_checks);
}
