#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "feistel/ideal.hpp"
#include "oracle.hpp"

using namespace feistel;

TEST_CASE("urp memoizes and inverts") {
  PermRandom p(42, 8);
  Urp urp(8, p, 42, nullptr);
  WordPair out1 = urp.p(0x11, 0x22, Source::Distinguisher);
  WordPair out2 = urp.p(0x11, 0x22, Source::Distinguisher);
  CHECK(out1 == out2);
  WordPair back = urp.p_inv(out1.a, out1.b, Source::Distinguisher);
  CHECK(back == WordPair{0x11, 0x22});
  // backward on a fresh pair, then forward on the answer
  WordPair pre = urp.p_inv(0xaa, 0xbb, Source::Distinguisher);
  CHECK(urp.p(pre.a, pre.b, Source::Distinguisher) == WordPair{0xaa, 0xbb});
}

TEST_CASE("urp is a bijection at n=2, exhaustively") {
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    PermRandom p(seed, 2);
    Urp urp(2, p, seed, nullptr);
    std::set<std::pair<Word, Word>> images;
    for (Word a = 0; a < 4; ++a)
      for (Word b = 0; b < 4; ++b) {
        WordPair o = urp.p(a, b, Source::Distinguisher);
        images.insert({o.a, o.b});
        CHECK(urp.p_inv(o.a, o.b, Source::Distinguisher) == WordPair{a, b});
      }
    CHECK(images.size() == 16);  // all 2^{2n} outputs hit exactly once
  }
}

TEST_CASE("urp backward covers all pairs at n=2") {
  PermRandom p(7, 2);
  Urp urp(2, p, 7, nullptr);
  std::set<std::pair<Word, Word>> pre;
  for (Word a = 0; a < 4; ++a)
    for (Word b = 0; b < 4; ++b) {
      WordPair o = urp.p_inv(a, b, Source::Distinguisher);
      pre.insert({o.a, o.b});
    }
  CHECK(pre.size() == 16);
}

TEST_CASE("urp check") {
  PermRandom p(5, 8);
  Urp urp(8, p, 5, nullptr);
  WordPair o = urp.p(1, 2, Source::Distinguisher);
  CHECK(urp.check(1, 2, o.a, o.b, Source::Distinguisher));
  CHECK_FALSE(urp.check(1, 2, o.a, o.b ^ 1, Source::Distinguisher));
}

TEST_CASE("fresh check hits with frequency near 2^-2n") {
  // n = 8: 0.5M fresh checks, expected hits ~ 500000/65536 ~ 7.6
  const int kUrps = 500, kChecksPer = 1000;
  long hits = 0;
  for (int s = 0; s < kUrps; ++s) {
    PermRandom p(static_cast<std::uint64_t>(s) + 1000, 8);
    Urp urp(8, p, static_cast<std::uint64_t>(s) + 1000, nullptr);
    CounterStream rng(static_cast<std::uint64_t>(s), Tag::Script);
    for (int i = 0; i < kChecksPer; ++i) {
      Word a = rng.next() & 0xff, b = rng.next() & 0xff;
      Word c = rng.next() & 0xff, d = rng.next() & 0xff;
      if (urp.check(a, b, c, d, Source::Distinguisher)) ++hits;
    }
  }
  CHECK(hits >= 1);
  CHECK(hits <= 30);
}

TEST_CASE("tsrf overwrite keeps dangling forward entry") {
  // rig the p-table so two forward queries draw the same output pair
  PermRandom p(4, [](bool up, Word a, Word b) -> WordPair {
    if (!up && (a == 1 || a == 2)) return {0xc, 0xd};
    return {mix2(a, b) & 0xf, mix3(a, b, 1) & 0xf};
  });
  Tsrf t(4, p, nullptr);
  WordPair o1 = t.p(1, 0, Source::Distinguisher);
  CHECK(o1 == WordPair{0xc, 0xd});
  CHECK(t.p_inv(0xc, 0xd, Source::Distinguisher) == WordPair{1, 0});
  WordPair o2 = t.p(2, 0, Source::Distinguisher);  // overwrites the up entry
  CHECK(o2 == WordPair{0xc, 0xd});
  CHECK(t.overwrites() == 1);
  CHECK(t.p_inv(0xc, 0xd, Source::Distinguisher) == WordPair{2, 0});
  // the old forward entry dangles but still answers
  CHECK(t.p(1, 0, Source::Distinguisher) == WordPair{0xc, 0xd});
}

TEST_CASE("tsrf repeated queries and pure check") {
  PermRandom p(9, 8);
  Tsrf t(8, p, nullptr);
  CHECK_FALSE(t.check(1, 2, 3, 4, Source::Distinguisher));  // empty table
  CHECK(t.table().down.size() == 0);                        // no sampling
  WordPair o = t.p(1, 2, Source::Distinguisher);
  CHECK(t.p(1, 2, Source::Distinguisher) == o);
  CHECK(t.p_reads() == 1);
  std::size_t entries = t.table().down.size() + t.table().up.size();
  CHECK(t.check(1, 2, o.a, o.b, Source::Distinguisher));
  CHECK(t.table().down.size() + t.table().up.size() == entries);
}

TEST_CASE("tsrf check after overwrite follows the up entry") {
  PermRandom p(4, [](bool up, Word a, Word b) -> WordPair {
    if (!up && (a == 1 || a == 2)) return {0xc, 0xd};
    return {mix2(a, b) & 0xf, mix3(a, b, 1) & 0xf};
  });
  Tsrf t(4, p, nullptr);
  t.p(1, 0, Source::Distinguisher);
  t.p(2, 0, Source::Distinguisher);
  // down entry for (1,0) still matches, up entry points at (2,0)
  CHECK(t.check(1, 0, 0xc, 0xd, Source::Distinguisher));
  CHECK(t.check(2, 0, 0xc, 0xd, Source::Distinguisher));
  CHECK_FALSE(t.check(3, 0, 0xc, 0xd, Source::Distinguisher));
}

TEST_CASE("tsrf overwrite frequency stays under the q'^2 bound") {
  const int kTrials = 4000, kQ = 16;
  int with_overwrite = 0;
  for (int s = 0; s < kTrials; ++s) {
    PermRandom p(static_cast<std::uint64_t>(s) + 77, 8);
    Tsrf t(8, p, nullptr);
    CounterStream rng(static_cast<std::uint64_t>(s), Tag::Script);
    for (int i = 0; i < kQ; ++i) {
      Word a = rng.next() & 0xff, b = rng.next() & 0xff;
      if (rng.next() & 1)
        t.p(a, b, Source::Distinguisher);
      else
        t.p_inv(a, b, Source::Distinguisher);
    }
    if (t.overwrites() > 0) ++with_overwrite;
  }
  double frac = static_cast<double>(with_overwrite) / kTrials;
  double bound = 6.0 * kQ * kQ / 65536.0;  // plus slack for sampling error
  CHECK(frac <= bound + 0.01);
}

TEST_CASE("construction with zero round functions is the identity") {
  RoundTable zero(4, [](int, Word) -> Word { return 0; });
  FeistelPsi psi(4, 14, zero, nullptr);
  for (Word a = 0; a < 16; ++a) {
    CHECK(psi.p(a, a ^ 3, Source::Distinguisher) == WordPair{a, a ^ 3});
  }
}

TEST_CASE("construction inverts for any round table") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    RoundTable h(seed, 4);
    FeistelPsi psi(4, 14, h, nullptr);
    for (Word a = 0; a < 16; ++a)
      for (Word b = 0; b < 16; ++b) {
        WordPair o = psi.p(a, b, Source::Distinguisher);
        CHECK(psi.p_inv(o.a, o.b, Source::Distinguisher) == WordPair{a, b});
      }
  }
}

TEST_CASE("construction matches the straight-line recurrence at n=2") {
  RoundTable h(31, 2);
  FeistelPsi psi(2, 14, h, nullptr);
  RoundTable h2(31, 2);  // same seed: same table, read independently
  auto ref = [&](int i, Word x) { return h2.at(i, x); };
  for (Word a = 0; a < 4; ++a)
    for (Word b = 0; b < 4; ++b) {
      WordPair got = psi.p(a, b, Source::Distinguisher);
      WordPair want = testing_oracle::feistel_fwd(ref, a, b, 14);
      CHECK(got == want);
    }
}

TEST_CASE("construction check consults only the recorded mappings") {
  RoundTable h(8, 8);
  FeistelPsi psi(8, 14, h, nullptr);
  RoundTable h2(8, 8);
  auto ref = [&](int i, Word x) { return h2.at(i, x); };
  WordPair w = testing_oracle::feistel_fwd(ref, 5, 6, 14);
  CHECK_FALSE(psi.check(5, 6, w.a, w.b, Source::Distinguisher));
  psi.p(5, 6, Source::Distinguisher);
  CHECK(psi.check(5, 6, w.a, w.b, Source::Distinguisher));
}

TEST_CASE("partial table holes fault, filled generator covers") {
  PartialRoundTable part(8);
  part.define(3, 0x10, 0x42);
  RoundTable strict(8, part.as_generator());
  CHECK(strict.at(3, 0x10) == 0x42);
  CHECK_THROWS_AS((void)strict.at(3, 0x11), PartialHoleFault);
  RoundTable filled(8, part.as_filled_generator(99));
  CHECK(filled.at(3, 0x10) == 0x42);
  CHECK_NOTHROW((void)filled.at(3, 0x11));
}

TEST_CASE("round table entries are immutable and order-insensitive") {
  RoundTable a(123, 16), b(123, 16);
  Word v1 = a.at(3, 7);
  (void)a.at(5, 9);
  // reversed access order on the twin
  (void)b.at(5, 9);
  CHECK(b.at(3, 7) == v1);
  CHECK(a.at(3, 7) == v1);
  CHECK(a.reads() == 2);
}

TEST_CASE("randomness serializes and replays") {
  RoundTable f(55, 8);
  PermRandom p(55, 8);
  (void)f.at(1, 0xab);
  (void)f.at(14, 0x01);
  WordPair d = p.at(false, 0x10, 0x20);
  WordPair u = p.at(true, 0x30, 0x40);
  std::string js = randomness_to_json(&f, &p, 8);
  ReplayRandomness rr;
  REQUIRE(randomness_from_json(js, 8, rr));
  RoundTable f2 = rr.make_f();
  PermRandom p2 = rr.make_p();
  CHECK(f2.at(1, 0xab) == f.at(1, 0xab));
  CHECK(f2.at(14, 0x01) == f.at(14, 0x01));
  CHECK(p2.at(false, 0x10, 0x20) == d);
  CHECK(p2.at(true, 0x30, 0x40) == u);
  CHECK_THROWS_AS((void)f2.at(2, 0), PartialHoleFault);
}

TEST_CASE("full-width words behave") {
  PermRandom p(3, 32);
  Tsrf t(32, p, nullptr);
  WordPair o = t.p(0xdeadbeef, 0xcafef00d, Source::Distinguisher);
  CHECK(o.a <= word_mask(32));
  CHECK(o.b <= word_mask(32));
  CHECK(t.p(0xdeadbeef, 0xcafef00d, Source::Distinguisher) == o);
  RoundTable h(3, 32);
  FeistelPsi psi(32, 14, h, nullptr);
  WordPair e = psi.p(0xffffffff, 0x0, Source::Distinguisher);
  CHECK(psi.p_inv(e.a, e.b, Source::Distinguisher) ==
        WordPair{0xffffffff, 0x0});
}
