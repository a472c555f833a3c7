#include "feistel/chains.hpp"

#include <array>
#include <unordered_set>

#include "feistel/rng.hpp"

namespace feistel {

namespace {

// Exact visited set for chain walks: one key set per position.
struct ChainSet {
  std::array<std::unordered_set<std::uint64_t>, 15> per_k;
  bool insert(const Chain& c) {
    return per_k[static_cast<size_t>(c.k)].insert(pack_pair(c.a, c.b)).second;
  }
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& s : per_k) n += s.size();
    return n;
  }
};

}  // namespace

std::optional<Chain> next_chain(const StateView& v, const Chain& c) {
  if (c.k < 14) {
    auto g = v.g_at(c.k + 1, c.b);
    if (!g) return std::nullopt;
    return Chain{c.b, c.a ^ *g, c.k + 1};
  }
  if (const WordPair* m = v.perm().find(true, c.a, c.b))
    return Chain{m->a, m->b, 0};
  return std::nullopt;
}

std::optional<Chain> prev_chain(const StateView& v, const Chain& c) {
  if (c.k > 0) {
    auto g = v.g_at(c.k, c.a);
    if (!g) return std::nullopt;
    return Chain{c.b ^ *g, c.a, c.k - 1};
  }
  if (const WordPair* m = v.perm().find(false, c.a, c.b))
    return Chain{m->a, m->b, 14};
  return std::nullopt;
}

std::size_t walk_cap(const StateView& v) {
  return 15 * (v.perm_size() + 1) + 15;
}

ValVec val_vec(const StateView& v, const Chain& c, bool forward,
               Transcript* warn) {
  ValVec out;
  Chain cur = c;
  std::size_t cap = walk_cap(v);
  for (std::size_t step = 0;; ++step) {
    if (!out[static_cast<size_t>(cur.k)]) out[static_cast<size_t>(cur.k)] = cur.a;
    if (!out[static_cast<size_t>(cur.k) + 1])
      out[static_cast<size_t>(cur.k) + 1] = cur.b;
    if (step >= cap) {
      if (warn) {
        Event e;
        e.ev = Ev::CycleWarning;
        e.x = c.a;
        e.y = c.b;
        e.i = c.k;
        warn->push(e);
      }
      break;
    }
    auto nxt = forward ? next_chain(v, cur) : prev_chain(v, cur);
    if (!nxt) break;
    cur = *nxt;
    bool fresh = !out[static_cast<size_t>(cur.k)] ||
                 !out[static_cast<size_t>(cur.k) + 1];
    if (!fresh && *out[static_cast<size_t>(cur.k)] == cur.a &&
        *out[static_cast<size_t>(cur.k) + 1] == cur.b) {
      break;  // walk is looping over already-recorded values
    }
  }
  return out;
}

std::optional<Word> val_plus(const StateView& v, int i, const Chain& c,
                             Transcript* warn) {
  return val_vec(v, c, true, warn)[static_cast<size_t>(i)];
}

std::optional<Word> val_minus(const StateView& v, int i, const Chain& c,
                              Transcript* warn) {
  return val_vec(v, c, false, warn)[static_cast<size_t>(i)];
}

std::optional<Word> val(const StateView& v, int i, const Chain& c,
                        Transcript* warn) {
  auto p = val_plus(v, i, c, warn);
  if (p) return p;
  return val_minus(v, i, c, warn);
}

bool equivalent(const StateView& v, const Chain& c, const Chain& d) {
  if (c == d) return true;
  ChainSet seen;
  std::vector<Chain> frontier{c};
  seen.insert(c);
  std::size_t cap = walk_cap(v);
  while (!frontier.empty() && seen.size() <= cap) {
    Chain cur = frontier.back();
    frontier.pop_back();
    for (auto step : {next_chain(v, cur), prev_chain(v, cur)}) {
      if (!step) continue;
      if (*step == d) return true;
      if (seen.insert(*step)) frontier.push_back(*step);
    }
  }
  return false;
}

bool table_defined(const StateView& v, const Chain& c) {
  return next_chain(v, c).has_value() && prev_chain(v, c).has_value();
}

std::vector<Chain> enumerate_table_defined(const StateView& v) {
  std::vector<Chain> out;
  for (int k = 1; k <= 13; ++k) {
    for (Word a : v.g_keys(k))
      for (Word b : v.g_keys(k + 1)) out.push_back(Chain{a, b, k});
  }
  for (const auto& [key, img] : v.perm().down) {
    Chain c{key >> 32, key & 0xffffffffull, 0};
    if (v.g_contains(1, c.b)) out.push_back(c);
  }
  for (const auto& [key, img] : v.perm().up) {
    Chain c{key >> 32, key & 0xffffffffull, 14};
    if (v.g_contains(14, c.a)) out.push_back(c);
  }
  return out;
}

}  // namespace feistel
