#include "feistel/monitor.hpp"

#include <unordered_map>

namespace feistel {

const char* bad_event_name(BadEvent::Kind k) {
  switch (k) {
    case BadEvent::Kind::BadP: return "badp";
    case BadEvent::Kind::BadlyHit: return "badlyhit";
    case BadEvent::Kind::BadlyCollide: return "badlycollide";
  }
  return "?";
}

std::string BadEvent::json(int) const {
  return std::string("{\"kind\":\"") + bad_event_name(kind) +
         "\",\"at\":" + std::to_string(location) + ",\"witness\":" + witness +
         "}";
}

void ChainMonitor::on_p_draw(bool up, WordPair in, WordPair out) {
  const PermTable& pt = sim_.view().perm();
  int bits = sim_.bits();
  bool bad = false;
  std::string w;
  if (!up) {
    // fresh (x14,x15) drawn for (x0,x1)
    if (pt.up.contains(pack_pair(out.a, out.b))) {
      bad = true;
      w = "{\"clause\":\"up-entry-exists\"";
    } else if (sim_.table(14).contains(out.a)) {
      bad = true;
      w = "{\"clause\":\"x14-in-g14\"";
    }
  } else {
    if (pt.down.contains(pack_pair(out.a, out.b))) {
      bad = true;
      w = "{\"clause\":\"down-entry-exists\"";
    } else if (sim_.table(1).contains(out.b)) {
      bad = true;
      w = "{\"clause\":\"x1-in-g1\"";
    }
  }
  if (bad) {
    w += ",\"in\":[\"" + word_hex(in.a, bits) + "\",\"" + word_hex(in.b, bits) +
         "\"],\"out\":[\"" + word_hex(out.a, bits) + "\",\"" +
         word_hex(out.b, bits) + "\"]}";
    events_.push_back({BadEvent::Kind::BadP, tr_.size(), w});
  }
}

void ChainMonitor::on_f_assign(int i, Word x, Word y) {
  StateView pre = sim_.view();
  StateView post = pre.with_entry(i, x, y);
  check_badly_hit(post, i, x);
  if (cfg_.track_collides) check_badly_collide(pre, post, i, x);
}

void ChainMonitor::check_badly_hit(const StateView& post, int i, Word x) {
  int bits = sim_.bits();
  auto fire = [&](const Chain& c, const char* clause) {
    std::string w = std::string("{\"clause\":\"") + clause + "\",\"chain\":[\"" +
                    word_hex(c.a, bits) + "\",\"" + word_hex(c.b, bits) +
                    "\"," + std::to_string(c.k) + "]}";
    events_.push_back({BadEvent::Kind::BadlyHit, tr_.size(), w});
  };

  // chains (x, b, i) extendable two steps backward
  auto scan_forward_of = [&](Word b) {
    Chain c{x, b, i};
    if (!table_defined(post, c)) return;
    auto p1 = prev_chain(post, c);
    if (p1 && prev_chain(post, *p1)) fire(c, "prev2");
  };
  if (i < 14) {
    for (Word b : post.g_keys(i + 1)) scan_forward_of(b);
  } else {
    for (const auto& [key, img] : post.perm().up)
      if ((key >> 32) == x) scan_forward_of(key & 0xffffffffull);
  }

  // chains (w, x, i-1) extendable two steps forward
  auto scan_backward_of = [&](Word w) {
    Chain c{w, x, i - 1};
    if (!table_defined(post, c)) return;
    auto n1 = next_chain(post, c);
    if (n1 && next_chain(post, *n1)) fire(c, "next2");
  };
  if (i - 1 >= 1) {
    for (Word w : post.g_keys(i - 1)) scan_backward_of(w);
  } else {
    for (const auto& [key, img] : post.perm().down)
      if ((key & 0xffffffffull) == x) scan_backward_of(key >> 32);
  }
}

void ChainMonitor::check_badly_collide(const StateView& pre,
                                       const StateView& post, int i, Word x) {
  int bits = sim_.bits();
  std::vector<Chain> chains = enumerate_table_defined(post);
  std::size_t n = chains.size();
  if (n < 2) return;

  // index chains for the link scan
  std::array<std::unordered_map<std::uint64_t, std::size_t>, 15> at;
  for (std::size_t ci = 0; ci < n; ++ci)
    at[static_cast<size_t>(chains[ci].k)][pack_pair(chains[ci].a,
                                                    chains[ci].b)] = ci;

  // pre-state equivalence classes via union-find over step links
  std::vector<std::size_t> parent(n);
  for (std::size_t ci = 0; ci < n; ++ci) parent[ci] = ci;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
  auto link = [&](std::size_t ci, const std::optional<Chain>& d) {
    if (!d) return;
    auto it = at[static_cast<size_t>(d->k)].find(pack_pair(d->a, d->b));
    if (it != at[static_cast<size_t>(d->k)].end()) unite(ci, it->second);
  };
  for (std::size_t ci = 0; ci < n; ++ci) {
    link(ci, next_chain(pre, chains[ci]));
    link(ci, prev_chain(pre, chains[ci]));
  }

  std::vector<ValVec> before[2], after[2];
  for (int s = 0; s < 2; ++s) {
    before[s].resize(n);
    after[s].resize(n);
  }
  for (std::size_t ci = 0; ci < n; ++ci) {
    before[0][ci] = val_vec(pre, chains[ci], true);
    before[1][ci] = val_vec(pre, chains[ci], false);
    after[0][ci] = val_vec(post, chains[ci], true);
    after[1][ci] = val_vec(post, chains[ci], false);
  }

  // bucket the after-values by (position, value)
  struct Entry {
    std::size_t ci;
    int sigma;
  };
  std::unordered_map<std::uint64_t, std::vector<Entry>> buckets;
  for (std::size_t ci = 0; ci < n; ++ci)
    for (int s = 0; s < 2; ++s)
      for (int l = 0; l <= 15; ++l)
        if (after[s][ci][static_cast<size_t>(l)])
          buckets[(static_cast<std::uint64_t>(l) << 33) |
                  *after[s][ci][static_cast<size_t>(l)]]
              .push_back({ci, s});

  int fired = 0;
  for (auto& [key, es] : buckets) {
    if (es.size() < 2) continue;
    int l = static_cast<int>(key >> 33);
    for (std::size_t u = 0; u < es.size() && fired < cfg_.max_witnesses_per_assign; ++u) {
      for (std::size_t v2 = u + 1;
           v2 < es.size() && fired < cfg_.max_witnesses_per_assign; ++v2) {
        auto [ci, s1] = es[u];
        auto [dj, s2] = es[v2];
        if (ci == dj) continue;
        bool blank_before = !before[s1][ci][static_cast<size_t>(l)] ||
                            !before[s2][dj][static_cast<size_t>(l)];
        if (!blank_before) continue;
        if (find(ci) == find(dj)) continue;
        const Chain& c = chains[ci];
        const Chain& d = chains[dj];
        std::string w = "{\"l\":" + std::to_string(l) + ",\"v\":\"" +
                        word_hex(key & 0x1ffffffffull, bits) + "\",\"c\":[\"" +
                        word_hex(c.a, bits) + "\",\"" + word_hex(c.b, bits) +
                        "\"," + std::to_string(c.k) + "],\"d\":[\"" +
                        word_hex(d.a, bits) + "\",\"" + word_hex(d.b, bits) +
                        "\"," + std::to_string(d.k) + "]}";
        events_.push_back({BadEvent::Kind::BadlyCollide, tr_.size(), w});
        ++fired;
      }
    }
  }
  (void)i;
  (void)x;
}

}  // namespace feistel
