#include "feistel/sim14.hpp"

namespace feistel {

Word Simulator14::f_query(int i, Word x) {
  f_inner(i, x);
  while (!q_.empty()) {
    QueuedChain c = q_.front();
    q_.pop_front();
    bool skip = completed(c.x, c.y, c.k);
    Event de;
    de.ev = Ev::Dequeue;
    de.x = c.x;
    de.y = c.y;
    de.i = c.k;
    de.l = c.l;
    de.flag = skip;
    tr_.push(de);
    if (skip) continue;
    WordPair lo = eval_fwd(c.x, c.y, c.k, c.l - 2);
    WordPair hi = eval_bwd(c.x, c.y, c.k, c.l + 2);
    adapt(lo.a, lo.b, hi.a, hi.b, c.l);
    WordPair top = eval_bwd(c.x, c.y, c.k, 1);
    WordPair mid = eval_fwd(top.a, top.b, 1, 7);
    completed1_.insert(pack_pair(top.a, top.b));
    completed7_.insert(pack_pair(mid.a, mid.b));
  }
  Word y = g_[static_cast<size_t>(i)].at(x);
  Event e;
  e.ev = Ev::FQuery;
  e.i = i;
  e.x = x;
  e.y = y;
  tr_.push(e);
  return y;
}

Word Simulator14::f_inner(int i, Word x) {
  auto& gi = g_[static_cast<size_t>(i)];
  if (!gi.contains(x)) {
    Word y = f_.at(i, x);
    if (hooks_) hooks_->on_f_assign(i, x, y);
    gi.insert(x, y);
    Event e;
    e.ev = Ev::Sample;
    e.i = i;
    e.x = x;
    e.y = y;
    tr_.push(e);
    if (i == 2 || i == 7 || i == 8 || i == 13) enq_new_chains(i, x);
  }
  return gi.at(x);
}

void Simulator14::enq_new_chains(int i, Word x) {
  auto enq = [&](Word a, Word b, int k, int l) {
    q_.push_back({a, b, k, l});
    Event e;
    e.ev = Ev::Enqueue;
    e.x = a;
    e.y = b;
    e.i = k;
    e.l = l;
    tr_.push(e);
  };
  const auto& g1 = g_[1];
  const auto& g2 = g_[2];
  const auto& g7 = g_[7];
  const auto& g8 = g_[8];
  const auto& g13 = g_[13];
  const auto& g14 = g_[14];
  if (i == 2) {
    for (const auto& [x1, y1] : g1)
      for (const auto& [x13, y13] : g13)
        for (const auto& [x14, y14] : g14)
          if (backend_.check(x ^ y1, x1, x14, x13 ^ y14, Source::Simulator))
            enq(x1, x, 1, 4);
  } else if (i == 13) {
    for (const auto& [x1, y1] : g1)
      for (const auto& [x2, y2] : g2)
        for (const auto& [x14, y14] : g14)
          if (backend_.check(x2 ^ y1, x1, x14, x ^ y14, Source::Simulator))
            enq(x1, x2, 1, 10);
  } else if (i == 7) {
    for (const auto& [x8, y8] : g8) enq(x, x8, 7, 4);
  } else if (i == 8) {
    for (const auto& [x7, y7] : g7) enq(x7, x, 7, 10);
  }
}

void Simulator14::adapt(Word x_lm2, Word x_lm1, Word x_lp2, Word x_lp3, int l) {
  ++adapt_calls_;
  // the buffer rounds l-1 and l+2 are never detect rounds, so sampling them
  // through f_inner enqueues nothing
  Word x_l = x_lm2 ^ f_inner(l - 1, x_lm1);
  Word x_lp1 = x_lp3 ^ f_inner(l + 2, x_lp2);
  force_val(x_l, x_lp1 ^ x_lm1, l);
  force_val(x_lp1, x_l ^ x_lp2, l + 1);
}

void Simulator14::force_val(Word x, Word y, int l) {
  Event e;
  e.ev = Ev::ForceVal;
  e.x = x;
  e.y = y;
  e.l = l;
  tr_.push(e);
  const Word* prev = g_[static_cast<size_t>(l)].set(x, y);
  if (prev && *prev != y) {
    ++overwrite_events_;
    Event ow;
    ow.ev = Ev::Overwrite;
    ow.x = x;
    ow.y = *prev;
    ow.z = y;
    ow.l = l;
    tr_.push(ow);
    if (policy_ == OverwritePolicy::FaultFast) throw OverwriteFault(x, l);
  }
}

WordPair Simulator14::eval_fwd(Word xk, Word xk1, int k, int l) {
  Word a = xk, b = xk1;
  while (k != l) {
    if (k == 14) {
      WordPair top = backend_.p_inv(a, b, Source::Simulator);
      a = top.a;
      b = top.b;
      k = 0;
    } else {
      Word nxt = a ^ f_inner(k + 1, b);
      a = b;
      b = nxt;
      ++k;
    }
  }
  return {a, b};
}

WordPair Simulator14::eval_bwd(Word xk, Word xk1, int k, int l) {
  Word a = xk, b = xk1;
  while (k != l) {
    if (k == 0) {
      WordPair bot = backend_.p(a, b, Source::Simulator);
      a = bot.a;
      b = bot.b;
      k = 14;
    } else {
      Word prv = b ^ f_inner(k, a);
      b = a;
      a = prv;
      --k;
    }
  }
  return {a, b};
}

std::size_t Simulator14::max_table_size() const {
  std::size_t m = 0;
  for (int i = 1; i <= 14; ++i)
    m = std::max(m, g_[static_cast<size_t>(i)].size());
  return m;
}

}  // namespace feistel
