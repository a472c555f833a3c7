#include "feistel/ideal.hpp"

namespace feistel {

namespace {

void emit_pquery(Transcript* tr, bool up, WordPair in, WordPair out,
                 Source src) {
  if (!tr) return;
  Event e;
  e.ev = Ev::PQuery;
  e.src = static_cast<std::uint8_t>(src);
  e.i = up ? 1 : 0;
  e.x = in.a;
  e.y = in.b;
  e.z = out.a;
  e.w = out.b;
  tr->push(e);
}

void emit_check(Transcript* tr, Word x0, Word x1, Word xr, Word xr1, bool r,
                Source src) {
  if (!tr) return;
  Event e;
  e.ev = Ev::Check;
  e.src = static_cast<std::uint8_t>(src);
  e.x = x0;
  e.y = x1;
  e.z = xr;
  e.w = xr1;
  e.flag = r;
  tr->push(e);
}

}  // namespace

WordPair Urp::fresh_forward(Word x0, Word x1) {
  WordPair out = p_.at(false, x0, x1);
  while (t_.up.contains(pack_pair(out.a, out.b))) {
    std::uint64_t v = retry_.next();
    out = {v & word_mask(bits_), (v >> 32) & word_mask(bits_)};
  }
  t_.down.insert(pack_pair(x0, x1), out);
  t_.up.insert(pack_pair(out.a, out.b), {x0, x1});
  drawn_.push_back(out);
  return out;
}

WordPair Urp::fresh_backward(Word x14, Word x15) {
  WordPair out = p_.at(true, x14, x15);
  while (t_.down.contains(pack_pair(out.a, out.b))) {
    std::uint64_t v = retry_.next();
    out = {v & word_mask(bits_), (v >> 32) & word_mask(bits_)};
  }
  t_.up.insert(pack_pair(x14, x15), out);
  t_.down.insert(pack_pair(out.a, out.b), {x14, x15});
  drawn_.push_back(out);
  return out;
}

WordPair Urp::p(Word x0, Word x1, Source src) {
  ++calls_;
  WordPair out;
  if (const WordPair* v = t_.down.find(pack_pair(x0, x1))) out = *v;
  else out = fresh_forward(x0, x1);
  emit_pquery(tr_, false, {x0, x1}, out, src);
  return out;
}

WordPair Urp::p_inv(Word x14, Word x15, Source src) {
  ++calls_;
  WordPair out;
  if (const WordPair* v = t_.up.find(pack_pair(x14, x15))) out = *v;
  else out = fresh_backward(x14, x15);
  emit_pquery(tr_, true, {x14, x15}, out, src);
  return out;
}

bool Urp::check(Word x0, Word x1, Word x14, Word x15, Source src) {
  WordPair out = p(x0, x1, src);
  bool r = out == WordPair{x14, x15};
  emit_check(tr_, x0, x1, x14, x15, r, src);
  return r;
}

WordPair Tsrf::p(Word x0, Word x1, Source src) {
  ++n_down_;
  std::uint64_t k = pack_pair(x0, x1);
  if (!t_.down.contains(k)) {
    WordPair out = p_.at(false, x0, x1);
    ++p_reads_;
    if (hooks_) hooks_->on_p_draw(false, {x0, x1}, out);
    t_.down.insert(k, out);
    if (t_.up.set(pack_pair(out.a, out.b), {x0, x1})) ++overwrites_;
  }
  WordPair out = t_.down.at(k);
  emit_pquery(tr_, false, {x0, x1}, out, src);
  return out;
}

WordPair Tsrf::p_inv(Word x14, Word x15, Source src) {
  ++n_up_;
  std::uint64_t k = pack_pair(x14, x15);
  if (!t_.up.contains(k)) {
    WordPair out = p_.at(true, x14, x15);
    ++p_reads_;
    if (hooks_) hooks_->on_p_draw(true, {x14, x15}, out);
    if (t_.down.set(pack_pair(out.a, out.b), {x14, x15})) ++overwrites_;
    t_.up.insert(k, out);
  }
  WordPair out = t_.up.at(k);
  emit_pquery(tr_, true, {x14, x15}, out, src);
  return out;
}

bool Tsrf::check(Word x0, Word x1, Word x14, Word x15, Source src) {
  ++n_check_;
  bool r = false;
  if (const WordPair* v = t_.down.find(pack_pair(x0, x1))) {
    r = *v == WordPair{x14, x15};
  } else if (const WordPair* v2 = t_.up.find(pack_pair(x14, x15))) {
    r = *v2 == WordPair{x0, x1};
  }
  emit_check(tr_, x0, x1, x14, x15, r, src);
  return r;
}

WordPair FeistelPsi::p(Word x0, Word x1, Source src) {
  Word a = x0, b = x1;
  for (int i = 2; i <= rounds_ + 1; ++i) {
    Word nxt = a ^ h_.at(i - 1, b);
    a = b;
    b = nxt;
  }
  t_.down.set(pack_pair(x0, x1), {a, b});
  t_.up.set(pack_pair(a, b), {x0, x1});
  emit_pquery(tr_, false, {x0, x1}, {a, b}, src);
  return {a, b};
}

WordPair FeistelPsi::p_inv(Word xr, Word xr1, Source src) {
  Word a = xr, b = xr1;  // positions (r, r+1), walking down to (0, 1)
  for (int i = rounds_ - 1; i >= 0; --i) {
    Word prv = b ^ h_.at(i + 1, a);
    b = a;
    a = prv;
  }
  t_.down.set(pack_pair(a, b), {xr, xr1});
  t_.up.set(pack_pair(xr, xr1), {a, b});
  emit_pquery(tr_, true, {xr, xr1}, {a, b}, src);
  return {a, b};
}

bool FeistelPsi::check(Word x0, Word x1, Word xr, Word xr1, Source src) {
  bool r = false;
  if (const WordPair* v = t_.down.find(pack_pair(x0, x1))) {
    r = *v == WordPair{xr, xr1};
  } else if (const WordPair* v2 = t_.up.find(pack_pair(xr, xr1))) {
    r = *v2 == WordPair{x0, x1};
  }
  emit_check(tr_, x0, x1, xr, xr1, r, src);
  return r;
}

}  // namespace feistel
