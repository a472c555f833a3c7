#include "feistel/sim6.hpp"

#include <algorithm>

namespace feistel {

namespace {

// round index helper: wraps 0 -> 6 and 7 -> 1
int wrap6(int k) { return ((k - 1) % 6 + 6) % 6 + 1; }

}  // namespace

void Simulator6::abort_run(Abort6::Where where, int round) {
  aborted_ = true;
  abort_ = {where, round};
  Event e;
  e.ev = Ev::Abort;
  e.i = static_cast<int>(where);
  e.l = round;
  tr_.push(e);
  throw abort_;
}

Word Simulator6::sample(int k, Word x) {
  auto& fk = f_[static_cast<size_t>(k)];
  Word y = canonical_word(seed_, Tag::Sim6Table, static_cast<std::uint64_t>(k),
                          x, bits_);
  fk.insert(x, y);
  Event e;
  e.ev = Ev::Sample;
  e.i = k;
  e.x = x;
  e.y = y;
  tr_.push(e);
  if (fk.size() > cfg_.hmax) abort_run(Abort6::HistoryCap, k);
  return y;
}

WordPair Simulator6::urp_fwd(Word l, Word r) {
  WordPair out = urp_.p(l, r, Source::Simulator);
  if (urp_.calls() > cfg_.budget) abort_run(Abort6::Budget, 0);
  return out;
}

WordPair Simulator6::urp_bwd(Word s, Word t) {
  WordPair out = urp_.p_inv(s, t, Source::Simulator);
  if (urp_.calls() > cfg_.budget) abort_run(Abort6::Budget, 0);
  return out;
}

Word Simulator6::query(Word x, int k) {
  if (aborted_) throw abort_;
  if (!in_hist(k, x)) {
    sample(k, x);
    chain_query(x, k);
  }
  Word y = hist_at(k, x);
  Event e;
  e.ev = Ev::FQuery;
  e.i = k;
  e.x = x;
  e.y = y;
  tr_.push(e);
  return y;
}

std::vector<Chain3> Simulator6::chain_set(Word x, int k, bool positive) {
  std::vector<Chain3> out;
  const auto& f1 = f_[1];
  const auto& f2 = f_[2];
  const auto& f3 = f_[3];
  const auto& f4 = f_[4];
  const auto& f5 = f_[5];
  const auto& f6 = f_[6];

  if (positive) {
    switch (k) {
      case 2:  // (Y, Z) in (F3, F4) with x = F3(Y) ^ Z
        for (const auto& [yy, fy] : f3) {
          Word z = x ^ fy;
          if (f4.contains(z)) out.push_back({yy, z, false});
        }
        break;
      case 3:  // (Z, A) in (F4, F5) with x = F4(Z) ^ A
        for (const auto& [zz, fz] : f4) {
          Word a = x ^ fz;
          if (f5.contains(a)) out.push_back({zz, a, false});
        }
        break;
      case 5: {  // (S, R) in (F6, F1*(x)); R from the inverse permutation
        for (const auto& [ss, fs] : f6) {
          WordPair lr = urp_bwd(ss, x ^ fs);
          Word r = lr.b;
          if (f1.contains(r)) {
            out.push_back({ss, r, false});
          } else {
            // extended set: some other (S', A') already maps onto r
            bool ext = false;
            for (const auto& [s2, fs2] : f6) {
              for (const auto& [a2, fa2] : f5) {
                if (a2 == x) continue;
                if (urp_bwd(s2, a2 ^ fs2).b == r) {
                  ext = true;
                  break;
                }
              }
              if (ext) break;
            }
            if (ext) out.push_back({ss, r, true});
          }
        }
        break;
      }
      case 6:  // (R, X) in (F1, F2) mapping onto x through the permutation
        for (const auto& [rr, fr] : f1)
          for (const auto& [xx, fx] : f2) {
            if (urp_fwd(xx ^ fr, rr).a == x) out.push_back({rr, xx, false});
          }
        break;
      default:
        break;
    }
  } else {
    switch (k) {
      case 1:  // (S, A) in (F6, F5) with inverse second half equal to x
        for (const auto& [ss, fs] : f6)
          for (const auto& [aa, fa] : f5) {
            if (urp_bwd(ss, aa ^ fs).b == x) out.push_back({ss, aa, false});
          }
        break;
      case 2: {  // (R, S) in (F1, F6*(x)); S from the forward permutation
        for (const auto& [rr, fr] : f1) {
          WordPair st = urp_fwd(x ^ fr, rr);
          Word s = st.a;
          if (f6.contains(s)) {
            out.push_back({rr, s, false});
          } else {
            bool ext = false;
            for (const auto& [r2, fr2] : f1) {
              for (const auto& [x2, fx2] : f2) {
                if (x2 == x) continue;
                if (urp_fwd(x2 ^ fr2, r2).a == s) {
                  ext = true;
                  break;
                }
              }
              if (ext) break;
            }
            if (ext) out.push_back({rr, s, true});
          }
        }
        break;
      }
      case 4:  // (Y, X) in (F3, F2) with x = F3(Y) ^ X
        for (const auto& [yy, fy] : f3) {
          Word xx = x ^ fy;
          if (f2.contains(xx)) out.push_back({yy, xx, false});
        }
        break;
      case 5:  // (Z, Y) in (F4, F3) with x = F4(Z) ^ Y
        for (const auto& [zz, fz] : f4) {
          Word yy = x ^ fz;
          if (f3.contains(yy)) out.push_back({zz, yy, false});
        }
        break;
      default:
        break;
    }
  }
  if (probe_) probe_->on_chain_set(x, k, positive, out);
  return out;
}

void Simulator6::chain_query(Word x, int k) {
  if (k == 1 || k == 2 || k == 5 || k == 6) xor_query_1(x, k);
  if (k == 1 || k == 3 || k == 4 || k == 6) xor_query_2(x, k);
  if (k == 3 || k == 4) xor_query_3(x, k);

  Defined defined;
  std::vector<std::pair<Word, int>> seen;
  auto merge = [&](const Defined& d) {
    for (const auto& e : d) {
      if (std::find(seen.begin(), seen.end(), e) == seen.end()) {
        seen.push_back(e);
        defined.push_back(e);
      }
    }
  };

  if (k == 2 || k == 3 || k == 5 || k == 6) {
    auto set = chain_set(x, k, true);
    maybe_shuffle(set);
    for (const auto& c : set) merge(complete_chain(true, x, c.y, c.z, k));
  }
  if (k == 1 || k == 2 || k == 4 || k == 5) {
    auto set = chain_set(x, k, false);
    maybe_shuffle(set);
    for (const auto& c : set) merge(complete_chain(false, x, c.y, c.z, k));
  }
  maybe_shuffle(defined);
  for (const auto& [xv, kv] : defined) chain_query(xv, kv);
}

bool Simulator6::tuple_completed(bool positive, Word x, Word y, Word z,
                                 int k) const {
  // rounds occupied by the triple: positive (k, k+1, k+2), negative
  // (k, k-1, k-2), wrapping through the permutation
  int ry = wrap6(positive ? k + 1 : k - 1);
  int rz = wrap6(positive ? k + 2 : k - 2);
  for (const auto& t : tuples_) {
    if (t[static_cast<size_t>(k - 1)] == x &&
        t[static_cast<size_t>(ry - 1)] == y &&
        t[static_cast<size_t>(rz - 1)] == z)
      return true;
  }
  return false;
}

Simulator6::Defined Simulator6::complete_chain(bool positive, Word x, Word y,
                                               Word z, int k) {
  Defined u;
  if (cfg_.completed_guard && tuple_completed(positive, x, y, z, k)) return u;

  Event ce;
  ce.ev = Ev::CompleteChain;
  ce.i = positive ? 1 : -1;
  ce.x = x;
  ce.y = y;
  ce.z = z;
  ce.l = k;
  tr_.push(ce);

  auto define = [&](int round, Word input) {
    if (!in_hist(round, input)) {
      sample(round, input);
      u.push_back({input, round});
    }
  };
  auto adapt = [&](int j, Word xj, Word xjm1, Word xjp1, Word xjp2) {
    // sets F_j(xj) := xjm1 ^ xjp1 and F_{j+1}(xjp1) := xj ^ xjp2
    if (in_hist(j, xj)) abort_run(Abort6::AdaptCollision, j);
    if (in_hist(j + 1, xjp1)) abort_run(Abort6::AdaptCollision, j + 1);
    f_[static_cast<size_t>(j)].insert(xj, xjm1 ^ xjp1);
    Event e1;
    e1.ev = Ev::ForceVal;
    e1.x = xj;
    e1.y = xjm1 ^ xjp1;
    e1.l = j;
    tr_.push(e1);
    f_[static_cast<size_t>(j + 1)].insert(xjp1, xj ^ xjp2);
    Event e2;
    e2.ev = Ev::ForceVal;
    e2.x = xjp1;
    e2.y = xj ^ xjp2;
    e2.l = j + 1;
    tr_.push(e2);
    u.push_back({xj, j});
    u.push_back({xjp1, j + 1});
    if (f_[static_cast<size_t>(j)].size() > cfg_.hmax)
      abort_run(Abort6::HistoryCap, j);
    if (f_[static_cast<size_t>(j + 1)].size() > cfg_.hmax)
      abort_run(Abort6::HistoryCap, j + 1);
  };

  // virtual chains: define the missing endpoint first
  if (!positive && k == 2 && !in_hist(6, z)) define(6, z);
  if (positive && k == 5 && !in_hist(1, z)) define(1, z);

  Word R, X, Y, Z, A, S, L, T;
  if (!positive && k == 1) {  // triple (A,S,R) = (z,y,x)
    A = z, S = y, R = x;
    Z = S ^ hist_at(5, A);
    define(4, Z);
    Y = A ^ hist_at(4, Z);
    T = A ^ hist_at(6, S);
    L = urp_bwd(S, T).a;
    X = L ^ hist_at(1, R);
    adapt(2, X, R, Y, Z);
  } else if (positive && k == 2) {  // triple (X,Y,Z) = (x,y,z)
    X = x, Y = y, Z = z;
    A = Y ^ hist_at(4, Z);
    R = Y ^ hist_at(2, X);
    define(1, R);
    L = X ^ hist_at(1, R);
    WordPair st = urp_fwd(L, R);
    S = st.a, T = st.b;
    adapt(5, A, Z, S, T);
  } else if (!positive && k == 2) {  // triple (S,R,X) = (z,y,x)
    S = z, R = y, X = x;
    Y = R ^ hist_at(2, X);
    define(3, Y);
    Z = X ^ hist_at(3, Y);
    L = X ^ hist_at(1, R);
    T = urp_fwd(L, R).b;
    A = T ^ hist_at(6, S);
    adapt(4, Z, Y, A, S);
  } else if (positive && k == 3) {  // triple (Y,Z,A) = (x,y,z)
    Y = x, Z = y, A = z;
    S = Z ^ hist_at(5, A);
    define(6, S);
    T = A ^ hist_at(6, S);
    WordPair lr = urp_bwd(S, T);
    L = lr.a, R = lr.b;
    X = Z ^ hist_at(3, Y);
    adapt(1, R, L, X, Y);
  } else if (!positive && k == 4) {  // triple (X,Y,Z) = (z,y,x)
    X = z, Y = y, Z = x;
    A = Y ^ hist_at(4, Z);
    R = Y ^ hist_at(2, X);
    define(1, R);
    L = X ^ hist_at(1, R);
    WordPair st = urp_fwd(L, R);
    S = st.a, T = st.b;
    adapt(5, A, Z, S, T);
  } else if (positive && k == 5) {  // triple (A,S,R) = (x,y,z)
    A = x, S = y, R = z;
    Z = S ^ hist_at(5, A);
    define(4, Z);
    Y = A ^ hist_at(4, Z);
    T = A ^ hist_at(6, S);
    L = urp_bwd(S, T).a;
    X = L ^ hist_at(1, R);
    adapt(2, X, R, Y, Z);
  } else if (!positive && k == 5) {  // triple (Y,Z,A) = (z,y,x)
    Y = z, Z = y, A = x;
    S = Z ^ hist_at(5, A);
    define(6, S);
    T = A ^ hist_at(6, S);
    WordPair lr = urp_bwd(S, T);
    L = lr.a, R = lr.b;
    X = Z ^ hist_at(3, Y);
    adapt(1, R, L, X, Y);
  } else if (positive && k == 6) {  // triple (S,R,X) = (x,y,z)
    S = x, R = y, X = z;
    Y = R ^ hist_at(2, X);
    define(3, Y);
    Z = X ^ hist_at(3, Y);
    L = X ^ hist_at(1, R);
    T = urp_fwd(L, R).b;
    A = T ^ hist_at(6, S);
    adapt(4, Z, Y, A, S);
  } else {
    return u;  // unreachable combination
  }

  tuples_.push_back({R, X, Y, Z, A, S});
  return u;
}

void Simulator6::xor_query_1(Word x, int k) {
  const auto& f1 = f_[1];
  const auto& f2 = f_[2];
  const auto& f5 = f_[5];
  const auto& f6 = f_[6];

  auto fire = [&](Word v, int round) {
    if (in_hist(round, v)) return;
    Event e;
    e.ev = Ev::XorQuery;
    e.i = 1;
    e.x = v;
    e.l = round;
    tr_.push(e);
    if (probe_) probe_->on_xor_fire(1, v, round);
    sample(round, v);
    chain_query(v, round);
  };

  if (k == 5 || k == 1) {
    std::vector<Word> cand;
    auto push = [&](Word v) {
      if (!f5.contains(v) &&
          std::find(cand.begin(), cand.end(), v) == cand.end())
        cand.push_back(v);
    };
    if (k == 5) {
      for (std::size_t i = 0; i < f1.size(); ++i)
        for (std::size_t j = i + 1; j < f1.size(); ++j)
          push(x ^ f1.items()[i].first ^ f1.items()[j].first);
    } else {
      for (const auto& [a, fa] : f5)
        for (const auto& [r2, fr2] : f1) push(a ^ x ^ r2);
    }
    for (Word a1 : cand) {
      bool hit = false;
      for (const auto& [s1, fs1] : f6) {
        if (f1.contains(urp_bwd(s1, fs1 ^ a1).b)) {
          hit = true;
          break;
        }
      }
      if (hit) fire(a1, 5);
    }
  }
  if (k == 2 || k == 6) {
    std::vector<Word> cand;
    auto push = [&](Word v) {
      if (!f2.contains(v) &&
          std::find(cand.begin(), cand.end(), v) == cand.end())
        cand.push_back(v);
    };
    if (k == 2) {
      for (std::size_t i = 0; i < f6.size(); ++i)
        for (std::size_t j = i + 1; j < f6.size(); ++j)
          push(x ^ f6.items()[i].first ^ f6.items()[j].first);
    } else {
      for (const auto& [xx, fx] : f2)
        for (const auto& [s2, fs2] : f6) push(xx ^ x ^ s2);
    }
    for (Word x1 : cand) {
      bool hit = false;
      for (const auto& [r1, fr1] : f1) {
        if (f6.contains(urp_fwd(fr1 ^ x1, r1).a)) {
          hit = true;
          break;
        }
      }
      if (hit) fire(x1, 2);
    }
  }
}

void Simulator6::xor_query_2(Word x, int k) {
  const auto& f1 = f_[1];
  const auto& f2 = f_[2];
  const auto& f3 = f_[3];
  const auto& f4 = f_[4];
  const auto& f5 = f_[5];
  const auto& f6 = f_[6];

  auto fire = [&](Word v, int round) {
    if (in_hist(round, v)) return;
    Event e;
    e.ev = Ev::XorQuery;
    e.i = 2;
    e.x = v;
    e.l = round;
    tr_.push(e);
    if (probe_) probe_->on_xor_fire(2, v, round);
    sample(round, v);
    chain_query(v, round);
  };

  // both comprehensions are evaluated on every call; only the conditions
  // are gated on the round
  {
    // tuples (L,R,Z,A,S) reachable from below with R outside F1
    struct Tup {
      Word l, r, z;
    };
    std::vector<Tup> m;
    for (const auto& [a, fa] : f5)
      for (const auto& [s, fs] : f6) {
        WordPair lr = urp_bwd(s, a ^ fs);
        if (f1.contains(lr.b)) continue;
        m.push_back({lr.a, lr.b, fa ^ s});
      }
    for (const auto& t : m) {
      bool hit = false;
      if (k == 6) {
        for (const auto& [z2, fz2] : f4) {
          if (z2 == t.z) continue;
          if (urp_fwd(t.l ^ t.z ^ z2, t.r).a == x) {
            hit = true;
            break;
          }
        }
      } else if (k == 3) {
        hit = f6.contains(urp_fwd(t.l ^ x ^ t.z, t.r).a);
      }
      if (hit) fire(t.r, 1);
    }
  }
  {
    struct Tup {
      Word s, t, y;
    };
    std::vector<Tup> m;
    for (const auto& [xx, fx] : f2)
      for (const auto& [r, fr] : f1) {
        WordPair st = urp_fwd(xx ^ fr, r);
        if (f6.contains(st.a)) continue;
        m.push_back({st.a, st.b, fx ^ r});
      }
    for (const auto& t : m) {
      bool hit = false;
      if (k == 1) {
        for (const auto& [y2, fy2] : f3) {
          if (y2 == t.y) continue;
          if (urp_bwd(t.s, t.t ^ t.y ^ y2).b == x) {
            hit = true;
            break;
          }
        }
      } else if (k == 4) {
        hit = f1.contains(urp_bwd(t.s, t.t ^ x ^ t.y).b);
      }
      if (hit) fire(t.s, 6);
    }
  }
}

void Simulator6::xor_query_3(Word x, int k) {
  const auto& f1 = f_[1];
  const auto& f2 = f_[2];
  const auto& f3 = f_[3];
  const auto& f4 = f_[4];
  const auto& f5 = f_[5];
  const auto& f6 = f_[6];

  auto fire = [&](Word v, int round) {
    if (in_hist(round, v)) return;
    Event e;
    e.ev = Ev::XorQuery;
    e.i = 3;
    e.x = v;
    e.l = round;
    tr_.push(e);
    if (probe_) probe_->on_xor_fire(3, v, round);
    sample(round, v);
    chain_query(v, round);
  };

  {
    // bottom paths (Y <- Z <- A <- S -> R), grouped by Y not in F3
    struct Path {
      Word y, r;
      std::uint64_t key;
    };
    std::vector<Path> paths;
    for (const auto& [a, fa] : f5)
      for (const auto& [s, fs] : f6) {
        Word z = fa ^ s;
        if (!f4.contains(z)) continue;
        Word y = a ^ f4.at(z);
        if (f3.contains(y)) continue;
        Word r = urp_bwd(s, a ^ fs).b;
        paths.push_back({y, r, pack_pair(a, s)});
      }
    for (std::size_t i = 0; k == 3 && i < paths.size(); ++i)
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        if (paths[i].y != paths[j].y || paths[i].key == paths[j].key) continue;
        if (paths[i].y == (x ^ paths[i].r ^ paths[j].r)) {
          fire(paths[i].y, 3);
          return;
        }
      }
  }
  {
    // top paths (Z <- X <- R, through Y), grouped by Z not in F4
    struct Path {
      Word z, s;
      std::uint64_t key;
    };
    std::vector<Path> paths;
    for (const auto& [xx, fx] : f2)
      for (const auto& [r, fr] : f1) {
        Word y = fx ^ r;
        if (!f3.contains(y)) continue;
        Word z = xx ^ f3.at(y);
        if (f4.contains(z)) continue;
        Word s = urp_fwd(xx ^ fr, r).a;
        paths.push_back({z, s, pack_pair(xx, r)});
      }
    for (std::size_t i = 0; k == 4 && i < paths.size(); ++i)
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        if (paths[i].z != paths[j].z || paths[i].key == paths[j].key) continue;
        if (paths[i].z == (x ^ paths[i].s ^ paths[j].s)) {
          fire(paths[i].z, 4);
          return;
        }
      }
  }
}

}  // namespace feistel
