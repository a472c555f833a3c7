#include "feistel/attacks.hpp"

#include <json.hpp>
#include <unordered_map>
#include <unordered_set>

#include "feistel/rng.hpp"

namespace feistel {

namespace {

Word eval_expr(const Expr& e, const std::vector<WordPair>& env) {
  switch (e.k) {
    case Expr::K::Const:
      return e.c;
    case Expr::K::Ref:
      return e.comp == 0 ? env[static_cast<size_t>(e.step)].a
                         : env[static_cast<size_t>(e.step)].b;
    case Expr::K::Xor: {
      Word v = 0;
      for (const auto& t : e.terms) v ^= eval_expr(t, env);
      return v;
    }
  }
  return 0;
}

nlohmann::json expr_json(const Expr& e, int bits) {
  nlohmann::json j;
  switch (e.k) {
    case Expr::K::Const:
      j["c"] = word_hex(e.c, bits);
      break;
    case Expr::K::Ref:
      j["r"] = {e.step, e.comp};
      break;
    case Expr::K::Xor: {
      auto arr = nlohmann::json::array();
      for (const auto& t : e.terms) arr.push_back(expr_json(t, bits));
      j["x"] = arr;
      break;
    }
  }
  return j;
}

std::optional<Expr> expr_from_json(const nlohmann::json& j) {
  if (j.contains("c")) {
    Word w;
    if (!parse_word_hex(j["c"].get<std::string>(), w)) return std::nullopt;
    return Expr::cnst(w);
  }
  if (j.contains("r")) return Expr::ref(j["r"][0].get<int>(), j["r"][1].get<int>());
  if (j.contains("x")) {
    std::vector<Expr> ts;
    for (const auto& t : j["x"]) {
      auto e = expr_from_json(t);
      if (!e) return std::nullopt;
      ts.push_back(*e);
    }
    return Expr::xr(std::move(ts));
  }
  return std::nullopt;
}

}  // namespace

std::string Script::to_json() const {
  nlohmann::ordered_json j;
  j["bits"] = bits;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    nlohmann::ordered_json js;
    switch (s.k) {
      case ScriptStep::K::F:
        js["op"] = "f";
        js["i"] = s.round;
        js["x"] = expr_json(s.a, bits);
        break;
      case ScriptStep::K::P:
        js["op"] = "p";
        js["a"] = expr_json(s.a, bits);
        js["b"] = expr_json(s.b, bits);
        break;
      case ScriptStep::K::Pinv:
        js["op"] = "pinv";
        js["a"] = expr_json(s.a, bits);
        js["b"] = expr_json(s.b, bits);
        break;
    }
    arr.push_back(js);
  }
  j["steps"] = arr;
  return j.dump();
}

std::optional<Script> Script::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("bits") ||
      !j.contains("steps"))
    return std::nullopt;
  Script s;
  s.bits = j["bits"].get<int>();
  for (const auto& js : j["steps"]) {
    ScriptStep st;
    std::string op = js["op"].get<std::string>();
    if (op == "f") {
      st.k = ScriptStep::K::F;
      st.round = js["i"].get<int>();
      auto a = expr_from_json(js["x"]);
      if (!a) return std::nullopt;
      st.a = *a;
    } else {
      st.k = (op == "p") ? ScriptStep::K::P : ScriptStep::K::Pinv;
      auto a = expr_from_json(js["a"]);
      auto b = expr_from_json(js["b"]);
      if (!a || !b) return std::nullopt;
      st.a = *a;
      st.b = *b;
    }
    s.steps.push_back(st);
  }
  return s;
}

ScriptResult run_script(const Script& s, QueryInterface& sys) {
  ScriptResult r;
  std::vector<WordPair> env(s.steps.size());
  Word fold = 0;
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const auto& st = s.steps[i];
    switch (st.k) {
      case ScriptStep::K::F: {
        Word y = sys.f(st.round, eval_expr(st.a, env));
        env[i] = {y, 0};
        fold ^= y;
        ++r.f_queries;
        break;
      }
      case ScriptStep::K::P: {
        WordPair o = sys.p(eval_expr(st.a, env), eval_expr(st.b, env));
        env[i] = o;
        fold ^= o.a ^ o.b;
        ++r.p_queries;
        break;
      }
      case ScriptStep::K::Pinv: {
        WordPair o = sys.p_inv(eval_expr(st.a, env), eval_expr(st.b, env));
        env[i] = o;
        fold ^= o.a ^ o.b;
        ++r.p_queries;
        break;
      }
    }
  }
  r.output = static_cast<int>(fold & 1);
  return r;
}

Script complete_all_chains(const Script& inner, int rounds) {
  Script out = inner;
  int n_inner = static_cast<int>(inner.steps.size());
  for (int s = 0; s < n_inner; ++s) {
    const auto& st = inner.steps[s];
    if (st.k == ScriptStep::K::F) continue;
    // the (x0, x1) end of the queried mapping
    Expr x_prev, x_cur;
    if (st.k == ScriptStep::K::P) {
      x_prev = st.a;
      x_cur = st.b;
    } else {
      x_prev = Expr::ref(s, 0);
      x_cur = Expr::ref(s, 1);
    }
    for (int i = 1; i <= rounds; ++i) {
      ScriptStep fq;
      fq.k = ScriptStep::K::F;
      fq.round = i;
      fq.a = x_cur;
      int idx = static_cast<int>(out.steps.size());
      out.steps.push_back(fq);
      Expr nxt = Expr::xr({x_prev, Expr::ref(idx, 0)});
      x_prev = x_cur;
      x_cur = nxt;
    }
  }
  return out;
}

Script random_distinguisher(int q, std::uint64_t seed, int bits, int rounds) {
  Script s;
  s.bits = bits;
  CounterStream rng(seed, Tag::Script);
  Word mask = word_mask(bits);
  auto pick_expr = [&](int step_count) -> Expr {
    std::uint64_t r = rng.next();
    if (step_count == 0 || (r % 100) < 50)
      return Expr::cnst(rng.next() & mask);
    int s1 = static_cast<int>((r >> 8) % static_cast<unsigned>(step_count));
    int c1 = static_cast<int>((r >> 32) & 1);
    if ((r % 100) < 75) return Expr::ref(s1, c1);
    int s2 = static_cast<int>((r >> 16) % static_cast<unsigned>(step_count));
    return Expr::xr({Expr::ref(s1, c1), Expr::ref(s2, (r >> 33) & 1 ? 1 : 0)});
  };
  for (int i = 0; i < q; ++i) {
    std::uint64_t r = rng.next();
    ScriptStep st;
    unsigned kindroll = r % 100;
    if (kindroll < 70) {
      st.k = ScriptStep::K::F;
      st.round = static_cast<int>((r >> 8) % static_cast<unsigned>(rounds)) + 1;
      st.a = pick_expr(i);
    } else {
      st.k = (kindroll < 85) ? ScriptStep::K::P : ScriptStep::K::Pinv;
      st.a = pick_expr(i);
      st.b = pick_expr(i);
    }
    s.steps.push_back(st);
  }
  return s;
}

Word AttackOutcome::binding(const std::string& name) const {
  for (const auto& [n, v] : bindings)
    if (n == name) return v;
  return 0;
}

namespace {

struct AttackRun {
  QueryInterface& sys;
  AttackOutcome& out;
  // per-round record of queried values, for predicates and diagnostics
  std::unordered_map<Word, Word> fmap[7];

  Word f(int i, Word x) {
    ++out.f_queries;
    Word y = sys.f(i, x);
    fmap[i][x] = y;
    return y;
  }
  WordPair p(Word a, Word b) {
    ++out.p_queries;
    return sys.p(a, b);
  }
  void bind(const std::string& n, Word v) { out.bindings.emplace_back(n, v); }
};

}  // namespace

AttackOutcome attack6(QueryInterface& sys, int bits, std::uint64_t seed) {
  AttackOutcome out;
  AttackRun run{sys, out, {}};
  Word mask = word_mask(bits);
  CounterStream rng(seed, Tag::Script);
  Word X = rng.next() & mask;
  Word R2 = rng.next() & mask;
  Word R3 = rng.next() & mask;
  while (R3 == R2) R3 = rng.next() & mask;
  run.bind("X", X);
  run.bind("R2", R2);
  run.bind("R3", R3);
  try {
    Word L2 = run.f(1, R2) ^ X;
    Word L3 = run.f(1, R3) ^ X;
    WordPair st2 = run.p(L2, R2);
    WordPair st3 = run.p(L3, R3);
    run.bind("S2", st2.a);
    run.bind("T2", st2.b);
    run.bind("S3", st3.a);
    run.bind("T3", st3.b);
    Word A2 = run.f(6, st2.a) ^ st2.b;
    Word A3 = run.f(6, st3.a) ^ st3.b;
    run.bind("A2", A2);
    run.bind("A3", A3);
    Word R1 = R2 ^ A2 ^ A3;
    run.bind("R1", R1);
    Word L1 = run.f(1, R1) ^ X;
    WordPair st1 = run.p(L1, R1);
    run.bind("S1", st1.a);
    run.bind("T1", st1.b);
    Word A1 = run.f(6, st1.a) ^ st1.b;
    run.bind("A1", A1);
    Word Abar = A1 ^ R1 ^ R2;
    run.bind("Abar", Abar);
    run.f(5, Abar);
  } catch (const Abort6& a) {
    out.aborted = true;
    out.abort = a;
  }
  out.output = out.aborted ? 1 : 0;
  return out;
}

AttackOutcome strong_attack6(QueryInterface& sys, int bits,
                             std::uint64_t seed) {
  AttackOutcome out;
  AttackRun run{sys, out, {}};
  Word mask = word_mask(bits);
  CounterStream rng(seed, Tag::Script);

  Word R[9] = {0}, Xv[9] = {0}, Y[9] = {0}, Z[9] = {0}, A[9] = {0}, S[9] = {0},
       T[9] = {0}, L[9] = {0};
  Word X = rng.next() & mask;
  R[2] = rng.next() & mask;
  R[3] = rng.next() & mask;
  while (R[3] == R[2]) R[3] = rng.next() & mask;
  Xv[1] = Xv[2] = Xv[3] = Xv[4] = X;

  try {
    // chain preparation
    Word f1r2 = run.f(1, R[2]);
    Word f1r3 = run.f(1, R[3]);
    L[2] = X ^ f1r2;
    L[3] = X ^ f1r3;
    WordPair st = run.p(L[2], R[2]);
    S[2] = st.a;
    T[2] = st.b;
    Word f6s2 = run.f(6, S[2]);
    st = run.p(L[3], R[3]);
    S[3] = st.a;
    T[3] = st.b;
    Word f6s3 = run.f(6, S[3]);
    A[2] = f6s2 ^ T[2];
    A[3] = f6s3 ^ T[3];
    R[1] = R[2] ^ A[2] ^ A[3];
    Word f1r1 = run.f(1, R[1]);
    L[1] = X ^ f1r1;
    st = run.p(L[1], R[1]);
    S[1] = st.a;
    T[1] = st.b;
    Word f6s1 = run.f(6, S[1]);
    A[1] = f6s1 ^ T[1];
    A[5] = A[1] ^ R[1] ^ R[2];
    R[4] = R[3] ^ A[3] ^ A[5];
    Word f1r4 = run.f(1, R[4]);
    L[4] = X ^ f1r4;
    st = run.p(L[4], R[4]);
    S[4] = st.a;
    T[4] = st.b;
    Word f6s4 = run.f(6, S[4]);
    A[4] = f6s4 ^ T[4];
    A[8] = A[4] ^ R[4] ^ R[3];
    run.bind("A8", A[8]);
    run.bind("A4", A[4]);
    run.bind("R4", R[4]);
    run.bind("R3", R[3]);
    run.f(5, A[8]);

    // computation of chain values
    Word f2x = run.f(2, X);
    for (int i = 1; i <= 4; ++i) run.f(5, A[i]);
    for (int i = 1; i <= 4; ++i) {
      Z[i] = run.fmap[5][A[i]] ^ S[i];
      run.f(4, Z[i]);
    }
    for (int i = 1; i <= 4; ++i) {
      Y[i] = f2x ^ R[i];
      run.f(3, Y[i]);
    }
    Y[6] = Y[1];
    Y[5] = Y[2];
    Y[8] = Y[3];
    Y[7] = Y[4];
    Z[5] = Z[1];
    Z[6] = Z[2];
    Z[7] = Z[3];
    Z[8] = Z[4];
    A[6] = run.fmap[4][Z[6]] ^ Y[6];
    run.f(5, A[6]);
    Xv[5] = run.fmap[3][Y[5]] ^ Z[5];
    Xv[6] = run.fmap[3][Y[6]] ^ Z[6];
    run.f(2, Xv[5]);
    run.f(2, Xv[6]);
    R[5] = run.fmap[2][Xv[5]] ^ Y[5];
    R[6] = run.fmap[2][Xv[6]] ^ Y[6];
    run.f(1, R[5]);
    run.f(1, R[6]);
    L[5] = Xv[5] ^ run.fmap[1][R[5]];
    st = run.p(L[5], R[5]);
    S[5] = st.a;
    T[5] = st.b;
    run.f(6, S[5]);
    L[6] = Xv[6] ^ run.fmap[1][R[6]];
    st = run.p(L[6], R[6]);
    S[6] = st.a;
    T[6] = st.b;
    run.f(6, S[6]);
    run.f(5, A[5]);
    Xv[7] = run.fmap[3][Y[7]] ^ Z[7];
    Xv[8] = run.fmap[3][Y[8]] ^ Z[8];
    run.f(2, Xv[7]);
    run.f(2, Xv[8]);
    R[7] = run.fmap[2][Xv[7]] ^ Y[7];
    R[8] = run.fmap[2][Xv[8]] ^ Y[8];
    run.f(1, R[7]);
    run.f(1, R[8]);
    L[7] = Xv[7] ^ run.fmap[1][R[7]];
    st = run.p(L[7], R[7]);
    S[7] = st.a;
    T[7] = st.b;
    run.f(6, S[7]);
    L[8] = Xv[8] ^ run.fmap[1][R[8]];
    st = run.p(L[8], R[8]);
    S[8] = st.a;
    T[8] = st.b;
    run.f(6, S[8]);
    A[7] = run.fmap[4][Z[7]] ^ Y[7];
    run.f(5, A[7]);

    // consistency check
    bool ok = true;
    for (int i = 1; i <= 8 && ok; ++i) {
      ok = run.fmap[1][R[i]] == (L[i] ^ Xv[i]) &&
           run.fmap[2][Xv[i]] == (R[i] ^ Y[i]) &&
           run.fmap[3][Y[i]] == (Xv[i] ^ Z[i]) &&
           run.fmap[4][Z[i]] == (Y[i] ^ A[i]) &&
           run.fmap[5][A[i]] == (Z[i] ^ S[i]) &&
           run.fmap[6][S[i]] == (A[i] ^ T[i]);
    }
    ok = ok && Xv[5] == Xv[6] && Xv[7] == Xv[8] && A[7] == A[5] &&
         A[6] == A[3];
    out.output = ok ? 1 : 0;
  } catch (const Abort6& a) {
    out.aborted = true;
    out.abort = a;
    out.output = 0;
  }
  for (int i = 1; i <= 8; ++i) {
    run.bind("R" + std::to_string(i), R[i]);
    run.bind("A" + std::to_string(i), A[i]);
    run.bind("X" + std::to_string(i), Xv[i]);
  }
  return out;
}

std::vector<std::string> attack6_bad_events(const AttackOutcome& out,
                                            const std::vector<WordPair>& drawn,
                                            const Simulator6* sim, int bits) {
  std::vector<std::string> flags;
  (void)bits;
  Word R1 = out.binding("R1"), R2 = out.binding("R2"), R3 = out.binding("R3");
  Word A1 = out.binding("A1"), A2 = out.binding("A2"), A3 = out.binding("A3");
  Word S1 = out.binding("S1"), S2 = out.binding("S2"), S3 = out.binding("S3");
  Word Abar = out.binding("Abar");

  std::unordered_set<Word> l1, l2;
  {
    std::unordered_map<Word, int> c1, c2;
    for (const auto& d : drawn) {
      l1.insert(d.a);
      l2.insert(d.b);
      if (++c1[d.a] > 1 || ++c2[d.b] > 1) flags.push_back("urp-half-collision");
    }
  }
  for (const auto& d : drawn)
    if (d.b == R1 || d.b == R2 || d.b == R3) {
      flags.push_back("urp-second-half-hits-r");
      break;
    }
  {
    bool hit = false;
    for (std::size_t i = 0; i < drawn.size() && !hit; ++i)
      for (std::size_t j = i + 1; j < drawn.size() && !hit; ++j)
        hit = (R1 ^ R2) == (drawn[i].b ^ drawn[j].b);
    if (hit) flags.push_back("urp-xor-pair");
  }
  if (R1 == R2 || R2 == R3 || R1 == R3) flags.push_back("r-collision");

  if (sim) {
    auto excluded = [&](Word a, Word s) {
      return (a == A1 && s == S1) || (a == A2 && s == S2) ||
             (a == A3 && s == S3);
    };
    bool hit = false;
    for (const auto& [a, fa] : sim->hist(5)) {
      for (const auto& [s, fs] : sim->hist(6)) {
        if (excluded(a, s)) continue;
        if (l2.count(a ^ fs)) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (!hit && sim->hist(5).contains(Abar) == false) {
      for (const auto& [s, fs] : sim->hist(6)) {
        if (l2.count(Abar ^ fs)) {
          hit = true;
          break;
        }
      }
    }
    if (hit) flags.push_back("t-prime-in-l2");
  }
  // purely algebraic clauses over the recorded bindings
  {
    const Word As[4] = {Abar, A1, A2, A3};
    const Word Rs[4] = {0, R1, R2, R3};
    const Word Avals[4] = {0, A1, A2, A3};
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        if (i == j) continue;
        for (int ai = 0; ai < 4; ++ai) {
          if ((i == 1 && j == 2 && ai == 3) || (i == 2 && j == 1 && ai == 0))
            continue;
          if ((Rs[i] ^ Rs[j] ^ Avals[j] ^ As[ai]) == 0) {
            flags.push_back("xor-degeneracy");
            i = j = 4;
            ai = 4;
          }
        }
      }
  }
  return flags;
}

}  // namespace feistel
