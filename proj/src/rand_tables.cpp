#include "feistel/rand_tables.hpp"

#include <json.hpp>

namespace feistel {

std::string randomness_to_json(const RoundTable* f, const PermRandom* p,
                               int bits) {
  std::string out = "{\"f\":{";
  bool first = true;
  if (f) {
    for (const auto& [k, v] : f->realized()) {
      if (!first) out += ',';
      first = false;
      out += "\"" + std::to_string(RoundTable::key_round(k)) + ":" +
             word_hex(RoundTable::key_input(k), bits) + "\":\"" +
             word_hex(v, bits) + "\"";
    }
  }
  out += "},\"p\":{";
  first = true;
  if (p) {
    for (int up = 0; up <= 1; ++up) {
      for (const auto& [k, v] : p->realized(up != 0)) {
        if (!first) out += ',';
        first = false;
        out += std::string("\"") + (up ? "u" : "d") + ":" +
               word_hex(k >> 32, bits) + ":" +
               word_hex(k & 0xffffffffull, bits) + "\":\"" +
               word_hex(v.a, bits) + ":" + word_hex(v.b, bits) + "\"";
      }
    }
  }
  out += "}}";
  return out;
}

RoundTable ReplayRandomness::make_f() const {
  auto entries = f_entries.entries();  // value copy keeps the table self-contained
  return RoundTable(bits, [entries](int i, Word x) -> Word {
    if (const Word* v = entries.find(RoundTable::key(i, x))) return *v;
    throw PartialHoleFault(i, x);
  });
}

PermRandom ReplayRandomness::make_p() const {
  auto down = p_down;
  auto up = p_up;
  return PermRandom(bits, [down, up](bool u, Word a, Word b) -> WordPair {
    const auto& log = u ? up : down;
    if (const WordPair* v = log.find(pack_pair(a, b))) return *v;
    throw PartialHoleFault(u ? 15 : 0, a);
  });
}

namespace {

bool split3(const std::string& s, char sep, std::string& a, std::string& b,
            std::string& c) {
  auto p1 = s.find(sep);
  if (p1 == std::string::npos) return false;
  auto p2 = s.find(sep, p1 + 1);
  if (p2 == std::string::npos) return false;
  a = s.substr(0, p1);
  b = s.substr(p1 + 1, p2 - p1 - 1);
  c = s.substr(p2 + 1);
  return true;
}

}  // namespace

bool randomness_from_json(const std::string& text, int bits,
                          ReplayRandomness& out) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  out.bits = bits;
  out.f_entries = PartialRoundTable(bits);
  if (j.contains("f")) {
    for (auto& [k, v] : j["f"].items()) {
      auto sep = k.find(':');
      if (sep == std::string::npos) return false;
      int round = std::stoi(k.substr(0, sep));
      Word x, y;
      if (!parse_word_hex(k.substr(sep + 1), x)) return false;
      if (!parse_word_hex(v.get<std::string>(), y)) return false;
      out.f_entries.define(round, x, y);
    }
  }
  if (j.contains("p")) {
    for (auto& [k, v] : j["p"].items()) {
      std::string dir, a, b, va, vb, unused;
      if (!split3(k, ':', dir, a, b)) return false;
      auto sep = v.get<std::string>().find(':');
      if (sep == std::string::npos) return false;
      Word wa = 0, wb = 0, ra = 0, rb = 0;
      if (!parse_word_hex(a, wa) || !parse_word_hex(b, wb)) return false;
      std::string vs = v.get<std::string>();
      if (!parse_word_hex(vs.substr(0, sep), ra) ||
          !parse_word_hex(vs.substr(sep + 1), rb))
        return false;
      auto& log = (dir == "u") ? out.p_up : out.p_down;
      log.insert(pack_pair(wa, wb), WordPair{ra, rb});
    }
  }
  return true;
}

}  // namespace feistel
