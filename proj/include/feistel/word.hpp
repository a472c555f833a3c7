#pragma once

#include <cstdint>
#include <string>
#include <utility>

namespace feistel {

// Round values are n-bit words (2 <= n <= 32) kept in a 64-bit container,
// always masked to n bits by the producing code.
using Word = std::uint64_t;

struct WordPair {
  Word a = 0;
  Word b = 0;
  friend bool operator==(const WordPair&, const WordPair&) = default;
};

inline Word word_mask(int bits) {
  return bits >= 64 ? ~0ull : ((1ull << bits) - 1);
}

inline int hex_digits(int bits) { return (bits + 3) / 4; }

// Lowercase hex, zero-padded to ceil(n/4) digits.
inline std::string word_hex(Word w, int bits) {
  static const char* digits = "0123456789abcdef";
  int nd = hex_digits(bits);
  std::string s(static_cast<size_t>(nd), '0');
  for (int i = nd - 1; i >= 0; --i) {
    s[static_cast<size_t>(i)] = digits[w & 0xf];
    w >>= 4;
  }
  return s;
}

inline bool parse_word_hex(const std::string& s, Word& out) {
  Word v = 0;
  if (s.empty() || s.size() > 16) return false;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else return false;
    v = (v << 4) | static_cast<Word>(d);
  }
  out = v;
  return true;
}

// Packs an ordered pair of n-bit words (n <= 32) into one table key.
inline std::uint64_t pack_pair(Word a, Word b) { return (a << 32) | b; }

}  // namespace feistel
