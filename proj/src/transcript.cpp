#include "feistel/transcript.hpp"

#include "feistel/rng.hpp"

namespace feistel {

const char* ev_name(Ev e) {
  switch (e) {
    case Ev::FQuery: return "fquery";
    case Ev::Sample: return "sample";
    case Ev::Enqueue: return "enqueue";
    case Ev::Dequeue: return "dequeue";
    case Ev::ForceVal: return "forceval";
    case Ev::Overwrite: return "overwrite";
    case Ev::PQuery: return "pquery";
    case Ev::Check: return "check";
    case Ev::XorQuery: return "xorquery";
    case Ev::CompleteChain: return "completechain";
    case Ev::Abort: return "abort";
    case Ev::CycleWarning: return "cyclewarning";
  }
  return "?";
}

std::string Transcript::line(const Event& e) const {
  auto h = [&](Word w) { return word_hex(w, bits_); };
  std::string s = "{\"ev\":\"";
  s += ev_name(e.ev);
  s += "\"";
  switch (e.ev) {
    case Ev::FQuery:
    case Ev::Sample:
      s += ",\"i\":" + std::to_string(e.i) + ",\"x\":\"" + h(e.x) +
           "\",\"y\":\"" + h(e.y) + "\"";
      break;
    case Ev::Enqueue:
      s += ",\"x\":\"" + h(e.x) + "\",\"y\":\"" + h(e.y) +
           "\",\"k\":" + std::to_string(e.i) + ",\"l\":" + std::to_string(e.l);
      break;
    case Ev::Dequeue:
      s += ",\"x\":\"" + h(e.x) + "\",\"y\":\"" + h(e.y) +
           "\",\"k\":" + std::to_string(e.i) + ",\"l\":" + std::to_string(e.l) +
           ",\"skip\":" + (e.flag ? std::string("1") : std::string("0"));
      break;
    case Ev::ForceVal:
      s += ",\"x\":\"" + h(e.x) + "\",\"y\":\"" + h(e.y) +
           "\",\"l\":" + std::to_string(e.l);
      break;
    case Ev::Overwrite:
      s += ",\"x\":\"" + h(e.x) + "\",\"old\":\"" + h(e.y) +
           "\",\"new\":\"" + h(e.z) + "\",\"l\":" + std::to_string(e.l);
      break;
    case Ev::PQuery:
      s += std::string(",\"dir\":\"") + (e.i == 0 ? "d" : "u") +
           "\",\"in\":[\"" + h(e.x) + "\",\"" + h(e.y) + "\"],\"out\":[\"" +
           h(e.z) + "\",\"" + h(e.w) + "\"],\"src\":\"" +
           (e.src ? "d" : "s") + "\"";
      break;
    case Ev::Check:
      s += ",\"x0\":\"" + h(e.x) + "\",\"x1\":\"" + h(e.y) + "\",\"y0\":\"" +
           h(e.z) + "\",\"y1\":\"" + h(e.w) + "\",\"r\":" +
           (e.flag ? std::string("1") : std::string("0")) +
           ",\"src\":\"" + (e.src ? "d" : "s") + "\"";
      break;
    case Ev::XorQuery:
      s += ",\"which\":" + std::to_string(e.i) + ",\"x\":\"" + h(e.x) +
           "\",\"k\":" + std::to_string(e.l);
      break;
    case Ev::CompleteChain:
      s += std::string(",\"d\":\"") + (e.i > 0 ? "+" : "-") + "\",\"x\":\"" +
           h(e.x) + "\",\"y\":\"" + h(e.y) + "\",\"z\":\"" + h(e.z) +
           "\",\"k\":" + std::to_string(e.l);
      break;
    case Ev::Abort:
      s += ",\"where\":" + std::to_string(e.i);
      break;
    case Ev::CycleWarning:
      s += ",\"x\":\"" + h(e.x) + "\",\"y\":\"" + h(e.y) +
           "\",\"k\":" + std::to_string(e.i);
      break;
  }
  s += "}";
  return s;
}

std::string Transcript::to_json_lines() const {
  std::string out;
  for (const auto& e : events_) {
    out += line(e);
    out += '\n';
  }
  return out;
}

std::uint64_t Transcript::byte_hash() const {
  std::uint64_t hsh = 0x9ae16a3b2f90404full ^ static_cast<std::uint64_t>(bits_);
  for (const auto& e : events_) {
    std::string s = line(e);
    for (char c : s) hsh = mix64(hsh ^ static_cast<std::uint8_t>(c));
  }
  return hsh;
}

}  // namespace feistel
