#pragma once

#include <treebench/io.hpp>

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace treebench {

/// FNV-1a content hash, hex encoded; ties a report to its input documents.
inline std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

/// Reproducible run report: replaying command + seed reproduces identical
/// verdicts.  Timing is kept out of the canonical output so reports stay
/// byte-identical across repeats and thread counts.
struct RunReport {
  std::string command;
  std::map<std::string, std::string> inputs;  // path -> content hash
  std::uint64_t seed = 0;
  Json verdicts = Json::object();
  Json certificates;  // null unless produced

  Json to_json() const {
    Json j;
    j["command"] = command;
    Json in;
    for (const auto& [path, hash] : inputs) in[path] = hash;
    j["inputs"] = std::move(in);
    j["seed"] = seed;
    j["verdicts"] = verdicts;
    if (!certificates.is_null()) j["certificates"] = certificates;
    return j;
  }
};

}  // namespace treebench
