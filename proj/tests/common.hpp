#pragma once

#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cctl/cctl.hpp"

namespace cctl::test {

inline KripkeStructure ks(const std::string& text) { return std::get<KripkeStructure>(parse_model(text)); }
inline DurationalKS dks(const std::string& text) { return std::get<DurationalKS>(parse_model(text)); }

inline std::set<std::string> names(const KripkeStructure& s, const StateSet& set) {
  std::set<std::string> r;
  for (int q = 0; q < s.size(); ++q)
    if (set[q]) r.insert(s.name(q));
  return r;
}

inline bool at(const KripkeStructure& s, const StateSet& set, const std::string& name) { return set[*s.find(name)]; }

struct CorpusEntry {
  std::string formula, expected;
};

// Lines "formula ; VERDICT"; '#' starts a comment line.
inline std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cctl_error("cannot open " + path);
  std::vector<CorpusEntry> r;
  auto trim = [](std::string x) {
    x.erase(0, x.find_first_not_of(" \t"));
    x.erase(x.find_last_not_of(" \t\r") + 1);
    return x;
  };
  for (std::string line; std::getline(in, line);) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    auto semi = line.rfind(';');
    if (semi == std::string::npos) throw cctl_error("corpus line without verdict: " + line);
    r.push_back({trim(line.substr(0, semi)), trim(line.substr(semi + 1))});
  }
  return r;
}

inline std::string sat_corpus_path() { return std::string(CCTL_SOURCE_DIR) + "/samples/sat/corpus.txt"; }

}  // namespace cctl::test
