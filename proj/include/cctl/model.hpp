#pragma once

// Kripke structures and durational Kripke structures (DKS), plus the plain
// text model format:
//
//   ap P Q                 declare propositions
//   state q0 { P Q }       state with its labels
//   trans q0 -> q1         transition
//   trans q0 -[-1]-> q1    weighted transition (DKS)
//   # comment

#include <algorithm>
#include <cctype>
#include <tuple>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cctl/util.hpp"

namespace cctl {

class KripkeStructure {
 public:
  KripkeStructure() = default;

  int add_state(const std::string& name, const std::vector<std::string>& labels = {}) {
    if (index_.count(name)) throw model_error("duplicate state " + name);
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_[name] = id;
    labels_.emplace_back();
    succ_.emplace_back();
    pred_.emplace_back();
    for (const auto& l : labels) add_label(id, l);
    return id;
  }

  int add_ap(const std::string& p) {
    auto it = ap_index_.find(p);
    if (it != ap_index_.end()) return it->second;
    int id = static_cast<int>(aps_.size());
    aps_.push_back(p);
    ap_index_[p] = id;
    return id;
  }

  void add_label(int q, const std::string& p) {
    int a = add_ap(p);
    auto& l = labels_.at(q);
    if (!std::binary_search(l.begin(), l.end(), a)) l.insert(std::upper_bound(l.begin(), l.end(), a), a);
  }

  void add_edge(int a, int b) {
    auto& s = succ_.at(a);
    if (std::binary_search(s.begin(), s.end(), b)) return;
    s.insert(std::upper_bound(s.begin(), s.end(), b), b);
    auto& p = pred_.at(b);
    p.insert(std::upper_bound(p.begin(), p.end(), a), a);
  }

  // Throws unless every state has a successor.
  void check_total() const {
    for (int q = 0; q < size(); ++q)
      if (succ_[q].empty()) throw model_error("relation not total at " + names_[q]);
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int q) const { return names_.at(q); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> find(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int state(const std::string& n) const {
    auto q = find(n);
    if (!q) throw model_error("unknown state " + n);
    return *q;
  }
  const std::vector<int>& succ(int q) const { return succ_[q]; }
  const std::vector<int>& pred(int q) const { return pred_[q]; }
  const std::vector<std::string>& aps() const { return aps_; }
  const std::vector<int>& labels(int q) const { return labels_[q]; }
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
  }

  bool has_label(int q, const std::string& p) const {
    auto it = ap_index_.find(p);
    if (it == ap_index_.end()) return false;
    return std::binary_search(labels_[q].begin(), labels_[q].end(), it->second);
  }

  // States labelled with p; empty when p is unknown to the structure.
  StateSet label_set(const std::string& p) const {
    StateSet s(size());
    auto it = ap_index_.find(p);
    if (it == ap_index_.end()) return s;
    for (int q = 0; q < size(); ++q)
      if (std::binary_search(labels_[q].begin(), labels_[q].end(), it->second)) s.set(q);
    return s;
  }

  std::vector<std::string> label_names(int q) const {
    std::vector<std::string> r;
    for (int a : labels_[q]) r.push_back(aps_[a]);
    return r;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> aps_;
  std::unordered_map<std::string, int> ap_index_;
  std::vector<std::vector<int>> labels_;
  std::vector<std::vector<int>> succ_, pred_;
};

enum class WeightClass { AllOne, ZeroOne, MinusZeroOne, Arbitrary };

inline const char* to_string(WeightClass w) {
  switch (w) {
    case WeightClass::AllOne: return "all-one";
    case WeightClass::ZeroOne: return "zero-one";
    case WeightClass::MinusZeroOne: return "minus-zero-one";
    case WeightClass::Arbitrary: return "arbitrary";
  }
  return "?";
}

struct WeightedEdge {
  int src;
  std::int64_t weight;
  int dst;
  bool operator<(const WeightedEdge& o) const {
    return std::tie(src, weight, dst) < std::tie(o.src, o.weight, o.dst);
  }
  bool operator==(const WeightedEdge& o) const {
    return src == o.src && weight == o.weight && dst == o.dst;
  }
};

// A Kripke structure whose transitions carry integer weights. Several
// weights may label the same pair of states.
class DurationalKS {
 public:
  KripkeStructure base;  // states, labels and the unweighted relation

  void add_edge(int a, std::int64_t w, int b) {
    WeightedEdge e{a, w, b};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e) return;
    edges_.insert(it, e);
    base.add_edge(a, b);
  }

  const std::vector<WeightedEdge>& edges() const { return edges_; }
  int size() const { return base.size(); }

  // Tightest class containing every weight.
  WeightClass weight_class() const {
    bool one = true, zo = true, mzo = true;
    for (const auto& e : edges_) {
      if (e.weight != 1) one = false;
      if (e.weight != 0 && e.weight != 1) zo = false;
      if (e.weight < -1 || e.weight > 1) mzo = false;
    }
    if (one) return WeightClass::AllOne;
    if (zo) return WeightClass::ZeroOne;
    if (mzo) return WeightClass::MinusZeroOne;
    return WeightClass::Arbitrary;
  }

 private:
  std::vector<WeightedEdge> edges_;
};

using Model = std::variant<KripkeStructure, DurationalKS>;

namespace detail {

inline std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

// Parses the model format. When no `ap` line is present the propositions
// are those appearing in state labels; otherwise labels must be declared.
inline Model parse_model(const std::string& text) {
  struct PendingEdge {
    std::string a, b;
    std::optional<std::int64_t> w;
    int line;
  };
  std::vector<std::string> declared;
  std::set<std::string> declared_set;
  bool any_decl = false;
  std::vector<std::pair<std::string, std::vector<std::string>>> states;
  std::map<std::string, int> state_line;
  std::vector<PendingEdge> edges;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto err = [&](const std::string& m) { return model_error("line " + std::to_string(lineno) + ": " + m); };
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    // Accept the unicode minus sign in weights.
    for (std::size_t p; (p = line.find("\xE2\x88\x92")) != std::string::npos;) line.replace(p, 3, "-");
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::string rest;
    std::getline(ls, rest);
    if (kw == "ap") {
      any_decl = true;
      for (const auto& p : detail::split_words(rest))
        if (declared_set.insert(p).second) declared.push_back(p);
    } else if (kw == "state") {
      auto lb = rest.find('{');
      auto rb = rest.find('}');
      std::string nm = rest.substr(0, lb);
      auto words = detail::split_words(nm);
      if (words.size() != 1) throw err("expected: state <name> { <ap-list> }");
      std::vector<std::string> labels;
      if (lb != std::string::npos) {
        if (rb == std::string::npos || rb < lb) throw err("missing '}'");
        if (!detail::split_words(rest.substr(rb + 1)).empty()) throw err("trailing text after '}'");
        labels = detail::split_words(rest.substr(lb + 1, rb - lb - 1));
      }
      if (state_line.count(words[0])) throw err("duplicate state " + words[0]);
      state_line[words[0]] = lineno;
      states.emplace_back(words[0], labels);
    } else if (kw == "trans") {
      PendingEdge e;
      e.line = lineno;
      auto arrow = rest.find("->");
      auto wopen = rest.find("-[");
      std::string lhs, rhs;
      if (wopen != std::string::npos && (arrow == std::string::npos || wopen < arrow)) {
        auto wclose = rest.find("]->", wopen);
        if (wclose == std::string::npos) throw err("malformed weighted transition");
        lhs = rest.substr(0, wopen);
        std::string ws = rest.substr(wopen + 2, wclose - wopen - 2);
        rhs = rest.substr(wclose + 3);
        std::size_t used = 0;
        try {
          e.w = std::stoll(ws, &used);
        } catch (const std::exception&) {
          throw err("bad weight '" + ws + "'");
        }
        if (!detail::split_words(ws.substr(used)).empty()) throw err("bad weight '" + ws + "'");
      } else if (arrow != std::string::npos) {
        lhs = rest.substr(0, arrow);
        rhs = rest.substr(arrow + 2);
      } else {
        throw err("expected: trans a -> b");
      }
      auto l = detail::split_words(lhs), r = detail::split_words(rhs);
      if (l.size() != 1 || r.size() != 1) throw err("expected: trans a -> b");
      e.a = l[0];
      e.b = r[0];
      edges.push_back(e);
    } else {
      throw err("unknown keyword '" + kw + "'");
    }
  }

  KripkeStructure ks;
  for (const auto& p : declared) ks.add_ap(p);
  for (const auto& [n, labels] : states) {
    for (const auto& l : labels)
      if (any_decl && !declared_set.count(l))
        throw model_error("line " + std::to_string(state_line[n]) + ": undeclared proposition " + l);
    ks.add_state(n, labels);
  }
  bool weighted = false, plain = false;
  for (const auto& e : edges) (e.w ? weighted : plain) = true;
  if (weighted && plain) throw model_error("mixed weighted and unweighted transitions");
  auto lookup = [&](const std::string& n, int line) {
    auto q = ks.find(n);
    if (!q) throw model_error("line " + std::to_string(line) + ": unknown state " + n);
    return *q;
  };
  if (!weighted) {
    for (const auto& e : edges) ks.add_edge(lookup(e.a, e.line), lookup(e.b, e.line));
    ks.check_total();
    return ks;
  }
  DurationalKS d;
  d.base = ks;
  for (const auto& e : edges) d.add_edge(lookup(e.a, e.line), *e.w, lookup(e.b, e.line));
  d.base.check_total();
  return d;
}

inline Model load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw model_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_model(ss.str());
}

inline std::string print_model(const KripkeStructure& s) {
  std::ostringstream os;
  if (!s.aps().empty()) {
    os << "ap";
    for (const auto& p : s.aps()) os << " " << p;
    os << "\n";
  }
  for (int q = 0; q < s.size(); ++q) {
    os << "state " << s.name(q) << " {";
    for (const auto& l : s.label_names(q)) os << " " << l;
    os << " }\n";
  }
  for (int q = 0; q < s.size(); ++q)
    for (int r : s.succ(q)) os << "trans " << s.name(q) << " -> " << s.name(r) << "\n";
  return os.str();
}

inline std::string print_model(const DurationalKS& d) {
  const auto& s = d.base;
  std::ostringstream os;
  if (!s.aps().empty()) {
    os << "ap";
    for (const auto& p : s.aps()) os << " " << p;
    os << "\n";
  }
  for (int q = 0; q < s.size(); ++q) {
    os << "state " << s.name(q) << " {";
    for (const auto& l : s.label_names(q)) os << " " << l;
    os << " }\n";
  }
  for (const auto& e : d.edges())
    os << "trans " << s.name(e.src) << " -[" << e.weight << "]-> " << s.name(e.dst) << "\n";
  return os.str();
}

inline std::string print_model(const Model& m) {
  return std::visit([](const auto& x) { return print_model(x); }, m);
}

// True iff consecutive states of the sequence are related.
inline bool validate_run(const KripkeStructure& s, const std::vector<int>& run) {
  for (int q : run)
    if (q < 0 || q >= s.size()) return false;
  for (std::size_t i = 0; i + 1 < run.size(); ++i)
    if (!std::binary_search(s.succ(run[i]).begin(), s.succ(run[i]).end(), run[i + 1])) return false;
  return true;
}

}  // namespace cctl
