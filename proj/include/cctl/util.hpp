#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cctl {

// Error taxonomy. Every public entry point throws one of these.
struct cctl_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : cctl_error {
  int line, column;
  parse_error(const std::string& msg, int l, int c)
      : cctl_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}
};

// CCTLv well-formedness (double binding, cyclic binder order, free variables).
struct wellformedness_error : cctl_error {
  using cctl_error::cctl_error;
};

struct model_error : cctl_error {
  using cctl_error::cctl_error;
};

// The formula lies outside what the chosen engine handles.
struct fragment_error : cctl_error {
  using cctl_error::cctl_error;
};

// Undecidable fragment refused by an engine.
struct undecidable_error : cctl_error {
  std::string fragment;
  explicit undecidable_error(const std::string& frag)
      : cctl_error("undecidable fragment " + frag), fragment(frag) {}
};

struct resource_cap_error : cctl_error {
  using cctl_error::cctl_error;
};

struct overflow_error : cctl_error {
  using cctl_error::cctl_error;
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("integer overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("integer overflow");
  return r;
}

// Dense bit set over state indices.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t n, bool full = false) : n_(n), w_((n + 63) / 64, full ? ~0ULL : 0ULL) {
    trim();
  }

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
  bool operator[](std::size_t i) const { return test(i); }
  void set(std::size_t i, bool v = true) {
    if (v)
      w_[i >> 6] |= 1ULL << (i & 63);
    else
      w_[i >> 6] &= ~(1ULL << (i & 63));
  }
  void reset(std::size_t i) { set(i, false); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(__builtin_popcountll(x));
    return c;
  }
  bool empty() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }

  StateSet& operator&=(const StateSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  StateSet& operator|=(const StateSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  StateSet operator~() const {
    StateSet r = *this;
    for (auto& x : r.w_) x = ~x;
    r.trim();
    return r;
  }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  bool operator==(const StateSet& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const StateSet& o) const { return !(*this == o); }

  std::vector<int> elements() const {
    std::vector<int> r;
    for (std::size_t i = 0; i < n_; ++i)
      if (test(i)) r.push_back(static_cast<int>(i));
    return r;
  }

 private:
  void trim() {
    if (n_ % 64 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
  }
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct vector_hash {
  template <class T>
  std::size_t operator()(const std::vector<T>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) hash_combine(h, std::hash<T>{}(x));
    return h;
  }
};

}  // namespace cctl
