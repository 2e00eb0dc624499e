#pragma once

// TCTL model checking over durational Kripke structures with weights in
// {-1, 0, 1}. E-modalities use shortest paths (bounds) or relation
// algebra (equality); A-modalities reduce to CTL on a gadget structure.
//
// On a DKS a modality constraint has the shape {#TT ~ k} and denotes the
// accumulated weight of the transitions taken before the current point.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cctl/ctl.hpp"

namespace cctl {

class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(int n) : n_(n), w_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * w_, 0) {}

  static BoolMatrix identity(int n) {
    BoolMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i);
    return m;
  }
  static BoolMatrix diag(const StateSet& s) {
    BoolMatrix m(static_cast<int>(s.size()));
    for (int i : s.elements()) m.set(i, i);
    return m;
  }

  int size() const { return n_; }
  bool get(int i, int j) const { return (row(i)[j >> 6] >> (j & 63)) & 1ULL; }
  void set(int i, int j) { bits_[static_cast<std::size_t>(i) * w_ + (j >> 6)] |= 1ULL << (j & 63); }

  BoolMatrix& operator|=(const BoolMatrix& o) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }
  friend BoolMatrix operator|(BoolMatrix a, const BoolMatrix& b) { return a |= b; }
  bool operator==(const BoolMatrix& o) const { return n_ == o.n_ && bits_ == o.bits_; }
  bool operator!=(const BoolMatrix& o) const { return !(*this == o); }

  friend BoolMatrix operator*(const BoolMatrix& a, const BoolMatrix& b) {
    BoolMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i) {
      std::uint64_t* out = &c.bits_[static_cast<std::size_t>(i) * c.w_];
      const std::uint64_t* ar = a.row(i);
      for (std::size_t wi = 0; wi < a.w_; ++wi)
        for (std::uint64_t x = ar[wi]; x; x &= x - 1) {
          int k = static_cast<int>(wi * 64 + static_cast<std::size_t>(__builtin_ctzll(x)));
          const std::uint64_t* br = b.row(k);
          for (std::size_t j = 0; j < a.w_; ++j) out[j] |= br[j];
        }
    }
    return c;
  }

  // Reflexive-transitive closure.
  BoolMatrix star() const {
    BoolMatrix r = identity(n_) | *this;
    for (;;) {
      BoolMatrix next = r * r;
      if (next == r) return r;
      r = next;
    }
  }

 private:
  const std::uint64_t* row(int i) const { return &bits_[static_cast<std::size_t>(i) * w_]; }
  int n_ = 0;
  std::size_t w_ = 0;
  std::vector<std::uint64_t> bits_;
};

// All-pairs minimal walk weights. Entries are INF (no walk) or NEG_INF
// (walks of unbounded negative weight through a negative cycle).
class WeightMatrix {
 public:
  static constexpr std::int64_t INF = std::numeric_limits<std::int64_t>::max() / 4;
  static constexpr std::int64_t NEG_INF = -INF;

  WeightMatrix() = default;
  explicit WeightMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, INF) {}
  int size() const { return n_; }
  std::int64_t at(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  std::int64_t& at(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }

 private:
  int n_ = 0;
  std::vector<std::int64_t> d_;
};

inline WeightMatrix shortest_paths(int n, const std::vector<WeightedEdge>& edges) {
  WeightMatrix m(n);
  std::int64_t maxw = 1;
  for (const auto& e : edges) maxw = std::max(maxw, e.weight < 0 ? -e.weight : e.weight);
  // Any simple path weighs at least -floor; lower values certify a negative cycle.
  const std::int64_t floor = checked_mul(maxw, n + 1);
  for (int i = 0; i < n; ++i) m.at(i, i) = 0;
  for (const auto& e : edges) m.at(e.src, e.dst) = std::min(m.at(e.src, e.dst), e.weight);
  auto add = [&](std::int64_t a, std::int64_t b) {
    if (a == WeightMatrix::INF || b == WeightMatrix::INF) return WeightMatrix::INF;
    if (a == WeightMatrix::NEG_INF || b == WeightMatrix::NEG_INF) return WeightMatrix::NEG_INF;
    std::int64_t s = a + b;
    return s < -floor ? WeightMatrix::NEG_INF : s;
  };
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (m.at(i, k) == WeightMatrix::INF) continue;
      for (int j = 0; j < n; ++j) {
        std::int64_t s = add(m.at(i, k), m.at(k, j));
        if (s < m.at(i, j)) m.at(i, j) = s;
      }
    }
  WeightMatrix r = m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n && r.at(i, j) != WeightMatrix::NEG_INF; ++c)
        if (m.at(i, c) != WeightMatrix::INF && m.at(c, c) < 0 && m.at(c, j) != WeightMatrix::INF)
          r.at(i, j) = WeightMatrix::NEG_INF;
  return r;
}

// Edge relations of one weight in {-1, 0, 1}.
struct UnitRelations {
  BoolMatrix down, zero, up;  // weights -1, 0, 1

  UnitRelations(int n, const std::vector<WeightedEdge>& edges) : down(n), zero(n), up(n) {
    for (const auto& e : edges) {
      if (e.weight == -1)
        down.set(e.src, e.dst);
      else if (e.weight == 0)
        zero.set(e.src, e.dst);
      else if (e.weight == 1)
        up.set(e.src, e.dst);
      else
        throw fragment_error("weight outside {-1,0,1}");
    }
  }
  int size() const { return zero.size(); }
  UnitRelations inverted() const {
    UnitRelations r = *this;
    std::swap(r.down, r.up);
    return r;
  }
};

// Pairs joined by a walk of total weight 0.
inline BoolMatrix r0_fixpoint(const UnitRelations& e) {
  BoolMatrix x = e.zero.star();
  for (;;) {
    BoolMatrix next = x | (x * e.up * x * e.down * x) | (x * e.down * x * e.up * x);
    if (next == x) return x;
    x = next;
  }
}

// Pairs joined by a weight-0 walk whose prefixes never drop below zero
// (up = true) or never rise above zero (up = false), with every point of
// the walk inside `allowed`.
inline BoolMatrix r0_one_sided(const UnitRelations& e, const StateSet& allowed, bool up) {
  BoolMatrix d = BoolMatrix::diag(allowed);
  BoolMatrix z = d * e.zero * d;
  BoolMatrix first = d * (up ? e.up : e.down) * d;
  BoolMatrix back = d * (up ? e.down : e.up) * d;
  BoolMatrix x = d | z;
  for (;;) {
    BoolMatrix next = x | (x * x) | (first * x * back);
    if (next == x) return x;
    x = next;
  }
}

// Pairs joined by a walk of weight exactly k, computed by halving.
class WeightRelations {
 public:
  explicit WeightRelations(const UnitRelations& e) : e_(e) {
    memo_[0] = r0_fixpoint(e);
    memo_[1] = memo_[0] * e.up * memo_[0];
    memo_[-1] = memo_[0] * e.down * memo_[0];
  }
  const BoolMatrix& get(std::int64_t k) {
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    std::int64_t a = k / 2, b = k - a;  // a + b = k, |a| <= |b| <= |a| + 1
    BoolMatrix m = get(a) * get(b);
    return memo_[k] = std::move(m);
  }

 private:
  UnitRelations e_;
  std::map<std::int64_t, BoolMatrix> memo_;
};

namespace detail {

inline std::vector<WeightedEdge> invert(const std::vector<WeightedEdge>& es) {
  std::vector<WeightedEdge> r = es;
  for (auto& e : r) e.weight = -e.weight;
  return r;
}

// E phi U_{cmp k} psi at every state; edges already inverted if needed.
inline StateSet exists_until(const KripkeStructure& g, const std::vector<WeightedEdge>& edges,
                             const StateSet& phi, const StateSet& psi, Cmp cmp, std::int64_t k) {
  const int n = g.size();
  StateSet until = ctl_eu(g, phi, psi);
  std::vector<WeightedEdge> sub;
  for (const auto& e : edges)
    if (until[e.src] && until[e.dst] && !(psi[e.src] && !phi[e.src])) sub.push_back(e);
  if (cmp == Cmp::Lt) cmp = Cmp::Le, k = checked_add(k, -1);
  if (cmp == Cmp::Gt) cmp = Cmp::Ge, k = checked_add(k, 1);
  if (cmp == Cmp::Ge) {
    sub = invert(sub);
    cmp = Cmp::Le;
    k = checked_mul(k, -1);
  }
  StateSet r(n);
  if (cmp == Cmp::Le) {
    WeightMatrix a = shortest_paths(n, sub);
    for (int q : until.elements())
      for (int p : psi.elements())
        if (until[p] && a.at(q, p) <= k) {
          r.set(q);
          break;
        }
    return r;
  }
  UnitRelations rel = k >= 0 ? UnitRelations(n, sub) : UnitRelations(n, sub).inverted();
  WeightRelations wr(rel);
  const BoolMatrix& m = wr.get(k >= 0 ? k : -k);
  for (int q : until.elements())
    for (int p : psi.elements())
      if (until[p] && m.get(q, p)) {
        r.set(q);
        break;
      }
  return r;
}

// relation^m under the composition x;y = x * diag(mid) * y, for m >= 1.
inline BoolMatrix power_through(const BoolMatrix& base, const BoolMatrix& mid, std::int64_t m) {
  BoolMatrix result;
  bool have = false;
  BoolMatrix sq = base;
  for (std::int64_t e = m; e > 0; e >>= 1) {
    if (e & 1) {
      result = have ? result * mid * sq : sq;
      have = true;
    }
    if (e > 1) sq = sq * mid * sq;
  }
  return result;
}

}  // namespace detail

// The structure on which a universal weighted until becomes a CTL query.
// States: copies of every state at the target level (Q), strictly above it
// (Q+), strictly below it (Q-), an initial copy used before the target
// level is first reached (only when k > 0), and a sink. Propositions:
// phi_hat, psi_hat, and ok marking copies whose level makes the bound hold.
struct AuGadget {
  KripkeStructure ks;
  std::vector<int> start;  // gadget state to query for each original state
  Formula query;           // holds exactly where the universal until fails
};

inline AuGadget build_au_gadget(const KripkeStructure& g, const std::vector<WeightedEdge>& edges,
                                const StateSet& phi, const StateSet& psi, Cmp cmp, std::int64_t k) {
  if (k < 0) return build_au_gadget(g, detail::invert(edges), phi, psi, mirror(cmp), -k);
  const int n = g.size();
  UnitRelations e(n, edges);
  const bool good_below = compare(k - 1, cmp, k);
  const bool good_at = compare(k, cmp, k);
  const bool good_above = compare(k + 1, cmp, k);
  auto allowed = [&](bool good_region) {
    StateSet a(n, true);
    if (good_region) a &= ~psi;
    return a;
  };
  const StateSet a_below = allowed(good_below), a_above = allowed(good_above);
  const BoolMatrix p_above = r0_one_sided(e, a_above, true);
  const BoolMatrix p_below = r0_one_sided(e, a_below, false);
  const BoolMatrix exc_up = e.up * p_above * e.down;
  const BoolMatrix exc_down = e.down * p_below * e.up;
  const BoolMatrix at_at = e.zero | exc_up | exc_down;
  const BoolMatrix above_above = e.up | e.zero | exc_up;
  const BoolMatrix below_below = e.down | e.zero | exc_down;

  AuGadget out;
  KripkeStructure& s = out.ks;
  auto add_copy = [&](int q, const std::string& suffix, bool ok) {
    std::vector<std::string> l;
    if (phi[q]) l.push_back("phi_hat");
    if (psi[q]) l.push_back("psi_hat");
    if (ok) l.push_back("ok");
    return s.add_state(g.name(q) + suffix, l);
  };
  std::vector<int> at(n), above(n), below(n), init(n, -1);
  for (int q = 0; q < n; ++q) at[q] = add_copy(q, "", !good_at);
  for (int q = 0; q < n; ++q) above[q] = add_copy(q, "^+", !good_above);
  for (int q = 0; q < n; ++q) below[q] = add_copy(q, "^-", !good_below);
  if (k > 0)
    for (int q = 0; q < n; ++q) init[q] = add_copy(q, "^init", !good_below);
  s.add_ap("phi_hat");
  s.add_ap("psi_hat");
  s.add_ap("ok");
  const int bottom = s.add_state("q_bot", {"psi_hat"});
  for (int i = 0; i < s.size(); ++i) s.add_edge(i, bottom);

  auto connect = [&](const BoolMatrix& m, const std::vector<int>& from, const std::vector<int>& to) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m.get(i, j)) s.add_edge(from[i], to[j]);
  };
  connect(at_at, at, at);
  connect(e.up, at, above);
  connect(e.down, at, below);
  connect(above_above, above, above);
  connect(below_below, below, below);
  if (k > 0) {
    const BoolMatrix da = BoolMatrix::diag(a_below);
    // First arrival one level up, every point before the last one allowed.
    const BoolMatrix t1 = p_below * e.up;
    const BoolMatrix tk = detail::power_through(t1, da, k);
    connect(tk, init, at);
    // Walks that climb to some maximum m < k and then never exceed it,
    // every point allowed.
    const BoolMatrix b1 = t1 * da;
    BoolMatrix down_walks = p_below;
    for (const BoolMatrix step = e.down * da * p_below;;) {
      BoolMatrix next = down_walks | (down_walks * step);
      if (next == down_walks) break;
      down_walks = next;
    }
    // climbs = union of first arrivals at levels 0..k-1, by binary expansion
    // of k-1 with U(a+b) = U(a) | B(a) U(b) and B(a+b) = B(a) B(b).
    const BoolMatrix u1 = da | b1;
    BoolMatrix climbs = da, reach = da;
    const std::int64_t target = k - 1;
    for (int bit = 62; bit >= 0; --bit) {
      climbs = climbs | (reach * climbs);
      reach = reach * reach;
      if ((target >> bit) & 1) {
        climbs = climbs | (reach * u1);
        reach = reach * b1;
      }
    }
    connect(climbs * down_walks, init, below);
  }

  out.start.resize(n);
  for (int q = 0; q < n; ++q) out.start[q] = k > 0 ? init[q] : at[q];
  Formula fine = mk_or(mk_not(mk_atom("psi_hat")), mk_atom("ok"));
  Formula stop = mk_and(mk_not(mk_atom("phi_hat")), fine);
  out.query = mk_or(mk_eu(fine, stop), mk_eg(fine));
  return out;
}

// {q : q |= E/A phi U_{cmp k} psi}, weights in {-1, 0, 1}.
inline StateSet tctl_until(const DurationalKS& d, bool universal, const StateSet& phi, const StateSet& psi, Cmp cmp,
                           std::int64_t k) {
  if (d.weight_class() == WeightClass::Arbitrary)
    throw fragment_error("weights outside {-1,0,1}; embed the structure into a Kripke structure instead");
  const KripkeStructure& g = d.base;
  if (!universal) {
    if (k < 0) return detail::exists_until(g, detail::invert(d.edges()), phi, psi, mirror(cmp), -k);
    return detail::exists_until(g, d.edges(), phi, psi, cmp, k);
  }
  AuGadget gadget = build_au_gadget(g, d.edges(), phi, psi, cmp, k);
  StateSet fails = mc_ctl(gadget.ks, gadget.query);
  StateSet r(g.size());
  for (int q = 0; q < g.size(); ++q) r.set(q, !fails[gadget.start[q]]);
  return r;
}

// Reads a modality constraint of the form {#TT ~ k}.
inline std::optional<std::pair<Cmp, std::int64_t>> duration_constraint(Constraint c) {
  if (c.null() || !c.is(CKind::Atom) || c.terms().size() != 1) return std::nullopt;
  const Term& t = c.terms()[0];
  if (t.coeff != 1 || !t.counted.is(FKind::True)) return std::nullopt;
  return std::make_pair(c.cmp(), c.bound());
}

inline StateSet mc_tctl_dks(const DurationalKS& d, Formula f, LabelingTable& t) {
  return label_formula(d.base, f, t, [&](Formula g, const LabelingTable& tt) {
    bool universal = g.is(FKind::AU);
    const StateSet& a = tt.at(g.lhs());
    const StateSet& b = tt.at(g.rhs());
    if (g.constraint().null()) return universal ? ctl_au(d.base, a, b) : ctl_eu(d.base, a, b);
    auto dc = duration_constraint(g.constraint());
    if (!dc) throw fragment_error("DKS constraints must read {#TT ~ k}: " + to_string(g));
    return tctl_until(d, universal, a, b, dc->first, dc->second);
  });
}

inline StateSet mc_tctl_dks(const DurationalKS& d, Formula f) {
  LabelingTable t;
  return mc_tctl_dks(d, f, t);
}

}  // namespace cctl
