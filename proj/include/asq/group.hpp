#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asq/gf2.hpp"
#include "asq/quadform.hpp"

namespace asq {

using Elem = std::uint16_t;

inline constexpr std::size_t kMaxGroupOrder = 1024;

// Central extension of GF(2)^d by GF(2) with cocycle beta(u, v) = u^T M v,
// M upper triangular. Element (u, a) is encoded as u | a << d.
// (u, a)^2 = (0, Q(u)) and [(u, a), (v, b)] = (0, B(u, v)) where Q is the
// quadratic form with coefficient matrix M.
class CocycleGroup {
 public:
  CocycleGroup() = default;
  explicit CocycleGroup(QuadraticForm form) : form_(std::move(form)) {
    if (form_.dim() + 1 > 10) throw std::invalid_argument("group: cocycle groups need d <= 9");
  }

  int dim() const { return form_.dim(); }
  const QuadraticForm& form() const { return form_; }
  std::size_t order() const { return std::size_t{1} << (dim() + 1); }
  Word vector_mask() const { return (Word{1} << dim()) - 1; }

  int beta(Word u, Word v) const {
    int r = 0;
    for (Word w = u; w; w &= w - 1) r ^= parity(form_.upper()[static_cast<std::size_t>(lowest_bit(w))] & v);
    return r;
  }

  Elem mul(Elem x, Elem y) const {
    const Word m = vector_mask();
    const Word u = x & m, v = y & m;
    const Word a = (x >> dim()) ^ (y >> dim()) ^ static_cast<Word>(beta(u, v));
    return static_cast<Elem>((u ^ v) | (a << dim()));
  }

  Elem make(Word u, int a) const { return static_cast<Elem>(u | (static_cast<Word>(a & 1) << dim())); }
  Word vec(Elem x) const { return x & vector_mask(); }
  Elem central_involution() const { return static_cast<Elem>(Word{1} << dim()); }

 private:
  QuadraticForm form_;
};

// Heisenberg group of upper unitriangular 3x3 matrices over GF(p), p odd:
// (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b'), encoded a + p b + p^2 c.
class HeisenbergGroup {
 public:
  explicit HeisenbergGroup(int p) : p_(p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("group: Heisenberg group needs an odd prime");
    for (int k = 3; k * k <= p; k += 2)
      if (p % k == 0) throw std::invalid_argument("group: Heisenberg group needs an odd prime");
    if (static_cast<std::size_t>(p) * p * p > kMaxGroupOrder) throw std::invalid_argument("group: Heisenberg group too large");
  }
  int prime() const { return p_; }
  std::size_t order() const { return static_cast<std::size_t>(p_) * p_ * p_; }
  Elem make(int a, int b, int c) const { return static_cast<Elem>(a + p_ * b + p_ * p_ * c); }
  std::array<int, 3> coords(Elem x) const { return {x % p_, (x / p_) % p_, x / (p_ * p_)}; }
  Elem mul(Elem x, Elem y) const {
    auto [a, b, c] = coords(x);
    auto [a2, b2, c2] = coords(y);
    return make((a + a2) % p_, (b + b2) % p_, (c + c2 + a * b2) % p_);
  }

 private:
  int p_;
};

// Finite group of order <= 1024 given by its multiplication table; the
// identity is element 0. Built-in constructors keep the structure they came from.
class Group {
 public:
  enum class Kind { table, cocycle, heisenberg };

  template <class Mul>
  static Group from_mul(std::size_t n, Mul&& mul, std::string name, bool verify_associative = false) {
    if (n == 0 || n > kMaxGroupOrder) throw std::invalid_argument("group: order out of range");
    Group g;
    g.n_ = n;
    g.name_ = std::move(name);
    g.table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto c = static_cast<std::size_t>(mul(static_cast<Elem>(a), static_cast<Elem>(b)));
        if (c >= n) throw std::invalid_argument("group: product out of range");
        g.table_[a * n + b] = static_cast<Elem>(c);
      }
    g.finish(verify_associative);
    return g;
  }

  static Group from_table(std::size_t n, std::vector<Elem> table, std::string name, bool verify_associative = true) {
    if (table.size() != n * n) throw std::invalid_argument("group: table has wrong size");
    return from_mul(n, [&](Elem a, Elem b) { return table[a * n + b]; }, std::move(name), verify_associative);
  }

  static Group from_cocycle(const CocycleGroup& c, std::string name) {
    Group g = from_mul(c.order(), [&](Elem a, Elem b) { return c.mul(a, b); }, std::move(name));
    g.kind_ = Kind::cocycle;
    g.cocycle_ = c;
    return g;
  }

  static Group from_heisenberg(const HeisenbergGroup& h) {
    Group g = from_mul(h.order(), [&](Elem a, Elem b) { return h.mul(a, b); }, "Heisenberg(" + std::to_string(h.prime()) + ")");
    g.kind_ = Kind::heisenberg;
    g.heis_p_ = h.prime();
    return g;
  }

  std::size_t order() const { return n_; }
  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  const std::optional<CocycleGroup>& cocycle() const { return cocycle_; }
  int heisenberg_prime() const { return heis_p_; }

  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  int elem_order(Elem a) const { return order_[a]; }
  Elem pow(Elem a, long long k) const {
    const int o = order_[a];
    k %= o;
    if (k < 0) k += o;
    Elem r = 0;
    for (long long i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }
  Elem commutator(Elem a, Elem b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  Elem conj(Elem a, Elem g) const { return mul(mul(inv(g), a), g); }

  // Prime p when |G| is a power of p, else 0.
  int prime() const {
    if (n_ == 1) return 0;
    std::size_t m = n_;
    int p = 2;
    while (m % static_cast<std::size_t>(p)) ++p;
    while (m % static_cast<std::size_t>(p) == 0) m /= static_cast<std::size_t>(p);
    return m == 1 ? p : 0;
  }

  bool is_abelian() const {
    for (Elem a : gens_)
      for (Elem b : gens_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  const std::vector<Elem>& generators() const { return gens_; }

  const std::vector<Elem>& table() const { return table_; }

  void check_element(Elem a) const {
    if (a >= n_) throw std::out_of_range("group: element " + std::to_string(a) + " is not in " + name_);
  }

 private:
  Group() = default;

  void finish(bool verify_associative) {
    for (std::size_t a = 0; a < n_; ++a)
      if (table_[a] != a || table_[a * n_] != a) throw std::invalid_argument("group: element 0 is not the identity");
    inv_.assign(n_, 0);
    for (std::size_t a = 0; a < n_; ++a) {
      std::vector<bool> row(n_);
      bool found = false;
      for (std::size_t b = 0; b < n_; ++b) {
        const Elem c = table_[a * n_ + b];
        if (row[c]) throw std::invalid_argument("group: table row is not a permutation");
        row[c] = true;
        if (c == 0) {
          inv_[a] = static_cast<Elem>(b);
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("group: missing inverse");
    }
    if (verify_associative) {
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
          const Elem ab = table_[a * n_ + b];
          for (std::size_t c = 0; c < n_; ++c)
            if (table_[ab * n_ + c] != table_[a * n_ + table_[b * n_ + c]])
              throw std::invalid_argument("group: table is not associative");
        }
    }
    order_.assign(n_, 1);
    for (std::size_t a = 1; a < n_; ++a) {
      Elem x = static_cast<Elem>(a);
      int k = 1;
      while (x != 0) {
        x = mul(x, static_cast<Elem>(a));
        ++k;
      }
      order_[a] = k;
    }
    // Greedy generating set, elements of large order first.
    std::vector<Elem> byorder(n_);
    std::iota(byorder.begin(), byorder.end(), Elem{0});
    std::stable_sort(byorder.begin(), byorder.end(), [&](Elem x, Elem y) { return order_[x] > order_[y]; });
    std::vector<bool> in(n_);
    std::vector<Elem> cur{0};
    in[0] = true;
    for (Elem x : byorder) {
      if (in[x]) continue;
      gens_.push_back(x);
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (Elem g : gens_) {
          const Elem y = mul(cur[i], g);
          if (!in[y]) {
            in[y] = true;
            cur.push_back(y);
          }
        }
    }
  }

  std::size_t n_ = 0;
  std::string name_;
  Kind kind_ = Kind::table;
  std::vector<Elem> table_, inv_;
  std::vector<int> order_;
  std::vector<Elem> gens_;
  std::optional<CocycleGroup> cocycle_;
  int heis_p_ = 0;
};

// Membership bitmap over the elements of a group.
class ElemSet {
 public:
  ElemSet() = default;
  explicit ElemSet(std::size_t n) : n_(n), w_((n + 63) / 64) {}
  void set(Elem x) { w_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void reset(Elem x) { w_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }
  bool test(Elem x) const { return (w_[x >> 6] >> (x & 63)) & 1u; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t size() const { return n_; }
  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (test(static_cast<Elem>(i))) out.push_back(static_cast<Elem>(i));
    return out;
  }
  friend bool operator==(const ElemSet&, const ElemSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Subgroup with its full sorted element list. Holds a non-owning pointer to
// the parent group, which must outlive it.
class Subgroup {
 public:
  Subgroup() = default;

  static Subgroup generate(const Group& g, std::span<const Elem> gens) {
    Subgroup s;
    s.g_ = &g;
    for (Elem x : gens) g.check_element(x);
    s.gens_.assign(gens.begin(), gens.end());
    s.bits_ = ElemSet(g.order());
    std::vector<Elem> cur{0};
    s.bits_.set(0);
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (Elem x : gens) {
        const Elem y = g.mul(cur[i], x);
        if (!s.bits_.test(y)) {
          s.bits_.set(y);
          cur.push_back(y);
        }
      }
    std::sort(cur.begin(), cur.end());
    s.elems_ = std::move(cur);
    return s;
  }
  static Subgroup generate(const Group& g, std::initializer_list<Elem> gens) {
    return generate(g, std::span<const Elem>(gens.begin(), gens.size()));
  }

  // Trusts that `elems` is closed; generators are the elements themselves.
  static Subgroup from_closed_set(const Group& g, std::vector<Elem> elems) {
    Subgroup s;
    s.g_ = &g;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    s.bits_ = ElemSet(g.order());
    for (Elem x : elems) {
      g.check_element(x);
      s.bits_.set(x);
    }
    s.elems_ = std::move(elems);
    s.gens_ = s.elems_;
    return s;
  }

  static Subgroup whole(const Group& g) { return generate(g, g.generators()); }
  static Subgroup trivial(const Group& g) { return generate(g, std::span<const Elem>{}); }

  const Group& group() const { return *g_; }
  std::size_t order() const { return elems_.size(); }
  const std::vector<Elem>& elements() const { return elems_; }
  const std::vector<Elem>& generators() const { return gens_; }
  const ElemSet& bits() const { return bits_; }
  bool contains(Elem x) const { return x < bits_.size() && bits_.test(x); }
  bool is_trivial() const { return elems_.size() == 1; }

  bool is_subgroup_of(const Subgroup& o) const {
    return std::all_of(elems_.begin(), elems_.end(), [&](Elem x) { return o.contains(x); });
  }

  bool is_abelian() const {
    for (Elem a : gens_)
      for (Elem b : gens_)
        if (g_->mul(a, b) != g_->mul(b, a)) return false;
    return true;
  }

  int exponent() const {
    int e = 1;
    for (Elem x : elems_) e = std::lcm(e, g_->elem_order(x));
    return e;
  }

  bool is_elementary_abelian() const {
    if (!is_abelian()) return false;
    if (elems_.size() == 1) return true;
    const int p = g_->elem_order(elems_[1]);
    for (int k = 2; k * k <= p; ++k)
      if (p % k == 0) return false;
    return std::all_of(elems_.begin() + 1, elems_.end(), [&](Elem x) { return g_->elem_order(x) == p; });
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elems_ == b.elems_; }
  friend auto operator<=>(const Subgroup& a, const Subgroup& b) {
    if (auto c = a.elems_.size() <=> b.elems_.size(); c != 0) return c;
    return a.elems_ <=> b.elems_;
  }

 private:
  const Group* g_ = nullptr;
  std::vector<Elem> gens_;
  std::vector<Elem> elems_;
  ElemSet bits_;
};

// ---- characteristic subgroups -------------------------------------------

inline Subgroup center(const Group& g) {
  std::vector<Elem> z;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const Elem e = static_cast<Elem>(x);
    bool central = true;
    for (Elem h : g.generators())
      if (g.mul(e, h) != g.mul(h, e)) {
        central = false;
        break;
      }
    if (central) z.push_back(e);
  }
  return Subgroup::from_closed_set(g, std::move(z));
}

inline Subgroup derived(const Group& g) {
  std::vector<Elem> comms;
  ElemSet seen(g.order());
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) {
      const Elem c = g.commutator(static_cast<Elem>(a), static_cast<Elem>(b));
      if (!seen.test(c)) {
        seen.set(c);
        comms.push_back(c);
      }
    }
  return Subgroup::generate(g, comms);
}

// <g^(p^k) : g in G>
inline Subgroup agemo(const Group& g, int k) {
  const int p = g.prime();
  if (p == 0) throw std::invalid_argument("group: agemo needs a p-group");
  long long e = 1;
  for (int i = 0; i < k; ++i) e *= p;
  std::vector<Elem> pw;
  ElemSet seen(g.order());
  for (std::size_t a = 0; a < g.order(); ++a) {
    const Elem x = g.pow(static_cast<Elem>(a), e);
    if (!seen.test(x)) {
      seen.set(x);
      pw.push_back(x);
    }
  }
  return Subgroup::generate(g, pw);
}

inline Subgroup agemo(const Subgroup& h, int k) {
  const Group& g = h.group();
  const int p = g.prime();
  if (p == 0) throw std::invalid_argument("group: agemo needs a p-group");
  long long e = 1;
  for (int i = 0; i < k; ++i) e *= p;
  std::vector<Elem> pw;
  for (Elem a : h.elements()) pw.push_back(g.pow(a, e));
  return Subgroup::generate(g, pw);
}

// For a p-group, G^p [G, G].
inline Subgroup frattini(const Group& g) {
  const int p = g.prime();
  if (p == 0) throw std::invalid_argument("group: frattini subgroup implemented for p-groups only");
  const Subgroup d = derived(g), a = agemo(g, 1);
  std::vector<Elem> gens = d.elements();
  gens.insert(gens.end(), a.elements().begin(), a.elements().end());
  return Subgroup::generate(g, gens);
}

inline int exponent(const Group& g) {
  int e = 1;
  for (std::size_t a = 0; a < g.order(); ++a) e = std::lcm(e, g.elem_order(static_cast<Elem>(a)));
  return e;
}

// ---- subgroup operations --------------------------------------------------

inline Subgroup subgroup_generate(const Group& g, std::span<const Elem> gens) { return Subgroup::generate(g, gens); }

inline Subgroup conjugate_subgroup(const Subgroup& h, Elem x) {
  const Group& g = h.group();
  g.check_element(x);
  std::vector<Elem> el;
  el.reserve(h.order());
  for (Elem a : h.elements()) el.push_back(g.conj(a, x));
  return Subgroup::from_closed_set(g, std::move(el));
}

inline bool is_normal(const Group& g, const Subgroup& h) {
  for (Elem x : g.generators())
    for (Elem a : h.generators())
      if (!h.contains(g.conj(a, x))) return false;
  return true;
}

inline Subgroup centralizer(const Group& g, std::span<const Elem> s) {
  std::vector<Elem> c;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const Elem e = static_cast<Elem>(x);
    bool ok = true;
    for (Elem a : s) {
      g.check_element(a);
      if (g.mul(a, e) != g.mul(e, a)) {
        ok = false;
        break;
      }
    }
    if (ok) c.push_back(e);
  }
  return Subgroup::from_closed_set(g, std::move(c));
}

inline Subgroup centralizer(const Group& g, const Subgroup& h) { return centralizer(g, h.generators()); }

inline Subgroup normalizer(const Group& g, const Subgroup& h) {
  std::vector<Elem> nm;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const Elem e = static_cast<Elem>(x);
    bool ok = true;
    for (Elem a : h.generators())
      if (!h.contains(g.conj(a, e))) {
        ok = false;
        break;
      }
    if (ok) nm.push_back(e);
  }
  return Subgroup::from_closed_set(g, std::move(nm));
}

inline Subgroup intersection(const Subgroup& a, const Subgroup& b) {
  std::vector<Elem> el;
  for (Elem x : a.elements())
    if (b.contains(x)) el.push_back(x);
  return Subgroup::from_closed_set(a.group(), std::move(el));
}

// The set AB = {ab}.
inline ElemSet product_set(const Subgroup& a, const Subgroup& b) {
  const Group& g = a.group();
  ElemSet s(g.order());
  for (Elem x : a.elements())
    for (Elem y : b.elements()) s.set(g.mul(x, y));
  return s;
}

// True iff s meets h only in the identity.
inline bool meets_trivially(const ElemSet& s, const Subgroup& h) {
  for (std::size_t i = 1; i < h.elements().size(); ++i)
    if (s.test(h.elements()[i])) return false;
  return true;
}

inline bool meets_trivially(const Subgroup& a, const Subgroup& b) {
  for (std::size_t i = 1; i < b.elements().size(); ++i)
    if (a.contains(b.elements()[i])) return false;
  return true;
}

// Subgroup generated by the union (for a normal factor this is the product).
inline Subgroup join(const Subgroup& a, const Subgroup& b) {
  std::vector<Elem> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return Subgroup::generate(a.group(), gens);
}

// ---- quotients -------------------------------------------------------------

struct Quotient {
  std::unique_ptr<Group> group;
  std::vector<Elem> projection;          // element of G -> coset index
  std::vector<Elem> representative;      // coset index -> a representative in G
};

inline Quotient quotient(const Group& g, const Subgroup& n, std::string name = {}) {
  if (!is_normal(g, n)) throw std::invalid_argument("group: quotient by a non-normal subgroup");
  Quotient q;
  const std::size_t m = g.order() / n.order();
  q.projection.assign(g.order(), 0);
  std::vector<bool> done(g.order());
  // coset 0 must be N itself so that the identity is element 0
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    const Elem c = static_cast<Elem>(q.representative.size());
    q.representative.push_back(static_cast<Elem>(x));
    for (Elem a : n.elements()) {
      const Elem y = g.mul(static_cast<Elem>(x), a);
      done[y] = true;
      q.projection[y] = c;
    }
  }
  if (q.representative.size() != m) throw std::logic_error("group: coset count mismatch");
  const auto& proj = q.projection;
  const auto& rep = q.representative;
  q.group = std::make_unique<Group>(Group::from_mul(
      m, [&](Elem a, Elem b) { return proj[g.mul(rep[a], rep[b])]; }, name.empty() ? g.name() + "/N" : std::move(name)));
  return q;
}

// ---- small groups ------------------------------------------------------------

inline Group cyclic_group(std::size_t n) {
  return Group::from_mul(n, [n](Elem a, Elem b) { return static_cast<Elem>((a + b) % n); }, "C" + std::to_string(n));
}

inline Group direct_product(const Group& a, const Group& b, std::string name = {}) {
  const std::size_t nb = b.order();
  return Group::from_mul(
      a.order() * nb,
      [&](Elem x, Elem y) {
        return static_cast<Elem>(a.mul(static_cast<Elem>(x / nb), static_cast<Elem>(y / nb)) * nb +
                                 b.mul(static_cast<Elem>(x % nb), static_cast<Elem>(y % nb)));
      },
      name.empty() ? a.name() + "x" + b.name() : std::move(name));
}

inline Group elementary_abelian(int p, int k) {
  Group g = cyclic_group(static_cast<std::size_t>(p));
  for (int i = 1; i < k; ++i) g = direct_product(g, cyclic_group(static_cast<std::size_t>(p)));
  std::string name = "C" + std::to_string(p) + "^" + std::to_string(k);
  std::size_t n = g.order();
  return Group::from_table(n, g.table(), name, false);
}

// Dihedral group of order 2m: r^i s^j encoded i + m j.
inline Group dihedral_group(std::size_t m) {
  return Group::from_mul(
      2 * m,
      [m](Elem x, Elem y) {
        const std::size_t i = x % m, j = x / m, k = y % m, l = y / m;
        const std::size_t r = j ? (i + m - k) % m : (i + k) % m;
        return static_cast<Elem>(r + m * (j ^ l));
      },
      "D" + std::to_string(2 * m));
}

// Quaternion group: elements +-1, +-i, +-j, +-k encoded 0..7 as sign*4 + unit.
inline Group quaternion_group() {
  // unit products: table[u][v] = (sign, unit) for u, v in {1, i, j, k}
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  return Group::from_mul(
      8,
      [](Elem x, Elem y) {
        const int su = x / 4, u = x % 4, sv = y / 4, v = y % 4;
        return static_cast<Elem>(((su ^ sv ^ sign[u][v]) * 4) + unit[u][v]);
      },
      "Q8");
}

// C_{p^2} x| C_p with the generator of C_p acting as x -> x^(1+p): the
// extraspecial group of order p^3 and exponent p^2.
inline Group extraspecial_exponent_p2(int p) {
  const int m = p * p;
  return Group::from_mul(
      static_cast<std::size_t>(m * p),
      [p, m](Elem x, Elem y) {
        const int a = x % m, b = x / m, c = y % m, d = y / m;
        int f = 1;
        for (int i = 0; i < b; ++i) f = (f * (1 + p)) % m;
        return static_cast<Elem>(((a + c * f) % m) + m * ((b + d) % p));
      },
      "M" + std::to_string(m * p));
}

// Built-in catalogue of all groups of order 8 or 27 up to isomorphism.
inline std::vector<Group> small_groups(std::size_t order) {
  std::vector<Group> out;
  if (order == 8) {
    out.push_back(cyclic_group(8));
    out.push_back(direct_product(cyclic_group(4), cyclic_group(2)));
    out.push_back(elementary_abelian(2, 3));
    out.push_back(dihedral_group(4));
    out.push_back(quaternion_group());
  } else if (order == 27) {
    out.push_back(cyclic_group(27));
    out.push_back(direct_product(cyclic_group(9), cyclic_group(3)));
    out.push_back(elementary_abelian(3, 3));
    out.push_back(Group::from_heisenberg(HeisenbergGroup(3)));
    out.push_back(extraspecial_exponent_p2(3));
  } else {
    throw std::invalid_argument("small_groups: built-in catalogue covers orders 8 and 27");
  }
  return out;
}

// ---- group file format -------------------------------------------------------

inline Group parse_group(const std::string& text, const std::string& name = "file") {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> std::string {
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    throw std::invalid_argument("group file: unexpected end of input after line " + std::to_string(lineno));
  };
  auto expect_key = [&](const std::string& key) {
    std::string l = next_line();
    std::istringstream ls(l);
    std::string k;
    ls >> k;
    if (k != key + ":") throw std::invalid_argument("group file line " + std::to_string(lineno) + ": expected '" + key + ":'");
    std::string v;
    ls >> v;
    return v;
  };
  const std::string kind = expect_key("kind");
  try {
    if (kind == "cocycle") {
      const int d = std::stoi(expect_key("dim"));
      if (d < 1 || d > 9) throw std::invalid_argument("group file line " + std::to_string(lineno) + ": dim must be 1..9");
      std::vector<Word> up(static_cast<std::size_t>(d), 0);
      for (int i = 0; i < d; ++i) {
        std::string row = next_line();
        row.erase(std::remove_if(row.begin(), row.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; }), row.end());
        if (static_cast<int>(row.size()) != d)
          throw std::invalid_argument("group file line " + std::to_string(lineno) + ": expected " + std::to_string(d) + " bits");
        for (int j = 0; j < d; ++j) {
          const char ch = row[static_cast<std::size_t>(j)];
          if (ch != '0' && ch != '1') throw std::invalid_argument("group file line " + std::to_string(lineno) + ": bad bit");
          if (j >= i && ch == '1') up[static_cast<std::size_t>(i)] |= Word{1} << j;
        }
      }
      return Group::from_cocycle(CocycleGroup(QuadraticForm(d, std::move(up))), name);
    }
    if (kind == "heisenberg") {
      const int p = std::stoi(expect_key("p"));
      return Group::from_heisenberg(HeisenbergGroup(p));
    }
    if (kind == "table") {
      const long n = std::stol(expect_key("n"));
      if (n < 1 || n > static_cast<long>(kMaxGroupOrder))
        throw std::invalid_argument("group file line " + std::to_string(lineno) + ": order out of range");
      std::vector<Elem> table;
      table.reserve(static_cast<std::size_t>(n * n));
      for (long i = 0; i < n; ++i) {
        std::istringstream ls(next_line());
        long v;
        long cnt = 0;
        while (ls >> v) {
          if (v < 0 || v >= n) throw std::invalid_argument("group file line " + std::to_string(lineno) + ": entry out of range");
          table.push_back(static_cast<Elem>(v));
          ++cnt;
        }
        if (cnt != n) throw std::invalid_argument("group file line " + std::to_string(lineno) + ": expected " + std::to_string(n) + " entries");
      }
      return Group::from_table(static_cast<std::size_t>(n), std::move(table), name, true);
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument("group file line " + std::to_string(lineno) + ": " + e.what());
  }
  throw std::invalid_argument("group file line 1: unknown kind '" + kind + "'");
}

inline std::string format_group(const Group& g) {
  std::ostringstream os;
  if (g.kind() == Group::Kind::cocycle) {
    const auto& c = *g.cocycle();
    os << "kind: cocycle\ndim: " << c.dim() << '\n';
    for (int i = 0; i < c.dim(); ++i) {
      for (int j = 0; j < c.dim(); ++j) os << (((c.form().upper()[static_cast<std::size_t>(i)] >> j) & 1u) ? '1' : '0');
      os << '\n';
    }
  } else if (g.kind() == Group::Kind::heisenberg) {
    os << "kind: heisenberg\np: " << g.heisenberg_prime() << '\n';
  } else {
    os << "kind: table\nn: " << g.order() << '\n';
    for (std::size_t a = 0; a < g.order(); ++a) {
      for (std::size_t b = 0; b < g.order(); ++b) os << (b ? " " : "") << g.mul(static_cast<Elem>(a), static_cast<Elem>(b));
      os << '\n';
    }
  }
  return os.str();
}

// ---- the four order-512 groups ------------------------------------------------

enum class Order512Id { g208a, g210b, g211p, g212m };

inline Order512Id parse_table4_id(const std::string& s) {
  if (s == "208a") return Order512Id::g208a;
  if (s == "210b") return Order512Id::g210b;
  if (s == "211p") return Order512Id::g211p;
  if (s == "212m") return Order512Id::g212m;
  throw std::invalid_argument("unknown group id '" + s + "' (expected 208a, 210b, 211p or 212m)");
}

inline const char* to_string(Order512Id id) {
  switch (id) {
    case Order512Id::g208a: return "208a";
    case Order512Id::g210b: return "210b";
    case Order512Id::g211p: return "211p";
    case Order512Id::g212m: return "212m";
  }
  return "?";
}

inline QuadraticForm table4_form(Order512Id id) {
  switch (id) {
    case Order512Id::g208a: return form_deg_hyp6();
    case Order512Id::g210b: return form_deg_c4();
    case Order512Id::g211p: return form_plus8();
    case Order512Id::g212m: return form_minus8();
  }
  throw std::invalid_argument("bad group id");
}

inline CocycleGroup table4_cocycle(Order512Id id) { return CocycleGroup(table4_form(id)); }

inline Group table4_group(Order512Id id) { return Group::from_cocycle(table4_cocycle(id), to_string(id)); }

}  // namespace asq
