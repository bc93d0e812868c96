#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "asq/group.hpp"

namespace asq {

// All subgroups of a p-group of order `order` none of whose nonidentity
// elements lie in any of the `avoid` sets. Built level by level: a subgroup of
// order p^(k+1) contains a normal subgroup of order p^k, so extending every
// subgroup of order p^k by one element reaches all of them. The result is
// sorted by element set.
inline std::vector<Subgroup> enumerate_subgroups(const Group& g, std::size_t order,
                                                 const std::vector<ElemSet>& avoid = {}) {
  const int p = g.prime();
  if (order == 1) return {Subgroup::trivial(g)};
  if (p == 0) throw std::invalid_argument("subgroups: enumeration implemented for p-groups only");
  std::size_t o = 1;
  while (o < order) o *= static_cast<std::size_t>(p);
  if (o != order || g.order() % order) throw std::invalid_argument("subgroups: order must be a power of p dividing |G|");

  auto forbidden = [&](Elem x) {
    return std::any_of(avoid.begin(), avoid.end(), [x](const ElemSet& s) { return s.test(x); });
  };
  std::vector<Subgroup> level{Subgroup::trivial(g)};
  for (std::size_t cur = 1; cur < order; cur *= static_cast<std::size_t>(p)) {
    std::set<std::vector<Elem>> seen;
    std::vector<Subgroup> next;
    for (const Subgroup& s : level) {
      std::vector<bool> covered(g.order());
      for (std::size_t xi = 1; xi < g.order(); ++xi) {
        const Elem x = static_cast<Elem>(xi);
        if (covered[x] || s.contains(x) || forbidden(x)) continue;
        if (!s.contains(g.pow(x, p))) continue;
        std::vector<Elem> gens = s.generators();
        gens.push_back(x);
        Subgroup t = Subgroup::generate(g, gens);
        for (Elem y : t.elements()) covered[y] = true;
        if (t.order() != cur * static_cast<std::size_t>(p)) continue;
        if (std::any_of(t.elements().begin() + 1, t.elements().end(), forbidden)) continue;
        if (seen.insert(t.elements()).second) next.push_back(std::move(t));
      }
    }
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

// Greedy generating set: each element is the least one outside the span of
// the previous ones.
inline std::vector<Elem> minimal_generators(const Subgroup& h) {
  std::vector<Elem> gens;
  Subgroup cur = Subgroup::trivial(h.group());
  for (Elem x : h.elements()) {
    if (cur.contains(x)) continue;
    gens.push_back(x);
    cur = Subgroup::generate(h.group(), gens);
    if (cur.order() == h.order()) break;
  }
  return gens;
}

inline ElemSet element_set(const Subgroup& h) { return h.bits(); }

inline ElemSet nonidentity_set(const Subgroup& h) {
  ElemSet s = h.bits();
  s.reset(0);
  return s;
}

// Elementary abelian subgroups of order 2^k meeting every avoid set only in
// the identity. Each subgroup is produced once from its canonical generator
// sequence: g1 is its least nonidentity element and g(i+1) is the least
// element outside <g1, ..., gi>.
inline std::vector<Subgroup> enumerate_elem_abelian_subgroups(const Group& g, std::size_t order,
                                                              const std::vector<ElemSet>& avoid = {}) {
  int k = 0;
  while ((std::size_t{1} << k) < order) ++k;
  if ((std::size_t{1} << k) != order || k > 4) throw std::invalid_argument("subgroups: order must be 1, 2, 4, 8 or 16");
  const std::size_t n = g.order();
  std::vector<bool> ok(n);
  std::vector<Elem> invols;
  for (std::size_t x = 1; x < n; ++x) {
    const Elem e = static_cast<Elem>(x);
    if (g.elem_order(e) != 2) continue;
    if (std::any_of(avoid.begin(), avoid.end(), [e](const ElemSet& s) { return s.test(e); })) continue;
    ok[x] = true;
    invols.push_back(e);
  }
  std::vector<Subgroup> out;
  if (k == 0) {
    out.push_back(Subgroup::trivial(g));
    return out;
  }
  // elems: current subgroup elements, min_gen: least element that may still appear
  std::function<void(std::vector<Elem>&, std::vector<Elem>&, int)> rec = [&](std::vector<Elem>& elems,
                                                                             std::vector<Elem>& gens, int depth) {
    if (depth == k) {
      out.push_back(Subgroup::from_closed_set(g, elems));
      return;
    }
    const Elem last = gens.empty() ? 0 : gens.back();
    for (Elem x : invols) {
      if (x <= last) continue;
      bool good = true;
      for (Elem gi : gens)
        if (g.mul(gi, x) != g.mul(x, gi)) {
          good = false;
          break;
        }
      if (!good) continue;
      // the new coset x*S must avoid the forbidden sets and have x as its minimum
      std::vector<Elem> coset;
      coset.reserve(elems.size());
      for (Elem s : elems) {
        const Elem y = g.mul(x, s);
        if (!ok[y] || y < x) {
          good = false;
          break;
        }
        coset.push_back(y);
      }
      if (!good) continue;
      const std::size_t old = elems.size();
      elems.insert(elems.end(), coset.begin(), coset.end());
      gens.push_back(x);
      rec(elems, gens, depth + 1);
      gens.pop_back();
      elems.resize(old);
    }
  };
  std::vector<Elem> elems{0}, gens;
  rec(elems, gens, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// Homomorphisms H -> C2 as kernel subgroups, excluding the trivial one.
inline std::vector<Subgroup> index_two_subgroups(const Subgroup& h) {
  const Group& g = h.group();
  // Express every element as a word in generators: parent pointers from a BFS.
  std::vector<Elem> gens;
  {
    Subgroup acc = Subgroup::trivial(g);
    for (Elem x : h.elements())
      if (!acc.contains(x)) {
        gens.push_back(x);
        acc = Subgroup::generate(g, gens);
      }
  }
  std::map<Elem, std::pair<Elem, int>> parent;  // element -> (previous, generator index)
  std::vector<Elem> order{0};
  parent[0] = {0, -1};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const Elem y = g.mul(order[i], gens[j]);
      if (!parent.count(y)) {
        parent[y] = {order[i], static_cast<int>(j)};
        order.push_back(y);
      }
    }
  std::vector<Subgroup> out;
  std::set<std::vector<Elem>> seen;
  for (std::size_t mask = 1; mask < (std::size_t{1} << gens.size()); ++mask) {
    std::map<Elem, int> phi;
    phi[0] = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const auto [prev, j] = parent[order[i]];
      phi[order[i]] = phi[prev] ^ static_cast<int>((mask >> j) & 1u);
    }
    bool hom = true;
    for (Elem x : h.elements()) {
      for (Elem y : h.elements())
        if (phi[g.mul(x, y)] != (phi[x] ^ phi[y])) {
          hom = false;
          break;
        }
      if (!hom) break;
    }
    if (!hom) continue;
    std::vector<Elem> ker;
    for (Elem x : h.elements())
      if (phi[x] == 0) ker.push_back(x);
    if (seen.insert(ker).second) out.push_back(Subgroup::from_closed_set(g, std::move(ker)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All K <= H with K n N = 1 and KN = H, for N central of order 2 in H.
inline std::vector<Subgroup> complements(const Subgroup& h, const Subgroup& n) {
  const Group& g = h.group();
  if (n.order() != 2) throw std::invalid_argument("complements: N must have order 2");
  if (!n.is_subgroup_of(h)) throw std::invalid_argument("complements: N is not contained in H");
  const Elem z = n.elements()[1];
  for (Elem x : h.generators())
    if (g.mul(x, z) != g.mul(z, x)) throw std::invalid_argument("complements: N is not central in H");
  std::vector<Subgroup> out;
  for (auto& k : index_two_subgroups(h))
    if (!k.contains(z)) out.push_back(std::move(k));
  return out;
}

// Preimage in a cocycle group of a subspace of its Frattini quotient.
inline Subgroup preimage(const Group& g, const Subspace& w) {
  if (!g.cocycle()) throw std::invalid_argument("preimage: needs a cocycle group");
  const CocycleGroup& c = *g.cocycle();
  std::vector<Elem> el;
  for (Word v : w.elements()) {
    el.push_back(c.make(v, 0));
    el.push_back(c.make(v, 1));
  }
  return Subgroup::from_closed_set(g, std::move(el));
}

// Image of a subgroup in the Frattini quotient of a cocycle group.
inline Subspace projection(const Subgroup& h) {
  const CocycleGroup& c = *h.group().cocycle();
  Subspace s(c.dim());
  for (Elem x : h.generators()) s.insert(c.vec(x));
  return s;
}

// Automorphism (u, a) -> (gu, a + mu(u)) of a cocycle group lifting an
// isometry g of its squaring form. Returned as the image of every element.
inline std::vector<Elem> lift_isometry(const CocycleGroup& c, const BitMatrix& g) {
  const int d = c.dim();
  if (g.dim() != d) throw std::invalid_argument("lift_isometry: dimension mismatch");
  if (!g.invertible() || !c.form().preserved_by(g)) throw std::invalid_argument("lift_isometry: matrix does not preserve the form");
  auto corr = [&](Word u, Word v) { return c.beta(g.apply(u), g.apply(v)) ^ c.beta(u, v); };
  const std::size_t nv = std::size_t{1} << d;
  std::vector<int> mu(nv, 0);
  for (Word u = 1; u < nv; ++u) {
    const Word e = u & (~u + 1);
    mu[u] = mu[u ^ e] ^ corr(u ^ e, e);
  }
  std::vector<Elem> img(c.order());
  for (Word u = 0; u < nv; ++u)
    for (int a = 0; a < 2; ++a) img[c.make(u, a)] = c.make(g.apply(u), a ^ mu[u]);
  return img;
}

inline bool is_automorphism(const Group& g, const std::vector<Elem>& img) {
  if (img.size() != g.order()) return false;
  std::vector<bool> hit(g.order());
  for (Elem y : img) {
    if (y >= g.order() || hit[y]) return false;
    hit[y] = true;
  }
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      if (img[g.mul(static_cast<Elem>(a), static_cast<Elem>(b))] != g.mul(img[a], img[b])) return false;
  return true;
}

inline Subgroup apply_automorphism(const Subgroup& h, const std::vector<Elem>& img) {
  std::vector<Elem> el;
  el.reserve(h.order());
  for (Elem x : h.elements()) el.push_back(img[x]);
  return Subgroup::from_closed_set(h.group(), std::move(el));
}

// Partition of a list of subgroups into G-conjugacy classes; returns a class
// index per subgroup (classes numbered by first occurrence).
inline std::vector<int> conjugacy_classes(const Group& g, const std::vector<Subgroup>& subs) {
  std::map<std::vector<Elem>, std::size_t> index;
  for (std::size_t i = 0; i < subs.size(); ++i) index[subs[i].elements()] = i;
  std::vector<int> cls(subs.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = next;
    std::vector<std::size_t> queue{i};
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (Elem x : g.generators()) {
        const Subgroup c = conjugate_subgroup(subs[queue[qi]], x);
        auto it = index.find(c.elements());
        if (it == index.end()) throw std::invalid_argument("conjugacy_classes: list is not closed under conjugation");
        if (cls[it->second] < 0) {
          cls[it->second] = next;
          queue.push_back(it->second);
        }
      }
    ++next;
  }
  return cls;
}

}  // namespace asq
