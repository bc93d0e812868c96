#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "asq/gf2.hpp"
#include "asq/group.hpp"
#include "asq/quadform.hpp"
#include "asq/subgroups.hpp"

namespace asq {

// ---- reports -----------------------------------------------------------------

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
  std::vector<Elem> witness;
};

struct Report {
  std::vector<Check> checks;

  Check& add(std::string name, bool ok, std::string detail = {}, std::vector<Elem> witness = {}) {
    checks.push_back({std::move(name), ok, std::move(detail), std::move(witness)});
    return checks.back();
  }
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.ok) return &c;
    return nullptr;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// ---- configurations ------------------------------------------------------------

struct ASConfiguration {
  const Group* group = nullptr;
  std::size_t q = 0;
  std::vector<Subgroup> U;  // U[0] is the distinguished normal subgroup
};

inline std::size_t cube_root(std::size_t n) {
  std::size_t q = 1;
  while (q * q * q < n) ++q;
  return q * q * q == n ? q : 0;
}

inline void check_sizes(const ASConfiguration& cfg) {
  if (!cfg.group) throw std::invalid_argument("configuration: no group");
  if (cfg.q < 2 || cfg.q * cfg.q * cfg.q != cfg.group->order())
    throw std::invalid_argument("configuration: |G| must equal q^3");
  if (cfg.U.size() != cfg.q + 2) throw std::invalid_argument("configuration: need q+2 subgroups");
  for (std::size_t i = 0; i < cfg.U.size(); ++i)
    if (cfg.U[i].order() != cfg.q)
      throw std::invalid_argument("configuration: U" + std::to_string(i) + " does not have order q");
}

// File format: "q: <n>" then lines "U<i>: g1 g2 ..." of generator codes.
inline ASConfiguration parse_configuration(const std::string& text, const Group& g) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("configuration file line " + std::to_string(lineno) + ": " + msg);
  };
  ASConfiguration cfg;
  cfg.group = &g;
  bool have_q = false;
  std::map<std::size_t, Subgroup> subs;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key.back() != ':') fail("expected 'key:'");
    key.pop_back();
    if (key == "q") {
      long v = 0;
      if (!(ls >> v) || v < 2) fail("bad value for q");
      cfg.q = static_cast<std::size_t>(v);
      have_q = true;
      continue;
    }
    if (key.size() < 2 || key[0] != 'U' || !std::all_of(key.begin() + 1, key.end(), ::isdigit)) fail("unknown key '" + key + "'");
    if (!have_q) fail("q must come first");
    const std::size_t idx = std::stoul(key.substr(1));
    std::vector<Elem> gens;
    long x = 0;
    while (ls >> x) {
      if (x < 0 || static_cast<std::size_t>(x) >= g.order()) fail("element " + std::to_string(x) + " out of range");
      gens.push_back(static_cast<Elem>(x));
    }
    if (!ls.eof()) fail("malformed element list");
    if (subs.count(idx)) fail("U" + std::to_string(idx) + " given twice");
    subs.emplace(idx, Subgroup::generate(g, gens));
  }
  if (!have_q) throw std::invalid_argument("configuration file: missing q");
  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto it = subs.find(i);
    if (it == subs.end()) throw std::invalid_argument("configuration file: missing U" + std::to_string(i));
    cfg.U.push_back(it->second);
  }
  return cfg;
}

inline std::string format_configuration(const ASConfiguration& cfg) {
  std::ostringstream out;
  out << "q: " << cfg.q << "\n";
  for (std::size_t i = 0; i < cfg.U.size(); ++i) {
    out << "U" << i << ":";
    for (Elem x : minimal_generators(cfg.U[i])) out << ' ' << x;
    out << "\n";
  }
  return out.str();
}

// U_i U_j n U_k = 1 for one orientation of every unordered triple. Together
// with trivial pairwise meets this is all of (AS2): if u_i u_j = u_k then
// u_k u_j^{-1} = u_i and u_i^{-1} u_k = u_j, so every orientation fails too.
inline Report check_as_axioms(const ASConfiguration& cfg) {
  check_sizes(cfg);
  const Group& g = *cfg.group;
  const auto& U = cfg.U;
  Report r;
  {
    bool ok = true;
    std::string det;
    for (std::size_t i = 0; i < U.size() && ok; ++i)
      for (std::size_t j = i + 1; j < U.size() && ok; ++j)
        if (U[i] == U[j]) {
          ok = false;
          det = "U" + std::to_string(i) + " = U" + std::to_string(j);
        }
    r.add("distinct", ok, det);
  }
  r.add("AS1: U0 normal", is_normal(g, U[0]), is_normal(g, U[0]) ? "" : "U0 is not normal");
  {
    Check c{"pairwise trivial", true, {}, {}};
    for (std::size_t i = 0; i < U.size() && c.ok; ++i)
      for (std::size_t j = i + 1; j < U.size() && c.ok; ++j)
        for (std::size_t k = 1; k < U[j].order(); ++k)
          if (U[i].contains(U[j].elements()[k])) {
            c.ok = false;
            c.detail = "U" + std::to_string(i) + " n U" + std::to_string(j);
            c.witness = {U[j].elements()[k]};
            break;
          }
    r.checks.push_back(c);
  }
  {
    Check c{"AS2", true, {}, {}};
    for (std::size_t i = 0; i < U.size() && c.ok; ++i)
      for (std::size_t j = i + 1; j < U.size() && c.ok; ++j) {
        const ElemSet p = product_set(U[i], U[j]);
        for (std::size_t k = j + 1; k < U.size() && c.ok; ++k)
          for (std::size_t e = 1; e < U[k].order(); ++e)
            if (p.test(U[k].elements()[e])) {
              c.ok = false;
              c.detail = "U" + std::to_string(i) + "U" + std::to_string(j) + " n U" + std::to_string(k);
              c.witness = {U[k].elements()[e]};
              break;
            }
      }
    r.checks.push_back(c);
  }
  return r;
}

// Every ordered triple checked separately, without the reduction.
inline bool as2_all_orientations(const std::vector<Subgroup>& U) {
  for (std::size_t i = 0; i < U.size(); ++i)
    for (std::size_t j = 0; j < U.size(); ++j) {
      if (i == j) continue;
      const ElemSet p = product_set(U[i], U[j]);
      for (std::size_t k = 0; k < U.size(); ++k)
        if (k != i && k != j && !meets_trivially(p, U[k])) return false;
    }
  return true;
}

// ---- partial difference sets ----------------------------------------------------

inline ElemSet delta(const ASConfiguration& cfg) {
  ElemSet s(cfg.group->order());
  for (const auto& u : cfg.U)
    for (std::size_t k = 1; k < u.order(); ++k) s.set(u.elements()[k]);
  return s;
}

struct PdsResult {
  bool ok = false;
  long lambda = -1;
  long mu = -1;
  Elem witness = 0;  // element whose count broke the pattern
  std::size_t size = 0;
};

// Counts representations g = s t^{-1} with s, t in D for every g != 1.
inline PdsResult check_pds(const Group& g, const ElemSet& d) {
  if (d.test(0)) throw std::invalid_argument("pds: set contains the identity");
  const auto el = d.elements();
  for (Elem x : el)
    if (!d.test(g.inv(x))) throw std::invalid_argument("pds: set is not inverse-closed");
  std::vector<long> cnt(g.order(), 0);
  for (Elem s : el)
    for (Elem t : el) ++cnt[g.mul(s, g.inv(t))];
  PdsResult r;
  r.size = el.size();
  r.ok = true;
  for (std::size_t x = 1; x < g.order(); ++x) {
    long& target = d.test(static_cast<Elem>(x)) ? r.lambda : r.mu;
    if (target < 0) target = cnt[x];
    if (target != cnt[x]) {
      r.ok = false;
      r.witness = static_cast<Elem>(x);
      return r;
    }
  }
  if (r.lambda < 0) r.lambda = 0;
  if (r.mu < 0) r.mu = 0;
  return r;
}

// ---- Kantor families -------------------------------------------------------------

struct KantorFamily {
  std::vector<Subgroup> F;
  std::vector<Subgroup> Fstar;  // Fstar[i] contains F[i]
};

inline KantorFamily kantor_from_as(const ASConfiguration& cfg) {
  KantorFamily k;
  for (std::size_t i = 1; i < cfg.U.size(); ++i) {
    k.F.push_back(cfg.U[i]);
    k.Fstar.push_back(join(cfg.U[0], cfg.U[i]));
  }
  return k;
}

inline Report check_kantor(const Group& g, const KantorFamily& fam, std::size_t s, std::size_t t) {
  Report r;
  const auto& F = fam.F;
  const auto& S = fam.Fstar;
  bool sizes = F.size() == t + 1 && S.size() == t + 1 && g.order() == s * s * t;
  for (const auto& a : F) sizes = sizes && a.order() == s;
  for (const auto& a : S) sizes = sizes && a.order() == s * t;
  r.add("sizes", sizes, sizes ? "" : "expected t+1 members of orders s and st in a group of order s^2 t");
  if (!sizes) return r;
  bool pairing = true;
  for (std::size_t i = 0; i < F.size(); ++i) pairing = pairing && F[i].is_subgroup_of(S[i]);
  r.add("pairing", pairing);
  {
    Check c{"K1: one member of F in each A*", true, {}, {}};
    for (std::size_t i = 0; i < S.size() && c.ok; ++i) {
      std::size_t inside = 0;
      for (const auto& a : F) inside += a.is_subgroup_of(S[i]) ? 1 : 0;
      if (inside != 1) {
        c.ok = false;
        c.detail = "A*" + std::to_string(i) + " contains " + std::to_string(inside) + " members";
      }
    }
    r.checks.push_back(c);
  }
  {
    Check c{"K2: A* n B = 1", true, {}, {}};
    for (std::size_t i = 0; i < S.size() && c.ok; ++i)
      for (std::size_t j = 0; j < F.size() && c.ok; ++j) {
        if (F[j].is_subgroup_of(S[i])) continue;
        for (std::size_t e = 1; e < F[j].order(); ++e)
          if (S[i].contains(F[j].elements()[e])) {
            c.ok = false;
            c.detail = "A*" + std::to_string(i) + " n A" + std::to_string(j);
            c.witness = {F[j].elements()[e]};
            break;
          }
      }
    r.checks.push_back(c);
  }
  {
    Check c{"K3: AB n C = 1", true, {}, {}};
    for (std::size_t i = 0; i < F.size() && c.ok; ++i)
      for (std::size_t j = 0; j < F.size() && c.ok; ++j) {
        if (i == j) continue;
        const ElemSet p = product_set(F[i], F[j]);
        for (std::size_t k = 0; k < F.size() && c.ok; ++k) {
          if (k == i || k == j) continue;
          for (std::size_t e = 1; e < F[k].order(); ++e)
            if (p.test(F[k].elements()[e])) {
              c.ok = false;
              c.detail = "A" + std::to_string(i) + "A" + std::to_string(j) + " n A" + std::to_string(k);
              c.witness = {F[k].elements()[e]};
              break;
            }
        }
      }
    r.checks.push_back(c);
  }
  return r;
}

// ---- consequences of a configuration ------------------------------------------------

inline bool triple_product_covers(const Group& g, const Subgroup& a, const Subgroup& b, const Subgroup& c) {
  const ElemSet p = product_set(a, b);
  ElemSet t(g.order());
  for (Elem x : p.elements())
    for (Elem y : c.elements()) t.set(g.mul(x, y));
  return t.count() == g.order();
}

// Ordered triples of distinct members whose product set is not all of G.
inline std::vector<std::array<std::size_t, 3>> non_covering_triples(const ASConfiguration& cfg) {
  std::vector<std::array<std::size_t, 3>> out;
  const auto& U = cfg.U;
  for (std::size_t i = 0; i < U.size(); ++i)
    for (std::size_t j = 0; j < U.size(); ++j)
      for (std::size_t k = 0; k < U.size(); ++k)
        if (i != j && j != k && i != k && !triple_product_covers(*cfg.group, U[i], U[j], U[k])) out.push_back({i, j, k});
  return out;
}

inline Report lemma41_invariants(const ASConfiguration& cfg) {
  check_sizes(cfg);
  const Group& g = *cfg.group;
  const auto& U = cfg.U;
  const std::size_t m = U.size();
  Report r;
  r.add("AS1: U0 normal", is_normal(g, U[0]));
  r.add("(i) Phi(G) <= U0", frattini(g).is_subgroup_of(U[0]));
  {
    bool ok = true;
    for (std::size_t i = 1; i < m; ++i) ok = ok && U[i].is_elementary_abelian();
    r.add("(ii) U_i elementary abelian", ok);
  }
  std::vector<ElemSet> u0ui(m);
  for (std::size_t i = 1; i < m; ++i) u0ui[i] = product_set(U[0], U[i]);
  {
    Check c{"(iii) U_i^g <= U0U_i", true, {}, {}};
    for (std::size_t i = 1; i < m && c.ok; ++i)
      for (Elem x : g.generators())
        for (Elem u : U[i].generators())
          if (!u0ui[i].test(g.conj(u, x))) {
            c.ok = false;
            c.detail = "U" + std::to_string(i);
            c.witness = {u, x};
          }
    r.checks.push_back(c);
  }
  {
    ElemSet all(g.order());
    for (std::size_t i = 1; i < m; ++i)
      for (Elem x : u0ui[i].elements()) all.set(x);
    r.add("(iv) union of U0U_i is G", all.count() == g.order());
  }
  {
    // owner[x] = k for 1 != x in U_k
    std::vector<int> owner(g.order(), -1);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t e = 1; e < U[k].order(); ++e) owner[U[k].elements()[e]] = static_cast<int>(k);
    Check c{"(v) unique factorisation", true, {}, {}};
    for (std::size_t j = 1; j < m && c.ok; ++j)
      for (Elem x : u0ui[j].elements()) {
        if (U[0].contains(x) || U[j].contains(x)) continue;
        for (std::size_t i = 1; i < m && c.ok; ++i) {
          if (i == j) continue;
          int count = 0;
          for (Elem u : U[i].elements()) {
            const int k = owner[g.mul(g.inv(u), x)];
            if (k >= 0 && static_cast<std::size_t>(k) != i) ++count;
          }
          if (count != 1) {
            c.ok = false;
            c.detail = std::to_string(count) + " factorisations through U" + std::to_string(i);
            c.witness = {x};
          }
        }
        if (!c.ok) break;
      }
    r.checks.push_back(c);
  }
  {
    // |U0 U_i U_j| = q^3 follows from U0U_i being a subgroup; for three
    // non-normal members the product can be smaller (see triple_product_covers)
    Check c{"(vi) G = U0U_iU_j", true, {}, {}};
    for (std::size_t i = 1; i < m && c.ok; ++i)
      for (std::size_t j = 1; j < m && c.ok; ++j)
        if (i != j && !triple_product_covers(g, U[0], U[i], U[j])) {
          c.ok = false;
          c.detail = "U0U" + std::to_string(i) + "U" + std::to_string(j);
        }
    r.checks.push_back(c);
  }
  {
    bool ok = true;
    for (std::size_t i = 1; i < m; ++i) ok = ok && normalizer(g, U[i]) == centralizer(g, U[i]);
    r.add("N_G(U_i) = C_G(U_i)", ok);
  }
  return r;
}

// ---- Frattini quotient coordinates ---------------------------------------------------

// For a 2-group: G/Phi(G) identified with GF(2)^r through a minimal
// generating set.
struct FrattiniCoords {
  int r = 0;
  Subgroup phi;
  std::vector<Word> coord;   // element -> vector
  std::vector<Elem> basis;   // lifts of the standard basis
  std::vector<Elem> rep;     // vector -> a representative element
};

inline FrattiniCoords frattini_coords(const Group& g) {
  if (g.prime() != 2) throw std::invalid_argument("frattini coordinates: need a 2-group");
  FrattiniCoords fc;
  fc.phi = frattini(g);
  const std::size_t m = g.order() / fc.phi.order();
  fc.coord.assign(g.order(), 0);
  std::vector<bool> seen(g.order());
  for (Elem x : fc.phi.elements()) seen[x] = true;
  fc.rep = {0};
  // the span of chosen basis elements, as cosets; adding x doubles it
  std::vector<Elem> span_reps{0};
  for (std::size_t xi = 1; xi < g.order() && span_reps.size() < m; ++xi) {
    const Elem x = static_cast<Elem>(xi);
    if (seen[x]) continue;
    const Word bit = Word{1} << fc.r;
    const std::size_t old = span_reps.size();
    for (std::size_t k = 0; k < old; ++k) {
      const Elem y = g.mul(span_reps[k], x);
      span_reps.push_back(y);
      for (Elem f : fc.phi.elements()) {
        const Elem z = g.mul(y, f);
        seen[z] = true;
        fc.coord[z] = fc.coord[span_reps[k]] | bit;
      }
    }
    fc.basis.push_back(x);
    ++fc.r;
  }
  if (span_reps.size() != m) throw std::logic_error("frattini coordinates: quotient is not elementary abelian");
  fc.rep.assign(m, 0);
  for (Elem y : span_reps) fc.rep[fc.coord[y]] = y;
  return fc;
}

inline Subgroup frattini_preimage(const Group& g, const FrattiniCoords& fc, const Subspace& s) {
  std::vector<Elem> el;
  for (Word v : s.elements())
    for (Elem f : fc.phi.elements()) el.push_back(g.mul(fc.rep[v], f));
  return Subgroup::from_closed_set(g, std::move(el));
}

// ---- structural filters ----------------------------------------------------------------

struct SufficientConditionResult {
  bool result = false;
  bool abelian = false;
  std::size_t frattini_order = 0;
  std::size_t candidates_tested = 0;
  // furthest flag reached by any candidate U0 (0..4)
  int deepest_flag = 0;
  std::optional<Subgroup> u0;  // first candidate passing every flag
};

// Candidate U0 range over preimages of the subspaces of G/Phi of the right
// dimension; flags are evaluated in this order for each candidate:
//   1. U0 <= Z(G)  implies  exp(G) = 4 and U0 = Z(G)
//   2. Z(G) not elementary abelian  implies  Z(G) <= U0
//   3. U0 elementary abelian  implies  exp(G) = 4, Z(G) elementary abelian, U0 not <= Z(G)
//   4. U0 <= Z(G)  implies  U0^2 = G^2 = Phi(G)
// When |Phi| = q the only candidate is Phi itself, with Z(G) < U0 required.
inline SufficientConditionResult sufficient_condition_check(const Group& g) {
  SufficientConditionResult res;
  const std::size_t n = cube_root(g.order());
  if (!n) throw std::invalid_argument("filter: |G| is not a cube");
  if (g.is_abelian()) {
    res.abelian = true;
    return res;
  }
  const Subgroup phi = frattini(g);
  res.frattini_order = phi.order();
  if (phi.order() > n) return res;
  const Subgroup z = center(g);
  const int exp = exponent(g);
  if (phi.order() == n) {
    res.candidates_tested = 1;
    const bool f1 = z.is_subgroup_of(phi) && !(z == phi);
    const bool f2 = f1 && (!phi.is_elementary_abelian() || exp == 4);
    res.deepest_flag = f2 ? 4 : f1 ? 1 : 0;
    res.result = f2;
    if (f2) res.u0 = phi;
    return res;
  }
  if (g.prime() != 2) throw std::invalid_argument("filter: the subspace loop needs a 2-group");
  const FrattiniCoords fc = frattini_coords(g);
  int k = 0;
  while ((phi.order() << k) < n) ++k;
  const Subgroup g2 = agemo(g, 1);
  bool flag4 = false;
  for_each_subspace(fc.r, k, [&](const Subspace& s) {
    if (res.result) return;
    ++res.candidates_tested;
    const Subgroup u0 = frattini_preimage(g, fc, s);
    const bool in_z = u0.is_subgroup_of(z);
    const bool f1 = !in_z || (exp == 4 && u0 == z);
    const bool f2 = f1 && (z.is_elementary_abelian() || z.is_subgroup_of(u0));
    const bool f3 = f2 && (!u0.is_elementary_abelian() || (exp == 4 && z.is_elementary_abelian() && !in_z));
    const Subgroup u02 = agemo(u0, 1);
    flag4 = f3 && (!in_z || (u02 == g2 && u02 == phi));
    res.deepest_flag = std::max(res.deepest_flag, flag4 ? 4 : f3 ? 3 : f2 ? 2 : f1 ? 1 : 0);
    if (flag4) {
      res.result = true;
      res.u0 = u0;
    }
  });
  return res;
}

struct ExtraspecialWitness {
  Subgroup n;
  std::size_t quotient_order = 0;
};

// A normal N with G/N extraspecial of order 8 or 32. Such a quotient E has
// Phi(E) = Z(E) of order 2, so N n Phi(G) is a hyperplane H of Phi(G)
// containing G^4, [Phi, G] and Phi(Phi). For each such H the squaring map
// into Phi/H is a quadratic form Q on G/Phi, N/H is a central elementary
// abelian lift of a subspace R with Q(R) = 0, and E is extraspecial exactly
// when R = Rad(B) and Q vanishes on Rad(B); then |E| = 2^(1 + d - dim R).
inline std::optional<ExtraspecialWitness> extraspecial_quotient(const Group& g) {
  if (g.prime() != 2) throw std::invalid_argument("extraspecial quotient: need a 2-group");
  if (g.is_abelian()) return std::nullopt;
  const FrattiniCoords fc = frattini_coords(g);
  const Subgroup& phi = fc.phi;
  std::vector<Elem> kgens;
  for (std::size_t x = 0; x < g.order(); ++x) kgens.push_back(g.pow(static_cast<Elem>(x), 4));
  for (Elem f : phi.elements())
    for (std::size_t x = 0; x < g.order(); ++x) kgens.push_back(g.commutator(f, static_cast<Elem>(x)));
  for (Elem f : phi.elements()) kgens.push_back(g.mul(f, f));
  for (Elem a : phi.elements())
    for (Elem b : phi.elements()) kgens.push_back(g.commutator(a, b));
  std::sort(kgens.begin(), kgens.end());
  kgens.erase(std::unique(kgens.begin(), kgens.end()), kgens.end());
  const Subgroup k = Subgroup::generate(g, kgens);
  for (const Subgroup& h : index_two_subgroups(phi)) {
    if (!k.is_subgroup_of(h)) continue;
    const QuadraticForm q = QuadraticForm::from_function(fc.r, [&](Word v) {
      const Elem x = fc.rep[v];
      return h.contains(g.mul(x, x)) ? 0 : 1;
    });
    const Radicals rad = radicals(q);
    if (rad.srad.rank() != rad.rad.rank()) continue;
    const int e = fc.r - rad.rad.rank();
    if (e != 2 && e != 4) continue;
    std::vector<Elem> gens = h.generators();
    for (Word v : rad.rad.rows()) gens.push_back(fc.rep[v]);
    // the lifts square into H and commute with G modulo H, so N is normal
    const Subgroup n = Subgroup::generate(g, gens);
    if (!is_normal(g, n)) throw std::logic_error("extraspecial quotient: constructed N is not normal");
    const Quotient quo = quotient(g, n);
    const Group& eg = *quo.group;
    const Subgroup ze = center(eg), fe = frattini(eg), de = derived(eg);
    if (!(eg.order() == 8 || eg.order() == 32) || ze.order() != 2 || !(ze == fe) || !(fe == de))
      throw std::logic_error("extraspecial quotient: constructed quotient is not extraspecial");
    return ExtraspecialWitness{n, eg.order()};
  }
  return std::nullopt;
}

// Non-normal subgroups of order q meeting Phi(G) trivially. For a p-group
// every p-th power lies in Phi, so these have exponent p.
inline std::vector<Subgroup> good_subgroups(const Group& g, std::size_t q) {
  const Subgroup phi = frattini(g);
  const std::vector<ElemSet> avoid{nonidentity_set(phi)};
  std::vector<Subgroup> subs = g.prime() == 2 ? enumerate_elem_abelian_subgroups(g, q, avoid)
                                               : enumerate_subgroups(g, q, avoid);
  std::erase_if(subs, [&](const Subgroup& s) { return is_normal(g, s); });
  std::sort(subs.begin(), subs.end());
  return subs;
}

struct EnoughSubgroupsResult {
  bool ok = false;
  bool abelian_bypass = false;
  std::size_t subgroups = 0;
  std::size_t classes = 0;
};

inline EnoughSubgroupsResult enough_subgroups(const Group& g, std::size_t q) {
  EnoughSubgroupsResult r;
  if (g.is_abelian()) {
    r.ok = true;
    r.abelian_bypass = true;
    return r;
  }
  const auto subs = good_subgroups(g, q);
  r.subgroups = subs.size();
  const auto cls = conjugacy_classes(g, subs);
  r.classes = cls.empty() ? 0 : static_cast<std::size_t>(*std::max_element(cls.begin(), cls.end()) + 1);
  r.ok = r.classes >= q + 1;
  return r;
}

struct CliqueResult {
  bool found = false;
  bool abelian_bypass = false;
  std::size_t vertices = 0;
  std::vector<std::size_t> clique;  // indices into good_subgroups order
  std::uint64_t nodes = 0;
};

// Does some set of q+1 good subgroups pairwise satisfy
// Phi n HK = Phi n KH = K n Phi H = H n Phi K = 1?
inline CliqueResult clique_size_qplus1(const Group& g, std::size_t q) {
  CliqueResult r;
  if (g.is_abelian()) {
    r.found = true;
    r.abelian_bypass = true;
    return r;
  }
  const auto subs = good_subgroups(g, q);
  r.vertices = subs.size();
  if (subs.size() < q + 1) return r;
  const Subgroup phi = frattini(g);
  // test_triple(a, b, c): no 1 != x in C with x b in A, i.e. AB^{-1} n C = 1
  auto test_triple = [&](const Subgroup& a, const Subgroup& b, const Subgroup& c) {
    for (std::size_t e = 1; e < c.order(); ++e)
      for (Elem t : b.elements())
        if (a.contains(g.mul(c.elements()[e], t))) return false;
    return true;
  };
  auto edge = [&](std::size_t i, std::size_t j) {
    return test_triple(phi, subs[i], subs[j]) && test_triple(phi, subs[j], subs[i]) &&
           test_triple(subs[i], phi, subs[j]) && test_triple(subs[j], phi, subs[i]);
  };
  std::vector<std::size_t> cur;
  std::function<bool(const std::vector<std::size_t>&)> rec = [&](const std::vector<std::size_t>& cand) {
    ++r.nodes;
    if (cur.size() == q + 1) return true;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (cur.size() + (cand.size() - a) < q + 1) return false;
      std::vector<std::size_t> next;
      for (std::size_t b = a + 1; b < cand.size(); ++b)
        if (edge(cand[a], cand[b])) next.push_back(cand[b]);
      cur.push_back(cand[a]);
      if (rec(next)) return true;
      cur.pop_back();
    }
    return false;
  };
  std::vector<std::size_t> all(subs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  r.found = rec(all);
  if (r.found) r.clique = cur;
  return r;
}

struct FilterReport {
  std::size_t q = 0;
  bool abelian = false;
  std::size_t frattini_order = 0;
  bool frattini_small = false;  // |Phi(G)| <= q
  SufficientConditionResult sufficient;
  bool extraspecial_checked = false;
  std::optional<ExtraspecialWitness> extraspecial;
  bool pass = false;
};

inline FilterReport structural_filter(const Group& g) {
  FilterReport r;
  r.q = cube_root(g.order());
  if (!r.q) throw std::invalid_argument("filter: |G| is not a cube");
  r.abelian = g.is_abelian();
  r.frattini_order = frattini(g).order();
  r.frattini_small = r.frattini_order <= r.q;
  if (g.prime() != 2) {
    r.pass = r.frattini_small;
    return r;
  }
  r.sufficient = sufficient_condition_check(g);
  r.extraspecial_checked = true;
  r.extraspecial = extraspecial_quotient(g);
  // The sufficient-condition check answers false for every abelian group, so
  // abelian groups are only screened by the Frattini bound.
  r.pass = r.abelian ? r.frattini_small : r.sufficient.result && !r.extraspecial;
  return r;
}

}  // namespace asq
