#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "asq/asconfig.hpp"
#include "asq/group.hpp"
#include "asq/parallel.hpp"
#include "asq/quadform.hpp"
#include "asq/subgroups.hpp"

namespace asq {

// ---- lifting planes to subgroups ------------------------------------------------

struct LiftedArc {
  std::vector<Subgroup> candidates;
  std::vector<std::size_t> plane_of;    // candidate -> plane index in the arc
  std::vector<std::size_t> per_plane;   // complements found for each plane
  std::size_t dropped = 0;              // planes with no complement
};

// For each plane W, the complements of Phi(G) in the preimage of W.
inline LiftedArc lift_arc(const Group& g, const std::vector<Subspace>& arc) {
  if (!g.cocycle()) throw std::invalid_argument("lift_arc: needs a cocycle group");
  const Subgroup phi = frattini(g);
  LiftedArc out;
  for (std::size_t i = 0; i < arc.size(); ++i) {
    auto comps = complements(preimage(g, arc[i]), phi);
    out.per_plane.push_back(comps.size());
    if (comps.empty()) ++out.dropped;
    for (auto& c : comps) {
      out.candidates.push_back(std::move(c));
      out.plane_of.push_back(i);
    }
  }
  return out;
}

// ---- AS backtracking --------------------------------------------------------------

struct BacktrackOptions {
  unsigned threads = 1;
  // explore only families whose least candidate index is one of these
  std::optional<std::vector<std::size_t>> roots;
  // subgroups already in the configuration; not counted towards the target
  std::vector<Subgroup> fixed;
};

struct BacktrackResult {
  std::vector<std::vector<std::size_t>> families;  // sorted index lists, sorted
  std::uint64_t nodes = 0;
  std::size_t deepest = 0;  // largest partial family reached
  double seconds = 0;
};

// All `target`-subsets of the candidates meeting pairwise trivially with
// U_a U_b n U_c = 1 whenever c comes after a and b; by the orientation
// argument this is (AS2) among the chosen subgroups. Fixed subgroups take
// part in every test as if chosen first.
inline BacktrackResult as_backtrack(const Group& g, const std::vector<Subgroup>& cands, std::size_t target,
                                    const BacktrackOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = cands.size();
  for (const auto& c : cands)
    if (&c.group() != &g) throw std::invalid_argument("as_backtrack: candidate from another group");
  std::vector<std::vector<Elem>> nonid(n);
  for (std::size_t i = 0; i < n; ++i) nonid[i].assign(cands[i].elements().begin() + 1, cands[i].elements().end());
  auto meets = [&](const ElemSet& s, std::size_t c) {
    for (Elem x : nonid[c])
      if (s.test(x)) return false;
    return true;
  };
  // products among the fixed members, and candidates compatible with them
  std::vector<ElemSet> fixed_prods;
  for (std::size_t a = 0; a < opt.fixed.size(); ++a)
    for (std::size_t b = a + 1; b < opt.fixed.size(); ++b) fixed_prods.push_back(product_set(opt.fixed[a], opt.fixed[b]));
  std::vector<bool> usable(n, true);
  for (std::size_t y = 0; y < n; ++y) {
    for (const auto& f : opt.fixed) usable[y] = usable[y] && meets(f.bits(), y);
    for (const auto& p : fixed_prods) usable[y] = usable[y] && meets(p, y);
  }
  std::vector<std::size_t> roots;
  if (opt.roots)
    roots = *opt.roots;
  else
    for (std::size_t i = 0; i < n; ++i) roots.push_back(i);
  std::vector<std::vector<std::vector<std::size_t>>> found(roots.size());
  std::vector<std::uint64_t> nodes(roots.size(), 0);
  std::vector<std::size_t> deepest(roots.size(), 0);

  parallel_for(roots.size(), opt.threads, [&](std::size_t ri) {
    std::vector<std::size_t> cur;
    std::vector<ElemSet> prods;  // X U_a for every chosen or fixed a, per chosen X
    auto push = [&](std::size_t x) {
      for (const auto& f : opt.fixed) prods.push_back(product_set(f, cands[x]));
      for (std::size_t c : cur) prods.push_back(product_set(cands[c], cands[x]));
      cur.push_back(x);
      deepest[ri] = std::max(deepest[ri], cur.size());
    };
    std::function<void(const std::vector<std::size_t>&)> rec = [&](const std::vector<std::size_t>& cand) {
      ++nodes[ri];
      if (cur.size() == target) {
        found[ri].push_back(cur);
        return;
      }
      for (std::size_t a = 0; a < cand.size(); ++a) {
        if (cur.size() + (cand.size() - a) < target) return;
        const std::size_t x = cand[a];
        const std::size_t old = prods.size();
        push(x);
        std::vector<std::size_t> next;
        for (std::size_t b = a + 1; b < cand.size(); ++b) {
          const std::size_t y = cand[b];
          if (!meets(cands[x].bits(), y)) continue;
          bool ok = true;
          for (std::size_t p = old; p < prods.size() && ok; ++p) ok = meets(prods[p], y);
          if (ok) next.push_back(y);
        }
        rec(next);
        cur.pop_back();
        prods.resize(old);
      }
    };
    const std::size_t r = roots[ri];
    if (r >= n) throw std::out_of_range("as_backtrack: root index out of range");
    if (!usable[r]) return;
    std::vector<std::size_t> first{r};
    for (std::size_t y = r + 1; y < n; ++y)
      if (usable[y]) first.push_back(y);
    // the root is the first choice at the top level
    const std::size_t old = prods.size();
    push(r);
    std::vector<std::size_t> next;
    for (std::size_t k = 1; k < first.size(); ++k) {
      const std::size_t y = first[k];
      if (!meets(cands[r].bits(), y)) continue;
      bool ok = true;
      for (std::size_t p = old; p < prods.size() && ok; ++p) ok = meets(prods[p], y);
      if (ok) next.push_back(y);
    }
    if (target <= 1) {
      ++nodes[ri];
      found[ri].push_back(cur);
    } else {
      rec(next);
    }
  });
  BacktrackResult res;
  for (std::size_t ri = 0; ri < roots.size(); ++ri) {
    res.nodes += nodes[ri];
    res.deepest = std::max(res.deepest, deepest[ri]);
    for (auto& f : found[ri]) res.families.push_back(std::move(f));
  }
  std::sort(res.families.begin(), res.families.end());
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// Normal subgroups U0 of order q containing Phi(G) that extend the family
// to a full configuration.
inline std::vector<ASConfiguration> complete_with_U0(const Group& g, const std::vector<Subgroup>& family) {
  const std::size_t q = cube_root(g.order());
  if (!q || family.size() != q + 1) throw std::invalid_argument("complete_with_U0: family must have q+1 members");
  const Subgroup phi = frattini(g);
  std::vector<ASConfiguration> out;
  for (const Subgroup& u0 : enumerate_subgroups(g, q)) {
    if (!phi.is_subgroup_of(u0) || !is_normal(g, u0)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < family.size() && ok; ++i) {
      ok = meets_trivially(u0, family[i]);
      if (!ok) break;
      const ElemSet p = product_set(u0, family[i]);
      for (std::size_t j = i + 1; j < family.size() && ok; ++j) ok = meets_trivially(p, family[j]);
    }
    if (!ok) continue;
    ASConfiguration cfg{&g, q, {u0}};
    cfg.U.insert(cfg.U.end(), family.begin(), family.end());
    out.push_back(std::move(cfg));
  }
  return out;
}

// ---- brute-force oracle ---------------------------------------------------------------

struct BruteForceResult {
  std::size_t q = 0;
  std::vector<Subgroup> subgroups;  // all subgroups of order q, sorted
  // (index of U0, sorted indices of U1..U_{q+1})
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> configs;

  std::size_t unordered_families() const {
    std::set<std::vector<std::size_t>> s;
    for (const auto& [u0, fam] : configs) {
      std::vector<std::size_t> all(fam);
      all.push_back(u0);
      std::sort(all.begin(), all.end());
      s.insert(all);
    }
    return s.size();
  }
  ASConfiguration configuration(const Group& g, std::size_t k) const {
    ASConfiguration cfg{&g, q, {subgroups[configs[k].first]}};
    for (std::size_t i : configs[k].second) cfg.U.push_back(subgroups[i]);
    return cfg;
  }
};

// Every configuration, checking every ordered triple and pair directly.
inline BruteForceResult brute_force_as_configs(const Group& g) {
  const std::size_t n = g.order();
  if (n != 8 && n != 27 && n != 64) throw std::invalid_argument("brute force: order must be 8, 27 or 64");
  BruteForceResult res;
  res.q = cube_root(n);
  const std::size_t q = res.q;
  res.subgroups = enumerate_subgroups(g, q);
  const auto& S = res.subgroups;
  const std::size_t m = S.size();
  std::vector<std::vector<ElemSet>> prod(m, std::vector<ElemSet>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) prod[a][b] = product_set(S[a], S[b]);
  auto compatible = [&](const std::vector<std::size_t>& chosen, std::size_t c) {
    for (std::size_t a : chosen)
      if (a == c || !meets_trivially(S[a], S[c])) return false;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (std::size_t j = 0; j < chosen.size(); ++j) {
        if (i == j) continue;
        const std::size_t a = chosen[i], b = chosen[j];
        if (!meets_trivially(prod[a][b], S[c]) || !meets_trivially(prod[a][c], S[b]) || !meets_trivially(prod[c][a], S[b]))
          return false;
      }
    return true;
  };
  for (std::size_t u0 = 0; u0 < m; ++u0) {
    if (!is_normal(g, S[u0])) continue;
    std::vector<std::size_t> chosen{u0};
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (chosen.size() == q + 2) {
        res.configs.emplace_back(u0, std::vector<std::size_t>(chosen.begin() + 1, chosen.end()));
        return;
      }
      for (std::size_t c = from; c < m; ++c) {
        if (!compatible(chosen, c)) continue;
        chosen.push_back(c);
        rec(c + 1);
        chosen.pop_back();
      }
    };
    rec(0);
  }
  return res;
}

// ---- the mixed-radical group ----------------------------------------------------------

struct ThirdChoiceCounts {
  std::vector<Elem> u1, u2;                          // generators of the chosen pair
  std::size_t pool = 0;                              // third-choice candidates
  std::map<std::size_t, std::size_t> distribution;  // fourth-pool size -> number of third choices
  std::size_t size6 = 0;    // 6-subsets of a fourth pool compatible with U0..U3
  std::size_t deepest = 0;  // largest compatible subset of any fourth pool
};

// With U0 = Z(G), picks random valid U1 and U2, then counts compatible
// third choices U3 and the compatible fourth pool of each. A configuration
// containing U0..U3 needs six more members, all from that pool.
inline ThirdChoiceCounts lemma53_counts(const Group& g, std::uint64_t seed) {
  const std::size_t q = cube_root(g.order());
  if (q != 8) throw std::invalid_argument("third choices: need a group of order 512");
  const Subgroup u0 = center(g);
  if (u0.order() != 8 || u0.is_elementary_abelian()) throw std::invalid_argument("third choices: Z(G) must be C4 x C2");
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<Subgroup>& v) -> const Subgroup& {
    if (v.empty()) throw std::runtime_error("third choices: no valid choice");
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  const auto c1 = enumerate_elem_abelian_subgroups(g, 8, {nonidentity_set(u0)});
  const Subgroup u1 = pick(c1);
  const ElemSet p01 = product_set(u0, u1);
  const auto c2 = enumerate_elem_abelian_subgroups(g, 8, {p01});
  const Subgroup u2 = pick(c2);
  const ElemSet p02 = product_set(u0, u2), p12 = product_set(u1, u2);
  const auto pool = enumerate_elem_abelian_subgroups(g, 8, {p01, p02, p12});
  ThirdChoiceCounts res;
  res.u1 = minimal_generators(u1);
  res.u2 = minimal_generators(u2);
  res.pool = pool.size();
  const std::vector<const Subgroup*> fixed{&u0, &u1, &u2};
  for (std::size_t a = 0; a < pool.size(); ++a) {
    std::vector<ElemSet> with3;
    for (const Subgroup* f : fixed) with3.push_back(product_set(*f, pool[a]));
    std::vector<std::size_t> fourth;
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (b == a) continue;
      if (std::all_of(with3.begin(), with3.end(), [&](const ElemSet& s) { return meets_trivially(s, pool[b]); }))
        fourth.push_back(b);
    }
    ++res.distribution[fourth.size()];
    if (fourth.empty()) continue;
    // six further members from the fourth pool would complete U0..U9
    std::vector<Subgroup> pool4;
    for (std::size_t b : fourth) pool4.push_back(pool[b]);
    BacktrackOptions opt;
    opt.fixed = {u0, u1, u2, pool[a]};
    const BacktrackResult r = as_backtrack(g, pool4, 6, opt);
    res.size6 += r.families.size();
    res.deepest = std::max(res.deepest, r.deepest);
  }
  return res;
}

// ---- the elliptic group --------------------------------------------------------------

// Orbits of a list of subgroups under automorphisms given as element image
// tables; returns an orbit id per subgroup, numbered by least member.
inline std::vector<std::size_t> subgroup_orbits(const std::vector<Subgroup>& subs,
                                                const std::vector<std::vector<Elem>>& autos) {
  std::map<std::vector<Elem>, std::size_t> index;
  for (std::size_t i = 0; i < subs.size(); ++i) index[subs[i].elements()] = i;
  const std::size_t none = subs.size();
  std::vector<std::size_t> orb(subs.size(), none);
  std::size_t next = 0;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    if (orb[s] != none) continue;
    orb[s] = next;
    std::vector<std::size_t> queue{s};
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (const auto& a : autos) {
        auto it = index.find(apply_automorphism(subs[queue[qi]], a).elements());
        if (it == index.end()) throw std::invalid_argument("orbits: automorphism leaves the list");
        if (orb[it->second] == none) {
          orb[it->second] = next;
          queue.push_back(it->second);
        }
      }
    ++next;
  }
  return orb;
}

inline std::vector<Elem> inner_automorphism(const Group& g, Elem x) {
  std::vector<Elem> img(g.order());
  for (std::size_t y = 0; y < g.order(); ++y) img[y] = g.conj(static_cast<Elem>(y), x);
  return img;
}

// Inner automorphisms by the generators plus lifts of the isometry
// generators of the squaring form.
inline std::vector<std::vector<Elem>> automorphism_generators(const Group& g) {
  if (!g.cocycle()) throw std::invalid_argument("automorphisms: needs a cocycle group");
  std::vector<std::vector<Elem>> autos;
  for (const BitMatrix& m : isometry_generators(g.cocycle()->form())) autos.push_back(lift_isometry(*g.cocycle(), m));
  for (Elem x : g.generators()) autos.push_back(inner_automorphism(g, x));
  return autos;
}

// Orbits of a matrix group on the k-subspaces of GF(2)^d, with a sample of
// Schreier generators for the stabiliser of each representative.
struct SubspaceOrbit {
  Subspace rep;
  std::size_t size = 0;
  std::vector<BitMatrix> stabiliser;  // generators of a subgroup of the stabiliser
};

inline std::vector<SubspaceOrbit> subspace_orbits(const std::vector<BitMatrix>& gens, int d, int k,
                                                  std::size_t stab_sample, std::uint64_t seed) {
  const auto subs = enumerate_subspaces(d, k);
  std::map<Subspace, std::size_t> index;
  for (std::size_t i = 0; i < subs.size(); ++i) index[subs[i]] = i;
  const std::size_t none = subs.size();
  std::vector<std::size_t> parent(subs.size(), none), via(subs.size(), 0);
  std::vector<bool> seen(subs.size());
  std::vector<SubspaceOrbit> out;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < subs.size(); ++s) {
    if (seen[s]) continue;
    seen[s] = true;
    std::vector<std::size_t> queue{s};
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const std::size_t t = index.at(gens[gi].image(subs[queue[qi]]));
        if (!seen[t]) {
          seen[t] = true;
          parent[t] = queue[qi];
          via[t] = gi;
          queue.push_back(t);
        }
      }
    // transversal element mapping the representative to x
    auto word = [&](std::size_t x) {
      BitMatrix m = BitMatrix::identity(d);
      for (; x != s; x = parent[x]) m = m * gens[via[x]];
      return m;
    };
    SubspaceOrbit o{subs[s], queue.size(), {}};
    for (std::size_t n = 0; n < stab_sample && !gens.empty(); ++n) {
      const std::size_t x = queue[std::uniform_int_distribution<std::size_t>(0, queue.size() - 1)(rng)];
      const std::size_t gi = std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(rng);
      const std::size_t y = index.at(gens[gi].image(subs[x]));
      // u_y^{-1} g u_x fixes the representative
      const BitMatrix h = word(y).inverse() * gens[gi] * word(x);
      if (h.image(subs[s]) != subs[s]) throw std::logic_error("subspace orbits: Schreier generator does not stabilise");
      o.stabiliser.push_back(h);
    }
    out.push_back(std::move(o));
  }
  return out;
}

struct MinusObstruction {
  std::size_t centre_order = 0;
  std::size_t planes = 0;
  std::size_t candidates = 0;
  std::size_t centraliser_matches = 0;  // candidates with C_G(U) = preimage of W-perp
  std::size_t disjoint_pairs = 0;       // pairs of disjoint singular planes
  std::size_t perp_meets = 0;           // of those, pairs with W_j n W_i-perp != 0
  std::size_t u0_orbits = 0;            // normal subgroups of order 8 over Phi, up to automorphism
  std::size_t searches = 0;             // (U0, first member) pairs searched
  std::size_t families = 0;
  std::uint64_t nodes = 0;
  std::size_t deepest = 0;
  double seconds = 0;
};

// Checks the centraliser structure behind the obstruction, then searches
// exhaustively for configurations. Every U0 is the preimage of a 2-space of
// G/Phi; it is fixed up to isometry, and one further member is fixed up to
// automorphisms stabilising U0 (any subgroup of that stabiliser is enough).
inline MinusObstruction minus_type_obstruction(const Group& g, unsigned threads = 1) {
  if (!g.cocycle()) throw std::invalid_argument("minus obstruction: needs a cocycle group");
  const auto t0 = std::chrono::steady_clock::now();
  const QuadraticForm& form = g.cocycle()->form();
  const int d = form.dim();
  MinusObstruction res;
  res.centre_order = center(g).order();
  const auto planes = singular_subspaces(form, 3);
  res.planes = planes.size();
  const Subgroup phi = frattini(g);
  std::vector<Subgroup> cands;
  for (const Subspace& w : planes) {
    const Subgroup perp_pre = preimage(g, perp(form, w));
    for (auto& u : complements(preimage(g, w), phi)) {
      if (centralizer(g, u) == perp_pre) ++res.centraliser_matches;
      cands.push_back(std::move(u));
    }
  }
  std::sort(cands.begin(), cands.end());
  res.candidates = cands.size();
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const Subspace pi = perp(form, planes[i]);
    for (std::size_t j = 0; j < planes.size(); ++j) {
      if (i == j || meet(planes[i], planes[j]).rank() != 0) continue;
      ++res.disjoint_pairs;
      if (meet(pi, planes[j]).rank() != 0) ++res.perp_meets;
    }
  }
  const std::size_t q = cube_root(g.order());
  int k = 0;
  while ((phi.order() << k) < q) ++k;
  const auto isos = isometry_generators(form);
  const auto orbits = subspace_orbits(isos, d, k, 40, 0x5eed);
  res.u0_orbits = orbits.size();
  for (const auto& o : orbits) {
    const Subgroup u0 = preimage(g, o.rep);
    std::vector<std::vector<Elem>> autos;
    for (const auto& m : o.stabiliser) autos.push_back(lift_isometry(*g.cocycle(), m));
    for (Elem x : g.generators()) autos.push_back(inner_automorphism(g, x));
    for (const auto& a : autos)
      if (!(apply_automorphism(u0, a) == u0)) throw std::logic_error("minus obstruction: automorphism moves U0");
    const auto orb = subgroup_orbits(cands, autos);
    std::vector<std::size_t> reps;
    std::vector<bool> taken(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (!taken[orb[i]] && meets_trivially(u0, cands[i])) {
        taken[orb[i]] = true;
        reps.push_back(i);
      }
    for (std::size_t r : reps) {
      BacktrackOptions opt;
      opt.threads = threads;
      opt.fixed = {u0, cands[r]};
      const BacktrackResult br = as_backtrack(g, cands, q, opt);
      ++res.searches;
      res.families += br.families.size();
      res.nodes += br.nodes;
      res.deepest = std::max(res.deepest, br.deepest + 2);
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace asq
