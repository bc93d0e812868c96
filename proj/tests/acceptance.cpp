// One pass/fail line per acceptance criterion. Exit status 0 iff all pass.
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "asq/asq.hpp"

using namespace asq;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

const std::vector<Order512Id> kGroups{Order512Id::g208a, Order512Id::g210b, Order512Id::g211p, Order512Id::g212m};

// Sorted element-order profile of an abelian 2-group of order at most 8.
std::string centre_type(const Subgroup& z) {
  std::map<int, int> by_order;
  for (Elem x : z.elements()) ++by_order[z.group().elem_order(x)];
  if (z.order() == 2) return "C2";
  if (z.order() == 8 && by_order[2] == 7) return "C2^3";
  if (z.order() == 8 && by_order[2] == 3 && by_order[4] == 4) return "C4xC2";
  return "other(" + std::to_string(z.order()) + ")";
}

std::vector<Subspace> planes_of(const PlaneCatalogue& cat, const std::vector<Point>& s) {
  std::vector<Subspace> out;
  for (Point p : s) out.push_back(cat.plane(p));
  return out;
}

std::vector<std::vector<Elem>> config_key(const ASConfiguration& c) {
  std::vector<std::vector<Elem>> key;
  for (const auto& u : c.U) {
    auto e = u.elements();
    std::sort(e.begin(), e.end());
    key.push_back(std::move(e));
  }
  std::sort(key.begin() + 1, key.end());
  return key;
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::map<Order512Id, std::string> want{
      {Order512Id::g208a, "C2^3"}, {Order512Id::g210b, "C4xC2"}, {Order512Id::g211p, "C2"}, {Order512Id::g212m, "C2"}};
  for (auto id : kGroups) {
    const Group g = table4_group(id);
    const std::string z = centre_type(center(g));
    const std::size_t phi = frattini(g).order();
    o.detail << to_string(id) << " Z=" << z << " |Phi|=" << phi << "; ";
    o.require(g.order() == 512 && z == want.at(id) && phi == 2, to_string(id));
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(s < 1.0, "time under 1 s");
}

void criterion2(Outcome& o, unsigned threads) {
  const Group g = table4_group(Order512Id::g208a);
  const ArcPipeline p = arc_pipeline(g.cocycle()->form(), 6, 9, threads, &g);
  bool all72 = p.candidates.size() == p.arcs.size();
  for (auto c : p.candidates) all72 = all72 && c == 72;
  o.detail << "arcs " << p.arcs.size() << ", candidates per arc 72: " << (all72 ? "yes" : "no") << ", families "
           << p.families << "; ";
  o.require(p.arcs.size() == 8, "8 arcs");
  o.require(all72, "72 candidates each");
  o.require(p.families == 0, "no families");
  o.require(p.revalidated, "revalidation");
}

void criterion3(Outcome& o, unsigned threads) {
  const ArcPipeline p = arc_pipeline(table4_form(Order512Id::g211p), 6, 9, threads);
  o.detail << "seeds " << p.seeds.size() << ", extensions " << p.arcs.size() << "; ";
  o.require(p.seeds.size() == 1402, "1402 seeds");
  o.require(p.arcs.empty(), "no extension");
  o.require(p.revalidated, "revalidation");
}

void criterion4(Outcome& o) {
  const Group g = table4_group(Order512Id::g210b);
  const std::map<std::size_t, std::size_t> want{{0, 112}, {48, 672}};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ThirdChoiceCounts r = lemma53_counts(g, seed);
    o.require(r.pool == 784, "pool 784 (trial " + std::to_string(seed) + ")");
    o.require(r.distribution == want, "distribution (trial " + std::to_string(seed) + ")");
    o.require(r.size6 == 0, "no size-6 family (trial " + std::to_string(seed) + ")");
  }
  o.detail << "3 trials, pool 784, {0: 112, 48: 672}, size-6 families 0; ";
}

void criterion5(Outcome& o, unsigned threads) {
  const Group g = table4_group(Order512Id::g212m);
  const bool elliptic = radicals(g.cocycle()->form()).cls.tag == FormClass::Tag::elliptic;
  const MinusObstruction m = minus_type_obstruction(g, threads);
  o.detail << "elliptic " << (elliptic ? "yes" : "no") << ", candidates " << m.candidates << ", C_G(U) = U0U for "
           << m.centraliser_matches << ", families " << m.families << "; ";
  o.require(elliptic, "elliptic form");
  o.require(m.candidates > 0 && m.centraliser_matches == m.candidates, "centralisers");
  o.require(m.families == 0, "no families");
}

void criterion6(Outcome& o) {
  const std::uint64_t plus = matrix_group_order(isometry_generators(form_plus8()), 8);
  const std::uint64_t minus = matrix_group_order(isometry_generators(form_minus8()), 8);
  const std::uint64_t hyp6 = matrix_group_order(isometry_generators(form_deg_hyp6()), 8);
  o.detail << plus << ", " << minus << ", " << hyp6 << "; ";
  o.require(plus == 348364800u, "plus");
  o.require(minus == 394813440u, "minus");
  o.require(hyp6 == 4096ull * 40320 * 6, "deg-hyp6");
}

void criterion7(Outcome& o) {
  for (std::size_t n : {8u, 27u}) {
    const std::size_t q = cube_root(n);
    for (const Group& g : small_groups(n)) {
      const BruteForceResult a = brute_force_as_configs(g);
      const BruteForceResult b = brute_force_as_configs(g);
      o.require(a.configs == b.configs, "repeat run of " + g.name());
      // independent route: backtrack over order-q subgroups, then add U0
      const auto subs = enumerate_subgroups(g, q);
      std::set<std::vector<std::vector<Elem>>> via_search, via_oracle;
      for (const auto& f : as_backtrack(g, subs, q + 1).families) {
        std::vector<Subgroup> fam;
        for (std::size_t i : f) fam.push_back(subs[i]);
        for (const auto& c : complete_with_U0(g, fam)) via_search.insert(config_key(c));
      }
      for (std::size_t k = 0; k < a.configs.size(); ++k) via_oracle.insert(config_key(a.configuration(g, k)));
      o.require(via_search == via_oracle, "search agrees with oracle for " + g.name());
      const bool expected = n == 8 ? g.is_abelian() && exponent(g) == 2 : g.kind() == Group::Kind::heisenberg;
      o.require(expected == !a.configs.empty(), g.name());
      if (!a.configs.empty()) o.detail << g.name() << ": " << a.unordered_families() << " families; ";
      if (n == 8 && expected) o.require(a.unordered_families() == 7, "7 families");
    }
  }
}

void criterion8(Outcome& o) {
  const Group h = Group::from_heisenberg(HeisenbergGroup(3));
  const BruteForceResult bf = brute_force_as_configs(h);
  o.require(!bf.configs.empty(), "Heisenberg configuration");
  if (!bf.configs.empty()) {
    const VerifyReport v = verify_configuration(bf.configuration(h, 0), true);
    o.require(v.ok, "Heisenberg verification");
    o.require(v.as_geometry && v.as_geometry->gq.s == 2 && v.as_geometry->gq.t == 4 &&
                  v.as_geometry->srg == SrgParams{27, 10, 1, 5},
              "GQ(2,4) srg(27,10,1,5)");
    o.require(v.kantor_geometry && v.kantor_geometry->gq.s == 3 && v.kantor_geometry->gq.t == 3 &&
                  v.kantor_geometry->srg == SrgParams{40, 12, 2, 4},
              "GQ(3,3) srg(40,12,2,4)");
    o.require(v.regular_points == 40, "40 regular points");
    o.detail << "GQ(2,4) and GQ(3,3), regular points " << v.regular_points << "; ";
  }
  const Group c2_6 = elementary_abelian(2, 6);
  const VerifyReport a = verify_configuration(as35_configuration(c2_6));
  o.require(a.ok && a.as_geometry && a.as_geometry->gq.s == 3 && a.as_geometry->gq.t == 5 &&
                a.as_geometry->points == 64 && a.as_geometry->lines == 96,
            "GQ(3,5) with 64 points and 96 lines");
  o.detail << "as35 " << (a.as_geometry ? a.as_geometry->points : 0) << "/" << (a.as_geometry ? a.as_geometry->lines : 0)
           << "; ";
  const FieldReductionReport f = field_reduction_demo();
  o.require(f.ok && f.radical_meets_trivial && f.equivalent_gammas == 7, "field reduction");
  o.detail << "field reduction " << f.planes << " planes, " << f.equivalent_gammas << " equivalent scalings; ";
}

void criterion9(Outcome& o, unsigned threads) {
  // polarisation
  for (const QuadraticForm& q : {form_plus8(), form_minus8(), form_deg_hyp6(), form_deg_c4()})
    for (Word u = 0; u < 256; ++u)
      for (Word v = 0; v < 256; ++v)
        if ((q.evaluate(u ^ v) ^ q.evaluate(u) ^ q.evaluate(v)) != q.bilinear(u, v)) {
          o.require(false, "polarisation");
          return;
        }
  o.detail << "polarisation; ";
  // squaring and commutators in the cocycle groups
  for (auto id : kGroups) {
    const CocycleGroup c = table4_cocycle(id);
    const Group g = Group::from_cocycle(c, to_string(id));
    bool ok = true;
    for (std::size_t x = 0; x < 512 && ok; ++x) {
      const Elem e = static_cast<Elem>(x);
      ok = g.mul(e, e) == c.make(0, c.form().evaluate(c.vec(e)));
      for (std::size_t y = 0; y < 512 && ok; ++y) {
        const Elem f = static_cast<Elem>(y);
        ok = g.commutator(e, f) == c.make(0, c.form().bilinear(c.vec(e), c.vec(f)));
      }
    }
    o.require(ok, std::string("cocycle identities ") + to_string(id));
  }
  o.detail << "cocycle identities; ";
  // dimension formula
  std::mt19937 rng(11);
  for (int t = 0; t < 500; ++t) {
    std::vector<Word> wa, wb;
    for (unsigned i = 0; i < 1 + rng() % 6; ++i) wa.push_back(rng() & 255);
    for (unsigned i = 0; i < 1 + rng() % 6; ++i) wb.push_back(rng() & 255);
    const Subspace a = Subspace::from_words(8, wa), b = Subspace::from_words(8, wb);
    if (span(a, b).rank() + meet(a, b).rank() != a.rank() + b.rank()) {
      o.require(false, "dimension formula");
      break;
    }
  }
  o.detail << "dimension formula; ";
  // AS2 orientation reduction on every pairwise trivial triple
  auto avoids = [](const Group& g, const Subgroup& a, const Subgroup& b, const Subgroup& c) {
    for (Elem x : a.elements())
      for (Elem y : b.elements()) {
        const Elem z = g.mul(x, y);
        if (z != 0 && c.contains(z)) return false;
      }
    return true;
  };
  for (std::size_t n : {8u, 27u})
    for (const Group& g : small_groups(n)) {
      const auto subs = enumerate_subgroups(g, cube_root(n));
      for (std::size_t i = 0; i < subs.size(); ++i)
        for (std::size_t j = 0; j < subs.size(); ++j)
          for (std::size_t k = 0; k < subs.size(); ++k) {
            if (i == j || j == k || i == k || !meets_trivially(subs[i], subs[j]) || !meets_trivially(subs[j], subs[k]) ||
                !meets_trivially(subs[i], subs[k]))
              continue;
            const bool one = avoids(g, subs[i], subs[j], subs[k]);
            o.require(one == avoids(g, subs[k], subs[j], subs[i]) && one == avoids(g, subs[i], subs[k], subs[j]),
                      "orientation in " + g.name());
          }
    }
  o.detail << "orientation reduction; ";
  // partial difference sets against the collinearity graph
  {
    const Group h = Group::from_heisenberg(HeisenbergGroup(3));
    const BruteForceResult bf = brute_force_as_configs(h);
    for (std::size_t k = 0; k < bf.configs.size(); ++k) {
      const ASConfiguration cfg = bf.configuration(h, k);
      const PdsResult p = check_pds(h, delta(cfg));
      const auto srg = collinearity_srg(as_quadrangle(cfg));
      o.require(p.ok && srg && srg->k == static_cast<long>(p.size) && srg->lambda == p.lambda && srg->mu == p.mu,
                "pds vs srg");
    }
  }
  o.detail << "pds/srg; ";
  // revalidation and worker-count determinism of the searches
  {
    PlaneCatalogue cat(form_deg_hyp6(), 3);
    ArcSymmetry sym = make_arc_symmetry(cat);
    const auto seeds1 = arc_seeds(cat, *sym.canon, 6, 1);
    const auto seedsN = arc_seeds(cat, *sym.canon, 6, std::max(2u, threads));
    o.require(seeds1 == seedsN, "seed determinism");
    const ArcExtension e1 = extend_arcs(cat, sym.canon.get(), seeds1, 9, 1);
    const ArcExtension eN = extend_arcs(cat, sym.canon.get(), seeds1, 9, std::max(2u, threads));
    o.require(e1.arcs == eN.arcs && e1.raw == eN.raw, "extension determinism");
    for (const auto& s : seeds1) o.require(is_partial_pseudo_arc(cat.form(), planes_of(cat, s)), "seed revalidation");
    for (const auto& s : e1.arcs) o.require(is_partial_pseudo_arc(cat.form(), planes_of(cat, s)), "arc revalidation");
    const Group g = table4_group(Order512Id::g208a);
    const LiftedArc l = lift_arc(g, planes_of(cat, e1.arcs.front()));
    BacktrackOptions opt;
    opt.threads = std::max(2u, threads);
    const auto b1 = as_backtrack(g, l.candidates, 9);
    const auto bN = as_backtrack(g, l.candidates, 9, opt);
    o.require(b1.families == bN.families && b1.nodes == bN.nodes, "backtrack determinism");
  }
  o.detail << "revalidation and determinism; ";
}

}  // namespace

int main() {
  const unsigned threads = resolve_threads();
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"centre and Frattini fingerprints", criterion1},
      {"deg-hyp6 arcs, lifts and search", [&](Outcome& o) { criterion2(o, threads); }},
      {"plus-form seeds", [&](Outcome& o) { criterion3(o, threads); }},
      {"210b third-choice counts", criterion4},
      {"212m centralisers and search", [&](Outcome& o) { criterion5(o, threads); }},
      {"isometry group orders", criterion6},
      {"classification at orders 8 and 27", criterion7},
      {"classical examples", criterion8},
      {"property suites", [&](Outcome& o) { criterion9(o, threads); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << " - "
              << o.detail.str() << "(" << s << " s)" << std::endl;
  }
  return all ? 0 : 1;
}
