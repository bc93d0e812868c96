#include <gtest/gtest.h>

#include <random>

#include "asq/as_search.hpp"
#include "asq/asconfig.hpp"
#include "asq/subgroups.hpp"

using namespace asq;

namespace {

struct Sample {
  Group g;
  BruteForceResult bf;
  explicit Sample(Group grp) : g(std::move(grp)), bf(brute_force_as_configs(g)) {}
  ASConfiguration config(std::size_t k = 0) const { return bf.configuration(g, k); }
};

const Sample& c2_3() {
  static const Sample s(elementary_abelian(2, 3));
  return s;
}

const Sample& heis3() {
  static const Sample s(Group::from_heisenberg(HeisenbergGroup(3)));
  return s;
}

// Direct check of U_a U_b n U_c = 1 by element products.
bool product_avoids(const Group& g, const Subgroup& a, const Subgroup& b, const Subgroup& c) {
  for (Elem x : a.elements())
    for (Elem y : b.elements()) {
      const Elem z = g.mul(x, y);
      if (z != 0 && c.contains(z)) return false;
    }
  return true;
}

// Checks both sides of the orientation reduction on every triple of
// distinct order-q subgroups meeting pairwise trivially.
std::size_t orientation_triples(const Group& g, std::size_t q) {
  const auto subs = enumerate_subgroups(g, q);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (std::size_t j = 0; j < subs.size(); ++j)
      for (std::size_t k = 0; k < subs.size(); ++k) {
        if (i == j || j == k || i == k) continue;
        if (!meets_trivially(subs[i], subs[j]) || !meets_trivially(subs[j], subs[k]) || !meets_trivially(subs[i], subs[k]))
          continue;
        EXPECT_EQ(product_avoids(g, subs[i], subs[j], subs[k]), product_avoids(g, subs[k], subs[j], subs[i]));
        EXPECT_EQ(product_avoids(g, subs[i], subs[j], subs[k]), product_avoids(g, subs[i], subs[k], subs[j]));
        ++checked;
      }
  return checked;
}

}  // namespace

TEST(Axioms, ElementaryAbelianOrderEightPasses) {
  const auto& s = c2_3();
  ASSERT_EQ(s.bf.configs.size(), 28u);
  for (std::size_t k = 0; k < s.bf.configs.size(); ++k) {
    const Report r = check_as_axioms(s.config(k));
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.checks.size(), 4u);
  }
}

TEST(Axioms, FourArcOfFanoPlaneIsAConfiguration) {
  // the complement of the line {3, 5, 6} in the Fano plane
  const Group& g = c2_3().g;
  ASConfiguration cfg{&g, 2, {}};
  for (Elem x : {1, 2, 4, 7}) cfg.U.push_back(Subgroup::generate(g, {x}));
  EXPECT_TRUE(check_as_axioms(cfg).ok());
  cfg.U[3] = Subgroup::generate(g, {Elem{3}});
  const Report r = check_as_axioms(cfg);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.first_failure()->name, "AS2");
  EXPECT_EQ(r.first_failure()->witness.size(), 1u);
}

TEST(Axioms, HeisenbergPasses) {
  const auto& s = heis3();
  ASSERT_EQ(s.bf.configs.size(), 9u);
  for (std::size_t k = 0; k < s.bf.configs.size(); ++k) EXPECT_TRUE(check_as_axioms(s.config(k)).ok());
}

TEST(Axioms, DuplicateSubgroupFails) {
  ASConfiguration cfg = heis3().config();
  cfg.U[2] = cfg.U[1];
  const Report r = check_as_axioms(cfg);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.first_failure()->name, "distinct");
  EXPECT_EQ(r.first_failure()->detail, "U1 = U2");
}

TEST(Axioms, NonNormalU0Fails) {
  ASConfiguration cfg = heis3().config();
  std::swap(cfg.U[0], cfg.U[1]);
  const Report r = check_as_axioms(cfg);
  EXPECT_FALSE(r.find("AS1: U0 normal")->ok);
  const Report l = lemma41_invariants(cfg);
  EXPECT_FALSE(l.find("AS1: U0 normal")->ok);
  EXPECT_FALSE(l.find("(iii) U_i^g <= U0U_i")->ok);
}

TEST(Axioms, WrongSizesThrow) {
  ASConfiguration cfg = heis3().config();
  cfg.U.pop_back();
  EXPECT_THROW(check_as_axioms(cfg), std::invalid_argument);
  cfg = heis3().config();
  cfg.q = 2;
  EXPECT_THROW(check_as_axioms(cfg), std::invalid_argument);
}

TEST(Axioms, OrientationReductionExhaustiveAtOrders8And27) {
  for (std::size_t n : {8u, 27u})
    for (const Group& g : small_groups(n)) orientation_triples(g, cube_root(n));
}

TEST(Axioms, OrientationReductionExhaustiveAtOrder64) {
  const Group d8d8 = direct_product(dihedral_group(4), dihedral_group(4));
  const Group q8c8 = direct_product(quaternion_group(), cyclic_group(8));
  const Group coc = Group::from_cocycle(CocycleGroup(QuadraticForm::from_terms(5, {{1, 2}, {3, 4}, {5, 5}})), "coc64");
  for (const Group* g : {&d8d8, &q8c8, &coc}) EXPECT_GT(orientation_triples(*g, 4), 0u) << g->name();
}

TEST(Axioms, OneOrientationAgreesWithAll) {
  // random q+2 subsets of order-q subgroups in the Heisenberg group
  const Group& g = heis3().g;
  const auto subs = enumerate_subgroups(g, 3);
  std::mt19937_64 rng(17);
  std::size_t agree = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<std::size_t> idx(subs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    ASConfiguration cfg{&g, 3, {}};
    for (int i = 0; i < 5; ++i) cfg.U.push_back(subs[idx[static_cast<std::size_t>(i)]]);
    const Report r = check_as_axioms(cfg);
    const bool one = r.find("pairwise trivial")->ok && r.find("AS2")->ok;
    const bool all = r.find("pairwise trivial")->ok && as2_all_orientations(cfg.U);
    EXPECT_EQ(one, all);
    agree += one ? 1 : 0;
  }
  EXPECT_GT(agree, 0u);
}

TEST(Pds, ParametersAtQ2AndQ3) {
  for (const Sample* s : {&c2_3(), &heis3()}) {
    const std::size_t q = s->bf.q;
    for (std::size_t k = 0; k < s->bf.configs.size(); ++k) {
      const ElemSet d = delta(s->config(k));
      EXPECT_EQ(d.count(), (q + 2) * (q - 1));
      const PdsResult r = check_pds(s->g, d);
      EXPECT_TRUE(r.ok);
      EXPECT_EQ(r.lambda, static_cast<long>(q) - 2);
      EXPECT_EQ(r.mu, static_cast<long>(q) + 2);
    }
  }
}

TEST(Pds, RejectsBadSets) {
  const Group& g = heis3().g;
  ElemSet with_id(g.order());
  with_id.set(0);
  EXPECT_THROW(check_pds(g, with_id), std::invalid_argument);
  ElemSet one(g.order());
  one.set(1);
  EXPECT_THROW(check_pds(g, one), std::invalid_argument);
}

TEST(Pds, NonConfigurationIsNotAPds) {
  // three members of a configuration plus a subgroup that breaks AS2
  ASConfiguration cfg = heis3().config();
  const auto subs = enumerate_subgroups(heis3().g, 3);
  for (const auto& s : subs) {
    if (std::find(cfg.U.begin(), cfg.U.end(), s) != cfg.U.end()) continue;
    cfg.U.back() = s;
    if (!check_as_axioms(cfg).ok()) break;
  }
  ASSERT_FALSE(check_as_axioms(cfg).ok());
  ElemSet d(heis3().g.order());
  for (const auto& u : cfg.U)
    for (std::size_t e = 1; e < u.order(); ++e) d.set(u.elements()[e]);
  const PdsResult r = check_pds(heis3().g, d);
  EXPECT_FALSE(r.ok && r.lambda == 1 && r.mu == 5);
}

TEST(Kantor, FamiliesFromConfigurations) {
  for (const Sample* s : {&c2_3(), &heis3()}) {
    const std::size_t q = s->bf.q;
    for (std::size_t k = 0; k < s->bf.configs.size(); ++k) {
      const KantorFamily fam = kantor_from_as(s->config(k));
      EXPECT_EQ(fam.F.size(), q + 1);
      EXPECT_TRUE(check_kantor(s->g, fam, q, q).ok());
    }
  }
}

TEST(Kantor, DroppingAMemberFails) {
  KantorFamily fam = kantor_from_as(heis3().config());
  fam.F.pop_back();
  fam.Fstar.pop_back();
  const Report r = check_kantor(heis3().g, fam, 3, 3);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.first_failure()->name, "sizes");
}

TEST(Kantor, SwappedTangentSpacesFail) {
  KantorFamily fam = kantor_from_as(heis3().config());
  std::swap(fam.Fstar[0], fam.Fstar[1]);
  EXPECT_FALSE(check_kantor(heis3().g, fam, 3, 3).ok());
}

TEST(StructuralInvariants, AllClausesHold) {
  for (const Sample* s : {&c2_3(), &heis3()})
    for (std::size_t k = 0; k < s->bf.configs.size(); ++k) {
      const Report r = lemma41_invariants(s->config(k));
      EXPECT_TRUE(r.ok()) << (r.first_failure() ? r.first_failure()->name : "");
      EXPECT_EQ(r.checks.size(), 8u);
    }
}

TEST(StructuralInvariants, TripleProductsOfNonNormalMembersNeedNotCoverG) {
  // In the Heisenberg group U_iU_jU_k is a proper subset of G for some
  // triples of non-normal members, so only products through U0 are checked.
  for (std::size_t k = 0; k < heis3().bf.configs.size(); ++k) {
    const ASConfiguration cfg = heis3().config(k);
    const auto bad = non_covering_triples(cfg);
    EXPECT_FALSE(bad.empty());
    for (const auto& t : bad) EXPECT_TRUE(t[0] != 0 && t[1] != 0 && t[2] != 0);
  }
  for (std::size_t k = 0; k < c2_3().bf.configs.size(); ++k) EXPECT_TRUE(non_covering_triples(c2_3().config(k)).empty());
}

TEST(NormalMember, NormalNonDistinguishedMemberForcesElementaryAbelian) {
  std::size_t seen_normal = 0;
  for (std::size_t n : {8u, 27u}) {
    const auto groups = small_groups(n);
    for (const Group& g : groups) {
      const BruteForceResult bf = brute_force_as_configs(g);
      for (std::size_t k = 0; k < bf.configs.size(); ++k) {
        const ASConfiguration cfg = bf.configuration(g, k);
        bool normal = false;
        for (std::size_t i = 1; i < cfg.U.size(); ++i) normal = normal || is_normal(g, cfg.U[i]);
        if (!normal) continue;
        ++seen_normal;
        EXPECT_TRUE(g.is_abelian() && exponent(g) == static_cast<int>(g.prime()));
        EXPECT_EQ(cfg.q % 2, 0u);
      }
    }
  }
  EXPECT_GT(seen_normal, 0u);
}

TEST(OddQ, CentralisersAndCentre) {
  const Group& g = heis3().g;
  const Subgroup z = center(g);
  for (std::size_t k = 0; k < heis3().bf.configs.size(); ++k) {
    const ASConfiguration cfg = heis3().config(k);
    EXPECT_EQ(cfg.U[0], z);
    for (std::size_t i = 1; i < cfg.U.size(); ++i) {
      const Subgroup u0ui = join(cfg.U[0], cfg.U[i]);
      for (std::size_t e = 1; e < cfg.U[i].order(); ++e) {
        const Elem u = cfg.U[i].elements()[e];
        EXPECT_EQ(centralizer(g, std::vector<Elem>{u}), u0ui);
      }
    }
  }
}

TEST(ConfigFile, RoundTripAndErrors) {
  const ASConfiguration cfg = heis3().config(3);
  const std::string text = format_configuration(cfg);
  const ASConfiguration back = parse_configuration(text, heis3().g);
  EXPECT_EQ(back.q, cfg.q);
  EXPECT_EQ(back.U, cfg.U);
  try {
    parse_configuration("q: 3\nU0: 1\nU1: 99\n", heis3().g);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_configuration("U0: 1\n", heis3().g), std::invalid_argument);
  EXPECT_THROW(parse_configuration("q: 3\nU0: 1\nU0: 2\n", heis3().g), std::invalid_argument);
  EXPECT_THROW(parse_configuration("q: 3\nU0: 1\nU2: 2\n", heis3().g), std::invalid_argument);
  EXPECT_THROW(parse_configuration("q: 3\nV0: 1\n", heis3().g), std::invalid_argument);
  EXPECT_THROW(parse_configuration("q: 3\nU0: 1 x\n", heis3().g), std::invalid_argument);
}

TEST(Filters, FourLargeGroupsPass) {
  for (auto id : {Order512Id::g208a, Order512Id::g210b, Order512Id::g211p, Order512Id::g212m}) {
    const Group g = table4_group(id);
    const FilterReport f = structural_filter(g);
    EXPECT_TRUE(f.frattini_small);
    EXPECT_TRUE(f.sufficient.result) << to_string(id);
    EXPECT_FALSE(f.extraspecial.has_value()) << to_string(id);
    EXPECT_TRUE(f.pass);
    ASSERT_TRUE(f.sufficient.u0.has_value());
    EXPECT_TRUE(frattini(g).is_subgroup_of(*f.sufficient.u0));
    EXPECT_EQ(f.sufficient.u0->order(), 8u);
  }
}

TEST(Filters, EnoughSubgroupsAndCliqueForLargeGroups) {
  const std::map<Order512Id, std::pair<std::size_t, std::size_t>> counts{{Order512Id::g208a, {25720, 4580}},
                                                                       {Order512Id::g210b, {11160, 1710}},
                                                                       {Order512Id::g211p, {16200, 2025}},
                                                                       {Order512Id::g212m, {6120, 765}}};
  for (const auto& [id, expected] : counts) {
    const Group g = table4_group(id);
    const EnoughSubgroupsResult e = enough_subgroups(g, 8);
    EXPECT_TRUE(e.ok);
    EXPECT_FALSE(e.abelian_bypass);
    EXPECT_EQ(std::make_pair(e.subgroups, e.classes), expected) << to_string(id);
    const CliqueResult c = clique_size_qplus1(g, 8);
    ASSERT_TRUE(c.found) << to_string(id);
    EXPECT_EQ(c.clique.size(), 9u);
  }
}

TEST(Filters, CliqueWitnessSatisfiesEdgeTest) {
  const Group g = table4_group(Order512Id::g212m);
  const CliqueResult c = clique_size_qplus1(g, 8);
  ASSERT_TRUE(c.found);
  const auto subs = good_subgroups(g, 8);
  const Subgroup phi = frattini(g);
  for (std::size_t a : c.clique)
    for (std::size_t b : c.clique) {
      if (a == b) continue;
      EXPECT_TRUE(product_avoids(g, phi, subs[a], subs[b]));
      EXPECT_TRUE(product_avoids(g, subs[a], phi, subs[b]));
    }
}

TEST(Filters, DihedralTimesElementaryAbelianHasExtraspecialImage) {
  const Group g = direct_product(dihedral_group(4), elementary_abelian(2, 6));
  ASSERT_EQ(g.order(), 512u);
  const FilterReport f = structural_filter(g);
  ASSERT_TRUE(f.extraspecial.has_value());
  EXPECT_EQ(f.extraspecial->quotient_order, 8u);
  EXPECT_EQ(f.extraspecial->n.order(), 64u);
  EXPECT_TRUE(is_normal(g, f.extraspecial->n));
  EXPECT_FALSE(f.pass);
}

TEST(Filters, ExtraspecialQuotientSmallCases) {
  const Group d8 = dihedral_group(4);
  const auto w = extraspecial_quotient(d8);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->n.order(), 1u);
  EXPECT_EQ(w->quotient_order, 8u);
  EXPECT_TRUE(extraspecial_quotient(quaternion_group()).has_value());
  EXPECT_FALSE(extraspecial_quotient(elementary_abelian(2, 9)).has_value());
  EXPECT_FALSE(extraspecial_quotient(direct_product(cyclic_group(4), cyclic_group(2))).has_value());
  // 2^{1+4}_+ and D8 x D8 both map onto extraspecial groups
  const Group e32 = Group::from_cocycle(CocycleGroup(QuadraticForm::from_terms(4, {{1, 2}, {3, 4}})), "e32");
  const auto w32 = extraspecial_quotient(e32);
  ASSERT_TRUE(w32.has_value());
  EXPECT_EQ(w32->quotient_order, 32u);
  EXPECT_TRUE(extraspecial_quotient(direct_product(dihedral_group(4), dihedral_group(4))).has_value());
}

TEST(Filters, SmallGroupVerdicts) {
  const Group c27 = cyclic_group(27);
  const FilterReport f = structural_filter(c27);
  EXPECT_EQ(f.frattini_order, 9u);
  EXPECT_FALSE(f.pass);
  EXPECT_FALSE(enough_subgroups(quaternion_group(), 2).ok);
  const Group c2_9 = elementary_abelian(2, 9);
  const EnoughSubgroupsResult e = enough_subgroups(c2_9, 8);
  EXPECT_TRUE(e.ok);
  EXPECT_TRUE(e.abelian_bypass);
  const CliqueResult c = clique_size_qplus1(c2_9, 8);
  EXPECT_TRUE(c.found && c.abelian_bypass);
  // the sufficient-condition check rejects abelian groups outright, so the
  // filter bypasses it for them
  const FilterReport fa = structural_filter(c2_9);
  EXPECT_TRUE(fa.abelian);
  EXPECT_FALSE(fa.sufficient.result);
  EXPECT_TRUE(fa.pass);
  EXPECT_TRUE(structural_filter(elementary_abelian(2, 3)).pass);
}

TEST(Filters, GroupsWithConfigurationsPassEnoughSubgroups) {
  EXPECT_TRUE(enough_subgroups(heis3().g, 3).ok);
  EXPECT_TRUE(clique_size_qplus1(heis3().g, 3).found);
  EXPECT_TRUE(structural_filter(heis3().g).pass);
}
