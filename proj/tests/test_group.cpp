#include <gtest/gtest.h>

#include <map>
#include <random>

#include "asq/group.hpp"
#include "asq/subgroups.hpp"

using namespace asq;

namespace {

const std::vector<Order512Id> kOrder512{Order512Id::g208a, Order512Id::g210b, Order512Id::g211p, Order512Id::g212m};

// Abelian invariants of an abelian subgroup as a sorted list of cyclic factor orders.
std::vector<int> abelian_invariants(const Subgroup& h) {
  // count elements of order dividing p^k for each k; for a 2-group this pins the type
  std::map<int, int> by_order;
  for (Elem x : h.elements()) ++by_order[h.group().elem_order(x)];
  std::vector<int> out;
  // a C4 x C2 has orders {1:1, 2:3, 4:4}; C2^3 has {1:1, 2:7}; C8 has {1,1,2,4}
  if (h.order() == 2) return {2};
  if (h.order() == 8 && by_order[2] == 7) return {2, 2, 2};
  if (h.order() == 8 && by_order[2] == 3 && by_order[4] == 4) return {2, 4};
  if (h.order() == 8 && by_order[8] == 4) return {8};
  return {-1};
}

}  // namespace

TEST(Group, CentreAndFrattiniFingerprints) {
  const std::map<Order512Id, std::vector<int>> centre{{Order512Id::g208a, {2, 2, 2}},
                                                    {Order512Id::g210b, {2, 4}},
                                                    {Order512Id::g211p, {2}},
                                                    {Order512Id::g212m, {2}}};
  for (auto id : kOrder512) {
    const Group g = table4_group(id);
    EXPECT_EQ(g.order(), 512u);
    const Subgroup z = center(g);
    EXPECT_TRUE(z.is_abelian());
    EXPECT_EQ(abelian_invariants(z), centre.at(id)) << to_string(id);
    const Subgroup phi = frattini(g);
    EXPECT_EQ(phi.order(), 2u) << to_string(id);
    EXPECT_EQ(exponent(g), 4);
  }
}

TEST(Group, CocycleSquaringAndCommutatorIdentities) {
  for (auto id : kOrder512) {
    const CocycleGroup c = table4_cocycle(id);
    const Group g = Group::from_cocycle(c, to_string(id));
    const QuadraticForm& q = c.form();
    for (std::size_t x = 0; x < 512; ++x) {
      const Elem e = static_cast<Elem>(x);
      ASSERT_EQ(g.mul(e, e), c.make(0, q.evaluate(c.vec(e))));
      for (std::size_t y = 0; y < 512; y += 3) {
        const Elem f = static_cast<Elem>(y);
        ASSERT_EQ(g.commutator(e, f), c.make(0, q.bilinear(c.vec(e), c.vec(f))));
      }
    }
  }
}

TEST(Group, CocycleExponentTwoIffFormZero) {
  EXPECT_EQ(exponent(Group::from_cocycle(CocycleGroup(QuadraticForm::zero(4)), "C2^5")), 2);
  EXPECT_EQ(exponent(Group::from_cocycle(CocycleGroup(QuadraticForm::from_terms(2, {{1, 2}})), "D8")), 4);
}

TEST(Group, CentreIsPreimageOfRadical) {
  for (auto id : kOrder512) {
    const CocycleGroup c = table4_cocycle(id);
    const Group g = Group::from_cocycle(c, to_string(id));
    const Radicals r = radicals(c.form());
    const Subgroup z = center(g);
    EXPECT_EQ(z.order(), std::size_t{1} << (r.cls.rad_dim + 1));
    for (Elem x : z.elements()) EXPECT_TRUE(r.rad.contains(c.vec(x)));
    EXPECT_EQ(z.is_elementary_abelian(), r.cls.rad_dim == r.cls.srad_dim);
  }
}

TEST(Group, InvolutionCount211p) {
  const Group g = table4_group(Order512Id::g211p);
  int invols = 0;
  for (std::size_t x = 1; x < 512; ++x) invols += g.elem_order(static_cast<Elem>(x)) == 2;
  // oracle: nonzero singular vectors, two lifts each, plus the central involution
  int singular = 0;
  const QuadraticForm q = form_plus8();
  for (Word u = 1; u < 256; ++u) singular += q.evaluate(u) == 0;
  EXPECT_EQ(invols, 2 * singular + 1);
  EXPECT_EQ(invols, 271);
}

TEST(Group, SmallCharacteristicSubgroups) {
  const Group h3 = Group::from_heisenberg(HeisenbergGroup(3));
  EXPECT_EQ(center(h3).order(), 3u);
  EXPECT_EQ(exponent(h3), 3);
  EXPECT_EQ(frattini(cyclic_group(27)).order(), 9u);
  const Group g = table4_group(Order512Id::g208a);
  EXPECT_EQ(agemo(g, 1), frattini(g));
  EXPECT_EQ(agemo(g, 1).order(), 2u);
  EXPECT_EQ(derived(g).order(), 2u);
  EXPECT_EQ(agemo(g, 2).order(), 1u);
}

TEST(Group, HeisenbergMatchesMatrixProduct) {
  const HeisenbergGroup h(5);
  // [[1,a,c],[0,1,b],[0,0,1]] products
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c)
        for (int a2 = 0; a2 < 5; a2 += 2)
          for (int b2 = 0; b2 < 5; b2 += 2)
            for (int c2 = 0; c2 < 5; c2 += 2)
              EXPECT_EQ(h.mul(h.make(a, b, c), h.make(a2, b2, c2)),
                        h.make((a + a2) % 5, (b + b2) % 5, (c + c2 + a * b2) % 5));
  EXPECT_THROW(HeisenbergGroup(9), std::invalid_argument);
  EXPECT_THROW(HeisenbergGroup(2), std::invalid_argument);
}

TEST(Group, CentraliserOfCentreIsWholeGroup) {
  for (auto id : kOrder512) {
    const Group g = table4_group(id);
    EXPECT_EQ(centralizer(g, center(g)).order(), g.order());
  }
}

TEST(Group, GenerateIsIdempotentAndOrderIndependent) {
  const Group g = table4_group(Order512Id::g210b);
  std::mt19937 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Elem> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(static_cast<Elem>(rng() % 512));
    const Subgroup a = Subgroup::generate(g, gens);
    std::vector<Elem> rev(gens.rbegin(), gens.rend());
    EXPECT_EQ(Subgroup::generate(g, rev), a);
    EXPECT_EQ(Subgroup::generate(g, a.elements()), a);
    for (Elem x : a.elements())
      for (Elem y : a.elements()) ASSERT_TRUE(a.contains(g.mul(x, y)));
  }
  EXPECT_THROW(Subgroup::generate(g, {Elem{600}}), std::out_of_range);
}

TEST(Group, NormalizerAndConjugates) {
  const Group d8 = dihedral_group(4);
  const Subgroup s = Subgroup::generate(d8, {Elem{4}});  // a reflection
  EXPECT_FALSE(is_normal(d8, s));
  EXPECT_EQ(normalizer(d8, s).order(), 4u);
  EXPECT_EQ(centralizer(d8, s.generators()).order(), 4u);
  std::set<std::vector<Elem>> conj;
  for (std::size_t x = 0; x < 8; ++x) conj.insert(conjugate_subgroup(s, static_cast<Elem>(x)).elements());
  EXPECT_EQ(conj.size(), 2u);
  EXPECT_TRUE(is_normal(d8, center(d8)));
}

TEST(Group, Quotients) {
  const Group g = table4_group(Order512Id::g211p);
  const Quotient q = quotient(g, frattini(g));
  EXPECT_EQ(q.group->order(), 256u);
  EXPECT_EQ(exponent(*q.group), 2);
  EXPECT_TRUE(q.group->is_abelian());

  const Group h3 = Group::from_heisenberg(HeisenbergGroup(3));
  const Quotient hq = quotient(h3, center(h3));
  EXPECT_EQ(hq.group->order(), 9u);
  EXPECT_TRUE(hq.group->is_abelian());
  EXPECT_EQ(exponent(*hq.group), 3);

  const Group d8 = dihedral_group(4);
  EXPECT_THROW(quotient(d8, Subgroup::generate(d8, {Elem{4}})), std::invalid_argument);
}

TEST(Group, QuotientSquaringReproducesForm) {
  for (auto id : kOrder512) {
    const CocycleGroup c = table4_cocycle(id);
    const Group g = Group::from_cocycle(c, to_string(id));
    const Subgroup phi = frattini(g);
    const Quotient q = quotient(g, phi);
    // cosets of Phi are exactly the fibres of the projection to the low bits
    for (std::size_t x = 0; x < 512; ++x)
      for (std::size_t y = 0; y < 512; y += 7)
        ASSERT_EQ(q.projection[x] == q.projection[y], c.vec(static_cast<Elem>(x)) == c.vec(static_cast<Elem>(y)));
    for (std::size_t x = 0; x < 512; ++x) {
      const Elem e = static_cast<Elem>(x);
      ASSERT_EQ(g.mul(e, e) != 0, c.form().evaluate(c.vec(e)) == 1);
    }
  }
}

TEST(Group, ElemAbelianEnumerationSmall) {
  EXPECT_EQ(enumerate_elem_abelian_subgroups(elementary_abelian(2, 3), 4).size(), 7u);
  EXPECT_EQ(enumerate_elem_abelian_subgroups(quaternion_group(), 4).size(), 0u);
  // oracle: generic subgroup enumeration filtered by elementary abelian
  for (const Group& g : {elementary_abelian(2, 4), direct_product(dihedral_group(4), cyclic_group(2)),
                         direct_product(quaternion_group(), elementary_abelian(2, 2))}) {
    for (std::size_t k : {2u, 4u, 8u}) {
      std::vector<Subgroup> expected;
      for (auto& s : enumerate_subgroups(g, k))
        if (s.is_elementary_abelian()) expected.push_back(s);
      EXPECT_EQ(enumerate_elem_abelian_subgroups(g, k), expected) << g.name() << ' ' << k;
    }
  }
}

TEST(Group, SubgroupCountsOfC2Power) {
  // Gaussian binomials count subspaces of GF(2)^4
  const Group g = elementary_abelian(2, 4);
  EXPECT_EQ(enumerate_subgroups(g, 2).size(), 15u);
  EXPECT_EQ(enumerate_subgroups(g, 4).size(), 35u);
  EXPECT_EQ(enumerate_subgroups(g, 8).size(), 15u);
  EXPECT_EQ(enumerate_subgroups(dihedral_group(4), 4).size(), 3u);
  EXPECT_EQ(enumerate_subgroups(dihedral_group(4), 2).size(), 5u);
}

TEST(Group, ElemAbelianOrder8MeetingFrattiniLiftTotallySingularPlanes) {
  for (auto id : {Order512Id::g211p, Order512Id::g212m}) {
    const Group g = table4_group(id);
    const auto subs = enumerate_elem_abelian_subgroups(g, 8, {nonidentity_set(frattini(g))});
    std::map<Subspace, int> per_plane;
    for (const auto& s : subs) {
      const Subspace w = projection(s);
      ASSERT_EQ(w.rank(), 3);
      ASSERT_TRUE(g.cocycle()->form().totally_singular(w));
      ++per_plane[w];
    }
    EXPECT_EQ(per_plane.size(), singular_subspaces(g.cocycle()->form(), 3).size());
    for (auto& [w, n] : per_plane) EXPECT_EQ(n, 8);
  }
}

TEST(Group, Complements) {
  const Group v4 = elementary_abelian(2, 2);
  const Subgroup whole = Subgroup::whole(v4);
  const Subgroup n = Subgroup::generate(v4, {Elem{1}});
  EXPECT_EQ(complements(whole, n).size(), 2u);
  const Group c4 = cyclic_group(4);
  EXPECT_EQ(complements(Subgroup::whole(c4), Subgroup::generate(c4, {Elem{2}})).size(), 0u);
  const Group d8 = dihedral_group(4);
  EXPECT_THROW(complements(Subgroup::whole(d8), Subgroup::generate(d8, {Elem{4}})), std::invalid_argument);
}

TEST(Group, LiftIsometry) {
  const CocycleGroup c = table4_cocycle(Order512Id::g211p);
  const Group g = Group::from_cocycle(c, "211p");
  const auto id = lift_isometry(c, BitMatrix::identity(8));
  for (std::size_t x = 0; x < 512; ++x) EXPECT_EQ(id[x], x);
  const auto gens = isometry_generators(c.form());
  const auto invols = enumerate_elem_abelian_subgroups(g, 8, {nonidentity_set(center(g))});
  std::set<std::vector<Elem>> pool;
  for (auto& s : invols) pool.insert(s.elements());
  for (std::size_t i = 0; i < gens.size(); i += 7) {
    const auto img = lift_isometry(c, gens[i]);
    ASSERT_TRUE(is_automorphism(g, img));
    for (std::size_t j = 0; j < invols.size(); j += 11)
      EXPECT_TRUE(pool.count(apply_automorphism(invols[j], img).elements()));
  }
  BitMatrix bad = BitMatrix::identity(8);
  bad = BitMatrix::from_columns({2, 1, 4, 8, 16, 32, 64, 129});
  EXPECT_THROW(lift_isometry(c, bad), std::invalid_argument);
}

TEST(Group, SmallGroupCatalogue) {
  for (std::size_t n : {8u, 27u}) {
    const auto gs = small_groups(n);
    ASSERT_EQ(gs.size(), 5u);
    std::set<std::vector<int>> fingerprints;
    for (const auto& g : gs) {
      EXPECT_EQ(g.order(), n);
      std::vector<int> fp(n + 1, 0);
      for (std::size_t x = 0; x < n; ++x) ++fp[static_cast<std::size_t>(g.elem_order(static_cast<Elem>(x)))];
      fp[0] = static_cast<int>(center(g).order());
      fingerprints.insert(fp);
    }
    EXPECT_EQ(fingerprints.size(), 5u);  // pairwise non-isomorphic
  }
  EXPECT_THROW(small_groups(16), std::invalid_argument);
}

TEST(Group, TableAssociativityChecked) {
  const auto d8 = dihedral_group(4);
  std::vector<Elem> t = d8.table();
  EXPECT_NO_THROW(Group::from_table(8, t, "ok"));
  // swap two products in a way that keeps a Latin square but breaks associativity
  std::vector<Elem> bad(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) bad[static_cast<std::size_t>(a * 8 + b)] = static_cast<Elem>((a + b) % 8);
  std::swap(bad[1 * 8 + 1], bad[1 * 8 + 2]);
  std::swap(bad[2 * 8 + 1], bad[2 * 8 + 2]);
  EXPECT_THROW(Group::from_table(8, bad, "bad"), std::invalid_argument);
}

TEST(Group, FileFormatRoundTrip) {
  for (auto id : kOrder512) {
    const Group g = table4_group(id);
    const Group h = parse_group(format_group(g));
    EXPECT_EQ(h.table(), g.table());
  }
  const Group h3 = parse_group("kind: heisenberg\np: 3\n");
  EXPECT_EQ(h3.order(), 27u);
  const Group q8 = parse_group(format_group(quaternion_group()));
  EXPECT_EQ(q8.table(), quaternion_group().table());
}

TEST(Group, FileFormatErrorsCarryLineNumbers) {
  try {
    parse_group("kind: cocycle\ndim: 2\n11\n1\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_group("kind: banana\n"), std::invalid_argument);
  EXPECT_THROW(parse_group("kind: table\nn: 2\n0 1\n1 5\n"), std::invalid_argument);
}
