#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "ptower/abelian.hpp"
#include "ptower/catalog.hpp"
#include "ptower/errors.hpp"
#include "ptower/low_index.hpp"
#include "ptower/power_subgroup.hpp"
#include "ptower/pquotient.hpp"
#include "ptower/serialize.hpp"
#include "ptower/subgroup.hpp"

using namespace ptower;
using pc::Element;

namespace {

pc::PcData blank(int n, std::vector<int> weights) {
  pc::PcData d;
  d.prime = 2;
  d.weights = std::move(weights);
  d.definitions.assign(n, pc::Definition::none());
  d.powers.assign(n, Element(n));
  d.commutators.assign(std::size_t(n) * n, Element(n));
  return d;
}

Element vec(std::vector<std::uint8_t> e) { return Element(std::move(e)); }

// g1^2 = 1, g2^2 = g3, g3^2 = 1, [g2, g1] = g3, g3 central.
pc::PcPresentation d4() {
  auto d = blank(3, {1, 1, 2});
  d.definitions[2] = pc::Definition::commutator(1, 0);
  d.powers[1] = vec({0, 0, 1});
  d.commutators[1 * 3 + 0] = vec({0, 0, 1});
  return pc::PcPresentation(d);
}

}  // namespace

TEST(Collect, EmptyWordIsIdentity) {
  const auto g = d4();
  EXPECT_TRUE(g.collect(std::vector<int>{}).is_identity());
}

TEST(Collect, DihedralRelationsAreForced) {
  const auto g = d4();
  EXPECT_EQ(g.collect(std::vector<int>{2, 2}), vec({0, 0, 1}));
  EXPECT_EQ(g.commutator(g.generator(1), g.generator(0)), vec({0, 0, 1}));
  EXPECT_TRUE(g.is_consistent());
  EXPECT_TRUE(g.has_pure_definitions());
  EXPECT_EQ(pc::p_class(g), 2);
}

TEST(ElementOps, IdentitiesHold) {
  const auto g = d4();
  EXPECT_TRUE(g.inverse(g.identity()).is_identity());
  for (std::uint64_t c = 0; c < 8; ++c) {
    const auto x = g.decode(c);
    EXPECT_TRUE(g.commutator(x, x).is_identity());
    EXPECT_TRUE(g.multiply(x, g.inverse(x)).is_identity());
    EXPECT_TRUE(g.power(x, 4).is_identity());
    EXPECT_EQ(g.encode(x), c);
  }
}

TEST(Consistency, CommutatorRelationRemovedBreaksDefinitionOnly) {
  // [g2, g1] = 1 with g3 still defined as that commutator: the relations
  // describe Z/2 x Z/4 consistently, but the definition of g3 is no longer pure.
  auto d = blank(3, {1, 1, 2});
  d.definitions[2] = pc::Definition::commutator(1, 0);
  d.powers[1] = vec({0, 0, 1});
  const pc::PcPresentation g(d);
  EXPECT_TRUE(g.is_consistent());
  EXPECT_FALSE(g.has_pure_definitions());
  std::mt19937_64 rng(1);
  EXPECT_TRUE(oracle::table_of(g.data()).associative_sample(rng, 512));
  EXPECT_EQ(pc::abelian_invariants(g), (pc::AbelianInvariants{2, 4}));
}

TEST(Consistency, ConjugatedPowerRelationIsDetected) {
  // g1^2 = g3, g2^2 = 1, [g2, g1] = g3, [g3, g2] = g4: conjugating g2^2 = 1 by
  // g1 gives (g2 g3)^2 = g4.
  auto d = blank(4, {1, 1, 2, 3});
  d.definitions[2] = pc::Definition::commutator(1, 0);
  d.definitions[3] = pc::Definition::commutator(2, 1);
  d.powers[0] = vec({0, 0, 1, 0});
  d.commutators[1 * 4 + 0] = vec({0, 0, 1, 0});
  d.commutators[2 * 4 + 1] = vec({0, 0, 0, 1});
  const pc::PcPresentation g(d);
  EXPECT_FALSE(g.is_consistent());
  const auto t = oracle::table_of(g.data());
  bool associative = true;
  for (int a = 0; a < t.order && associative; ++a)
    for (int b = 0; b < t.order && associative; ++b)
      for (int c = 0; c < t.order && associative; ++c)
        associative = t(t(a, b), c) == t(a, t(b, c));
  EXPECT_FALSE(associative);
}

TEST(Consistency, MalformedRelationsAreRejected) {
  auto d = blank(2, {1, 2});
  d.powers[1] = vec({1, 0});
  EXPECT_THROW(pc::PcPresentation{d}, InvalidPresentation);
  auto w = blank(2, {2, 1});
  EXPECT_THROW(pc::PcPresentation{w}, InvalidPresentation);
}

TEST(Abelian, StandardExamples) {
  EXPECT_EQ(pc::abelian_invariants(tree::quaternion8()), (pc::AbelianInvariants{2, 2}));
  EXPECT_EQ(pc::abelian_invariants(tree::dihedral8()), (pc::AbelianInvariants{2, 2}));
  EXPECT_EQ(pc::abelian_invariants(pc::PcPresentation::elementary_abelian(2, 4)), (pc::AbelianInvariants{2, 2, 2, 2}));
  EXPECT_TRUE(pc::abelian_invariants(pc::PcPresentation::trivial(2)).empty());
  EXPECT_EQ(pc::format_invariants({2, 4, 8}), "[2,4,8]");
  EXPECT_EQ(pc::parse_invariants("[2, 4,8]"), (pc::AbelianInvariants{2, 4, 8}));
}

TEST(Abelian, WholeAndTrivialSubgroups) {
  const auto g = tree::quaternion8();
  EXPECT_EQ(pc::abelian_invariants(g, pc::Subgroup::whole(g)), pc::abelian_invariants(g));
  EXPECT_TRUE(pc::abelian_invariants(g, pc::Subgroup::trivial(g)).empty());
}

TEST(CentralSeries, ClassesOfStandardGroups) {
  EXPECT_EQ(pc::p_class(pc::PcPresentation::elementary_abelian(2, 4)), 1);
  EXPECT_EQ(pc::p_class(tree::dihedral8()), 2);
  EXPECT_EQ(pc::p_class(tree::quaternion8()), 2);
  const auto series = pc::p_central_series(tree::dihedral8());
  ASSERT_EQ(series.size(), 3u);
  for (std::size_t k = 0; k + 1 < series.size(); ++k) EXPECT_GT(series[k].order_log(), series[k + 1].order_log());
  EXPECT_TRUE(series.back().is_trivial());
}

TEST(LowIndex, HyperplaneCounts) {
  const auto v2 = pc::low_index_subgroups(pc::PcPresentation::elementary_abelian(2, 2), 1);
  EXPECT_EQ(v2.levels.at(0).size(), 3u);
  const auto v4 = pc::low_index_subgroups(pc::PcPresentation::elementary_abelian(2, 4), 2);
  EXPECT_EQ(v4.levels.at(0).size(), 15u);
  EXPECT_EQ(v4.levels.at(1).size(), 35u);
  for (const auto& h : v4.levels[0]) EXPECT_EQ(h.abelianization, (pc::AbelianInvariants{2, 2, 2}));
}

TEST(PowerSubgroup, StandardExamples) {
  const auto e = pc::power_subgroup(pc::PcPresentation::elementary_abelian(2, 4), 2);
  EXPECT_TRUE(e.subgroup.is_trivial());
  EXPECT_EQ(e.index_log, 4);
  const auto q8 = tree::quaternion8();
  const auto z = pc::power_subgroup(q8, 2);
  EXPECT_EQ(z.index_log, 2);
  EXPECT_TRUE(z.is_abelian);
  for (std::uint64_t c = 0; c < 8; ++c)
    for (const auto& x : z.subgroup.pcgs()) EXPECT_EQ(q8.multiply(q8.decode(c), x), q8.multiply(x, q8.decode(c)));
  EXPECT_TRUE(pc::is_normal(q8, z.subgroup));
}

TEST(Serialize, RoundTripIsByteExact) {
  for (const auto& g : {d4(), tree::quaternion8(), pc::PcPresentation::elementary_abelian(2, 3),
                        pc::PcPresentation::trivial(2)}) {
    const std::string text = pc::serialize(g);
    const auto back = pc::deserialize(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(pc::serialize(back), text);
  }
  EXPECT_THROW(pc::deserialize("pcp-v9\n"), ParseError);
}

TEST(TrivialGroup, DegenerateInputsAreLegal) {
  const auto g = pc::PcPresentation::trivial(2);
  EXPECT_EQ(g.ngens(), 0);
  EXPECT_TRUE(g.is_consistent());
  EXPECT_EQ(pc::p_class(g), 0);
  EXPECT_TRUE(g.collect(std::vector<int>{}).is_identity());
}

TEST(FpParse, CommutatorsAreLeftNormed) {
  const auto fp = tree::FpPresentation::parse("<a,b | a^2, (a,b,b), b^-4>");
  EXPECT_EQ(fp.ngens(), 2);
  ASSERT_EQ(fp.relators().size(), 3u);
  EXPECT_THROW(tree::FpPresentation::parse("<a | c>"), ParseError);
  const auto juxt = tree::FpPresentation::parse("<a,b | ab^2, (ab)^4>");
  EXPECT_EQ(juxt.exponent_sums(juxt.relators()[0]), (std::vector<long>{1, 2}));
  EXPECT_EQ(juxt.exponent_sums(juxt.relators()[1]), (std::vector<long>{4, 4}));
}

TEST(PQuotient, FreeQuotients) {
  const auto r = tree::p_quotient(tree::FpPresentation::parse("<a,b | >"), 2, 1);
  EXPECT_EQ(r.group().ngens(), 2);
  const auto r2 = tree::p_quotient(tree::FpPresentation::parse("<a,b | >"), 2, 2);
  EXPECT_EQ(r2.group().ngens(), 5);
}

TEST(PQuotient, TowerCompatibility) {
  for (const auto& name : {"koch-q2", "ex93"}) {
    const auto r = tree::p_quotient(tree::builtin_presentation(name), 2, 4);
    for (std::size_t k = 0; k + 1 < r.quotients.size(); ++k) {
      EXPECT_EQ(r.quotients[k + 1].truncate(static_cast<int>(k) + 1), r.quotients[k]) << name;
      EXPECT_TRUE(r.quotients[k + 1].is_consistent());
    }
  }
}

TEST(PQuotient, KochQuotientAbelianization) {
  const auto g = tree::resolve_group("koch-q2", 2, 2);
  EXPECT_EQ(g.ngens(), 9);
  EXPECT_EQ(pc::abelian_invariants(g), (pc::AbelianInvariants{2, 2, 2, 2}));
  EXPECT_EQ(pc::abelian_invariants(g), oracle::abelian_invariants_snf(g.data()));
}
