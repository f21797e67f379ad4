#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "groups.hpp"
#include "ptower/abelian.hpp"
#include "ptower/catalog.hpp"
#include "ptower/descendants.hpp"
#include "ptower/errors.hpp"
#include "ptower/filters.hpp"
#include "ptower/power_subgroup.hpp"
#include "ptower/pquotient.hpp"

using namespace ptower;
using filters::MatchMode;
using filters::Outcome;
using Inv = pc::AbelianInvariants;

namespace {

pc::PcPresentation from_fp(const std::string& text, int c) {
  return tree::p_quotient(tree::FpPresentation::parse(text), 2, c).group();
}

std::map<Inv, int> counts(const filters::Profile& p) {
  std::map<Inv, int> m;
  for (const auto& x : p) ++m[x];
  return m;
}

}  // namespace

TEST(Fixture, ShippedDataHasDocumentedShape) {
  const auto& f = filters::shipped_fixture();
  EXPECT_EQ(f.prime, 2);
  EXPECT_EQ(f.target_ab, (Inv{2, 2, 2, 2}));
  ASSERT_EQ(f.index2.size(), 15u);
  const std::map<Inv, int> index2{{{2, 4, 4}, 8}, {{2, 4, 8}, 2}, {{4, 4, 4}, 1}, {{2, 2, 2, 4}, 2}, {{2, 2, 4, 4}, 2}};
  EXPECT_EQ(counts(f.index2), index2);
  EXPECT_EQ(f.index4.size(), 51u);
  ASSERT_EQ(f.critical.size(), 5u);
  std::vector<Inv> crit;
  for (const auto& c : f.critical) {
    crit.push_back(c.ab);
    EXPECT_EQ(std::count(f.index4.begin(), f.index4.end(), c.ab), 1);
  }
  std::sort(crit.begin(), crit.end());
  std::vector<Inv> expected{{2, 2, 8, 8}, {2, 4, 4, 8}, {2, 2, 2, 2, 4}, {2, 2, 2, 4, 4}, {2, 2, 2, 8, 8}};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(crit, expected);
  EXPECT_TRUE(f.capitulation.empty());
}

TEST(Fixture, JsonRoundTripAndHash) {
  const auto& f = filters::shipped_fixture();
  const std::string text = filters::to_json(f);
  const auto back = filters::parse_fixture(text);
  EXPECT_EQ(back, f);
  EXPECT_EQ(filters::to_json(back), text);
  EXPECT_EQ(filters::fixture_hash(f), filters::sha256_hex(text));
  EXPECT_EQ(filters::parse_fixture(filters::shipped_fixture_text()), f);
  EXPECT_EQ(filters::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  auto other = f;
  other.index2.pop_back();
  EXPECT_NE(filters::fixture_hash(other), filters::fixture_hash(f));
}

TEST(Fixture, MalformedInputsAreRejected) {
  EXPECT_THROW(filters::parse_fixture("not json"), FixtureError);
  EXPECT_THROW(filters::parse_fixture(R"({"format": "other", "prime": 2, "target_ab": []})"), FixtureError);
  EXPECT_THROW(filters::parse_fixture(R"({"format": "ptower-fixture-v1", "prime": 2, "target_ab": [2, 6]})"),
               FixtureError);
  EXPECT_THROW(filters::parse_fixture(R"({"format": "ptower-fixture-v1", "prime": 2, "target_ab": [2],
      "index2": [{"ab": [2], "count": 0}]})"),
               FixtureError);
}

TEST(RelatorBound, Examples) {
  const auto koch = tree::resolve_group("koch-q2", 2, 2);
  const auto v = filters::relator_bound_filter(koch, 5);
  EXPECT_EQ(v.outcome, Outcome::kPass);
  EXPECT_EQ(filters::relator_bound_filter(koch, 4).outcome, Outcome::kFail);
  tree::CoveringData synthetic;
  synthetic.multiplicator_rank = 6;
  synthetic.nuclear_rank = 0;
  const auto f = filters::relator_bound_filter(synthetic, 5);
  EXPECT_EQ(f.outcome, Outcome::kFail);
  EXPECT_FALSE(f.witness.empty());
}

TEST(RelatorBound, MonotoneInBound) {
  for (const auto& g : support::small_two_groups(5)) {
    const auto cov = tree::p_covering_group(g);
    for (int r = 1; r <= 8; ++r)
      if (filters::relator_bound_filter(cov, r).failed())
        for (int s = 1; s < r; ++s) EXPECT_TRUE(filters::relator_bound_filter(cov, s).failed());
  }
}

TEST(GolodShafarevich, Examples) {
  EXPECT_TRUE(filters::golod_shafarevich_infinite(5, 6));
  EXPECT_FALSE(filters::golod_shafarevich_infinite(4, 5));
  EXPECT_FALSE(filters::golod_shafarevich_infinite(0, 0));
}

TEST(Abelianization, TruncatedTargetComparison) {
  EXPECT_EQ(filters::truncate_invariants({2, 4, 16}, 2, 2), (Inv{2, 4, 4}));
  const auto z4z2 = from_fp("<a,b | a^4, b^2, (a,b)>", 2);
  EXPECT_EQ(filters::abelianization_filter(z4z2, {2, 8}).outcome, Outcome::kPass);
  EXPECT_EQ(filters::abelianization_filter(z4z2, {2, 2}).outcome, Outcome::kFail);
  EXPECT_EQ(filters::abelianization_filter(z4z2, {4, 4}).outcome, Outcome::kFail);
}

TEST(Profiles, QuotientCompatibility) {
  EXPECT_TRUE(filters::is_quotient_of({2, 2}, {2, 4}));
  EXPECT_TRUE(filters::is_quotient_of({4}, {2, 8}));
  EXPECT_FALSE(filters::is_quotient_of({4}, {2, 2}));
  EXPECT_FALSE(filters::is_quotient_of({2, 2, 2}, {4, 8}));
  const filters::Profile computed{{2, 2}, {2, 4}};
  const filters::Profile expected{{2, 4}, {4, 4}};
  EXPECT_EQ(filters::match_profiles("p", computed, expected, MatchMode::kQuotientCompatible).outcome, Outcome::kPass);
  const auto exact = filters::match_profiles("p", computed, expected, MatchMode::kExact);
  EXPECT_EQ(exact.outcome, Outcome::kFail);
  EXPECT_FALSE(exact.witness.empty());
}

TEST(Profiles, ElementaryAbelianIndexTwo) {
  const auto p = filters::abelianization_profile(pc::PcPresentation::elementary_abelian(2, 4), 1);
  EXPECT_EQ(p, filters::Profile(15, Inv{2, 2, 2}));
}

TEST(Critical, UniqueAbelianizationsSelectCriticalClasses) {
  int checked = 0;
  for (const auto& g : support::small_two_groups(6)) {
    if (g.rank() < 2) continue;
    const auto lattice = pc::low_index_subgroups(g, 2);
    std::map<Inv, int> mult;
    for (const auto& h : lattice.levels[1]) ++mult[h.abelianization];
    std::size_t unique = 0;
    for (const auto& [ab, n] : mult) unique += n == 1;
    const auto m = filters::critical_subgroups(g, lattice, filters::fixture_of(g), MatchMode::kExact);
    EXPECT_EQ(m.outcome, Outcome::kPass);
    EXPECT_EQ(m.subgroups.size(), unique);
    EXPECT_EQ(m.fixture_entries.size(), unique);
    for (const auto& ab : m.fixture_entries) EXPECT_EQ(mult[ab], 1);
    checked += unique > 0;
  }
  EXPECT_GT(checked, 0);

  const auto v3 = pc::PcPresentation::elementary_abelian(2, 3);
  const auto equal = filters::critical_subgroups(v3, filters::fixture_of(v3), MatchMode::kExact);
  EXPECT_TRUE(equal.subgroups.empty());
  EXPECT_TRUE(equal.fixture_entries.empty());
}

TEST(Transfer, TrivialExamples) {
  const auto g = from_fp("<a,b | a^4, b^2, (a,b)>", 2);
  const auto whole = filters::transfer_map(g, pc::Subgroup::whole(g));
  EXPECT_TRUE(whole.kernel_invariants.empty());
  EXPECT_EQ(whole.source_invariants, whole.target_invariants);

  const auto z4 = from_fp("<a | a^4>", 2);
  ASSERT_EQ(z4.ngens(), 2);
  const auto h = pc::Subgroup::tail(z4, 1);
  const auto t = filters::transfer_map(z4, h);
  EXPECT_EQ(t.source_invariants, (Inv{4}));
  EXPECT_EQ(t.target_invariants, (Inv{2}));
  EXPECT_EQ(t.kernel_invariants, (Inv{2}));
  // a -> a^2, the generator of H.
  ASSERT_EQ(t.matrix.size(), 1u);
  EXPECT_EQ(t.matrix[0], (std::vector<std::uint64_t>{1}));
}

TEST(Capitulation, NoKernelDataIsIndeterminate) {
  const auto g = pc::PcPresentation::elementary_abelian(2, 3);
  EXPECT_EQ(filters::capitulation_filter(g, filters::fixture_of(g)).outcome, Outcome::kIndeterminate);
  EXPECT_EQ(filters::capitulation_filter(g, filters::shipped_fixture()).outcome, Outcome::kIndeterminate);
}

TEST(Capitulation, SyntheticKernelsMatchAndMismatch) {
  int checked = 0;
  for (const auto& g : support::small_two_groups(5)) {
    if (g.rank() < 2 || g.ngens() < 4) continue;
    const auto lattice = pc::low_index_subgroups(g, 2);
    std::map<std::string, int> key_count;
    for (int i = 0; i < static_cast<int>(lattice.levels[0].size()); ++i) ++key_count[filters::subgroup_key(lattice, i)];
    for (int i = 0; i < static_cast<int>(lattice.levels[0].size()); ++i) {
      const auto key = filters::subgroup_key(lattice, i);
      if (key_count[key] != 1) continue;
      const auto kernel = filters::transfer_map(g, lattice.levels[0][i].subgroup).kernel_invariants;
      auto fx = filters::fixture_of(g);
      fx.capitulation.push_back({key, kernel});
      EXPECT_EQ(filters::capitulation_filter(g, lattice, fx).outcome, Outcome::kPass);
      auto wrong = fx;
      wrong.capitulation.back().kernel_invariants.push_back(64);
      const auto v = filters::capitulation_filter(g, lattice, wrong);
      EXPECT_EQ(v.outcome, Outcome::kFail);
      EXPECT_FALSE(v.witness.empty());
      auto missing = fx;
      missing.capitulation.back().subgroup_key = "[64]";
      EXPECT_EQ(filters::capitulation_filter(g, lattice, missing).outcome, Outcome::kFail);
      ++checked;
    }
    for (const auto& [key, n] : key_count)
      if (n > 1) {
        auto fx = filters::fixture_of(g);
        fx.capitulation.push_back({key, {}});
        EXPECT_EQ(filters::capitulation_filter(g, lattice, fx).outcome, Outcome::kIndeterminate);
      }
  }
  EXPECT_GT(checked, 10);
}

TEST(Nover, IdentityFunctionalAlwaysFreezes) {
  const auto parent = pc::PcPresentation::elementary_abelian(2, 2);
  for (const auto& child : tree::immediate_descendants(parent).children)
    EXPECT_TRUE(filters::nover_criterion(parent, child, pc::Subgroup::whole(parent),
                                         filters::VerbalFunctional::identity()));
}

TEST(Nover, GrowingFourthPowerIndexIsNotFrozen) {
  const auto parent = pc::PcPresentation::elementary_abelian(2, 2);
  bool found = false;
  for (const auto& child : tree::immediate_descendants(parent).children) {
    if (child.ngens() != 3 || pc::abelian_invariants(child) != Inv{2, 4}) continue;
    found = true;
    const auto whole = pc::Subgroup::whole(parent);
    const auto v = filters::VerbalFunctional::power(4);
    EXPECT_EQ(pc::power_subgroup(parent, 4).index_log, 2);
    EXPECT_EQ(pc::power_subgroup(child, 4).index_log, 3);
    EXPECT_FALSE(filters::nover_criterion(parent, child, whole, v));
    EXPECT_TRUE(filters::nover_criterion(parent, child, whole, filters::VerbalFunctional::power(2)));
  }
  EXPECT_TRUE(found);
}

TEST(Nover, NonNormalSubgroupIsRejected) {
  const auto d8 = tree::dihedral8();
  const auto n = pc::Subgroup::generated_by(d8, {d8.generator(0)});
  ASSERT_FALSE(pc::is_normal(d8, n));
  const auto child = tree::immediate_descendants(d8).children.at(0);
  EXPECT_THROW(filters::nover_criterion(d8, child, n, filters::VerbalFunctional::power(2)), InvalidArgument);
}

TEST(Nover, FrozenIndexPersistsInSampledGrandchildren) {
  const std::vector<filters::VerbalFunctional> functionals{
      filters::VerbalFunctional::power(2), filters::VerbalFunctional::power(4), filters::VerbalFunctional::derived()};
  int frozen = 0;
  for (const auto& parent : support::small_two_groups(4)) {
    if (parent.rank() != 2 || tree::is_terminal(parent)) continue;
    for (const auto& child : tree::immediate_descendants(parent).children) {
      if (tree::is_terminal(child)) continue;
      const auto grandchildren = tree::random_children(child, 3, 17);
      for (const auto& v : functionals) {
        if (!filters::nover_criterion(parent, child, pc::Subgroup::whole(parent), v)) continue;
        ++frozen;
        const auto vc = filters::verbal_subgroup(child, pc::Subgroup::whole(child), v);
        for (const auto& gc : grandchildren) {
          const auto vg = filters::verbal_subgroup(gc, pc::Subgroup::whole(gc), v);
          EXPECT_EQ(vg.index_log(gc), vc.index_log(child));
        }
      }
    }
  }
  EXPECT_GT(frozen, 5);
}

TEST(PowerCheck, ExponentEightAbelianGroup) {
  const auto g = from_fp("<a,b | a^8, b^8, (a,b)>", 3);
  ASSERT_EQ(g.ngens(), 6);
  const auto r = filters::power_subgroup_check(g, 8, 40);
  EXPECT_EQ(r.index_log, 6);
  EXPECT_TRUE(r.abelian);
  EXPECT_TRUE(r.within_bound);
  EXPECT_TRUE(r.invariants.empty());
}

TEST(PowerCheck, IndexNonDecreasingAlongQuotients) {
  const auto r = tree::p_quotient(tree::builtin_presentation("ex93"), 2, 5);
  int last = 0;
  for (const auto& q : r.quotients) {
    const auto c = filters::power_subgroup_check(q, 8, 40);
    EXPECT_GE(c.index_log, last);
    last = c.index_log;
  }
}
