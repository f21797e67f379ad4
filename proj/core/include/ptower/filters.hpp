#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptower/cover.hpp"
#include "ptower/fixture.hpp"
#include "ptower/low_index.hpp"
#include "ptower/transfer.hpp"

namespace ptower::filters {

enum class Outcome { kPass, kFail, kIndeterminate };
std::string to_string(Outcome o);

struct FilterVerdict {
  std::string filter;
  Outcome outcome = Outcome::kPass;
  // Mismatching entry or offending values; always set on failure.
  std::string witness;

  bool failed() const { return outcome == Outcome::kFail; }
};

// Passes when multiplicator rank - nuclear rank <= rmax.
FilterVerdict relator_bound_filter(const tree::CoveringData& cov, int rmax);
FilterVerdict relator_bound_filter(const pc::PcPresentation& g, int rmax);
// d(G) + 1.
int default_rmax(const pc::PcPresentation& g);

// True when r <= d^2 / 4, which forces a pro-p group with d generators and r
// relations to be infinite.
bool golod_shafarevich_infinite(int d, int r);

// Invariants of A / A^(p^c): every cyclic factor capped at p^c.
pc::AbelianInvariants truncate_invariants(const pc::AbelianInvariants& ab, int p, int c);
// True when an abelian group with invariants a is a quotient of one with invariants b.
bool is_quotient_of(const pc::AbelianInvariants& a, const pc::AbelianInvariants& b);

// G^ab must equal the target capped at the p-class of G.
FilterVerdict abelianization_filter(const pc::PcPresentation& g, const pc::AbelianInvariants& target);

// Abelianizations over the conjugacy classes of subgroups of index p^level.
Profile abelianization_profile(const pc::PcPresentation& g, int level);
Profile abelianization_profile(const pc::SubgroupLattice& lattice, int level);

enum class MatchMode { kExact, kQuotientCompatible };

// Perfect matching of computed entries onto expected ones; entry a may take b
// when a == b (exact) or a is a quotient of b (quotient-compatible).
FilterVerdict match_profiles(const std::string& name, const Profile& computed, const Profile& expected, MatchMode mode);

// level 1 compares with fixture.index2, level 2 with fixture.index4.
FilterVerdict profile_filter(const pc::PcPresentation& g, const ArithmeticFixture& fixture, int level, MatchMode mode);
FilterVerdict profile_filter(const pc::SubgroupLattice& lattice, const ArithmeticFixture& fixture, int level,
                             MatchMode mode);

struct CriticalMatch {
  Outcome outcome = Outcome::kPass;
  std::string witness;
  // Fixture index-p^2 entries occurring once, and the class each one forces.
  std::vector<pc::AbelianInvariants> fixture_entries;
  std::vector<pc::SubgroupHandle> subgroups;
};

// Index-p^2 classes corresponding to the fixture entries of multiplicity one.
// A class corresponds to an entry when every admissible matching pairs them.
CriticalMatch critical_subgroups(const pc::PcPresentation& g, const pc::SubgroupLattice& lattice,
                                 const ArithmeticFixture& fixture, MatchMode mode = MatchMode::kQuotientCompatible);
CriticalMatch critical_subgroups(const pc::PcPresentation& g, const ArithmeticFixture& fixture,
                                 MatchMode mode = MatchMode::kQuotientCompatible);

// Compares the maximal-subgroup profile of each critical subgroup with the fixture.
FilterVerdict critical_filter(const pc::PcPresentation& g, const pc::SubgroupLattice& lattice,
                              const ArithmeticFixture& fixture, MatchMode mode = MatchMode::kQuotientCompatible);

// Key of the index-p class i: "<ab>@<sorted abelianizations of the
// index-p^2 classes it contains>". Fixture keys may omit the part after '@'.
std::string subgroup_key(const pc::SubgroupLattice& lattice, int i);
FilterVerdict capitulation_filter(const pc::PcPresentation& g, const pc::SubgroupLattice& lattice,
                                  const ArithmeticFixture& fixture);
FilterVerdict capitulation_filter(const pc::PcPresentation& g, const ArithmeticFixture& fixture);

// Verbal subgroups V(N) used by the index-freeze test.
struct VerbalFunctional {
  enum class Kind { kIdentity, kPower, kDerived };
  Kind kind = Kind::kIdentity;
  std::uint64_t n = 1;

  static VerbalFunctional identity() { return {}; }
  static VerbalFunctional power(std::uint64_t n) { return {Kind::kPower, n}; }
  static VerbalFunctional derived() { return {Kind::kDerived, 1}; }
  std::string to_string() const;
};

pc::Subgroup verbal_subgroup(const pc::PcPresentation& g, const pc::Subgroup& n, const VerbalFunctional& v);

// Preimage in child of a subgroup of parent; child's class-c quotient must be
// parent itself (c = class of parent).
pc::Subgroup preimage(const pc::PcPresentation& child, const pc::PcPresentation& parent, const pc::Subgroup& n);

// True when [G : V(N)] is the same in parent and child, N normal in parent
// and taken as its preimage in child.
bool nover_criterion(const pc::PcPresentation& parent, const pc::PcPresentation& child, const pc::Subgroup& n_parent,
                     const VerbalFunctional& v);

// Fixture describing g itself: its abelianization, index-p and index-p^2
// profiles, and the maximal profiles of the index-p^2 classes with unique
// abelianization.
ArithmeticFixture fixture_of(const pc::PcPresentation& g);

struct PowerCheck {
  std::uint64_t power = 8;
  int index_log = 0;
  bool abelian = false;
  bool within_bound = false;
  // Invariants of G^n when it is abelian.
  pc::AbelianInvariants invariants;
};

// G^n, its index and abelianness; within_bound when the index is at most p^bound_log.
PowerCheck power_subgroup_check(const pc::PcPresentation& g, std::uint64_t n = 8, int bound_log = 40);

}  // namespace ptower::filters
