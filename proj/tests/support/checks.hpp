#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptower/pc.hpp"

namespace checks {

struct Tally {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::string first;

  void expect(bool ok, const std::string& what);
  bool ok() const { return mismatches == 0 && checked > 0; }
  std::string summary() const;
};

using Groups = std::vector<ptower::pc::PcPresentation>;

// Collector products and random words against rewriting-built tables.
Tally collector(const Groups& groups);
// Abelian invariants of groups and of index-p, index-p^2 subgroups against
// Smith form and table oracles, and profiles against exhaustive enumeration.
Tally abelian(const Groups& groups);
// Transfer maps against coset sums with random transversals.
Tally transfer(const Groups& groups, std::uint64_t seed);
// Children of 2-generator parents of order at most 2^5 against isomorphism
// classes of all cover quotients fitting in order 2^max_log.
Tally descendants(const Groups& groups, int max_log);
// is_terminal against the allowable-subspace count and the child set.
Tally terminal(const Groups& groups);
// Index-2 subgroup count of 4-generator groups.
Tally hyperplanes(const Groups& groups);
// A group passes the exact profile and critical filters against its own fixture.
Tally own_fixture(const Groups& groups);

}  // namespace checks
