#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptower/abelian.hpp"

namespace ptower::filters {

// Multiset of abelian invariants, kept sorted.
using Profile = std::vector<pc::AbelianInvariants>;

struct CriticalEntry {
  pc::AbelianInvariants ab;
  // Abelianizations of the maximal subgroups of the critical subgroup.
  Profile maximal_profile;
};

// Known transfer kernel for the index-p subgroup matching `subgroup_key`
// (see subgroup_key in filters.hpp).
struct CapitulationEntry {
  std::string subgroup_key;
  pc::AbelianInvariants kernel_invariants;
};

struct ArithmeticFixture {
  int prime = 2;
  pc::AbelianInvariants target_ab;
  Profile index2;
  Profile index4;
  std::vector<CriticalEntry> critical;
  // (index-p class, index-p^2 class) containment pairs, positions in the profiles.
  std::vector<std::pair<int, int>> lattice;
  std::vector<CapitulationEntry> capitulation;
};

ArithmeticFixture parse_fixture(std::string_view text);
ArithmeticFixture load_fixture(const std::string& path);
// The fixture compiled into the library (q5460.fixture).
const ArithmeticFixture& shipped_fixture();
std::string_view shipped_fixture_text();

// Canonical JSON text; parse_fixture(to_json(f)) == f.
std::string to_json(const ArithmeticFixture& f);
// SHA-256 of the canonical JSON text, lower-case hex.
std::string fixture_hash(const ArithmeticFixture& f);

std::string sha256_hex(std::string_view data);

bool operator==(const CriticalEntry& a, const CriticalEntry& b);
bool operator==(const CapitulationEntry& a, const CapitulationEntry& b);
bool operator==(const ArithmeticFixture& a, const ArithmeticFixture& b);

}  // namespace ptower::filters
