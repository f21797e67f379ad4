#pragma once

#include <cstdint>

#include "ptower/subgroup.hpp"

namespace ptower::pc {

struct PowerSubgroup {
  Subgroup subgroup;
  int index_log = 0;
  bool is_abelian = false;
};

// N^n = <x^n : x in N> for n a power of p, computed exactly layer by layer.
// Throws CapExceeded when an intermediate transversal exceeds max_transversal.
PowerSubgroup power_subgroup(const PcPresentation& g, const Subgroup& n_sub, std::uint64_t n,
                             std::uint64_t max_transversal = std::uint64_t{1} << 22);
PowerSubgroup power_subgroup(const PcPresentation& g, std::uint64_t n,
                             std::uint64_t max_transversal = std::uint64_t{1} << 22);

bool is_abelian(const PcPresentation& g, const Subgroup& h);

}  // namespace ptower::pc
