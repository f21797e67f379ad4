#pragma once

#include <string>
#include <string_view>

#include "ptower/pc.hpp"

namespace ptower::pc {

// Versioned text record:
//   pcp-v1
//   p 2
//   ngens 3
//   weights 1 1 2
//   definitions - - c2,1
//   power 2 : 3^1
//   commutator 2 1 : 3^1
//   end
// Indices are 1-based; relations with trivial right-hand side are omitted.
std::string serialize(const PcPresentation& g);
PcPresentation deserialize(std::string_view text);

}  // namespace ptower::pc
