#pragma once

#include <vector>

#include "ptower/pc.hpp"

namespace support {

// Every 2-group of order 2^1 .. 2^max_log, grown from (Z/2)^d through the
// descendant tree. Cached per max_log.
const std::vector<ptower::pc::PcPresentation>& small_two_groups(int max_log);

}  // namespace support
