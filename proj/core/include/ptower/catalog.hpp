#pragma once

#include <string>

#include "ptower/fp.hpp"
#include "ptower/pc.hpp"

namespace ptower::tree {

pc::PcPresentation quaternion8();
pc::PcPresentation dihedral8();

// Resolves a group argument:
//   q8, d8                 the groups of order 8
//   elem:D                 (Z/p)^D
//   koch-q2, conj72-1, ... built-in fp presentations, taken at class fp_class
//   path                   a pcp-v1 file, or an fp presentation text taken at class fp_class
pc::PcPresentation resolve_group(const std::string& spec, int prime = 2, int fp_class = 2);

// Built-in name or a file holding fp presentation text.
FpPresentation resolve_fp(const std::string& spec);

}  // namespace ptower::tree
