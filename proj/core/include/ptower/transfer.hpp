#pragma once

#include <cstdint>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/subgroup.hpp"

namespace ptower::filters {

// Transfer G^ab -> H^ab with respect to the canonical bases of both quotients.
struct TransferData {
  pc::AbelianInvariants source_invariants;
  pc::AbelianInvariants target_invariants;
  // matrix[i]: coordinates in H^ab of the image of the i-th basis element of G^ab.
  std::vector<std::vector<std::uint64_t>> matrix;
  pc::AbelianInvariants kernel_invariants;
  // Elements of G whose images in G^ab generate the kernel.
  std::vector<pc::Element> kernel_generators;
};

struct TransferOptions {
  std::uint64_t max_transversal = std::uint64_t{1} << 16;
  std::uint64_t max_source = std::uint64_t{1} << 20;
};

// Image of x under the transfer, in H^ab coordinates, using the left
// transversal `reps` of H in G.
std::vector<std::uint64_t> transfer_image(const pc::PcPresentation& g, const pc::Subgroup& h,
                                          const pc::AbelianQuotient& hq, const std::vector<pc::Element>& reps,
                                          const pc::Element& x);

TransferData transfer_map(const pc::PcPresentation& g, const pc::Subgroup& h, const TransferOptions& opts = {});

// Invariants of the subgroup of a finite abelian p-group listed element by element.
pc::AbelianInvariants invariants_from_orders(int p, const std::vector<std::uint64_t>& element_orders);

}  // namespace ptower::filters
