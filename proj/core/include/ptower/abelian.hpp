#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptower/subgroup.hpp"

namespace ptower::pc {

// Orders of the cyclic factors, ascending, trivial factors omitted.
using AbelianInvariants = std::vector<std::uint64_t>;

std::string format_invariants(const AbelianInvariants& inv);
AbelianInvariants parse_invariants(const std::string& text);

// H / [H, H] with explicit coordinates, for H a subgroup of a pc group.
class AbelianQuotient {
 public:
  AbelianQuotient(const PcPresentation& g, const Subgroup& h);

  const AbelianInvariants& invariants() const { return invariants_; }
  // Coordinates of x (an element of H) with respect to generators().
  std::vector<std::uint64_t> coordinates(const Element& x) const;
  // Preimages in H of the canonical basis of the quotient.
  const std::vector<Element>& generators() const { return generators_; }
  const Subgroup& derived() const { return derived_; }
  const PcPresentation& group() const { return *g_; }

 private:
  std::vector<std::uint8_t> raw(Element x) const;

  const PcPresentation* g_;
  Subgroup derived_;
  std::vector<int> table_depth_;        // per depth: index into table_ or -1
  std::vector<Element> table_inv_;      // inverses of the relative pcgs
  std::vector<int> free_slot_;          // per depth: coordinate slot or -1
  int k_ = 0;
  std::uint64_t modulus_ = 1;
  std::vector<std::vector<std::uint64_t>> v_;  // k x k
  std::vector<int> order_;                     // nontrivial diagonal positions, ascending order
  std::vector<std::uint64_t> diag_;
  AbelianInvariants invariants_;
  std::vector<Element> generators_;
};

AbelianInvariants abelian_invariants(const PcPresentation& g, const Subgroup& h);
AbelianInvariants abelian_invariants(const PcPresentation& g);

}  // namespace ptower::pc
