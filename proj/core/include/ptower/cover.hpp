#pragma once

#include <vector>

#include "ptower/linalg.hpp"
#include "ptower/pc.hpp"
#include "ptower/subgroup.hpp"

namespace ptower::tree {

// A relation of a pc presentation: a_j^p (kPower) or [a_j, a_i] (kCommutator).
using RelationId = pc::Definition;

// p-covering group G* of G with the multiplicator M = R/R* (the new central
// generators) and the nucleus P_c(G*) as subspaces of M.
struct CoveringData {
  pc::PcPresentation cover;
  int base_ngens = 0;
  int multiplicator_rank = 0;
  int nuclear_rank = 0;
  // Non-definition relations of G and the tail each acquires, in coordinates
  // of the multiplicator basis.
  std::vector<RelationId> relations;
  std::vector<linalg::Row> relation_tails;
  // Relation defining each multiplicator generator.
  std::vector<RelationId> basis_relations;
  // Nucleus in RREF as rows of length multiplicator_rank.
  linalg::Matrix nucleus;
  // Relations whose tails span the nucleus; candidates for new definitions.
  std::vector<RelationId> candidates;

  pc::Subgroup multiplicator() const;
  pc::Subgroup nucleus_subgroup() const;
  const linalg::Row& tail_of(const RelationId& r) const;
};

// Requires pure definitions (every non-weight-1 generator defined by a power or
// commutator relation whose right-hand side is exactly that generator).
CoveringData p_covering_group(const pc::PcPresentation& g);

// Relations of g in canonical order: a_j^p then [a_j, a_i] for i < j, by j.
std::vector<RelationId> all_relations(const pc::PcPresentation& g);
bool is_definition(const pc::PcPresentation& g, const RelationId& r);
const pc::Element& relation_rhs(const pc::PcPresentation& g, const RelationId& r);
// Left-hand side of r evaluated from elements x (images of the generators).
pc::Element relation_lhs(const pc::PcPresentation& g, const RelationId& r, const std::vector<pc::Element>& x);

// Builds G*/M style extensions: G extended by the quotient space V/U where V
// = F_p^dim carries the relation tails. New generators are chosen among
// `candidates` (tails independent modulo U).
struct TailQuotient {
  pc::PcPresentation group;
  int new_gens = 0;
  // Maps a vector of V to coordinates on the new generators.
  linalg::Matrix projection;  // dim x new_gens
};

TailQuotient extend_by_tails(const pc::PcPresentation& g, const std::vector<RelationId>& relations,
                             const std::vector<linalg::Row>& tails, int dim, const linalg::Matrix& kernel,
                             const std::vector<RelationId>& candidates);

linalg::Row project(const TailQuotient& q, const linalg::Row& v, int p);

}  // namespace ptower::tree
