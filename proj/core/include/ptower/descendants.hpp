#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ptower/allowable.hpp"
#include "ptower/automorphisms.hpp"
#include "ptower/cover.hpp"
#include "ptower/pc.hpp"
#include "ptower/pquotient.hpp"

namespace ptower::tree {

struct DescendantOptions {
  int threads = 1;
  // Largest step size (children of order |G| p^s for s <= max_step); 0 for all.
  int max_step = 0;
  OrbitOptions orbit;
  AutomorphismOptions automorphisms;
};

// Children of one parent, one per isomorphism class, ordered by certificate.
struct DescendantBatch {
  std::string parent_id;
  std::vector<pc::PcPresentation> children;
  // The allowable subspace each child is the quotient by (least in its orbit).
  std::vector<AllowableIndex> allowable;
  std::vector<std::string> certificates;
  std::vector<std::uint64_t> orbit_sizes;

  std::size_t size() const { return children.size(); }
};

// Covering data, automorphism action and allowable-subspace indexing for one
// parent; children are built on demand.
class DescendantContext {
 public:
  // with_automorphisms = false skips Aut(G) (enough for sampling).
  explicit DescendantContext(const pc::PcPresentation& parent, bool with_automorphisms = true,
                             const DescendantOptions& opts = {});

  const pc::PcPresentation& parent() const { return parent_; }
  const CoveringData& covering() const { return cov_; }
  const AllowableSpace& space() const { return *space_; }
  const std::optional<AutomorphismGroup>& automorphisms() const { return aut_; }
  int nuclear_rank() const { return cov_.nuclear_rank; }

  OrbitResult orbits() const;
  // Orbit representatives of the children of order |G| p^s.
  OrbitResult orbits(int s) const;
  pc::PcPresentation child(const AllowableIndex& u) const;
  // Uniform over all allowable subspaces.
  AllowableIndex sample(std::mt19937_64& rng) const;

 private:
  pc::PcPresentation parent_;
  CoveringData cov_;
  std::optional<AutomorphismGroup> aut_;
  std::optional<AllowableSpace> space_;
  DescendantOptions opts_;
};

// Brings a presentation to the weighted form with pure definitions that the
// descendant machinery needs (no-op when already in that form).
pc::PcPresentation prepare(const pc::PcPresentation& g);

DescendantBatch immediate_descendants(const pc::PcPresentation& g, const DescendantOptions& opts = {});
// k children drawn uniformly over allowable subspaces; reproducible for a seed.
std::vector<pc::PcPresentation> random_children(const pc::PcPresentation& g, int k, std::uint64_t seed);
std::vector<AllowableIndex> random_allowable(const DescendantContext& ctx, int k, std::uint64_t seed);

bool is_terminal(const pc::PcPresentation& g);

enum class MoribundVerdict { kMoribund, kUnknown };

struct MoribundResult {
  MoribundVerdict verdict = MoribundVerdict::kUnknown;
  // Nuclear ranks of G, G_1, ..., G_k for the iterates examined.
  std::vector<int> nuclear_ranks;
};

// G_0 = G, G_{i+1} = p-covering group of G_i, for i < max_depth. Moribund when
// some G_i with i <= max_depth has nuclear rank 0. Throws CapExceeded when an
// iterate exceeds the generator cap.
MoribundResult is_moribund(const pc::PcPresentation& g, int max_depth, const PQuotientOptions& opts = {});

std::string to_string(MoribundVerdict v);

}  // namespace ptower::tree
