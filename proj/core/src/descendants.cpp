#include "ptower/descendants.hpp"

#include "ptower/errors.hpp"

namespace ptower::tree {

pc::PcPresentation prepare(const pc::PcPresentation& g) {
  return g.has_pure_definitions() ? g : standardize(g);
}

DescendantContext::DescendantContext(const pc::PcPresentation& parent, bool with_automorphisms,
                                     const DescendantOptions& opts)
    : parent_(prepare(parent)), opts_(opts) {
  cov_ = p_covering_group(parent_);
  std::vector<linalg::Matrix> mats;
  if (with_automorphisms && cov_.nuclear_rank > 0) {
    aut_ = automorphism_group(parent_, opts.automorphisms);
    for (const auto& a : aut_->generators) mats.push_back(multiplicator_action(parent_, cov_, a));
  }
  space_.emplace(parent_.prime(), cov_.multiplicator_rank, cov_.nucleus, mats);
}

OrbitResult DescendantContext::orbits() const {
  OrbitOptions o = opts_.orbit;
  o.threads = std::max(o.threads, opts_.threads);
  if (opts_.max_step <= 0 || opts_.max_step >= cov_.nuclear_rank) return space_->orbits(o);
  OrbitResult out;
  for (int s = 1; s <= opts_.max_step; ++s) {
    auto part = space_->orbits(s, o);
    out.representatives.insert(out.representatives.end(), part.representatives.begin(), part.representatives.end());
    out.sizes.insert(out.sizes.end(), part.sizes.begin(), part.sizes.end());
  }
  return out;
}

OrbitResult DescendantContext::orbits(int s) const { return space_->orbits(s, opts_.orbit); }

pc::PcPresentation DescendantContext::child(const AllowableIndex& u) const {
  const linalg::Matrix kernel = space_->subspace(u);
  return extend_by_tails(parent_, cov_.relations, cov_.relation_tails, cov_.multiplicator_rank, kernel,
                         cov_.candidates)
      .group;
}

AllowableIndex DescendantContext::sample(std::mt19937_64& rng) const {
  const std::uint64_t total = space_->total();
  if (total == 0) throw InvalidArgument("terminal group has no children");
  const std::uint64_t limit = total * (UINT64_MAX / total);
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  v %= total;
  for (int s = 1; s <= space_->nuclear_rank(); ++s) {
    if (v < space_->count(s)) return {s, v};
    v -= space_->count(s);
  }
  throw Error("sampling fell outside the allowable range");
}

DescendantBatch immediate_descendants(const pc::PcPresentation& g, const DescendantOptions& opts) {
  DescendantBatch out;
  const DescendantContext ctx(g, true, opts);
  if (ctx.nuclear_rank() == 0) return out;
  const OrbitResult orb = ctx.orbits();
  out.allowable = orb.representatives;
  out.orbit_sizes = orb.sizes;
  for (const auto& u : orb.representatives) {
    out.children.push_back(ctx.child(u));
    out.certificates.push_back(u.certificate());
  }
  return out;
}

std::vector<AllowableIndex> random_allowable(const DescendantContext& ctx, int k, std::uint64_t seed) {
  if (ctx.nuclear_rank() == 0) throw InvalidArgument("terminal group has no children");
  if (k < 1) throw InvalidArgument("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<AllowableIndex> out;
  for (int i = 0; i < k; ++i) out.push_back(ctx.sample(rng));
  return out;
}

std::vector<pc::PcPresentation> random_children(const pc::PcPresentation& g, int k, std::uint64_t seed) {
  const DescendantContext ctx(g, false);
  std::vector<pc::PcPresentation> out;
  for (const auto& u : random_allowable(ctx, k, seed)) out.push_back(ctx.child(u));
  return out;
}

bool is_terminal(const pc::PcPresentation& g) { return p_covering_group(prepare(g)).nuclear_rank == 0; }

MoribundResult is_moribund(const pc::PcPresentation& g, int max_depth, const PQuotientOptions& opts) {
  if (max_depth < 0) throw InvalidArgument("depth must be non-negative");
  MoribundResult out;
  pc::PcPresentation cur = prepare(g);
  for (int depth = 0;; ++depth) {
    const CoveringData cov = p_covering_group(cur);
    out.nuclear_ranks.push_back(cov.nuclear_rank);
    if (cov.nuclear_rank == 0) {
      out.verdict = MoribundVerdict::kMoribund;
      return out;
    }
    if (depth == max_depth) return out;
    if (cov.cover.ngens() > opts.max_ngens) throw CapExceeded("covering group exceeds the generator cap");
    cur = standardize(cov.cover, opts);
  }
}

std::string to_string(MoribundVerdict v) { return v == MoribundVerdict::kMoribund ? "moribund" : "unknown"; }

}  // namespace ptower::tree
