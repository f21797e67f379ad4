#pragma once

#include <vector>

#include "ptower/pc.hpp"

namespace ptower::pc {

// Subgroup of a pc group held as its canonical induced pcgs: one element per
// depth, leading exponent 1, zero exponent at every other depth.
class Subgroup {
 public:
  Subgroup() = default;

  static Subgroup trivial(const PcPresentation& g);
  static Subgroup whole(const PcPresentation& g);
  // <a_first, ..., a_n>
  static Subgroup tail(const PcPresentation& g, int first);
  static Subgroup generated_by(const PcPresentation& g, const std::vector<Element>& gens);
  // Smallest subgroup containing gens that is normalized by `by`.
  static Subgroup closure(const PcPresentation& g, const std::vector<Element>& gens, const std::vector<Element>& by);

  const std::vector<Element>& pcgs() const { return pcgs_; }
  std::vector<int> depths() const;
  int order_log() const { return static_cast<int>(pcgs_.size()); }
  int index_log(const PcPresentation& g) const { return g.ngens() - order_log(); }
  bool is_trivial() const { return pcgs_.empty(); }

  bool contains(const PcPresentation& g, const Element& x) const;
  bool contains(const PcPresentation& g, const Subgroup& h) const;
  // The unique element of the left coset x*H with zero exponents at every depth of H.
  Element coset_representative(const PcPresentation& g, const Element& x) const;

  // Elements of `this` with zero exponents at the depths of `sub`: a left
  // transversal of sub in this. Throws CapExceeded beyond max_size.
  std::vector<Element> transversal(const PcPresentation& g, const Subgroup& sub, std::uint64_t max_size) const;
  // Element of this subgroup with prescribed exponents at its depths.
  Element element_with_exponents(const PcPresentation& g, const std::vector<std::uint8_t>& exps) const;

  // Members of depth >= first, the intersection with <a_first, ..., a_n>.
  Subgroup intersect_tail(int first) const;

  auto operator<=>(const Subgroup&) const = default;
  bool operator==(const Subgroup&) const = default;

 private:
  explicit Subgroup(std::vector<Element> pcgs) : pcgs_(std::move(pcgs)) {}
  std::vector<Element> pcgs_;
};

Subgroup normal_closure(const PcPresentation& g, const Subgroup& h);
// Normal closure of gens inside n.
Subgroup normal_closure_in(const PcPresentation& g, const Subgroup& n, const std::vector<Element>& gens);
bool is_normal(const PcPresentation& g, const Subgroup& h);
Subgroup derived_subgroup(const PcPresentation& g, const Subgroup& h);
Subgroup frattini_subgroup(const PcPresentation& g, const Subgroup& h);
Subgroup join(const PcPresentation& g, const Subgroup& a, const Subgroup& b);
// [a, b] normalized by both (a and b normal in some common overgroup).
Subgroup commutator_subgroup(const PcPresentation& g, const Subgroup& a, const Subgroup& b,
                             const std::vector<Element>& normalized_by);

// Lower exponent-p central series of g computed from the group structure.
std::vector<Subgroup> p_central_series(const PcPresentation& g);
int p_class(const PcPresentation& g);

}  // namespace ptower::pc
