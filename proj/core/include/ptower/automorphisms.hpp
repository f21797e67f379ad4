#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptower/cover.hpp"
#include "ptower/linalg.hpp"
#include "ptower/pc.hpp"
#include "ptower/perm_group.hpp"

namespace ptower::tree {

// Automorphism given by the images of all pc generators. Composition is on
// the right: compose(a, b) applies a first.
struct Automorphism {
  std::vector<pc::Element> images;
};

// Extends images of the weight-one generators through the definitions.
Automorphism automorphism_from_images(const pc::PcPresentation& g, const std::vector<pc::Element>& weight_one);
pc::Element apply(const pc::PcPresentation& g, const Automorphism& a, const pc::Element& x);
Automorphism compose(const pc::PcPresentation& g, const Automorphism& a, const Automorphism& b);
Automorphism power(const pc::PcPresentation& g, const Automorphism& a, std::uint64_t e);
// True when the images satisfy every relation and generate g.
bool is_automorphism(const pc::PcPresentation& g, const std::vector<pc::Element>& weight_one);

// Matrix of the induced action on the multiplicator of g (rows are images of
// the multiplicator basis, acting on row vectors).
linalg::Matrix multiplicator_action(const pc::PcPresentation& g, const CoveringData& cov, const Automorphism& a);

// For next = a descendant of g = next / (last layer): the subspace of the
// multiplicator of g that is killed in next.
linalg::Matrix allowable_kernel(const pc::PcPresentation& g, const CoveringData& cov, const pc::PcPresentation& next);

struct AutomorphismOptions {
  std::uint64_t max_points = std::uint64_t{1} << 22;
  std::uint64_t max_orbit = std::uint64_t{1} << 26;
  std::uint64_t seed = 0x5eed;
};

struct AutomorphismGroup {
  std::vector<Automorphism> generators;
  perm::Order order = 1;
};

// Aut(G) by lifting from Aut(G / Phi(G)) = GL(d, p) one class at a time:
// the automorphisms of Q_{k+1} are lifts of the stabilizer in Aut(Q_k) of
// the allowable subspace defining Q_{k+1}, extended by the central
// automorphisms a_i -> a_i z with z in the last layer. Requires pure
// definitions.
AutomorphismGroup automorphism_group(const pc::PcPresentation& g, const AutomorphismOptions& opts = {});

perm::Order general_linear_order(int d, int p);
std::string format_order(perm::Order v);

}  // namespace ptower::tree
