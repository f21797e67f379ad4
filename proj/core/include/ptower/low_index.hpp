#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/subgroup.hpp"

namespace ptower::pc {

// A subgroup class representative with eagerly computed data.
struct SubgroupHandle {
  Subgroup subgroup;
  int index_log = 0;
  bool is_normal = false;
  int class_size = 1;
  AbelianInvariants abelianization;

  const std::vector<Element>& generators() const { return subgroup.pcgs(); }
  std::uint64_t index(int p) const;
};

struct SubgroupLattice {
  // levels[k] lists the conjugacy classes of subgroups of index p^(k+1), in
  // canonical order: (abelianization, least echelonized pcgs in the class).
  std::vector<std::vector<SubgroupHandle>> levels;
  // incidence[k] holds (i, j) when levels[k][i] contains a conjugate of levels[k+1][j].
  std::vector<std::vector<std::pair<int, int>>> incidence;
};

SubgroupLattice low_index_subgroups(const PcPresentation& g, int max_index_log);

// Maximal subgroups of h (hyperplanes of h / Phi(h)), canonical and distinct.
std::vector<Subgroup> maximal_subgroups(const PcPresentation& g, const Subgroup& h);

SubgroupHandle make_handle(const PcPresentation& g, const Subgroup& h);

}  // namespace ptower::pc
