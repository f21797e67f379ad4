#pragma once

#include <vector>

#include "ptower/fp.hpp"
#include "ptower/pc.hpp"

namespace ptower::tree {

struct PQuotientResult {
  // quotients[k] is the class-(k+1) quotient Q_{k+1}.
  std::vector<pc::PcPresentation> quotients;
  // images[k][j]: image of fp generator j in quotients[k].
  std::vector<std::vector<pc::Element>> images;
  // True when the lower exponent-p central series became stationary, so the
  // last quotient is the whole pro-p completion.
  bool stabilized = false;
  int prime = 2;

  // The largest quotient computed (trivial group when there is none).
  pc::PcPresentation group() const;
};

struct PQuotientOptions {
  int max_ngens = 96;
};

PQuotientResult p_quotient(const FpPresentation& fp, int p, int max_class, const PQuotientOptions& opts = {});

// Re-derives a weighted presentation with pure definitions for a group given
// by any consistent pc presentation.
pc::PcPresentation standardize(const pc::PcPresentation& g, const PQuotientOptions& opts = {});

// The pc relations written as an fp presentation on generators g1..gn.
FpPresentation to_fp(const pc::PcPresentation& g);

}  // namespace ptower::tree
