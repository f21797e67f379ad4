#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/fixture.hpp"
#include "ptower/pc.hpp"

namespace ptower::explorer {

struct ReportOptions {
  int moribund_depth = 0;
  // Profiles of subgroups of index p^1 .. p^profile_levels.
  int profile_levels = 2;
  std::vector<std::uint64_t> powers{2, 4, 8};
};

struct PowerInfo {
  std::uint64_t n = 0;
  int index_log = 0;
  bool abelian = false;
};

struct GroupReport {
  int prime = 2;
  int order_log = 0;
  int d = 0;
  int p_class = 0;
  pc::AbelianInvariants abelianization;
  int multiplicator_rank = 0;
  int nuclear_rank = 0;
  bool terminal = false;
  std::vector<filters::Profile> profiles;
  std::vector<PowerInfo> powers;
  // "moribund", "unknown", or "cap exceeded".
  std::string moribund;
  std::vector<int> moribund_ranks;
};

GroupReport make_report(const pc::PcPresentation& g, const ReportOptions& opts = {});
std::string to_text(const GroupReport& r);
std::string to_json(const GroupReport& r);

}  // namespace ptower::explorer
