#include "ptower/report.hpp"

#include <sstream>

#include "json.hpp"
#include "ptower/descendants.hpp"
#include "ptower/errors.hpp"
#include "ptower/filters.hpp"
#include "ptower/power_subgroup.hpp"

namespace ptower::explorer {

using nlohmann::json;

GroupReport make_report(const pc::PcPresentation& g_in, const ReportOptions& opts) {
  const pc::PcPresentation g = tree::prepare(g_in);
  GroupReport r;
  r.prime = g.prime();
  r.order_log = g.ngens();
  r.d = g.rank();
  r.p_class = pc::p_class(g);
  r.abelianization = pc::abelian_invariants(g);
  const auto cov = tree::p_covering_group(g);
  r.multiplicator_rank = cov.multiplicator_rank;
  r.nuclear_rank = cov.nuclear_rank;
  r.terminal = cov.nuclear_rank == 0;
  if (opts.profile_levels > 0) {
    const auto lattice = pc::low_index_subgroups(g, opts.profile_levels);
    for (int level = 1; level <= opts.profile_levels; ++level)
      r.profiles.push_back(filters::abelianization_profile(lattice, level));
  }
  for (auto n : opts.powers) {
    const auto ps = pc::power_subgroup(g, n);
    r.powers.push_back({n, ps.index_log, ps.is_abelian});
  }
  try {
    const auto m = tree::is_moribund(g, opts.moribund_depth);
    r.moribund = tree::to_string(m.verdict);
    r.moribund_ranks = m.nuclear_ranks;
  } catch (const CapExceeded&) {
    r.moribund = "cap exceeded";
  }
  return r;
}

namespace {

std::string profile_text(const filters::Profile& prof) {
  std::ostringstream os;
  for (std::size_t i = 0; i < prof.size();) {
    std::size_t j = i;
    while (j < prof.size() && prof[j] == prof[i]) ++j;
    os << (i ? ", " : "") << pc::format_invariants(prof[i]);
    if (j - i > 1) os << " x" << (j - i);
    i = j;
  }
  return os.str();
}

}  // namespace

std::string to_text(const GroupReport& r) {
  std::ostringstream os;
  os << "order " << r.prime << "^" << r.order_log << "\n";
  os << "d(G) " << r.d << "\n";
  os << "p-class " << r.p_class << "\n";
  os << "abelianization " << pc::format_invariants(r.abelianization) << "\n";
  os << "multiplicator rank " << r.multiplicator_rank << "\n";
  os << "nuclear rank " << r.nuclear_rank << (r.terminal ? " (terminal)" : "") << "\n";
  std::uint64_t index = 1;
  for (std::size_t k = 0; k < r.profiles.size(); ++k) {
    index *= static_cast<std::uint64_t>(r.prime);
    os << "index " << index << " classes " << r.profiles[k].size() << ": " << profile_text(r.profiles[k]) << "\n";
  }
  for (const auto& p : r.powers)
    os << "G^" << p.n << " index " << r.prime << "^" << p.index_log << (p.abelian ? " abelian" : " non-abelian")
       << "\n";
  os << "moribund " << r.moribund;
  if (!r.moribund_ranks.empty()) {
    os << " (nuclear ranks";
    for (int v : r.moribund_ranks) os << ' ' << v;
    os << ')';
  }
  os << "\n";
  return os.str();
}

std::string to_json(const GroupReport& r) {
  json profiles = json::array();
  for (const auto& prof : r.profiles) {
    json arr = json::array();
    for (const auto& ab : prof) arr.push_back(pc::format_invariants(ab));
    profiles.push_back(arr);
  }
  json powers = json::array();
  for (const auto& p : r.powers) powers.push_back({{"n", p.n}, {"index_log", p.index_log}, {"abelian", p.abelian}});
  json j{{"prime", r.prime},
         {"order_log", r.order_log},
         {"d", r.d},
         {"p_class", r.p_class},
         {"abelianization", pc::format_invariants(r.abelianization)},
         {"multiplicator_rank", r.multiplicator_rank},
         {"nuclear_rank", r.nuclear_rank},
         {"terminal", r.terminal},
         {"profiles", profiles},
         {"powers", powers},
         {"moribund", r.moribund},
         {"moribund_nuclear_ranks", r.moribund_ranks}};
  return j.dump(2);
}

}  // namespace ptower::explorer
