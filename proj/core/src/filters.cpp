#include "ptower/filters.hpp"

#include <algorithm>
#include <functional>

#include "ptower/errors.hpp"
#include "ptower/descendants.hpp"
#include "ptower/power_subgroup.hpp"

namespace ptower::filters {

using pc::AbelianInvariants;
using pc::format_invariants;

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kPass:
      return "pass";
    case Outcome::kFail:
      return "fail";
    case Outcome::kIndeterminate:
      return "indeterminate";
  }
  return "?";
}

FilterVerdict relator_bound_filter(const tree::CoveringData& cov, int rmax) {
  if (rmax < 1) throw InvalidArgument("rmax must be positive");
  const int diff = cov.multiplicator_rank - cov.nuclear_rank;
  FilterVerdict v{"rank", diff <= rmax ? Outcome::kPass : Outcome::kFail, ""};
  v.witness = "multiplicator rank " + std::to_string(cov.multiplicator_rank) + " - nuclear rank " +
              std::to_string(cov.nuclear_rank) + " = " + std::to_string(diff) + (diff <= rmax ? " <= " : " > ") +
              std::to_string(rmax);
  return v;
}

FilterVerdict relator_bound_filter(const pc::PcPresentation& g, int rmax) {
  const pc::PcPresentation h = tree::prepare(g);
  return relator_bound_filter(tree::p_covering_group(h), rmax);
}

int default_rmax(const pc::PcPresentation& g) { return g.rank() + 1; }

bool golod_shafarevich_infinite(int d, int r) {
  if (d < 0 || r < 0) throw InvalidArgument("generator and relation counts must be non-negative");
  if (d == 0) return false;
  return 4 * static_cast<long long>(r) <= static_cast<long long>(d) * d;
}

AbelianInvariants truncate_invariants(const AbelianInvariants& ab, int p, int c) {
  std::uint64_t cap = 1;
  for (int i = 0; i < c; ++i) cap *= static_cast<std::uint64_t>(p);
  AbelianInvariants out;
  for (auto x : ab) out.push_back(std::min(x, cap));
  out.erase(std::remove(out.begin(), out.end(), 1u), out.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool is_quotient_of(const AbelianInvariants& a, const AbelianInvariants& b) {
  if (a.size() > b.size()) return false;
  AbelianInvariants x = a, y = b;
  std::sort(x.rbegin(), x.rend());
  std::sort(y.rbegin(), y.rend());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i]) return false;
  return true;
}

FilterVerdict abelianization_filter(const pc::PcPresentation& g, const AbelianInvariants& target) {
  const auto ab = pc::abelian_invariants(g);
  const auto want = truncate_invariants(target, g.prime(), pc::p_class(g));
  FilterVerdict v{"ab", ab == want ? Outcome::kPass : Outcome::kFail, ""};
  v.witness = "abelianization " + format_invariants(ab) + (ab == want ? " == " : " != ") + format_invariants(want);
  return v;
}

Profile abelianization_profile(const pc::SubgroupLattice& lattice, int level) {
  if (level < 1) throw InvalidArgument("profile level must be positive");
  Profile out;
  if (level <= static_cast<int>(lattice.levels.size()))
    for (const auto& h : lattice.levels[level - 1]) out.push_back(h.abelianization);
  std::sort(out.begin(), out.end());
  return out;
}

Profile abelianization_profile(const pc::PcPresentation& g, int level) {
  return abelianization_profile(pc::low_index_subgroups(g, level), level);
}

namespace {

bool compatible(const AbelianInvariants& a, const AbelianInvariants& b, MatchMode mode) {
  return mode == MatchMode::kExact ? a == b : is_quotient_of(a, b);
}

// Kuhn's augmenting paths; skip_left / skip_right remove one vertex each.
struct Matcher {
  const std::vector<std::vector<int>>& adj;
  int nright;
  int skip_right = -1;
  std::vector<int> match_right;
  std::vector<int> match_left;
  std::vector<int> seen;
  int stamp = 0;

  Matcher(const std::vector<std::vector<int>>& a, int nr) : adj(a), nright(nr) {}

  bool augment(int u) {
    for (int v : adj[u]) {
      if (v == skip_right || seen[v] == stamp) continue;
      seen[v] = stamp;
      if (match_right[v] < 0 || augment(match_right[v])) {
        match_right[v] = u;
        match_left[u] = v;
        return true;
      }
    }
    return false;
  }

  // Size of a maximum matching avoiding skip_left and skip_right.
  int run(int skip_left, int skip_r) {
    skip_right = skip_r;
    match_right.assign(static_cast<std::size_t>(nright), -1);
    match_left.assign(adj.size(), -1);
    seen.assign(static_cast<std::size_t>(nright), 0);
    int size = 0;
    for (int u = 0; u < static_cast<int>(adj.size()); ++u) {
      if (u == skip_left) continue;
      ++stamp;
      if (augment(u)) ++size;
    }
    return size;
  }
};

std::vector<std::vector<int>> edges(const Profile& computed, const Profile& expected, MatchMode mode) {
  std::vector<std::vector<int>> adj(computed.size());
  for (std::size_t i = 0; i < computed.size(); ++i)
    for (std::size_t j = 0; j < expected.size(); ++j)
      if (compatible(computed[i], expected[j], mode)) adj[i].push_back(static_cast<int>(j));
  return adj;
}

std::string mode_name(MatchMode mode) { return mode == MatchMode::kExact ? "exact" : "quotient-compatible"; }

}  // namespace

FilterVerdict match_profiles(const std::string& name, const Profile& computed, const Profile& expected, MatchMode mode) {
  FilterVerdict v{name, Outcome::kPass, ""};
  if (computed.size() != expected.size()) {
    v.outcome = Outcome::kFail;
    v.witness = std::to_string(computed.size()) + " classes, fixture lists " + std::to_string(expected.size());
    return v;
  }
  const auto adj = edges(computed, expected, mode);
  Matcher m(adj, static_cast<int>(expected.size()));
  if (m.run(-1, -1) == static_cast<int>(computed.size())) {
    v.witness = std::to_string(computed.size()) + " classes matched (" + mode_name(mode) + ")";
    return v;
  }
  v.outcome = Outcome::kFail;
  for (std::size_t i = 0; i < computed.size(); ++i)
    if (m.match_left[i] < 0) {
      v.witness = "no " + mode_name(mode) + " fixture entry left for " + format_invariants(computed[i]);
      break;
    }
  return v;
}

FilterVerdict profile_filter(const pc::SubgroupLattice& lattice, const ArithmeticFixture& fixture, int level,
                             MatchMode mode) {
  if (level != 1 && level != 2) throw InvalidArgument("profile level must be 1 or 2");
  const Profile& expected = level == 1 ? fixture.index2 : fixture.index4;
  return match_profiles(level == 1 ? "profile2" : "profile4", abelianization_profile(lattice, level), expected, mode);
}

FilterVerdict profile_filter(const pc::PcPresentation& g, const ArithmeticFixture& fixture, int level,
                             MatchMode mode) {
  return profile_filter(pc::low_index_subgroups(g, level), fixture, level, mode);
}

CriticalMatch critical_subgroups(const pc::PcPresentation& g, const pc::SubgroupLattice& lattice,
                                 const ArithmeticFixture& fixture, MatchMode mode) {
  (void)g;
  CriticalMatch out;
  const Profile& expected = fixture.index4;
  for (std::size_t j = 0; j < expected.size(); ++j)
    if (std::count(expected.begin(), expected.end(), expected[j]) == 1) out.fixture_entries.push_back(expected[j]);
  if (lattice.levels.size() < 2) {
    out.outcome = Outcome::kFail;
    out.witness = "group has no subgroups of index p^2";
    return out;
  }
  const auto& classes = lattice.levels[1];
  Profile computed;
  for (const auto& h : classes) computed.push_back(h.abelianization);
  if (computed.size() != expected.size()) {
    out.outcome = Outcome::kFail;
    out.witness = std::to_string(computed.size()) + " index-p^2 classes, fixture lists " + std::to_string(expected.size());
    return out;
  }
  const auto adj = edges(computed, expected, mode);
  Matcher m(adj, static_cast<int>(expected.size()));
  const int full = static_cast<int>(computed.size());
  if (m.run(-1, -1) != full) {
    out.outcome = Outcome::kFail;
    out.witness = "index-p^2 profile admits no matching";
    return out;
  }
  for (const auto& entry : out.fixture_entries) {
    const int j = static_cast<int>(std::find(expected.begin(), expected.end(), entry) - expected.begin());
    std::vector<int> forced;
    for (int i = 0; i < full; ++i) {
      if (std::find(adj[i].begin(), adj[i].end(), j) == adj[i].end()) continue;
      if (m.run(i, j) == full - 1) forced.push_back(i);
    }
    if (forced.size() == 1) {
      out.subgroups.push_back(classes[forced[0]]);
      continue;
    }
    out.outcome = Outcome::kIndeterminate;
    out.witness = format_invariants(entry) + " corresponds to " + std::to_string(forced.size()) + " classes";
    out.subgroups.clear();
    return out;
  }
  return out;
}

CriticalMatch critical_subgroups(const pc::PcPresentation& g, const ArithmeticFixture& fixture, MatchMode mode) {
  return critical_subgroups(g, pc::low_index_subgroups(g, 2), fixture, mode);
}

FilterVerdict critical_filter(const pc::PcPresentation& g, const pc::SubgroupLattice& lattice,
                              const ArithmeticFixture& fixture, MatchMode mode) {
  const CriticalMatch cm = critical_subgroups(g, lattice, fixture, mode);
  FilterVerdict v{"critical", cm.outcome, cm.witness};
  if (cm.outcome != Outcome::kPass) return v;
  int checked = 0;
  for (const auto& entry : fixture.critical) {
    const auto it = std::find(cm.fixture_entries.begin(), cm.fixture_entries.end(), entry.ab);
    if (it == cm.fixture_entries.end()) throw FixtureError("critical entry is not unique in the fixture");
    const auto& h = cm.subgroups[static_cast<std::size_t>(it - cm.fixture_entries.begin())];
    Profile computed;
    for (const auto& k : pc::maximal_subgroups(g, h.subgroup)) computed.push_back(pc::abelian_invariants(g, k));
    std::sort(computed.begin(), computed.end());
    const FilterVerdict sub = match_profiles("critical", computed, entry.maximal_profile, mode);
    if (sub.failed()) {
      v.outcome = Outcome::kFail;
      v.witness = "critical " + format_invariants(entry.ab) + ": " + sub.witness;
      return v;
    }
    ++checked;
  }
  v.witness = std::to_string(checked) + " critical maximal profiles matched";
  return v;
}

std::string subgroup_key(const pc::SubgroupLattice& lattice, int i) {
  if (lattice.levels.empty() || i < 0 || i >= static_cast<int>(lattice.levels[0].size()))
    throw InvalidArgument("subgroup class out of range");
  Profile below;
  if (!lattice.incidence.empty())
    for (const auto& [a, b] : lattice.incidence[0])
      if (a == i) below.push_back(lattice.levels[1][b].abelianization);
  std::sort(below.begin(), below.end());
  std::string key = format_invariants(lattice.levels[0][i].abelianization) + "@{";
  for (std::size_t k = 0; k < below.size(); ++k) key += (k ? "," : "") + format_invariants(below[k]);
  return key + "}";
}

FilterVerdict capitulation_filter(const pc::PcPresentation& g, const pc::SubgroupLattice& lattice,
                                  const ArithmeticFixture& fixture) {
  FilterVerdict v{"capitulation", Outcome::kIndeterminate, "fixture carries no kernel data"};
  if (fixture.capitulation.empty()) return v;
  const int nclasses = lattice.levels.empty() ? 0 : static_cast<int>(lattice.levels[0].size());
  std::vector<std::string> keys;
  for (int i = 0; i < nclasses; ++i) keys.push_back(subgroup_key(lattice, i));
  for (const auto& entry : fixture.capitulation) {
    const bool full_key = entry.subgroup_key.find('@') != std::string::npos;
    std::vector<int> hits;
    for (int i = 0; i < nclasses; ++i) {
      const std::string cmp = full_key ? keys[i] : keys[i].substr(0, keys[i].find('@'));
      if (cmp == entry.subgroup_key) hits.push_back(i);
    }
    if (hits.empty()) {
      v.outcome = Outcome::kFail;
      v.witness = "no index-p class with key " + entry.subgroup_key;
      return v;
    }
    if (hits.size() > 1) {
      v.outcome = Outcome::kIndeterminate;
      v.witness = std::to_string(hits.size()) + " index-p classes share key " + entry.subgroup_key;
      return v;
    }
    const auto t = transfer_map(g, lattice.levels[0][hits[0]].subgroup);
    if (t.kernel_invariants != entry.kernel_invariants) {
      v.outcome = Outcome::kFail;
      v.witness = "transfer kernel of " + entry.subgroup_key + " is " + format_invariants(t.kernel_invariants) +
                  ", fixture has " + format_invariants(entry.kernel_invariants);
      return v;
    }
  }
  v.outcome = Outcome::kPass;
  v.witness = std::to_string(fixture.capitulation.size()) + " transfer kernels matched";
  return v;
}

FilterVerdict capitulation_filter(const pc::PcPresentation& g, const ArithmeticFixture& fixture) {
  return capitulation_filter(g, pc::low_index_subgroups(g, 2), fixture);
}

std::string VerbalFunctional::to_string() const {
  switch (kind) {
    case Kind::kIdentity:
      return "identity";
    case Kind::kPower:
      return "power " + std::to_string(n);
    case Kind::kDerived:
      return "derived";
  }
  return "?";
}

pc::Subgroup verbal_subgroup(const pc::PcPresentation& g, const pc::Subgroup& n, const VerbalFunctional& v) {
  switch (v.kind) {
    case VerbalFunctional::Kind::kIdentity:
      return n;
    case VerbalFunctional::Kind::kPower:
      return pc::power_subgroup(g, n, v.n).subgroup;
    case VerbalFunctional::Kind::kDerived:
      return pc::derived_subgroup(g, n);
  }
  throw InvalidArgument("unknown verbal functional");
}

pc::Subgroup preimage(const pc::PcPresentation& child, const pc::PcPresentation& parent, const pc::Subgroup& n) {
  if (child.prime() != parent.prime() || child.ngens() < parent.ngens() ||
      !(child.truncate(parent.p_class()) == parent))
    throw InvalidArgument("child does not extend the parent presentation");
  std::vector<pc::Element> gens;
  for (auto x : n.pcgs()) {
    x.resize(static_cast<std::size_t>(child.ngens()));
    gens.push_back(std::move(x));
  }
  const pc::Subgroup tail = pc::Subgroup::tail(child, parent.ngens());
  for (const auto& t : tail.pcgs()) gens.push_back(t);
  return pc::Subgroup::generated_by(child, gens);
}

bool nover_criterion(const pc::PcPresentation& parent, const pc::PcPresentation& child, const pc::Subgroup& n_parent,
                     const VerbalFunctional& v) {
  if (!pc::is_normal(parent, n_parent)) throw InvalidArgument("the index-freeze test needs a normal subgroup");
  const pc::Subgroup n_child = preimage(child, parent, n_parent);
  return verbal_subgroup(parent, n_parent, v).index_log(parent) == verbal_subgroup(child, n_child, v).index_log(child);
}

ArithmeticFixture fixture_of(const pc::PcPresentation& g) {
  ArithmeticFixture f;
  f.prime = g.prime();
  f.target_ab = pc::abelian_invariants(g);
  const auto lattice = pc::low_index_subgroups(g, 2);
  f.index2 = abelianization_profile(lattice, 1);
  f.index4 = abelianization_profile(lattice, 2);
  if (lattice.levels.size() >= 2)
    for (const auto& h : lattice.levels[1]) {
      if (std::count(f.index4.begin(), f.index4.end(), h.abelianization) != 1) continue;
      CriticalEntry e;
      e.ab = h.abelianization;
      for (const auto& k : pc::maximal_subgroups(g, h.subgroup)) e.maximal_profile.push_back(pc::abelian_invariants(g, k));
      std::sort(e.maximal_profile.begin(), e.maximal_profile.end());
      f.critical.push_back(std::move(e));
    }
  std::sort(f.critical.begin(), f.critical.end(), [](const CriticalEntry& a, const CriticalEntry& b) { return a.ab < b.ab; });
  return f;
}

PowerCheck power_subgroup_check(const pc::PcPresentation& g, std::uint64_t n, int bound_log) {
  const auto ps = pc::power_subgroup(g, n);
  PowerCheck out;
  out.power = n;
  out.index_log = ps.index_log;
  out.abelian = ps.is_abelian;
  out.within_bound = ps.index_log <= bound_log;
  if (ps.is_abelian) out.invariants = pc::abelian_invariants(g, ps.subgroup);
  return out;
}

}  // namespace ptower::filters
