#include "checks.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "oracle.hpp"
#include "ptower/abelian.hpp"
#include "ptower/cover.hpp"
#include "ptower/descendants.hpp"
#include "ptower/filters.hpp"
#include "ptower/low_index.hpp"
#include "ptower/transfer.hpp"

namespace checks {

using namespace ptower;

void Tally::expect(bool ok, const std::string& what) {
  ++checked;
  if (ok) return;
  if (mismatches == 0) first = what;
  ++mismatches;
}

std::string Tally::summary() const {
  std::string s = std::to_string(checked) + " checks, " + std::to_string(mismatches) + " mismatches";
  if (mismatches) s += " (first: " + first + ")";
  return s;
}

namespace {

std::string order_of(const pc::PcPresentation& g) { return "order 2^" + std::to_string(g.ngens()); }

std::uint32_t idx(const pc::Element& x, int p) { return oracle::index_of(x.exponents(), p); }

pc::Element elem(const pc::PcPresentation& g, std::uint32_t i) {
  return pc::Element(oracle::exponents_of(i, g.ngens(), g.prime()));
}

std::vector<std::uint32_t> all_of(const oracle::TableGroup& t) {
  std::vector<std::uint32_t> whole(t.order);
  for (int i = 0; i < t.order; ++i) whole[i] = i;
  return whole;
}

std::vector<std::uint32_t> elements_of(const oracle::TableGroup& t, const pc::PcPresentation& g,
                                       const pc::Subgroup& h) {
  std::vector<std::uint32_t> gens;
  for (const auto& x : h.pcgs()) gens.push_back(idx(x, g.prime()));
  return oracle::closure(t, gens);
}

// Maximal subgroups of the subgroup k, as kernels of functionals on its Frattini quotient.
std::vector<std::vector<std::uint32_t>> maximal_subgroups_brute(const oracle::TableGroup& t,
                                                                const std::vector<std::uint32_t>& k) {
  std::vector<std::uint32_t> phi_gens;
  for (auto x : k)
    for (auto y : k) phi_gens.push_back(t(t(t.inv[x], t.inv[y]), t(x, y)));
  for (auto x : k) phi_gens.push_back(t(x, x));
  std::sort(phi_gens.begin(), phi_gens.end());
  phi_gens.erase(std::unique(phi_gens.begin(), phi_gens.end()), phi_gens.end());
  const auto phi = oracle::closure(t, phi_gens);
  std::vector<std::uint32_t> basis;
  std::vector<std::uint32_t> span = phi;
  for (auto x : k) {
    if (std::binary_search(span.begin(), span.end(), x)) continue;
    basis.push_back(x);
    auto gens = phi_gens;
    gens.insert(gens.end(), basis.begin(), basis.end());
    span = oracle::closure(t, gens);
  }
  const int d = static_cast<int>(basis.size());
  std::map<std::uint32_t, std::uint32_t> coord;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    std::uint32_t rep = 0;
    for (int b = 0; b < d; ++b)
      if (mask >> b & 1) rep = t(rep, basis[b]);
    for (auto f : phi) coord[t(rep, f)] = mask;
  }
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t fn = 1; fn < (1u << d); ++fn) {
    std::vector<std::uint32_t> m;
    for (auto x : k)
      if (__builtin_popcount(coord.at(x) & fn) % 2 == 0) m.push_back(x);
    out.push_back(m);
  }
  return out;
}

std::vector<std::uint32_t> conjugacy_key(const oracle::TableGroup& t, const std::vector<std::uint32_t>& h) {
  std::vector<std::uint32_t> best;
  for (int x = 0; x < t.order; ++x) {
    std::vector<std::uint32_t> c;
    for (auto y : h) c.push_back(t(t(t.inv[x], y), x));
    std::sort(c.begin(), c.end());
    if (best.empty() || c < best) best = c;
  }
  return best;
}

filters::Profile brute_profile(const oracle::TableGroup& t, int level) {
  std::set<std::vector<std::uint32_t>> layer{all_of(t)};
  for (int l = 0; l < level; ++l) {
    std::set<std::vector<std::uint32_t>> next;
    for (const auto& k : layer)
      for (auto& m : maximal_subgroups_brute(t, k)) next.insert(std::move(m));
    layer = std::move(next);
  }
  std::set<std::vector<std::uint32_t>> classes;
  for (const auto& h : layer) classes.insert(conjugacy_key(t, h));
  filters::Profile prof;
  for (const auto& h : classes) prof.push_back(oracle::abelianization(t, h, 2));
  std::sort(prof.begin(), prof.end());
  return prof;
}

// Quotient of the p-covering group by a subspace U of the multiplicator.
oracle::TableGroup cover_quotient(const tree::CoveringData& cov, const std::vector<std::uint32_t>& right,
                                  const std::vector<std::vector<std::uint8_t>>& u) {
  const int n = cov.cover.ngens(), base = cov.base_ngens, m = cov.multiplicator_rank;
  auto reduce = [&](std::uint32_t x) {
    auto e = oracle::exponents_of(x, n, 2);
    for (const auto& row : u) {
      int piv = 0;
      while (row[piv] == 0) ++piv;
      if (e[base + piv])
        for (int k = 0; k < m; ++k) e[base + k] ^= row[k];
    }
    return oracle::index_of(e, 2);
  };
  std::vector<std::uint32_t> reps;
  std::map<std::uint32_t, std::uint32_t> index;
  for (std::uint32_t x = 0; x < (1u << n); ++x)
    if (reduce(x) == x) {
      index[x] = static_cast<std::uint32_t>(reps.size());
      reps.push_back(x);
    }
  oracle::TableGroup q;
  q.order = static_cast<int>(reps.size());
  q.mul.resize(std::size_t(q.order) * q.order);
  for (int b = 0; b < q.order; ++b) {
    const auto word = oracle::normal_word(oracle::exponents_of(reps[b], n, 2));
    for (int a = 0; a < q.order; ++a) {
      std::uint32_t z = reps[a];
      for (int letter : word) z = right[std::size_t(z) * n + letter];
      q.mul[std::size_t(a) * q.order + b] = index.at(reduce(z));
    }
  }
  q.inv.assign(q.order, 0);
  for (int a = 0; a < q.order; ++a)
    for (int b = 0; b < q.order; ++b)
      if (q(a, b) == 0) q.inv[a] = b;
  for (int i = 0; i < n; ++i) q.gens.push_back(index.at(reduce(1u << i)));
  return q;
}

std::vector<std::uint32_t> right_table(const pc::PcData& data) {
  const int n = static_cast<int>(data.weights.size());
  std::vector<std::uint32_t> right((std::size_t(1) << n) * n);
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    const auto base = oracle::normal_word(oracle::exponents_of(x, n, 2));
    for (int i = 0; i < n; ++i) {
      auto w = base;
      w.push_back(i);
      right[std::size_t(x) * n + i] = oracle::index_of(oracle::rewrite(data, w), 2);
    }
  }
  return right;
}

bool allowable(const std::vector<std::vector<std::uint8_t>>& u, const linalg::Matrix& nucleus, int m) {
  if (static_cast<int>(u.size()) == m) return false;
  linalg::Matrix both(u.begin(), u.end());
  both.insert(both.end(), nucleus.begin(), nucleus.end());
  return linalg::rank(both, linalg::PrimeField(2)) == m;
}

}  // namespace

Tally collector(const Groups& groups) {
  Tally tally;
  std::mt19937_64 rng(7);
  for (const auto& g : groups) {
    const auto t = oracle::table_of(g.data());
    std::mt19937_64 assoc(11);
    tally.expect(g.is_consistent() && t.associative_sample(assoc, 2000), order_of(g) + " consistency");
    std::uint64_t bad = 0;
    for (int x = 0; x < t.order; ++x)
      for (int y = 0; y < t.order; ++y)
        if (idx(g.multiply(elem(g, x), elem(g, y)), 2) != t(x, y)) ++bad;
    tally.expect(bad == 0, order_of(g) + " multiplication table");
    std::uniform_int_distribution<int> letter(1, g.ngens());
    std::uniform_int_distribution<int> len(0, 12);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> w1, w2;
      for (int k = len(rng); k > 0; --k) w1.push_back(letter(rng) * (rng() % 2 ? 1 : -1));
      for (int k = len(rng); k > 0; --k) w2.push_back(letter(rng) * (rng() % 2 ? 1 : -1));
      std::vector<int> w = w1;
      w.insert(w.end(), w2.begin(), w2.end());
      tally.expect(idx(g.collect(w), 2) == t(idx(g.collect(w1), 2), idx(g.collect(w2), 2)),
                   order_of(g) + " random word");
    }
  }
  return tally;
}

Tally abelian(const Groups& groups) {
  Tally tally;
  for (const auto& g : groups) {
    const auto t = oracle::table_of(g.data());
    const auto whole = all_of(t);
    const auto inv = pc::abelian_invariants(g);
    tally.expect(inv == oracle::abelian_invariants_snf(g.data()), order_of(g) + " Smith form");
    tally.expect(inv == oracle::abelianization(t, whole, 2), order_of(g) + " table abelianization");
    std::uint64_t prod = 1;
    for (auto q : inv) prod *= q;
    tally.expect(prod * oracle::derived_subgroup(t, whole).size() == static_cast<std::uint64_t>(t.order),
                 order_of(g) + " derived subgroup order");
    const auto lattice = pc::low_index_subgroups(g, 2);
    for (const auto& level : lattice.levels)
      for (const auto& h : level) {
        const auto elems = elements_of(t, g, h.subgroup);
        tally.expect(elems.size() == std::size_t{1} << h.subgroup.order_log() &&
                         h.abelianization == oracle::abelianization(t, elems, 2) &&
                         pc::abelian_invariants(g, h.subgroup) == h.abelianization,
                     order_of(g) + " subgroup abelianization");
      }
    if (g.ngens() < 2) continue;
    tally.expect(filters::abelianization_profile(g, 1) == brute_profile(t, 1), order_of(g) + " index-2 profile");
    tally.expect(filters::abelianization_profile(g, 2) == brute_profile(t, 2), order_of(g) + " index-4 profile");
  }
  return tally;
}

Tally transfer(const Groups& groups, std::uint64_t seed) {
  Tally tally;
  std::mt19937_64 rng(seed);
  for (const auto& g : groups) {
    const auto t = oracle::table_of(g.data());
    const auto lattice = pc::low_index_subgroups(g, 2);
    std::vector<pc::Subgroup> subgroups{pc::Subgroup::whole(g)};
    for (const auto& level : lattice.levels)
      for (const auto& h : level) subgroups.push_back(h.subgroup);
    const auto whole = all_of(t);
    const auto g_derived = oracle::derived_subgroup(t, whole);
    for (const auto& h : subgroups) {
      const auto he = elements_of(t, g, h);
      std::vector<char> in_h(t.order, 0), in_hd(t.order, 0);
      for (auto x : he) in_h[x] = 1;
      for (auto x : oracle::derived_subgroup(t, he)) in_hd[x] = 1;
      std::vector<int> coset_of(t.order, -1);
      std::vector<std::vector<std::uint32_t>> cosets;
      for (int x = 0; x < t.order; ++x) {
        if (coset_of[x] >= 0) continue;
        std::vector<std::uint32_t> c;
        for (auto y : he) {
          coset_of[t(x, y)] = static_cast<int>(cosets.size());
          c.push_back(t(x, y));
        }
        cosets.push_back(c);
      }
      std::vector<std::uint32_t> reps;
      for (const auto& c : cosets) reps.push_back(c[rng() % c.size()]);
      bool sums_in_h = true;
      auto image = [&](std::uint32_t x) {
        std::uint32_t v = 0;
        for (auto ti : reps) {
          const auto xt = t(x, ti);
          const auto hi = t(t.inv[reps[coset_of[xt]]], xt);
          sums_in_h = sums_in_h && in_h[hi];
          v = t(v, hi);
        }
        return v;
      };
      const auto data = filters::transfer_map(g, h);
      const std::string where = order_of(g) + " subgroup of order 2^" + std::to_string(h.order_log());
      tally.expect(data.source_invariants == oracle::abelianization(t, whole, 2), where + " source");
      tally.expect(data.target_invariants == oracle::abelianization(t, he, 2), where + " target");
      std::size_t kernel = 0;
      for (int x = 0; x < t.order; ++x)
        if (in_hd[image(x)]) ++kernel;
      std::uint64_t kprod = 1;
      for (auto q : data.kernel_invariants) kprod *= q;
      tally.expect(kernel == kprod * g_derived.size(), where + " kernel order");
      for (const auto& k : data.kernel_generators) tally.expect(in_hd[image(idx(k, 2))], where + " kernel generator");
      const pc::AbelianQuotient hq(g, h);
      std::vector<pc::Element> lib_reps;
      for (auto r : reps) lib_reps.push_back(elem(g, r));
      for (int x = 0; x < t.order; ++x)
        tally.expect(filters::transfer_image(g, h, hq, lib_reps, elem(g, x)) == hq.coordinates(elem(g, image(x))),
                     where + " image");
      tally.expect(sums_in_h, where + " coset sums");
    }
  }
  return tally;
}

Tally descendants(const Groups& groups, int max_log) {
  Tally tally;
  for (const auto& g : groups) {
    if (g.rank() != 2 || g.ngens() >= max_log) continue;
    const int room = max_log - g.ngens();
    const auto cov = tree::p_covering_group(g);
    const int m = cov.multiplicator_rank;
    const auto right = right_table(cov.cover.data());
    std::vector<oracle::TableGroup> classes;
    std::uint64_t allowable_count = 0;
    for (const auto& u : oracle::all_subspaces(m, 2)) {
      if (!allowable(u, cov.nucleus, m) || m - static_cast<int>(u.size()) > room) continue;
      ++allowable_count;
      auto q = cover_quotient(cov, right, u);
      const bool seen =
          std::any_of(classes.begin(), classes.end(), [&](const auto& c) { return oracle::isomorphic(c, q, 2); });
      if (!seen) classes.push_back(std::move(q));
    }
    tree::DescendantOptions opts;
    opts.max_step = room;
    const auto batch = tree::immediate_descendants(g, opts);
    const std::string where = "parent of " + order_of(g);
    tally.expect(batch.size() == classes.size(), where + " child count");
    std::uint64_t orbit_total = 0;
    for (auto s : batch.orbit_sizes) orbit_total += s;
    tally.expect(orbit_total == allowable_count, where + " orbit sizes");
    std::vector<int> hits(classes.size(), 0);
    for (const auto& child : batch.children) {
      tally.expect(child.is_consistent() && child.truncate(g.p_class()) == g, where + " child quotient");
      const auto ct = oracle::table_of(child.data());
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (oracle::isomorphic(ct, classes[c], 2)) ++hits[c];
    }
    for (int h : hits) tally.expect(h == 1, where + " isomorphism classes");
  }
  return tally;
}

Tally terminal(const Groups& groups) {
  Tally tally;
  for (const auto& g : groups) {
    const auto cov = tree::p_covering_group(g);
    std::uint64_t allowable_count = 0;
    for (const auto& u : oracle::all_subspaces(cov.multiplicator_rank, 2))
      if (allowable(u, cov.nucleus, cov.multiplicator_rank)) ++allowable_count;
    const bool term = tree::is_terminal(g);
    tally.expect(term == (allowable_count == 0), order_of(g) + " allowable count");
    tally.expect(term == (tree::immediate_descendants(g).size() == 0), order_of(g) + " child set");
  }
  return tally;
}

Tally hyperplanes(const Groups& groups) {
  Tally tally;
  for (const auto& g : groups) {
    if (g.rank() != 4) continue;
    const auto lattice = pc::low_index_subgroups(g, 1);
    const auto& level = lattice.levels.at(0);
    tally.expect(level.size() == 15u && std::all_of(level.begin(), level.end(), [](const auto& h) { return h.is_normal; }),
                 order_of(g) + " index-2 count");
  }
  return tally;
}

Tally own_fixture(const Groups& groups) {
  Tally tally;
  for (const auto& g : groups) {
    const auto fx = filters::fixture_of(g);
    tally.expect(!filters::abelianization_filter(g, fx.target_ab).failed(), order_of(g) + " abelianization");
    for (int level : {1, 2})
      tally.expect(filters::profile_filter(g, fx, level, filters::MatchMode::kExact).outcome == filters::Outcome::kPass,
                   order_of(g) + " profile level " + std::to_string(level));
    tally.expect(filters::critical_filter(g, pc::low_index_subgroups(g, 2), fx).outcome == filters::Outcome::kPass,
                 order_of(g) + " critical");
  }
  return tally;
}

}  // namespace checks
