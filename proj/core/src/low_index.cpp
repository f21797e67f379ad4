#include "ptower/low_index.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "ptower/errors.hpp"
#include "ptower/linalg.hpp"

namespace ptower::pc {

std::uint64_t SubgroupHandle::index(int p) const {
  std::uint64_t v = 1;
  for (int i = 0; i < index_log; ++i) v *= static_cast<std::uint64_t>(p);
  return v;
}

SubgroupHandle make_handle(const PcPresentation& g, const Subgroup& h) {
  SubgroupHandle out;
  out.subgroup = h;
  out.index_log = h.index_log(g);
  out.is_normal = is_normal(g, h);
  out.abelianization = abelian_invariants(g, h);
  return out;
}

std::vector<Subgroup> maximal_subgroups(const PcPresentation& g, const Subgroup& h) {
  const int p = g.prime();
  const linalg::PrimeField f(p);
  const Subgroup phi = frattini_subgroup(g, h);
  const auto pd = phi.depths();
  std::vector<Element> basis;
  for (const auto& t : h.pcgs())
    if (std::find(pd.begin(), pd.end(), static_cast<int>(t.depth())) == pd.end()) basis.push_back(t);
  const int r = static_cast<int>(basis.size());
  std::vector<Subgroup> out;
  if (r == 0) return out;
  // Normalized functionals: first nonzero coordinate equal to 1.
  std::uint64_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::uint64_t>(p);
  for (std::uint64_t code = 1; code < total; ++code) {
    linalg::Row lambda(static_cast<std::size_t>(r));
    std::uint64_t v = code;
    for (int i = r - 1; i >= 0; --i) {
      lambda[i] = static_cast<std::uint8_t>(v % static_cast<std::uint64_t>(p));
      v /= static_cast<std::uint64_t>(p);
    }
    int lead = 0;
    while (lambda[lead] == 0) ++lead;
    if (lambda[lead] != 1) continue;
    linalg::Matrix col(static_cast<std::size_t>(r), linalg::Row(1));
    for (int i = 0; i < r; ++i) col[i][0] = lambda[i];
    const auto ker = linalg::left_kernel(col, 1, f);
    std::vector<Element> gens = phi.pcgs();
    for (const auto& k : ker) {
      Element x = g.identity();
      for (int i = 0; i < r; ++i)
        if (k[i]) g.multiply_in_place(x, g.power(basis[i], k[i]));
      gens.push_back(std::move(x));
    }
    out.push_back(Subgroup::generated_by(g, gens));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

Subgroup conjugate_subgroup(const PcPresentation& g, const Subgroup& h, const Element& x) {
  std::vector<Element> gens;
  for (const auto& t : h.pcgs()) gens.push_back(g.conjugate(t, x));
  return Subgroup::generated_by(g, gens);
}

}  // namespace

SubgroupLattice low_index_subgroups(const PcPresentation& g, int max_index_log) {
  SubgroupLattice out;
  if (max_index_log < 1) return out;
  std::vector<Element> conj_by;
  for (int i = 0; i < g.ngens(); ++i)
    if (g.weight(i) == 1) conj_by.push_back(g.generator(i));

  std::vector<Subgroup> reps{Subgroup::whole(g)};
  std::vector<std::vector<Subgroup>> prev_members{{Subgroup::whole(g)}};
  for (int level = 1; level <= max_index_log && level <= g.ngens(); ++level) {
    std::set<Subgroup> candidates;
    for (const auto& h : reps)
      for (auto& k : maximal_subgroups(g, h)) candidates.insert(std::move(k));
    std::map<Subgroup, int> class_of;
    std::vector<std::vector<Subgroup>> classes;
    for (const auto& k : candidates) {
      if (class_of.count(k)) continue;
      const int id = static_cast<int>(classes.size());
      std::vector<Subgroup> members{k};
      class_of[k] = id;
      std::deque<Subgroup> queue{k};
      while (!queue.empty()) {
        const Subgroup cur = queue.front();
        queue.pop_front();
        for (const auto& x : conj_by) {
          Subgroup y = conjugate_subgroup(g, cur, x);
          if (class_of.emplace(y, id).second) {
            members.push_back(y);
            queue.push_back(std::move(y));
          }
        }
      }
      std::sort(members.begin(), members.end());
      classes.push_back(std::move(members));
    }
    std::vector<SubgroupHandle> handles;
    for (const auto& members : classes) {
      SubgroupHandle hnd = make_handle(g, members.front());
      hnd.class_size = static_cast<int>(members.size());
      hnd.is_normal = members.size() == 1;
      handles.push_back(std::move(hnd));
    }
    std::vector<int> order(handles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (handles[a].abelianization != handles[b].abelianization)
        return handles[a].abelianization < handles[b].abelianization;
      return handles[a].subgroup < handles[b].subgroup;
    });
    std::vector<SubgroupHandle> sorted;
    std::vector<std::vector<Subgroup>> sorted_members;
    for (int i : order) {
      sorted.push_back(handles[i]);
      sorted_members.push_back(classes[i]);
    }
    if (level >= 2) {
      std::vector<std::pair<int, int>> inc;
      const auto& upper = out.levels.back();
      for (std::size_t i = 0; i < upper.size(); ++i)
        for (std::size_t j = 0; j < sorted_members.size(); ++j)
          for (const auto& k : sorted_members[j])
            if (upper[i].subgroup.contains(g, k)) {
              inc.emplace_back(static_cast<int>(i), static_cast<int>(j));
              break;
            }
      out.incidence.push_back(std::move(inc));
    }
    reps.clear();
    for (const auto& h : sorted) reps.push_back(h.subgroup);
    out.levels.push_back(std::move(sorted));
    prev_members = std::move(sorted_members);
  }
  return out;
}

}  // namespace ptower::pc
