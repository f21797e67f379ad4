#include "ptower/power_subgroup.hpp"

#include "ptower/errors.hpp"

namespace ptower::pc {

bool is_abelian(const PcPresentation& g, const Subgroup& h) {
  const auto& t = h.pcgs();
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (!g.commutator(t[a], t[b]).is_identity()) return false;
  return true;
}

PowerSubgroup power_subgroup(const PcPresentation& g, const Subgroup& n_sub, std::uint64_t n,
                             std::uint64_t max_transversal) {
  const auto p = static_cast<std::uint64_t>(g.prime());
  if (n == 0) throw InvalidArgument("power must be positive");
  for (std::uint64_t m = n; m > 1; m /= p)
    if (m % p) throw InvalidArgument("power must be a power of the prime");

  Subgroup v = n_sub;
  if (n > 1) {
    const auto& by = n_sub.pcgs();
    Subgroup c = n_sub;
    // Invariant: v = N^n * c, with c running down the lower exponent-p central series of N.
    while (!c.is_trivial()) {
      std::vector<Element> cgens;
      for (const auto& x : c.pcgs()) {
        Element xp = g.power(x, g.prime());
        if (!xp.is_identity()) cgens.push_back(std::move(xp));
        for (const auto& y : by) {
          Element z = g.commutator(x, y);
          if (!z.is_identity()) cgens.push_back(std::move(z));
        }
      }
      Subgroup c_next = Subgroup::closure(g, cgens, by);

      std::vector<Element> gens = c_next.pcgs();
      for (const auto& t : n_sub.transversal(g, v, max_transversal)) {
        Element tn = g.power(t, static_cast<std::int64_t>(n));
        if (!tn.is_identity()) gens.push_back(std::move(tn));
      }
      for (const auto& x : v.pcgs()) {
        Element xp = g.power(x, g.prime());
        if (!xp.is_identity()) gens.push_back(std::move(xp));
        for (const auto& y : by) {
          Element z = g.commutator(x, y);
          if (!z.is_identity()) gens.push_back(std::move(z));
        }
      }
      v = Subgroup::closure(g, gens, by);
      c = std::move(c_next);
    }
  }
  PowerSubgroup out;
  out.index_log = g.ngens() - v.order_log();
  out.is_abelian = is_abelian(g, v);
  out.subgroup = std::move(v);
  return out;
}

PowerSubgroup power_subgroup(const PcPresentation& g, std::uint64_t n, std::uint64_t max_transversal) {
  return power_subgroup(g, Subgroup::whole(g), n, max_transversal);
}

}  // namespace ptower::pc
