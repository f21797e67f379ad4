#include "ptower/subgroup.hpp"

#include <algorithm>
#include <deque>

#include "ptower/errors.hpp"
#include "ptower/linalg.hpp"

namespace ptower::pc {

namespace {

class Sifter {
 public:
  explicit Sifter(const PcPresentation& g) : g_(g), table_(g.ngens()), inv_(g.ngens()), has_(g.ngens(), 0) {}

  // Reduces x against the table; the result has depth at an empty slot.
  Element sift(Element x) const {
    const int n = g_.ngens();
    for (int d = static_cast<int>(x.depth()); d < n; ++d) {
      if (!x[d]) continue;
      if (!has_[d]) return x;
      g_.multiply_in_place(x, inv_power(d, x[d]));
    }
    return x;
  }

  // Inserts a reduced non-identity element; returns the normalized entry.
  const Element& insert(Element x) {
    const int d = static_cast<int>(x.depth());
    const linalg::PrimeField f(g_.prime());
    const std::uint8_t lead = x[d];
    if (lead != 1) x = g_.power(x, f.inv(lead));
    inv_[d] = g_.inverse(x);
    table_[d] = std::move(x);
    has_[d] = 1;
    return table_[d];
  }

  std::vector<Element> canonical() {
    const int n = g_.ngens();
    for (int d = 0; d < n; ++d) {
      if (!has_[d]) continue;
      for (int e = 0; e < d; ++e) {
        if (!has_[e] || !table_[e][d]) continue;
        g_.multiply_in_place(table_[e], inv_power(d, table_[e][d]));
      }
    }
    std::vector<Element> out;
    for (int d = 0; d < n; ++d)
      if (has_[d]) out.push_back(table_[d]);
    return out;
  }

  const std::vector<std::uint8_t>& has() const { return has_; }
  const Element& at(int d) const { return table_[d]; }

 private:
  Element inv_power(int d, std::uint8_t e) const {
    Element r = inv_[d];
    for (std::uint8_t c = 1; c < e; ++c) g_.multiply_in_place(r, inv_[d]);
    return r;
  }

  const PcPresentation& g_;
  std::vector<Element> table_;
  std::vector<Element> inv_;
  std::vector<std::uint8_t> has_;
};

}  // namespace

Subgroup Subgroup::trivial(const PcPresentation&) { return Subgroup(); }

Subgroup Subgroup::whole(const PcPresentation& g) { return tail(g, 0); }

Subgroup Subgroup::tail(const PcPresentation& g, int first) {
  std::vector<Element> out;
  for (int i = first; i < g.ngens(); ++i) out.push_back(g.generator(i));
  return Subgroup(std::move(out));
}

Subgroup Subgroup::generated_by(const PcPresentation& g, const std::vector<Element>& gens) {
  return closure(g, gens, {});
}

Subgroup Subgroup::closure(const PcPresentation& g, const std::vector<Element>& gens, const std::vector<Element>& by) {
  Sifter s(g);
  std::deque<Element> queue(gens.begin(), gens.end());
  std::vector<int> inserted;
  while (!queue.empty()) {
    Element x = s.sift(std::move(queue.front()));
    queue.pop_front();
    if (x.is_identity()) continue;
    const Element& t = s.insert(std::move(x));
    const int d = static_cast<int>(t.depth());
    Element tp = g.power(t, g.prime());
    if (!tp.is_identity()) queue.push_back(std::move(tp));
    for (int e : inserted) {
      Element c = g.commutator(t, s.at(e));
      if (!c.is_identity()) queue.push_back(std::move(c));
    }
    for (const auto& b : by) {
      Element c = g.commutator(t, b);
      if (!c.is_identity()) queue.push_back(std::move(c));
    }
    inserted.push_back(d);
  }
  return Subgroup(s.canonical());
}

std::vector<int> Subgroup::depths() const {
  std::vector<int> out;
  out.reserve(pcgs_.size());
  for (const auto& t : pcgs_) out.push_back(static_cast<int>(t.depth()));
  return out;
}

bool Subgroup::contains(const PcPresentation& g, const Element& x) const {
  return coset_representative(g, x).is_identity();
}

bool Subgroup::contains(const PcPresentation& g, const Subgroup& h) const {
  for (const auto& t : h.pcgs_)
    if (!contains(g, t)) return false;
  return true;
}

Element Subgroup::coset_representative(const PcPresentation& g, const Element& x) const {
  Element y = x;
  for (const auto& t : pcgs_) {
    const std::size_t d = t.depth();
    if (!y[d]) continue;
    g.multiply_in_place(y, g.power(t, -static_cast<std::int64_t>(y[d])));
  }
  return y;
}

Element Subgroup::element_with_exponents(const PcPresentation& g, const std::vector<std::uint8_t>& exps) const {
  Element x = g.identity();
  const int p = g.prime();
  for (std::size_t k = 0; k < pcgs_.size(); ++k) {
    const std::size_t d = pcgs_[k].depth();
    const int e = (exps[k] - x[d] + p) % p;
    if (e) g.multiply_in_place(x, g.power(pcgs_[k], e));
  }
  return x;
}

std::vector<Element> Subgroup::transversal(const PcPresentation& g, const Subgroup& sub, std::uint64_t max_size) const {
  const auto mine = depths();
  const auto theirs = sub.depths();
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < mine.size(); ++k)
    if (std::find(theirs.begin(), theirs.end(), mine[k]) == theirs.end()) free.push_back(k);
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < free.size(); ++k) {
    if (count > max_size / static_cast<std::uint64_t>(g.prime()))
      throw CapExceeded("transversal larger than " + std::to_string(max_size));
    count *= static_cast<std::uint64_t>(g.prime());
  }
  std::vector<Element> out;
  out.reserve(count);
  std::vector<std::uint8_t> exps(mine.size(), 0);
  for (std::uint64_t c = 0; c < count; ++c) {
    std::uint64_t v = c;
    for (std::size_t k = free.size(); k-- > 0;) {
      exps[free[k]] = static_cast<std::uint8_t>(v % static_cast<std::uint64_t>(g.prime()));
      v /= static_cast<std::uint64_t>(g.prime());
    }
    out.push_back(element_with_exponents(g, exps));
  }
  return out;
}

Subgroup Subgroup::intersect_tail(int first) const {
  std::vector<Element> out;
  for (const auto& t : pcgs_)
    if (static_cast<int>(t.depth()) >= first) out.push_back(t);
  return Subgroup(std::move(out));
}

Subgroup normal_closure(const PcPresentation& g, const Subgroup& h) {
  std::vector<Element> gens;
  for (int i = 0; i < g.ngens(); ++i) gens.push_back(g.generator(i));
  return Subgroup::closure(g, h.pcgs(), gens);
}

Subgroup normal_closure_in(const PcPresentation& g, const Subgroup& n, const std::vector<Element>& gens) {
  return Subgroup::closure(g, gens, n.pcgs());
}

bool is_normal(const PcPresentation& g, const Subgroup& h) {
  for (const auto& t : h.pcgs())
    for (int i = 0; i < g.ngens(); ++i)
      if (!h.contains(g, g.conjugate(t, g.generator(i)))) return false;
  return true;
}

Subgroup derived_subgroup(const PcPresentation& g, const Subgroup& h) {
  std::vector<Element> gens;
  const auto& t = h.pcgs();
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      Element c = g.commutator(t[a], t[b]);
      if (!c.is_identity()) gens.push_back(std::move(c));
    }
  return normal_closure_in(g, h, gens);
}

Subgroup frattini_subgroup(const PcPresentation& g, const Subgroup& h) {
  std::vector<Element> gens;
  const auto& t = h.pcgs();
  for (std::size_t a = 0; a < t.size(); ++a) {
    Element x = g.power(t[a], g.prime());
    if (!x.is_identity()) gens.push_back(std::move(x));
    for (std::size_t b = 0; b < a; ++b) {
      Element c = g.commutator(t[a], t[b]);
      if (!c.is_identity()) gens.push_back(std::move(c));
    }
  }
  return normal_closure_in(g, h, gens);
}

Subgroup join(const PcPresentation& g, const Subgroup& a, const Subgroup& b) {
  std::vector<Element> gens = a.pcgs();
  gens.insert(gens.end(), b.pcgs().begin(), b.pcgs().end());
  return Subgroup::generated_by(g, gens);
}

Subgroup commutator_subgroup(const PcPresentation& g, const Subgroup& a, const Subgroup& b,
                             const std::vector<Element>& normalized_by) {
  std::vector<Element> gens;
  for (const auto& x : a.pcgs())
    for (const auto& y : b.pcgs()) {
      Element c = g.commutator(x, y);
      if (!c.is_identity()) gens.push_back(std::move(c));
    }
  return Subgroup::closure(g, gens, normalized_by);
}

std::vector<Subgroup> p_central_series(const PcPresentation& g) {
  std::vector<Element> all;
  for (int i = 0; i < g.ngens(); ++i) all.push_back(g.generator(i));
  std::vector<Subgroup> series{Subgroup::whole(g)};
  while (!series.back().is_trivial()) {
    std::vector<Element> gens;
    for (const auto& x : series.back().pcgs()) {
      Element xp = g.power(x, g.prime());
      if (!xp.is_identity()) gens.push_back(std::move(xp));
      for (const auto& y : all) {
        Element c = g.commutator(x, y);
        if (!c.is_identity()) gens.push_back(std::move(c));
      }
    }
    series.push_back(Subgroup::closure(g, gens, all));
  }
  return series;
}

int p_class(const PcPresentation& g) { return static_cast<int>(p_central_series(g).size()) - 1; }

}  // namespace ptower::pc
