#include "ptower/automorphisms.hpp"

#include <random>
#include <unordered_map>

#include "ptower/allowable.hpp"
#include "ptower/errors.hpp"
#include "ptower/subgroup.hpp"

namespace ptower::tree {

using pc::Definition;
using pc::Element;
using pc::PcPresentation;

namespace {

Element pad(const Element& x, int n) {
  Element y(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < x.size() && k < static_cast<std::size_t>(n); ++k) y[k] = x[k];
  return y;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace

Automorphism automorphism_from_images(const PcPresentation& g, const std::vector<Element>& weight_one) {
  const int n = g.ngens();
  Automorphism a;
  a.images.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (g.weight(k) == 1) {
      a.images.push_back(pad(weight_one.at(static_cast<std::size_t>(k)), n));
      continue;
    }
    const Definition& d = g.definition(k);
    if (d.kind == Definition::Kind::kPower)
      a.images.push_back(g.power(a.images[d.j], g.prime()));
    else if (d.kind == Definition::Kind::kCommutator)
      a.images.push_back(g.commutator(a.images[d.j], a.images[d.i]));
    else
      throw InvalidPresentation("generator of weight > 1 lacks a definition");
  }
  return a;
}

Element apply(const PcPresentation& g, const Automorphism& a, const Element& x) {
  Element out = g.identity();
  for (int k = 0; k < g.ngens(); ++k)
    if (x[k]) g.multiply_in_place(out, x[k] == 1 ? a.images[k] : g.power(a.images[k], x[k]));
  return out;
}

Automorphism compose(const PcPresentation& g, const Automorphism& a, const Automorphism& b) {
  std::vector<Element> w;
  for (int k = 0; k < g.ngens() && g.weight(k) == 1; ++k) w.push_back(apply(g, b, a.images[k]));
  return automorphism_from_images(g, w);
}

Automorphism power(const PcPresentation& g, const Automorphism& a, std::uint64_t e) {
  std::vector<Element> id;
  for (int k = 0; k < g.ngens() && g.weight(k) == 1; ++k) id.push_back(g.generator(k));
  Automorphism result = automorphism_from_images(g, id);
  Automorphism base = a;
  while (e) {
    if (e & 1u) result = compose(g, result, base);
    e >>= 1;
    if (e) base = compose(g, base, base);
  }
  return result;
}

bool is_automorphism(const PcPresentation& g, const std::vector<Element>& weight_one) {
  const Automorphism a = automorphism_from_images(g, weight_one);
  const int n = g.ngens();
  for (int j = 0; j < n; ++j) {
    if (relation_lhs(g, Definition::power(j), a.images) != apply(g, a, g.power_rhs(j))) return false;
    for (int i = 0; i < j; ++i)
      if (relation_lhs(g, Definition::commutator(j, i), a.images) != apply(g, a, g.commutator_rhs(j, i)))
        return false;
  }
  return pc::Subgroup::generated_by(g, a.images).order_log() == n;
}

linalg::Matrix multiplicator_action(const PcPresentation& g, const CoveringData& cov, const Automorphism& a) {
  const PcPresentation& star = cov.cover;
  const int n = g.ngens();
  const int m = cov.multiplicator_rank;
  std::vector<Element> w;
  for (int k = 0; k < n && g.weight(k) == 1; ++k) w.push_back(pad(a.images[k], star.ngens()));
  // Only the base generators have pure definitions in the cover.
  std::vector<Element> img;
  for (int k = 0; k < n; ++k) {
    if (g.weight(k) == 1) {
      img.push_back(w[k]);
      continue;
    }
    const Definition& d = g.definition(k);
    img.push_back(d.kind == Definition::Kind::kPower ? star.power(img[d.j], star.prime())
                                                     : star.commutator(img[d.j], img[d.i]));
  }
  linalg::Matrix out;
  for (int b = 0; b < m; ++b) {
    const auto& r = cov.basis_relations[b];
    const Element& rhs = relation_rhs(g, r);
    Element v = star.identity();
    for (int k = 0; k < n; ++k)
      if (rhs[k]) star.multiply_in_place(v, star.power(img[k], rhs[k]));
    const Element t = star.left_quotient(v, relation_lhs(star, r, img));
    for (int k = 0; k < n; ++k)
      if (t[k]) throw Error("automorphism image leaves the multiplicator");
    linalg::Row row(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) row[k] = t[n + k];
    out.push_back(std::move(row));
  }
  return out;
}

linalg::Matrix allowable_kernel(const PcPresentation& g, const CoveringData& cov, const PcPresentation& next) {
  const int n = g.ngens();
  const int nn = next.ngens();
  const int s = nn - n;
  std::vector<Element> x;
  for (int k = 0; k < n; ++k) x.push_back(next.generator(k));
  linalg::Matrix layer;
  for (const auto& r : cov.basis_relations) {
    const Element v = pad(relation_rhs(g, r), nn);
    const Element t = next.left_quotient(v, relation_lhs(next, r, x));
    for (int k = 0; k < n; ++k)
      if (t[k]) throw InvalidArgument("presentation is not a descendant of its quotient");
    linalg::Row row(static_cast<std::size_t>(s));
    for (int k = 0; k < s; ++k) row[k] = t[n + k];
    layer.push_back(std::move(row));
  }
  return linalg::left_kernel(layer, s, linalg::PrimeField(g.prime()));
}

perm::Order general_linear_order(int d, int p) {
  perm::Order pd = 1;
  for (int i = 0; i < d; ++i) pd *= static_cast<perm::Order>(p);
  perm::Order out = 1;
  perm::Order pi = 1;
  for (int i = 0; i < d; ++i) {
    out *= pd - pi;
    pi *= static_cast<perm::Order>(p);
  }
  return out;
}

std::string format_order(perm::Order v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

namespace {

struct Triple {
  Automorphism aut;
  perm::Perm perm;
  linalg::Matrix mat;
};

perm::Perm point_action(const PcPresentation& q, const Automorphism& a) {
  std::uint64_t npoints = 1;
  for (int k = 0; k < q.ngens(); ++k) npoints *= static_cast<std::uint64_t>(q.prime());
  perm::Perm out(npoints);
  for (std::uint64_t x = 0; x < npoints; ++x) out[x] = static_cast<std::uint32_t>(q.encode(apply(q, a, q.decode(x))));
  return out;
}

std::vector<std::vector<Element>> general_linear_generators(int d, int p, bool full) {
  const linalg::PrimeField f(p);
  auto unit = [&](int i) {
    Element e(static_cast<std::size_t>(d));
    e[i] = 1;
    return e;
  };
  std::vector<std::vector<Element>> out;
  if (d == 0) return out;
  if (p > 2) {
    std::vector<Element> diag;
    for (int i = 0; i < d; ++i) diag.push_back(unit(i));
    diag[0][0] = f.primitive_root();
    out.push_back(diag);
  }
  if (d == 1) return out;
  if (full) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        std::vector<Element> t;
        for (int k = 0; k < d; ++k) t.push_back(unit(k));
        t[i][j] = 1;
        out.push_back(t);
      }
    return out;
  }
  std::vector<Element> t;
  for (int k = 0; k < d; ++k) t.push_back(unit(k));
  t[0][1] = 1;
  out.push_back(t);
  std::vector<Element> cyc;
  for (int k = 0; k < d; ++k) cyc.push_back(unit((k + 1) % d));
  out.push_back(cyc);
  return out;
}

std::uint64_t point_count(const PcPresentation& q, const AutomorphismOptions& opts) {
  std::uint64_t npoints = 1;
  for (int k = 0; k < q.ngens(); ++k) {
    npoints *= static_cast<std::uint64_t>(q.prime());
    if (npoints > opts.max_points) throw CapExceeded("automorphism point set exceeds the cap");
  }
  return npoints;
}

std::vector<std::uint32_t> base_points(const PcPresentation& q) {
  std::vector<std::uint32_t> base;
  for (int k = 0; k < q.ngens() && q.weight(k) == 1; ++k)
    base.push_back(static_cast<std::uint32_t>(q.encode(q.generator(k))));
  return base;
}

std::vector<Element> weight_one(const PcPresentation& q, const Automorphism& a) {
  std::vector<Element> w;
  for (int k = 0; k < q.ngens() && q.weight(k) == 1; ++k) w.push_back(a.images[k]);
  return w;
}

// Random sifting until the chain reaches the target order.
bool generates(std::uint64_t npoints, const std::vector<std::uint32_t>& base, const std::vector<perm::Perm>& gens,
               perm::Order target, std::mt19937_64& rng) {
  perm::StabChain chain(npoints, base);
  for (const auto& x : gens) chain.add(x);
  if (chain.order() == target) return true;
  std::vector<perm::Perm> slots;
  const std::size_t nslots = std::max<std::size_t>(10, gens.size() + 2);
  for (std::size_t i = 0; i < nslots; ++i) slots.push_back(gens[i % gens.size()]);
  perm::Perm acc = gens[0];
  int stale = 0;
  for (int w = 0; chain.order() != target; ++w) {
    const std::size_t i = uniform_below(rng, slots.size());
    std::size_t j = uniform_below(rng, slots.size() - 1);
    if (j >= i) ++j;
    slots[i] = perm::multiply(slots[i], slots[j]);
    acc = perm::multiply(acc, slots[i]);
    if (w < 40) continue;
    if (chain.add(acc))
      stale = 0;
    else if (++stale > 200)
      return false;
  }
  return true;
}

}  // namespace

AutomorphismGroup automorphism_group(const PcPresentation& g, const AutomorphismOptions& opts) {
  if (!g.has_pure_definitions()) throw InvalidPresentation("automorphism group requires pure definitions");
  const int p = g.prime();
  const int d = g.rank();
  const int c = g.p_class();
  AutomorphismGroup out;
  if (d == 0) return out;

  PcPresentation q = g.truncate(1);
  perm::Order order = general_linear_order(d, p);
  std::vector<std::vector<Element>> gens = general_linear_generators(d, p, false);
  std::mt19937_64 rng(opts.seed);
  {
    std::vector<perm::Perm> perms;
    for (const auto& w : gens) perms.push_back(point_action(q, automorphism_from_images(q, w)));
    if (!generates(point_count(q, opts), base_points(q), perms, order, rng))
      gens = general_linear_generators(d, p, true);
  }

  for (int k = 1; k < c; ++k) {
    const PcPresentation next = g.truncate(k + 1);
    const CoveringData cov = p_covering_group(q);
    const linalg::Matrix kernel = allowable_kernel(q, cov, next);

    std::vector<Triple> base;
    std::vector<linalg::Matrix> mats;
    for (const auto& w : gens) {
      Triple t;
      t.aut = automorphism_from_images(q, w);
      t.mat = multiplicator_action(q, cov, t.aut);
      mats.push_back(t.mat);
      base.push_back(std::move(t));
    }
    const AllowableSpace space(p, cov.multiplicator_rank, cov.nucleus, mats);
    const AllowableIndex u0 = space.index_of(kernel);

    struct Node {
      std::uint64_t parent;
      int gen;
    };
    std::unordered_map<std::uint64_t, Node> tree;
    tree.emplace(u0.rank, Node{u0.rank, -1});
    std::vector<std::uint64_t> orbit{u0.rank};
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (int gi = 0; gi < static_cast<int>(gens.size()); ++gi) {
        const AllowableIndex img = space.apply(gi, {u0.s, orbit[i]});
        if (tree.emplace(img.rank, Node{orbit[i], gi}).second) {
          orbit.push_back(img.rank);
          if (orbit.size() > opts.max_orbit) throw CapExceeded("automorphism orbit exceeds the cap");
        }
      }
    }
    const perm::Order osize = orbit.size();
    if (order % osize != 0) throw Error("orbit size does not divide the group order");
    const perm::Order target = order / osize;

    std::vector<std::vector<Element>> stab;
    if (osize == 1) {
      stab = gens;
    } else {
      const std::uint64_t npoints = point_count(q, opts);
      std::vector<Automorphism> inv_aut;
      std::vector<perm::Perm> inv_perm;
      for (auto& t : base) {
        t.perm = point_action(q, t.aut);
        inv_perm.push_back(perm::inverse(t.perm));
        inv_aut.push_back(power(q, t.aut, perm::order_of(t.perm) - 1));
      }
      perm::StabChain chain(npoints, base_points(q));
      // Product replacement over (automorphism, point action, matrix) triples.
      std::vector<Triple> slots;
      const std::size_t nslots = std::max<std::size_t>(10, base.size() + 2);
      for (std::size_t i = 0; i < nslots; ++i) slots.push_back(base[i % base.size()]);
      Triple acc = base[0];
      const linalg::PrimeField f(p);
      const int m = cov.multiplicator_rank;
      auto mul = [&](const Triple& a, const Triple& b) {
        Triple r;
        r.aut = compose(q, a.aut, b.aut);
        r.perm = perm::multiply(a.perm, b.perm);
        r.mat = linalg::mul(a.mat, b.mat, m, f);
        return r;
      };
      auto step = [&] {
        const std::size_t i = uniform_below(rng, slots.size());
        std::size_t j = uniform_below(rng, slots.size() - 1);
        if (j >= i) ++j;
        slots[i] = mul(slots[i], slots[j]);
        acc = mul(acc, slots[i]);
      };
      for (int w = 0; w < 40; ++w) step();
      int stale = 0;
      while (chain.order() != target) {
        if (++stale > 20000) throw Error("stabilizer computation did not converge");
        step();
        Automorphism s_aut = acc.aut;
        perm::Perm s_perm = acc.perm;
        std::uint64_t o = space.apply_matrix(acc.mat, u0).rank;
        while (o != u0.rank) {
          const Node& node = tree.at(o);
          s_aut = compose(q, s_aut, inv_aut[node.gen]);
          s_perm = perm::multiply(s_perm, inv_perm[node.gen]);
          o = node.parent;
        }
        if (chain.add(s_perm)) {
          stab.push_back(weight_one(q, s_aut));
          stale = 0;
        }
      }
    }

    std::vector<std::vector<Element>> lifted;
    for (const auto& w : stab) {
      std::vector<Element> lw;
      for (const auto& x : w) lw.push_back(pad(x, next.ngens()));
      lifted.push_back(std::move(lw));
    }
    int layer = 0;
    for (int t = 0; t < next.ngens(); ++t) {
      if (next.weight(t) != k + 1) continue;
      ++layer;
      for (int i = 0; i < d; ++i) {
        std::vector<Element> w;
        for (int j = 0; j < d; ++j) w.push_back(next.generator(j));
        next.multiply_in_place(w[i], next.generator(t));
        lifted.push_back(std::move(w));
      }
    }
    order = target;
    for (int e = 0; e < d * layer; ++e) {
      if (order > (~perm::Order{0}) / static_cast<perm::Order>(p)) throw CapExceeded("automorphism group order overflows");
      order *= static_cast<perm::Order>(p);
    }
    gens = std::move(lifted);
    q = next;
  }
  for (const auto& w : gens) out.generators.push_back(automorphism_from_images(g, w));
  out.order = order;
  return out;
}

}  // namespace ptower::tree
