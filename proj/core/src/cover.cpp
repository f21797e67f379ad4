#include "ptower/cover.hpp"

#include "collector.hpp"
#include "ptower/errors.hpp"

namespace ptower::tree {

using pc::Definition;
using pc::Element;
using pc::PcPresentation;

std::vector<RelationId> all_relations(const PcPresentation& g) {
  std::vector<RelationId> out;
  for (int j = 0; j < g.ngens(); ++j) {
    out.push_back(Definition::power(j));
    for (int i = 0; i < j; ++i) out.push_back(Definition::commutator(j, i));
  }
  return out;
}

bool is_definition(const PcPresentation& g, const RelationId& r) {
  for (int k = 0; k < g.ngens(); ++k)
    if (g.definition(k) == r) return true;
  return false;
}

const Element& relation_rhs(const PcPresentation& g, const RelationId& r) {
  return r.kind == Definition::Kind::kPower ? g.power_rhs(r.j) : g.commutator_rhs(r.j, r.i);
}

Element relation_lhs(const PcPresentation& g, const RelationId& r, const std::vector<Element>& x) {
  if (r.kind == Definition::Kind::kPower) return g.power(x[r.j], g.prime());
  return g.commutator(x[r.j], x[r.i]);
}

namespace {

struct TailHook {
  static constexpr bool kTracks = true;
  std::uint8_t* tails;
  const int* pow_idx;
  const int* comm_idx;
  int n;
  int p;
  void power(int g) {
    const int k = pow_idx[g];
    if (k >= 0) tails[k] = static_cast<std::uint8_t>((tails[k] + 1) % p);
  }
  void conj(int k, int g) {
    const int t = comm_idx[k * n + g];
    if (t >= 0) tails[t] = static_cast<std::uint8_t>((tails[t] + 1) % p);
  }
};

struct TailVal {
  Element x;
  linalg::Row t;
};

struct TailOps {
  const PcPresentation& g;
  pc::detail::Tables tables;
  const std::vector<int>& pow_idx;
  const std::vector<int>& comm_idx;
  int ntails;
  linalg::EchelonSpace& space;
  linalg::PrimeField field;

  TailVal identity() const { return {g.identity(), linalg::Row(static_cast<std::size_t>(ntails), 0)}; }
  TailHook hook(TailVal& v) const { return {v.t.data(), pow_idx.data(), comm_idx.data(), g.ngens(), g.prime()}; }
  void mul_gen(TailVal& v, int k) const {
    TailHook h = hook(v);
    pc::detail::mul_gen(tables, h, v.x.data(), k);
  }
  void mul_val(TailVal& a, const TailVal& b) const {
    TailHook h = hook(a);
    pc::detail::mul_vec(tables, h, a.x.data(), b.x.data());
    for (int k = 0; k < ntails; ++k) a.t[k] = field.add(a.t[k], b.t[k]);
  }
  void visit(const TailVal& l, const TailVal& r) {
    if (l.x != r.x) throw InvalidPresentation("presentation is inconsistent");
    linalg::Row d(static_cast<std::size_t>(ntails));
    bool zero = true;
    for (int k = 0; k < ntails; ++k) {
      d[k] = field.sub(l.t[k], r.t[k]);
      if (d[k]) zero = false;
    }
    if (!zero) space.add(d);
  }
};

}  // namespace

CoveringData p_covering_group(const PcPresentation& g) {
  if (!g.has_pure_definitions())
    throw InvalidPresentation("covering group requires pure definitions for all generators of weight > 1");
  const int n = g.ngens();
  const int p = g.prime();
  const int c = g.p_class();
  const linalg::PrimeField f(p);

  CoveringData out;
  out.base_ngens = n;
  std::vector<int> pow_idx(n, -1);
  std::vector<int> comm_idx(static_cast<std::size_t>(n) * n, -1);
  for (const auto& r : all_relations(g)) {
    if (is_definition(g, r)) continue;
    const int k = static_cast<int>(out.relations.size());
    if (r.kind == Definition::Kind::kPower)
      pow_idx[r.j] = k;
    else
      comm_idx[r.j * n + r.i] = k;
    out.relations.push_back(r);
  }
  const int ntails = static_cast<int>(out.relations.size());
  linalg::EchelonSpace space(ntails, f);
  TailOps ops{g, pc::CollectorAccess::tables(g), pow_idx, comm_idx, ntails, space, f};
  pc::detail::run_consistency(n, p, ops);

  std::vector<int> pivots;
  linalg::Matrix rel = space.rref_basis(&pivots);
  std::vector<int> basis_index(ntails, -1);
  std::vector<int> pivot_row(ntails, -1);
  for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<int>(r);
  int m = 0;
  for (int k = 0; k < ntails; ++k)
    if (pivot_row[k] < 0) {
      basis_index[k] = m++;
      out.basis_relations.push_back(out.relations[k]);
    }
  out.multiplicator_rank = m;
  out.relation_tails.assign(ntails, linalg::Row(static_cast<std::size_t>(m), 0));
  for (int k = 0; k < ntails; ++k) {
    if (basis_index[k] >= 0) {
      out.relation_tails[k][basis_index[k]] = 1;
      continue;
    }
    const auto& row = rel[pivot_row[k]];
    for (int fcol = 0; fcol < ntails; ++fcol)
      if (basis_index[fcol] >= 0 && row[fcol]) out.relation_tails[k][basis_index[fcol]] = f.neg(row[fcol]);
  }

  pc::PcData d;
  d.prime = p;
  const int nn = n + m;
  d.weights = g.weights();
  d.weights.resize(nn, c + 1);
  for (int k = 0; k < n; ++k) d.definitions.push_back(g.definition(k));
  for (const auto& r : out.basis_relations) d.definitions.push_back(r);
  auto extend = [&](const Element& e, const linalg::Row* tail) {
    Element x(static_cast<std::size_t>(nn));
    for (int k = 0; k < n; ++k) x[k] = e[k];
    if (tail)
      for (int k = 0; k < m; ++k) x[n + k] = (*tail)[k];
    return x;
  };
  d.powers.assign(nn, Element(static_cast<std::size_t>(nn)));
  d.commutators.assign(static_cast<std::size_t>(nn) * nn, Element(static_cast<std::size_t>(nn)));
  for (int j = 0; j < n; ++j) {
    const int pk = pow_idx[j];
    d.powers[j] = extend(g.power_rhs(j), pk >= 0 ? &out.relation_tails[pk] : nullptr);
    for (int i = 0; i < j; ++i) {
      const int ck = comm_idx[j * n + i];
      d.commutators[j * nn + i] = extend(g.commutator_rhs(j, i), ck >= 0 ? &out.relation_tails[ck] : nullptr);
    }
  }
  out.cover = PcPresentation(std::move(d));

  for (std::size_t k = 0; k < out.relations.size(); ++k) {
    const auto& r = out.relations[k];
    const bool cand = r.kind == Definition::Kind::kPower ? g.weight(r.j) == c
                                                          : (g.weight(r.j) == c && g.weight(r.i) == 1);
    if (cand) out.candidates.push_back(r);
  }
  linalg::EchelonSpace nuc(m, f);
  for (const auto& r : out.candidates) nuc.add(out.tail_of(r));
  out.nucleus = nuc.rref_basis();
  out.nuclear_rank = static_cast<int>(out.nucleus.size());
  return out;
}

const linalg::Row& CoveringData::tail_of(const RelationId& r) const {
  for (std::size_t k = 0; k < relations.size(); ++k)
    if (relations[k] == r) return relation_tails[k];
  throw InvalidArgument("relation has no tail (it is a definition)");
}

pc::Subgroup CoveringData::multiplicator() const { return pc::Subgroup::tail(cover, base_ngens); }

pc::Subgroup CoveringData::nucleus_subgroup() const {
  std::vector<Element> gens;
  for (const auto& row : nucleus) {
    Element x = cover.identity();
    for (int k = 0; k < multiplicator_rank; ++k) x[base_ngens + k] = row[k];
    gens.push_back(std::move(x));
  }
  return pc::Subgroup::generated_by(cover, gens);
}

TailQuotient extend_by_tails(const PcPresentation& g, const std::vector<RelationId>& relations,
                             const std::vector<linalg::Row>& tails, int dim, const linalg::Matrix& kernel,
                             const std::vector<RelationId>& candidates) {
  const int p = g.prime();
  const int n = g.ngens();
  const linalg::PrimeField f(p);
  linalg::EchelonSpace u(dim, f);
  for (const auto& row : kernel) u.add(row);
  linalg::Matrix basis = u.rref_basis();
  const int r = static_cast<int>(basis.size());
  std::vector<RelationId> chosen;
  auto tail_index = [&](const RelationId& rel) {
    for (std::size_t k = 0; k < relations.size(); ++k)
      if (relations[k] == rel) return static_cast<int>(k);
    throw InvalidArgument("candidate is not a tail-carrying relation");
  };
  for (const auto& cand : candidates) {
    if (u.dimension() == dim) break;
    const auto& v = tails[tail_index(cand)];
    if (u.add(v)) {
      chosen.push_back(cand);
      basis.push_back(v);
    }
  }
  if (u.dimension() != dim) throw Error("definition candidates do not span the tail quotient");
  const int s = static_cast<int>(chosen.size());
  TailQuotient out;
  out.new_gens = s;
  auto inv = linalg::inverse(basis, f);
  if (!inv) throw Error("singular tail basis");
  out.projection.assign(dim, linalg::Row(static_cast<std::size_t>(s), 0));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < s; ++b) out.projection[a][b] = (*inv)[a][r + b];

  const int nn = n + s;
  const int c = g.p_class();
  pc::PcData d;
  d.prime = p;
  d.weights = g.weights();
  d.weights.resize(nn, c + 1);
  for (int k = 0; k < n; ++k) d.definitions.push_back(g.definition(k));
  for (const auto& rel : chosen) d.definitions.push_back(rel);
  d.powers.assign(nn, Element(static_cast<std::size_t>(nn)));
  d.commutators.assign(static_cast<std::size_t>(nn) * nn, Element(static_cast<std::size_t>(nn)));
  auto extend = [&](const Element& e) {
    Element x(static_cast<std::size_t>(nn));
    for (int k = 0; k < n; ++k) x[k] = e[k];
    return x;
  };
  for (int j = 0; j < n; ++j) {
    d.powers[j] = extend(g.power_rhs(j));
    for (int i = 0; i < j; ++i) d.commutators[j * nn + i] = extend(g.commutator_rhs(j, i));
  }
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const auto& rel = relations[k];
    const linalg::Row coords = project(out, tails[k], p);
    Element& target = rel.kind == Definition::Kind::kPower ? d.powers[rel.j] : d.commutators[rel.j * nn + rel.i];
    for (int b = 0; b < s; ++b) target[n + b] = coords[b];
  }
  out.group = PcPresentation(std::move(d));
  return out;
}

linalg::Row project(const TailQuotient& q, const linalg::Row& v, int p) {
  return linalg::mul(v, q.projection, q.new_gens, linalg::PrimeField(p));
}

}  // namespace ptower::tree
