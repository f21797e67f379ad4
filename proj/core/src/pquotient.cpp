#include "ptower/pquotient.hpp"

#include "ptower/cover.hpp"
#include "ptower/errors.hpp"
#include "ptower/linalg.hpp"

namespace ptower::tree {

using pc::Element;
using pc::PcPresentation;

pc::PcPresentation PQuotientResult::group() const {
  return quotients.empty() ? PcPresentation::trivial(prime) : quotients.back();
}

PQuotientResult p_quotient(const FpPresentation& fp, int p, int max_class, const PQuotientOptions& opts) {
  if (max_class < 1) throw InvalidArgument("p_quotient requires class >= 1");
  const linalg::PrimeField f(p);
  PQuotientResult out;
  out.prime = p;
  const int m = fp.ngens();

  linalg::Matrix sums;
  for (const auto& r : fp.relators()) {
    auto s = fp.exponent_sums(r);
    linalg::Row row(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) row[j] = static_cast<std::uint8_t>(((s[j] % p) + p) % p);
    sums.push_back(std::move(row));
  }
  std::vector<int> pivots;
  if (!sums.empty()) pivots = linalg::rref(sums, f);
  std::vector<int> pivot_row(m, -1);
  for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<int>(r);
  // Generators not eliminated by the abelian relations become weight-1 pc generators.
  std::vector<int> pc_index(m, -1);
  int d = 0;
  for (int j = 0; j < m; ++j)
    if (pivot_row[j] < 0) pc_index[j] = d++;
  if (d == 0) {
    out.stabilized = true;
    return out;
  }
  if (d > opts.max_ngens) throw CapExceeded("generator cap exceeded");
  PcPresentation q = PcPresentation::elementary_abelian(p, d);
  std::vector<Element> images(m, q.identity());
  for (int j = 0; j < m; ++j) {
    if (pc_index[j] >= 0) {
      images[j] = q.generator(pc_index[j]);
      continue;
    }
    const auto& row = sums[pivot_row[j]];
    for (int k = 0; k < m; ++k)
      if (pc_index[k] >= 0) images[j][pc_index[k]] = f.neg(row[k]);
  }
  out.quotients.push_back(q);
  out.images.push_back(images);

  std::vector<int> extra(m, -1);
  int nextra = 0;
  for (int j = 0; j < m; ++j)
    if (pc_index[j] < 0) extra[j] = nextra++;

  for (int c = 1; c < max_class; ++c) {
    const CoveringData cov = p_covering_group(q);
    const int n = q.ngens();
    const int mult = cov.multiplicator_rank;
    const int dim = mult + nextra;
    const PcPresentation& star = cov.cover;
    std::vector<Element> lifted(m);
    for (int j = 0; j < m; ++j) {
      lifted[j] = star.identity();
      for (int k = 0; k < n; ++k) lifted[j][k] = images[j][k];
    }
    linalg::Matrix kernel;
    for (const auto& r : fp.relators()) {
      const Element v = evaluate(r, star, lifted);
      for (int k = 0; k < n; ++k)
        if (v[k]) throw Error("relator does not hold in the previous quotient");
      linalg::Row row(static_cast<std::size_t>(dim), 0);
      for (int k = 0; k < mult; ++k) row[k] = v[n + k];
      const auto s = fp.exponent_sums(r);
      for (int j = 0; j < m; ++j)
        if (extra[j] >= 0) row[mult + extra[j]] = static_cast<std::uint8_t>(((s[j] % p) + p) % p);
      kernel.push_back(std::move(row));
    }
    std::vector<linalg::Row> tails;
    for (const auto& t : cov.relation_tails) {
      linalg::Row row(static_cast<std::size_t>(dim), 0);
      for (int k = 0; k < mult; ++k) row[k] = t[k];
      tails.push_back(std::move(row));
    }
    const TailQuotient ext = extend_by_tails(q, cov.relations, tails, dim, kernel, cov.candidates);
    if (ext.new_gens == 0) {
      out.stabilized = true;
      break;
    }
    if (ext.group.ngens() > opts.max_ngens) throw CapExceeded("generator cap exceeded");
    const PcPresentation& next = ext.group;
    std::vector<Element> next_images(m);
    for (int j = 0; j < m; ++j) {
      next_images[j] = next.identity();
      for (int k = 0; k < n; ++k) next_images[j][k] = images[j][k];
      if (extra[j] >= 0) {
        linalg::Row unit(static_cast<std::size_t>(dim), 0);
        unit[mult + extra[j]] = 1;
        const auto coords = project(ext, unit, p);
        for (int b = 0; b < ext.new_gens; ++b) next_images[j][n + b] = coords[b];
      }
    }
    q = next;
    images = std::move(next_images);
    out.quotients.push_back(q);
    out.images.push_back(images);
  }
  return out;
}

FpPresentation to_fp(const PcPresentation& g) {
  const int n = g.ngens();
  std::vector<std::string> names;
  for (int k = 0; k < n; ++k) names.push_back("g" + std::to_string(k + 1));
  auto gen = [](int k, long e) {
    Word w;
    w.kind = Word::Kind::kGenerator;
    w.generator = k;
    w.exponent = e;
    return w;
  };
  // lhs * rhs^-1 where rhs is the normal word e.
  auto relator = [&](Word lhs, const Element& e) {
    Word w;
    w.kind = Word::Kind::kProduct;
    w.children.push_back(std::move(lhs));
    for (int k = n - 1; k >= 0; --k)
      if (e[k]) w.children.push_back(gen(k, -static_cast<long>(e[k])));
    return w;
  };
  std::vector<Word> rels;
  for (int j = 0; j < n; ++j) {
    rels.push_back(relator(gen(j, g.prime()), g.power_rhs(j)));
    for (int i = 0; i < j; ++i) {
      Word c;
      c.kind = Word::Kind::kCommutator;
      c.children = {gen(j, 1), gen(i, 1)};
      rels.push_back(relator(std::move(c), g.commutator_rhs(j, i)));
    }
  }
  return FpPresentation(std::move(names), std::move(rels));
}

pc::PcPresentation standardize(const PcPresentation& g, const PQuotientOptions& opts) {
  if (g.ngens() == 0) return g;
  // The class is at most the composition length.
  const auto res = p_quotient(to_fp(g), g.prime(), g.ngens() + 1, opts);
  PcPresentation out = res.group();
  if (out.ngens() != g.ngens()) throw Error("standardize: order mismatch");
  return out;
}

}  // namespace ptower::tree
