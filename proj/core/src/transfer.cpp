#include "ptower/transfer.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "ptower/errors.hpp"

namespace ptower::filters {

using pc::Element;
using u64 = std::uint64_t;

namespace {

using Coords = std::vector<u64>;

u64 order_of(const Coords& c, const pc::AbelianInvariants& inv) {
  u64 out = 1;
  for (std::size_t i = 0; i < inv.size(); ++i) out = std::max(out, inv[i] / std::gcd(c[i], inv[i]));
  return out;
}

}  // namespace

std::vector<u64> transfer_image(const pc::PcPresentation& g, const pc::Subgroup& h, const pc::AbelianQuotient& hq,
                                const std::vector<Element>& reps, const Element& x) {
  const auto& inv = hq.invariants();
  std::unordered_map<Element, const Element*, pc::ElementHash> rep_of;
  for (const auto& t : reps) rep_of.emplace(h.coset_representative(g, t), &t);
  std::vector<u64> acc(inv.size(), 0);
  for (const auto& t : reps) {
    const Element y = g.multiply(x, t);
    const auto it = rep_of.find(h.coset_representative(g, y));
    if (it == rep_of.end()) throw InvalidArgument("transversal does not cover every coset");
    const auto c = hq.coordinates(g.left_quotient(*it->second, y));
    for (std::size_t i = 0; i < inv.size(); ++i) acc[i] = (acc[i] + c[i]) % inv[i];
  }
  return acc;
}

pc::AbelianInvariants invariants_from_orders(int p, const std::vector<u64>& element_orders) {
  const u64 up = static_cast<u64>(p);
  int top = 0;
  for (u64 o : element_orders) {
    int e = 0;
    for (u64 v = o; v > 1; v /= up) ++e;
    top = std::max(top, e);
  }
  // ranks[k] = number of cyclic factors of exponent >= k.
  std::vector<int> ranks(static_cast<std::size_t>(top) + 2, 0);
  u64 prev = 1;
  for (int k = 1; k <= top; ++k) {
    u64 bound = 1;
    for (int i = 0; i < k; ++i) bound *= up;
    u64 count = 0;
    for (u64 o : element_orders)
      if (bound % o == 0) ++count;
    int r = 0;
    for (u64 v = count / prev; v > 1; v /= up) ++r;
    ranks[k] = r;
    prev = count;
  }
  pc::AbelianInvariants out;
  u64 q = 1;
  for (int k = 1; k <= top; ++k) {
    q *= up;
    for (int i = 0; i < ranks[k] - ranks[k + 1]; ++i) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TransferData transfer_map(const pc::PcPresentation& g, const pc::Subgroup& h, const TransferOptions& opts) {
  const pc::Subgroup whole = pc::Subgroup::whole(g);
  if (!whole.contains(g, h)) throw InvalidArgument("transfer target is not a subgroup");
  const pc::AbelianQuotient gq(g, whole);
  const pc::AbelianQuotient hq(g, h);
  const auto reps = whole.transversal(g, h, opts.max_transversal);

  TransferData out;
  out.source_invariants = gq.invariants();
  out.target_invariants = hq.invariants();
  for (const auto& x : gq.generators()) out.matrix.push_back(transfer_image(g, h, hq, reps, x));

  const auto& src = out.source_invariants;
  const auto& dst = out.target_invariants;
  u64 total = 1;
  for (u64 e : src) {
    if (total > opts.max_source / e) throw CapExceeded("abelianization too large for kernel enumeration");
    total *= e;
  }
  std::vector<Coords> kernel;
  Coords c(src.size(), 0);
  for (u64 idx = 0; idx < total; ++idx) {
    u64 v = idx;
    for (std::size_t i = 0; i < src.size(); ++i) {
      c[i] = v % src[i];
      v /= src[i];
    }
    bool zero = true;
    for (std::size_t j = 0; j < dst.size() && zero; ++j) {
      u64 s = 0;
      for (std::size_t i = 0; i < src.size(); ++i) s = (s + c[i] % dst[j] * out.matrix[i][j]) % dst[j];
      zero = s == 0;
    }
    if (zero) kernel.push_back(c);
  }

  std::vector<u64> orders;
  for (const auto& k : kernel) orders.push_back(order_of(k, src));
  out.kernel_invariants = invariants_from_orders(g.prime(), orders);

  std::vector<std::size_t> by_order(kernel.size());
  std::iota(by_order.begin(), by_order.end(), 0);
  std::stable_sort(by_order.begin(), by_order.end(), [&](std::size_t a, std::size_t b) { return orders[a] > orders[b]; });
  std::set<Coords> span{Coords(src.size(), 0)};
  for (std::size_t i : by_order) {
    if (span.size() == kernel.size()) break;
    if (span.count(kernel[i])) continue;
    std::set<Coords> grown;
    for (const auto& s : span) {
      Coords y = s;
      for (u64 j = 0; j < orders[i]; ++j) {
        grown.insert(y);
        for (std::size_t t = 0; t < src.size(); ++t) y[t] = (y[t] + kernel[i][t]) % src[t];
      }
    }
    span = std::move(grown);
    Element x = g.identity();
    for (std::size_t t = 0; t < src.size(); ++t)
      if (kernel[i][t]) g.multiply_in_place(x, g.power(gq.generators()[t], static_cast<std::int64_t>(kernel[i][t])));
    out.kernel_generators.push_back(std::move(x));
  }
  return out;
}

}  // namespace ptower::filters
