#include "ptower/abelian.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ptower/errors.hpp"

namespace ptower::pc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

u64 inv_unit(u64 a, u64 m) {
  // Extended Euclid over signed 128-bit values.
  __int128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr) {
    const __int128 q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

int valuation(u64 a, int p) {
  if (a == 0) return 1 << 20;
  int v = 0;
  while (a % static_cast<u64>(p) == 0) {
    a /= static_cast<u64>(p);
    ++v;
  }
  return v;
}

}  // namespace

std::string format_invariants(const AbelianInvariants& inv) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < inv.size(); ++i) os << (i ? "," : "") << inv[i];
  os << ']';
  return os.str();
}

AbelianInvariants parse_invariants(const std::string& text) {
  AbelianInvariants out;
  std::string digits;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
    } else if (c == ',' || c == ']' || c == ' ') {
      if (!digits.empty()) out.push_back(std::stoull(digits));
      digits.clear();
    } else if (c != '[') {
      throw InvalidArgument("bad abelian invariants: " + text);
    }
  }
  if (!digits.empty()) out.push_back(std::stoull(digits));
  std::sort(out.begin(), out.end());
  out.erase(std::remove(out.begin(), out.end(), 1u), out.end());
  return out;
}

AbelianQuotient::AbelianQuotient(const PcPresentation& g, const Subgroup& h) : g_(&g) {
  const int n = g.ngens();
  const int p = g.prime();
  derived_ = derived_subgroup(g, h);
  table_depth_.assign(n, -1);
  free_slot_.assign(n, -1);
  const auto dd = derived_.depths();
  std::vector<Element> table;
  std::vector<Element> free_elems;
  for (const auto& t : h.pcgs()) {
    const int d = static_cast<int>(t.depth());
    if (std::find(dd.begin(), dd.end(), d) != dd.end()) continue;
    table_depth_[d] = static_cast<int>(table.size());
    free_slot_[d] = k_++;
    table.push_back(t);
    free_elems.push_back(t);
  }
  for (const auto& t : derived_.pcgs()) {
    table_depth_[t.depth()] = static_cast<int>(table.size());
    table.push_back(t);
  }
  for (const auto& t : table) table_inv_.push_back(g.inverse(t));

  int nexp = k_ + 1;
  modulus_ = 1;
  for (int i = 0; i < nexp; ++i) {
    if (modulus_ > (u64{1} << 62) / static_cast<u64>(p)) throw CapExceeded("abelian quotient too large for 64-bit arithmetic");
    modulus_ *= static_cast<u64>(p);
  }
  const u64 q = modulus_;
  const int k = k_;
  // Relations p f_i = coords(f_i^p).
  std::vector<std::vector<u64>> a(k, std::vector<u64>(k, 0));
  for (int i = 0; i < k; ++i) {
    auto c = raw(g.power(free_elems[i], p));
    for (int j = 0; j < k; ++j) a[i][j] = (q - c[j]) % q;
    a[i][i] = (a[i][i] + static_cast<u64>(p)) % q;
  }
  v_.assign(k, std::vector<u64>(k, 0));
  std::vector<std::vector<u64>> vinv(k, std::vector<u64>(k, 0));
  for (int i = 0; i < k; ++i) v_[i][i] = vinv[i][i] = 1;

  for (int t = 0; t < k; ++t) {
    int br = -1, bc = -1, bv = 1 << 20;
    for (int r = t; r < k; ++r)
      for (int c = t; c < k; ++c) {
        const int v = valuation(a[r][c], p);
        if (v < bv) {
          bv = v;
          br = r;
          bc = c;
        }
      }
    if (br < 0) throw Error("abelian quotient: degenerate relation matrix");
    std::swap(a[t], a[br]);
    if (bc != t) {
      for (int r = 0; r < k; ++r) std::swap(a[r][t], a[r][bc]);
      for (int r = 0; r < k; ++r) std::swap(v_[r][t], v_[r][bc]);
      std::swap(vinv[t], vinv[bc]);
    }
    u64 pv = 1;
    for (int i = 0; i < bv; ++i) pv *= static_cast<u64>(p);
    const u64 unit = a[t][t] / pv;
    const u64 ui = inv_unit(unit % q, q);
    for (int c = 0; c < k; ++c) a[t][c] = mulmod(a[t][c], ui, q);
    for (int r = t + 1; r < k; ++r) {
      if (!a[r][t]) continue;
      const u64 b = a[r][t] / pv;
      for (int c = 0; c < k; ++c) a[r][c] = (a[r][c] + q - mulmod(b, a[t][c], q)) % q;
    }
    for (int c = t + 1; c < k; ++c) {
      if (!a[t][c]) continue;
      const u64 b = a[t][c] / pv;
      for (int r = 0; r < k; ++r) a[r][c] = (a[r][c] + q - mulmod(b, a[r][t], q)) % q;
      for (int r = 0; r < k; ++r) v_[r][c] = (v_[r][c] + q - mulmod(b, v_[r][t], q)) % q;
      for (int r = 0; r < k; ++r) vinv[t][r] = (vinv[t][r] + mulmod(b, vinv[c][r], q)) % q;
    }
    diag_.push_back(pv);
  }
  int total = 0;
  for (auto d : diag_) total += valuation(d, p);
  if (total != k) throw Error("abelian quotient: order mismatch");

  order_.resize(k);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) { return diag_[x] < diag_[y]; });
  order_.erase(std::remove_if(order_.begin(), order_.end(), [&](int x) { return diag_[x] == 1; }), order_.end());
  for (int t : order_) {
    invariants_.push_back(diag_[t]);
    Element x = g.identity();
    for (int j = 0; j < k; ++j) {
      const u64 e = vinv[t][j];
      if (e) g.multiply_in_place(x, g.power(free_elems[j], static_cast<std::int64_t>(e % q)));
    }
    generators_.push_back(std::move(x));
  }
}

std::vector<std::uint8_t> AbelianQuotient::raw(Element x) const {
  std::vector<std::uint8_t> c(static_cast<std::size_t>(k_), 0);
  const int n = g_->ngens();
  for (int d = static_cast<int>(x.depth()); d < n; ++d) {
    const std::uint8_t e = x[d];
    if (!e) continue;
    const int slot = table_depth_[d];
    if (slot < 0) throw InvalidArgument("element is not in the subgroup");
    if (free_slot_[d] >= 0) c[free_slot_[d]] = e;
    for (std::uint8_t r = 0; r < e; ++r) g_->multiply_in_place(x, table_inv_[slot]);
  }
  return c;
}

std::vector<std::uint64_t> AbelianQuotient::coordinates(const Element& x) const {
  const auto c = raw(x);
  std::vector<std::uint64_t> out;
  out.reserve(order_.size());
  for (int t : order_) {
    u64 s = 0;
    for (int j = 0; j < k_; ++j)
      if (c[j]) s = (s + mulmod(c[j], v_[j][t], modulus_)) % modulus_;
    out.push_back(s % diag_[t]);
  }
  return out;
}

AbelianInvariants abelian_invariants(const PcPresentation& g, const Subgroup& h) {
  return AbelianQuotient(g, h).invariants();
}

AbelianInvariants abelian_invariants(const PcPresentation& g) { return abelian_invariants(g, Subgroup::whole(g)); }

}  // namespace ptower::pc
