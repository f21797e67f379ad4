#include "oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oracle {

Word normal_word(const std::vector<std::uint8_t>& exps) {
  Word w;
  for (std::size_t i = 0; i < exps.size(); ++i)
    for (int k = 0; k < exps[i]; ++k) w.push_back(static_cast<int>(i));
  return w;
}

std::vector<std::uint8_t> rewrite(const ptower::pc::PcData& data, Word w) {
  const int p = data.prime;
  const int n = static_cast<int>(data.weights.size());
  for (;;) {
    bool changed = false;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k + 1 < w.size() && w[k] > w[k + 1]) {
        const int j = w[k], i = w[k + 1];
        Word rep{i, j};
        const Word tail = normal_word(data.commutators[std::size_t(j) * n + i].exponents());
        rep.insert(rep.end(), tail.begin(), tail.end());
        w.erase(w.begin() + k, w.begin() + k + 2);
        w.insert(w.begin() + k, rep.begin(), rep.end());
        changed = true;
        break;
      }
      if (k + p <= w.size() && std::all_of(w.begin() + k, w.begin() + k + p, [&](int x) { return x == w[k]; })) {
        const Word rep = normal_word(data.powers[w[k]].exponents());
        w.erase(w.begin() + k, w.begin() + k + p);
        w.insert(w.begin() + k, rep.begin(), rep.end());
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  std::vector<std::uint8_t> e(n, 0);
  for (int x : w) ++e[x];
  return e;
}

std::uint32_t index_of(const std::vector<std::uint8_t>& exps, int p) {
  std::uint32_t idx = 0;
  for (std::size_t i = exps.size(); i-- > 0;) idx = idx * p + exps[i];
  return idx;
}

std::vector<std::uint8_t> exponents_of(std::uint32_t idx, int n, int p) {
  std::vector<std::uint8_t> e(n);
  for (int i = 0; i < n; ++i) {
    e[i] = static_cast<std::uint8_t>(idx % p);
    idx /= p;
  }
  return e;
}

std::uint32_t TableGroup::power(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 0;
  for (std::uint64_t k = 0; k < e; ++k) r = (*this)(r, a);
  return r;
}

int TableGroup::element_order_log(std::uint32_t a, int p) const {
  int k = 0;
  while (a != 0) {
    a = power(a, p);
    ++k;
  }
  return k;
}

bool TableGroup::associative_sample(std::mt19937_64& rng, int trials) const {
  std::uniform_int_distribution<std::uint32_t> pick(0, order - 1);
  for (int t = 0; t < trials; ++t) {
    const auto a = pick(rng), b = pick(rng), c = pick(rng);
    if ((*this)((*this)(a, b), c) != (*this)(a, (*this)(b, c))) return false;
  }
  return true;
}

TableGroup table_of(const ptower::pc::PcData& data) {
  const int p = data.prime;
  const int n = static_cast<int>(data.weights.size());
  TableGroup g;
  g.order = 1;
  for (int i = 0; i < n; ++i) g.order *= p;
  std::vector<std::uint32_t> right(std::size_t(g.order) * n);
  for (int x = 0; x < g.order; ++x) {
    const Word base = normal_word(exponents_of(x, n, p));
    for (int i = 0; i < n; ++i) {
      Word w = base;
      w.push_back(i);
      right[std::size_t(x) * n + i] = index_of(rewrite(data, w), p);
    }
  }
  g.mul.resize(std::size_t(g.order) * g.order);
  for (int y = 0; y < g.order; ++y) {
    const Word w = normal_word(exponents_of(y, n, p));
    for (int x = 0; x < g.order; ++x) {
      std::uint32_t z = x;
      for (int letter : w) z = right[std::size_t(z) * n + letter];
      g.mul[std::size_t(x) * g.order + y] = z;
    }
  }
  g.inv.assign(g.order, 0);
  for (int x = 0; x < g.order; ++x)
    for (int y = 0; y < g.order; ++y)
      if (g(x, y) == 0) g.inv[x] = y;
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint8_t> e(n, 0);
    e[i] = 1;
    g.gens.push_back(index_of(e, p));
  }
  return g;
}

std::vector<std::uint32_t> closure(const TableGroup& g, const std::vector<std::uint32_t>& gens) {
  std::vector<char> seen(g.order, 0);
  std::vector<std::uint32_t> out{0};
  seen[0] = 1;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (auto s : gens) {
      const auto y = g(out[k], s);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> derived_subgroup(const TableGroup& g, const std::vector<std::uint32_t>& h) {
  std::set<std::uint32_t> comms;
  for (auto x : h)
    for (auto y : h) comms.insert(g(g(g.inv[x], g.inv[y]), g(x, y)));
  return closure(g, {comms.begin(), comms.end()});
}

std::vector<std::uint64_t> abelianization(const TableGroup& g, const std::vector<std::uint32_t>& h, int p) {
  const auto d = derived_subgroup(g, h);
  std::vector<char> in_d(g.order, 0);
  for (auto x : d) in_d[x] = 1;
  const std::size_t quotient = h.size() / d.size();
  // ge[k] = #{i : e_i >= k}, from |Omega_k| = prod p^min(k, e_i).
  std::vector<int> omega_log{0};
  std::uint64_t q = 1;
  for (int k = 1; q < quotient; ++k) {
    std::uint64_t pk = 1;
    for (int t = 0; t < k; ++t) pk *= p;
    std::size_t cnt = 0;
    for (auto x : h)
      if (in_d[g.power(x, pk)]) ++cnt;
    q = cnt / d.size();
    int lg = 0;
    for (std::uint64_t v = q; v > 1; v /= p) ++lg;
    omega_log.push_back(lg);
  }
  std::vector<std::uint64_t> inv;
  const int kmax = static_cast<int>(omega_log.size()) - 1;
  for (int k = 1; k <= kmax; ++k) {
    const int ge_k = omega_log[k] - omega_log[k - 1];
    const int ge_next = k < kmax ? omega_log[k + 1] - omega_log[k] : 0;
    std::uint64_t pk = 1;
    for (int t = 0; t < k; ++t) pk *= p;
    for (int c = 0; c < ge_k - ge_next; ++c) inv.push_back(pk);
  }
  std::sort(inv.begin(), inv.end());
  return inv;
}

std::vector<std::uint64_t> smith_invariants(std::vector<std::vector<std::int64_t>> m, int ncols) {
  const int nrows = static_cast<int>(m.size());
  std::vector<std::uint64_t> diag;
  for (int t = 0; t < ncols; ++t) {
    for (;;) {
      int br = -1, bc = -1;
      for (int r = t; r < nrows; ++r)
        for (int c = t; c < ncols; ++c)
          if (m[r][c] != 0 && (br < 0 || std::llabs(m[r][c]) < std::llabs(m[br][bc]))) br = r, bc = c;
      if (br < 0) throw std::runtime_error("infinite abelianization");
      std::swap(m[t], m[br]);
      for (auto& row : m) std::swap(row[t], row[bc]);
      bool clean = true;
      for (int r = t + 1; r < nrows; ++r) {
        const std::int64_t q = m[r][t] / m[t][t];
        for (int c = t; c < ncols; ++c) m[r][c] -= q * m[t][c];
        if (m[r][t] != 0) clean = false;
      }
      for (int c = t + 1; c < ncols; ++c) {
        const std::int64_t q = m[t][c] / m[t][t];
        for (int r = t; r < nrows; ++r) m[r][c] -= q * m[r][t];
        if (m[t][c] != 0) clean = false;
      }
      if (clean) break;
    }
    const auto v = static_cast<std::uint64_t>(std::llabs(m[t][t]));
    if (v != 1) diag.push_back(v);
  }
  std::sort(diag.begin(), diag.end());
  return diag;
}

std::vector<std::uint64_t> abelian_invariants_snf(const ptower::pc::PcData& data) {
  const int n = static_cast<int>(data.weights.size());
  std::vector<std::vector<std::int64_t>> rel;
  for (int i = 0; i < n; ++i) {
    std::vector<std::int64_t> row(n, 0);
    row[i] = data.prime;
    for (int k = 0; k < n; ++k) row[k] -= data.powers[i][k];
    rel.push_back(row);
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      std::vector<std::int64_t> row(n, 0);
      for (int k = 0; k < n; ++k) row[k] = data.commutators[std::size_t(j) * n + i][k];
      rel.push_back(row);
    }
  return smith_invariants(rel, n);
}

std::vector<int> order_histogram(const TableGroup& g, int p) {
  std::vector<int> h;
  for (int x = 0; x < g.order; ++x) {
    const int k = g.element_order_log(x, p);
    if (static_cast<int>(h.size()) <= k) h.resize(k + 1, 0);
    ++h[k];
  }
  return h;
}

namespace {

std::vector<std::uint32_t> minimal_generators(const TableGroup& g) {
  std::vector<std::uint32_t> chosen;
  std::vector<std::uint32_t> span{0};
  for (auto s : g.gens) {
    if (std::binary_search(span.begin(), span.end(), s)) continue;
    chosen.push_back(s);
    span = closure(g, chosen);
  }
  return chosen;
}

bool extends(const TableGroup& a, const TableGroup& b, const std::vector<std::uint32_t>& gens,
             const std::vector<std::uint32_t>& images) {
  std::vector<std::int64_t> phi(a.order, -1);
  std::vector<char> hit(b.order, 0);
  phi[0] = 0;
  hit[0] = 1;
  std::deque<std::uint32_t> queue{0};
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (std::size_t t = 0; t < gens.size(); ++t) {
      const auto y = a(x, gens[t]);
      const auto fy = b(static_cast<std::uint32_t>(phi[x]), images[t]);
      if (phi[y] < 0) {
        if (hit[fy]) return false;
        phi[y] = fy;
        hit[fy] = 1;
        queue.push_back(y);
      } else if (phi[y] != fy) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool isomorphic(const TableGroup& a, const TableGroup& b, int p) {
  if (a.order != b.order) return false;
  if (order_histogram(a, p) != order_histogram(b, p)) return false;
  const auto gens = minimal_generators(a);
  std::vector<std::vector<std::uint32_t>> candidates(gens.size());
  for (std::size_t t = 0; t < gens.size(); ++t) {
    const int k = a.element_order_log(gens[t], p);
    for (int y = 0; y < b.order; ++y)
      if (b.element_order_log(y, p) == k) candidates[t].push_back(y);
  }
  std::vector<std::uint32_t> images(gens.size());
  std::function<bool(std::size_t)> search = [&](std::size_t t) {
    if (t == gens.size()) return extends(a, b, gens, images);
    for (auto y : candidates[t]) {
      images[t] = y;
      if (search(t + 1)) return true;
    }
    return false;
  };
  return search(0);
}

namespace {

using Vec = std::vector<std::uint8_t>;
using Basis = std::vector<Vec>;

int inverse_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  throw std::runtime_error("not invertible");
}

Basis echelon(Basis rows, int n, int p) {
  int r = 0;
  for (int c = 0; c < n && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int k = r; k < static_cast<int>(rows.size()); ++k)
      if (rows[k][c] != 0) piv = k;
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    const int s = inverse_mod(rows[r][c], p);
    for (auto& x : rows[r]) x = static_cast<std::uint8_t>(x * s % p);
    for (int k = 0; k < static_cast<int>(rows.size()); ++k)
      if (k != r && rows[k][c] != 0) {
        const int f = rows[k][c];
        for (int j = 0; j < n; ++j) rows[k][j] = static_cast<std::uint8_t>((rows[k][j] + (p - f) * rows[r][j]) % p);
      }
    ++r;
  }
  rows.resize(r);
  return rows;
}

}  // namespace

std::vector<std::vector<std::vector<std::uint8_t>>> all_subspaces(int n, int p) {
  std::vector<Vec> vectors;
  std::uint32_t total = 1;
  for (int i = 0; i < n; ++i) total *= p;
  for (std::uint32_t v = 1; v < total; ++v) vectors.push_back(exponents_of(v, n, p));
  std::set<Basis> seen{Basis{}};
  std::vector<Basis> out{Basis{}};
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& v : vectors) {
      Basis b = out[k];
      b.push_back(v);
      b = echelon(b, n, p);
      if (seen.insert(b).second) out.push_back(b);
    }
  return out;
}

}  // namespace oracle
