#include "ptower/allowable.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <thread>

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#endif

#include "ptower/errors.hpp"

namespace ptower::tree {

using linalg::Matrix;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

std::string AllowableIndex::certificate() const { return std::to_string(s) + ":" + std::to_string(rank); }

AllowableIndex AllowableIndex::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("bad allowable certificate: " + text);
  AllowableIndex out;
  try {
    out.s = std::stoi(text.substr(0, colon));
    out.rank = std::stoull(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("bad allowable certificate: " + text);
  }
  return out;
}

namespace {

const std::array<std::array<u64, 65>, 65> kBinom = [] {
  std::array<std::array<u64, 65>, 65> b{};
  for (int i = 0; i <= 64; ++i) {
    b[i][0] = 1;
    for (int j = 1; j <= i; ++j) b[i][j] = b[i - 1][j - 1] + (j <= i - 1 ? b[i - 1][j] : 0);
  }
  return b;
}();

u64 binom(int n, int k) { return k < 0 || k > n ? 0 : kBinom[n][k]; }

struct Blocks {
  Matrix r;     // nu x nu
  Matrix q;     // c x nu
  Matrix pinv;  // c x c
};

// Pivot patterns of the K part for one step size, in colex order.
struct Table {
  std::vector<u64> masks;
  std::vector<u64> offsets;
  u64 pw = 1;
};

}  // namespace

// Shared frame: change of basis to C + N, per-action blocks, rank tables.
class AllowableSpace::Impl {
 public:
  Impl(int p_in, int m_in, const Matrix& nucleus, const std::vector<Matrix>& actions) : p(p_in), m(m_in), f(p_in) {
    Matrix n = nucleus;
    const auto npiv = linalg::rref(n, f);
    nu = static_cast<int>(n.size());
    c = m - nu;
    if (nu > 63) throw CapExceeded("nuclear rank too large for allowable enumeration");
    for (int col = 0, used = 0; col < m; ++col) {
      if (used < nu && npiv[used] == col) {
        ++used;
        continue;
      }
      linalg::Row e(static_cast<std::size_t>(m), 0);
      e[col] = 1;
      b.push_back(std::move(e));
    }
    for (const auto& row : n) b.push_back(row);
    auto inv = linalg::inverse(b, f);
    if (!inv) throw InvalidArgument("nucleus basis is degenerate");
    binv = *inv;
    for (const auto& a : actions) {
      if (static_cast<int>(a.size()) != m) throw InvalidArgument("action matrix has the wrong size");
      const Matrix ap = linalg::mul(linalg::mul(b, a, m, f), binv, m, f);
      for (int i = c; i < m; ++i)
        for (int j = 0; j < c; ++j)
          if (ap[i][j]) throw InvalidArgument("action does not preserve the nucleus");
      Blocks bl;
      Matrix pm(static_cast<std::size_t>(c), linalg::Row(static_cast<std::size_t>(c)));
      for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) pm[i][j] = ap[i][j];
      auto pinv = linalg::inverse(pm, f);
      if (!pinv) throw InvalidArgument("action is singular");
      bl.pinv = *pinv;
      for (int i = 0; i < nu; ++i) bl.r.emplace_back(ap[c + i].begin() + c, ap[c + i].end());
      for (int i = 0; i < c; ++i) bl.q.emplace_back(ap[i].begin() + c, ap[i].end());
      blocks.push_back(std::move(bl));
    }
    tables.resize(static_cast<std::size_t>(nu) + 1);
    counts.assign(static_cast<std::size_t>(nu) + 1, 0);
    for (int s = 1; s <= nu; ++s) build_table(s);
  }
  virtual ~Impl() = default;

  // K rows (RREF, nu columns) and f rows (c rows, reduced modulo K).
  virtual u64 rank_rows(int s, const Matrix& k, const Matrix& fr) const = 0;
  virtual void unrank_rows(int s, u64 r, Matrix& k, Matrix& fr) const = 0;
  virtual u64 apply_rank(int action, int s, u64 r) const = 0;
  virtual OrbitResult orbits(int s, const OrbitOptions& opts) const = 0;

  void check(const AllowableIndex& u) const {
    if (u.s < 1 || u.s > nu || u.rank >= counts[u.s]) throw InvalidArgument("allowable index out of range");
  }

  Matrix subspace(const AllowableIndex& u) const {
    check(u);
    Matrix k, fr;
    unrank_rows(u.s, u.rank, k, fr);
    Matrix rows;
    for (int i = 0; i < c; ++i) {
      linalg::Row r(static_cast<std::size_t>(m), 0);
      r[i] = 1;
      std::copy(fr[i].begin(), fr[i].end(), r.begin() + c);
      rows.push_back(std::move(r));
    }
    for (const auto& kr : k) {
      linalg::Row r(static_cast<std::size_t>(m), 0);
      std::copy(kr.begin(), kr.end(), r.begin() + c);
      rows.push_back(std::move(r));
    }
    Matrix out = rows.empty() ? Matrix{} : linalg::mul(rows, b, m, f);
    linalg::rref(out, f);
    return out;
  }

  AllowableIndex index_of(const Matrix& u) const {
    Matrix x = u.empty() ? Matrix{} : linalg::mul(u, binv, m, f);
    const auto piv = linalg::rref(x, f);
    const int dim = static_cast<int>(x.size());
    if (dim < c || dim >= m) throw InvalidArgument("subspace is not allowable");
    for (int i = 0; i < c; ++i)
      if (piv[i] != i) throw InvalidArgument("subspace does not supplement the nucleus");
    Matrix k, fr;
    for (int i = 0; i < c; ++i) fr.emplace_back(x[i].begin() + c, x[i].end());
    for (int i = c; i < dim; ++i) k.emplace_back(x[i].begin() + c, x[i].end());
    const int s = m - dim;
    return {s, rank_rows(s, k, fr)};
  }

  int p;
  int m;
  int nu = 0;
  int c = 0;
  linalg::PrimeField f;
  Matrix b;
  Matrix binv;
  std::vector<Blocks> blocks;
  std::vector<Table> tables;
  std::vector<u64> counts;

 private:
  void build_table(int s) {
    Table& t = tables[s];
    const int k = nu - s;
    if (binom(nu, k) > (u64{1} << 24)) throw CapExceeded("too many pivot patterns for allowable enumeration");
    u128 total = 0;
    auto add_mask = [&](u64 mask) {
      int free = 0;
      int i = 0;
      for (int col = 0; col < nu; ++col)
        if (mask >> col & 1u) {
          free += (nu - 1 - col) - (k - 1 - i);
          ++i;
        }
      t.masks.push_back(mask);
      t.offsets.push_back(static_cast<u64>(total));
      u128 v = 1;
      for (int e = 0; e < free; ++e) v *= static_cast<u128>(p);
      total += v;
      if (total >> 63) throw CapExceeded("allowable subspace count overflows");
    };
    if (k == 0) {
      add_mask(0);
    } else {
      u64 mask = (u64{1} << k) - 1;
      const u64 limit = u64{1} << nu;
      while (mask < limit) {
        add_mask(mask);
        const u64 lowest = mask & (~mask + 1);
        const u64 ripple = mask + lowest;
        mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
      }
    }
    u128 pw = 1;
    for (int e = 0; e < c * s; ++e) {
      pw *= static_cast<u128>(p);
      if (pw >> 63) throw CapExceeded("allowable subspace count overflows");
    }
    t.pw = static_cast<u64>(pw);
    const u128 cnt = total * pw;
    if (cnt >> 63) throw CapExceeded("allowable subspace count overflows");
    counts[s] = static_cast<u64>(cnt);
  }
};

namespace {

// Scans one step size in rank order, walking each new orbit breadth first.
template <class Next>
OrbitResult scan_orbits(int s, u64 cnt, const OrbitOptions& opts, Next&& neighbours) {
  OrbitResult out;
  if (cnt > opts.max_bitmap_bits) throw CapExceeded("allowable subspace count exceeds the bitmap cap");
  std::vector<u64> bits((cnt + 63) / 64, 0);
  auto test_set = [&](u64 r) {
    u64& w = bits[r >> 6];
    const u64 bit = u64{1} << (r & 63);
    if (w & bit) return false;
    w |= bit;
    return true;
  };
  std::vector<u64> queue;
  for (u64 word = 0; word < bits.size(); ++word) {
    while (true) {
      const u64 free_bits = ~bits[word];
      if (free_bits == 0) break;
      const u64 r = word * 64 + static_cast<u64>(std::countr_zero(free_bits));
      if (r >= cnt) break;
      test_set(r);
      queue.clear();
      queue.push_back(r);
      for (std::size_t qi = 0; qi < queue.size(); ++qi)
        neighbours(queue[qi], [&](u64 rr) {
          if (test_set(rr)) queue.push_back(rr);
        });
      out.representatives.push_back({s, r});
      out.sizes.push_back(queue.size());
    }
  }
  return out;
}

// Any prime; rows are byte vectors.
class GenericEngine final : public AllowableSpace::Impl {
 public:
  using Impl::Impl;

  u64 rank_rows(int s, const Matrix& k, const Matrix& fr) const override {
    const Table& t = tables[s];
    const int nk = nu - s;
    u64 mask = 0;
    u64 idx = 0;
    std::vector<int> piv(static_cast<std::size_t>(nk));
    for (int i = 0; i < nk; ++i) {
      piv[i] = lead(k[i]);
      mask |= u64{1} << piv[i];
      idx += binom(piv[i], i + 1);
    }
    const u64 up = static_cast<u64>(p);
    u64 kv = 0;
    u64 scale = 1;
    for (int i = 0; i < nk; ++i)
      for (int j = piv[i] + 1; j < nu; ++j)
        if (!(mask >> j & 1u)) {
          kv += k[i][j] * scale;
          scale *= up;
        }
    u64 fv = 0;
    scale = 1;
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < nu; ++j)
        if (!(mask >> j & 1u)) {
          fv += fr[i][j] * scale;
          scale *= up;
        }
    return (t.offsets[idx] + kv) * t.pw + fv;
  }

  void unrank_rows(int s, u64 r, Matrix& k, Matrix& fr) const override {
    const Table& t = tables[s];
    const int nk = nu - s;
    const u64 up = static_cast<u64>(p);
    const u64 q = r / t.pw;
    u64 fv = r % t.pw;
    const auto it = std::upper_bound(t.offsets.begin(), t.offsets.end(), q);
    const std::size_t idx = static_cast<std::size_t>(it - t.offsets.begin()) - 1;
    u64 kv = q - t.offsets[idx];
    const u64 mask = t.masks[idx];
    k.assign(static_cast<std::size_t>(nk), linalg::Row(static_cast<std::size_t>(nu), 0));
    fr.assign(static_cast<std::size_t>(c), linalg::Row(static_cast<std::size_t>(nu), 0));
    int i = 0;
    for (int col = 0; col < nu; ++col) {
      if (!(mask >> col & 1u)) continue;
      k[i][col] = 1;
      for (int j = col + 1; j < nu; ++j)
        if (!(mask >> j & 1u)) {
          k[i][j] = static_cast<std::uint8_t>(kv % up);
          kv /= up;
        }
      ++i;
    }
    for (int a = 0; a < c; ++a)
      for (int j = 0; j < nu; ++j)
        if (!(mask >> j & 1u)) {
          fr[a][j] = static_cast<std::uint8_t>(fv % up);
          fv /= up;
        }
  }

  u64 apply_rank(int action, int s, u64 r) const override {
    Matrix k, fr;
    unrank_rows(s, r, k, fr);
    const Blocks& bl = blocks.at(static_cast<std::size_t>(action));
    Matrix k2 = k.empty() ? Matrix{} : linalg::mul(k, bl.r, nu, f);
    const auto piv = linalg::rref(k2, f);
    Matrix f2;
    if (c > 0) {
      Matrix tmp = linalg::mul(fr, bl.r, nu, f);
      for (int i = 0; i < c; ++i)
        for (int j = 0; j < nu; ++j) tmp[i][j] = f.add(tmp[i][j], bl.q[i][j]);
      f2 = linalg::mul(bl.pinv, tmp, nu, f);
      for (auto& row : f2) linalg::reduce(row, k2, piv, f);
    }
    return rank_rows(s, k2, f2);
  }

  OrbitResult orbits(int s, const OrbitOptions& opts) const override {
    if (s < 1 || s > nu) return {};
    const int na = static_cast<int>(blocks.size());
    return scan_orbits(s, counts[s], opts, [&](u64 r, auto&& visit) {
      for (int a = 0; a < na; ++a) visit(apply_rank(a, s, r));
    });
  }

 private:
  int lead(const linalg::Row& r) const {
    for (int j = 0; j < nu; ++j)
      if (r[j]) return j;
    return nu;
  }
};

#if defined(__x86_64__) && defined(__GNUC__)
__attribute__((target("bmi2"))) u64 pext(u64 x, u64 mask) { return _pext_u64(x, mask); }
__attribute__((target("bmi2"))) u64 pdep(u64 x, u64 mask) { return _pdep_u64(x, mask); }
const bool kHasBmi2 = __builtin_cpu_supports("bmi2");
#else
u64 pext(u64, u64) { return 0; }
u64 pdep(u64, u64) { return 0; }
const bool kHasBmi2 = false;
#endif

u64 compress(u64 x, u64 mask) {
  if (kHasBmi2) return pext(x, mask);
  u64 r = 0;
  int t = 0;
  for (u64 b = mask; b; b &= b - 1, ++t)
    if (x & (b & (~b + 1))) r |= u64{1} << t;
  return r;
}

u64 deposit(u64 x, u64 mask) {
  if (kHasBmi2) return pdep(x, mask);
  u64 r = 0;
  int t = 0;
  for (u64 b = mask; b; b &= b - 1, ++t)
    if (x >> t & 1u) r |= b & (~b + 1);
  return r;
}

// p = 2 with rows packed into 64-bit words.
class PackedEngine final : public AllowableSpace::Impl {
 public:
  PackedEngine(int p_in, int m_in, const Matrix& nucleus, const std::vector<Matrix>& actions)
      : Impl(p_in, m_in, nucleus, actions) {
    for (const auto& bl : blocks) {
      PackedBlocks pb;
      for (const auto& row : bl.r) pb.r.push_back(pack(row));
      for (const auto& row : bl.q) pb.q.push_back(pack(row));
      for (const auto& row : bl.pinv) pb.pinv.push_back(pack(row));
      packed_.push_back(std::move(pb));
    }
  }

  u64 rank_rows(int s, const Matrix& k, const Matrix& fr) const override {
    Sub a;
    a.nk = nu - s;
    for (int i = 0; i < a.nk; ++i) a.k[i] = pack(k[i]);
    for (int i = 0; i < c; ++i) a.f[i] = pack(fr[i]);
    return rank(s, a);
  }

  void unrank_rows(int s, u64 r, Matrix& k, Matrix& fr) const override {
    Sub a;
    unrank(s, r, a);
    k.clear();
    fr.clear();
    for (int i = 0; i < a.nk; ++i) k.push_back(unpack(a.k[i]));
    for (int i = 0; i < c; ++i) fr.push_back(unpack(a.f[i]));
  }

  u64 apply_rank(int action, int s, u64 r) const override {
    Sub a, b;
    unrank(s, r, a);
    apply(packed_.at(static_cast<std::size_t>(action)), a, b);
    return rank(s, b);
  }

  OrbitResult orbits(int s, const OrbitOptions& opts) const override {
    if (s < 1 || s > nu) return {};
    Sub a, b;
    return scan_orbits(s, counts[s], opts, [&](u64 r, auto&& visit) {
      unrank(s, r, a);
      for (const auto& pb : packed_) {
        apply(pb, a, b);
        visit(rank(s, b));
      }
    });
  }

 private:
  struct PackedBlocks {
    std::vector<u64> r;
    std::vector<u64> q;
    std::vector<u64> pinv;
  };
  struct Sub {
    int nk = 0;
    int piv[64];
    u64 k[64];
    u64 f[64];
  };

  static u64 pack(const linalg::Row& row) {
    u64 v = 0;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] & 1u) v |= u64{1} << j;
    return v;
  }
  linalg::Row unpack(u64 v) const {
    linalg::Row row(static_cast<std::size_t>(nu), 0);
    for (int j = 0; j < nu; ++j) row[j] = static_cast<std::uint8_t>(v >> j & 1u);
    return row;
  }

  static u64 mul(u64 v, const u64* rows) {
    u64 out = 0;
    for (; v; v &= v - 1) out ^= rows[std::countr_zero(v)];
    return out;
  }

  u64 full() const { return nu == 64 ? ~u64{0} : (u64{1} << nu) - 1; }

  u64 rank(int s, const Sub& a) const {
    const Table& t = tables[s];
    u64 mask = 0;
    u64 idx = 0;
    for (int i = 0; i < a.nk; ++i) {
      const int pc = std::countr_zero(a.k[i]);
      mask |= u64{1} << pc;
      idx += binom(pc, i + 1);
    }
    const u64 nonpiv = full() & ~mask;
    u64 kv = 0;
    int shift = 0;
    for (int i = 0; i < a.nk; ++i) {
      const int pc = std::countr_zero(a.k[i]);
      const u64 allowed = nonpiv & ~((u64{2} << pc) - 1);
      kv |= compress(a.k[i], allowed) << shift;
      shift += std::popcount(allowed);
    }
    u64 fv = 0;
    for (int i = 0; i < c; ++i) fv |= compress(a.f[i], nonpiv) << (i * s);
    return (t.offsets[idx] + kv) * t.pw + fv;
  }

  void unrank(int s, u64 r, Sub& a) const {
    const Table& t = tables[s];
    const u64 q = r / t.pw;
    const u64 fv = r % t.pw;
    const auto it = std::upper_bound(t.offsets.begin(), t.offsets.end(), q);
    const std::size_t idx = static_cast<std::size_t>(it - t.offsets.begin()) - 1;
    u64 kv = q - t.offsets[idx];
    const u64 mask = t.masks[idx];
    const u64 nonpiv = full() & ~mask;
    a.nk = nu - s;
    int i = 0;
    for (u64 bits = mask; bits; bits &= bits - 1, ++i) {
      const int pc = std::countr_zero(bits);
      const u64 allowed = nonpiv & ~((u64{2} << pc) - 1);
      const int w = std::popcount(allowed);
      a.piv[i] = pc;
      a.k[i] = (u64{1} << pc) | deposit(kv & ((u64{1} << w) - 1), allowed);
      kv >>= w;
    }
    const u64 smask = s == 64 ? ~u64{0} : (u64{1} << s) - 1;
    for (int j = 0; j < c; ++j) a.f[j] = deposit(fv >> (j * s) & smask, nonpiv);
  }

  void apply(const PackedBlocks& pb, const Sub& a, Sub& b) const {
    b.nk = a.nk;
    for (int i = 0; i < a.nk; ++i) {
      u64 x = mul(a.k[i], pb.r.data());
      for (int j = 0; j < i; ++j)
        if (x >> b.piv[j] & 1u) x ^= b.k[j];
      const int pc = std::countr_zero(x);
      for (int j = 0; j < i; ++j)
        if (b.k[j] >> pc & 1u) b.k[j] ^= x;
      // Insert keeping pivots ascending.
      int pos = i;
      while (pos > 0 && b.piv[pos - 1] > pc) {
        b.k[pos] = b.k[pos - 1];
        b.piv[pos] = b.piv[pos - 1];
        --pos;
      }
      b.k[pos] = x;
      b.piv[pos] = pc;
    }
    u64 tmp[64];
    for (int i = 0; i < c; ++i) tmp[i] = pb.q[i] ^ mul(a.f[i], pb.r.data());
    for (int i = 0; i < c; ++i) {
      u64 x = mul(pb.pinv[i], tmp);
      for (int j = 0; j < b.nk; ++j)
        if (x >> b.piv[j] & 1u) x ^= b.k[j];
      b.f[i] = x;
    }
  }

  std::vector<PackedBlocks> packed_;
};

}  // namespace

AllowableSpace::AllowableSpace(int p, int m, const linalg::Matrix& nucleus, const std::vector<linalg::Matrix>& actions,
                               bool packed) {
  if (!linalg::is_prime(p) || p > 251) throw InvalidArgument("unsupported prime");
  if (packed && p == 2 && m <= 64)
    impl_ = std::make_unique<PackedEngine>(p, m, nucleus, actions);
  else
    impl_ = std::make_unique<GenericEngine>(p, m, nucleus, actions);
}

AllowableSpace::~AllowableSpace() = default;
AllowableSpace::AllowableSpace(AllowableSpace&&) noexcept = default;
AllowableSpace& AllowableSpace::operator=(AllowableSpace&&) noexcept = default;

int AllowableSpace::prime() const { return impl_->p; }
int AllowableSpace::multiplicator_rank() const { return impl_->m; }
int AllowableSpace::nuclear_rank() const { return impl_->nu; }
int AllowableSpace::num_actions() const { return static_cast<int>(impl_->blocks.size()); }

std::uint64_t AllowableSpace::count(int s) const { return s >= 1 && s <= impl_->nu ? impl_->counts[s] : 0; }

std::uint64_t AllowableSpace::total() const {
  u128 t = 0;
  for (int s = 1; s <= impl_->nu; ++s) t += impl_->counts[s];
  if (t >> 63) throw CapExceeded("allowable subspace count overflows");
  return static_cast<u64>(t);
}

AllowableIndex AllowableSpace::apply(int action, const AllowableIndex& u) const {
  impl_->check(u);
  if (action < 0 || action >= num_actions()) throw InvalidArgument("action index out of range");
  return {u.s, impl_->apply_rank(action, u.s, u.rank)};
}

AllowableIndex AllowableSpace::apply_matrix(const linalg::Matrix& a, const AllowableIndex& u) const {
  const Matrix sub = impl_->subspace(u);
  return impl_->index_of(linalg::mul(sub, a, impl_->m, impl_->f));
}

linalg::Matrix AllowableSpace::subspace(const AllowableIndex& u) const { return impl_->subspace(u); }

AllowableIndex AllowableSpace::index_of(const linalg::Matrix& u) const { return impl_->index_of(u); }

OrbitResult AllowableSpace::orbits(int s, const OrbitOptions& opts) const { return impl_->orbits(s, opts); }

OrbitResult AllowableSpace::orbits(const OrbitOptions& opts) const {
  const int nu = impl_->nu;
  std::vector<OrbitResult> parts(static_cast<std::size_t>(nu) + 1);
  std::vector<int> order;
  for (int s = 1; s <= nu; ++s) order.push_back(s);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return impl_->counts[a] > impl_->counts[b]; });
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= order.size()) return;
      try {
        parts[order[i]] = impl_->orbits(order[i], opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min(opts.threads, nu));
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  OrbitResult out;
  for (int s = 1; s <= nu; ++s) {
    auto& part = parts[s];
    out.representatives.insert(out.representatives.end(), part.representatives.begin(), part.representatives.end());
    out.sizes.insert(out.sizes.end(), part.sizes.begin(), part.sizes.end());
  }
  return out;
}

}  // namespace ptower::tree
