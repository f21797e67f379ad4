#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ptower/pc.hpp"

namespace ptower::pc::detail {

using Sparse = std::vector<std::pair<std::uint16_t, std::uint8_t>>;

struct Tables {
  int p;
  int n;
  const std::vector<Sparse>* conj;
  const std::vector<Sparse>* power;
  const std::uint8_t* commutes;
};

struct NoHook {
  static constexpr bool kTracks = false;
  void power(int) {}
  void conj(int, int) {}
};

class Scratch {
 public:
  std::size_t push(std::size_t len) {
    const std::size_t off = top_;
    top_ += len;
    if (buf_.size() < top_) buf_.resize(top_ * 2);
    return off;
  }
  void pop(std::size_t off) { top_ = off; }
  std::uint8_t* at(std::size_t off) { return buf_.data() + off; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t top_ = 0;
};

inline Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

template <class Hook>
void mul_sparse(const Tables& t, Hook& h, std::uint8_t* x, const Sparse& s);

template <class Hook>
void mul_gen(const Tables& t, Hook& h, std::uint8_t* x, int g) {
  const int n = t.n;
  int last = n - 1;
  while (last > g && x[last] == 0) --last;
  if (last <= g) {
    if (++x[g] == t.p) {
      x[g] = 0;
      h.power(g);
      mul_sparse(t, h, x, (*t.power)[g]);
    }
    return;
  }
  if constexpr (!Hook::kTracks) {
    if (x[g] + 1 < t.p) {
      bool central = true;
      for (int k = g + 1; k <= last; ++k)
        if (x[k] && !t.commutes[static_cast<std::size_t>(k) * n + g]) {
          central = false;
          break;
        }
      if (central) {
        ++x[g];
        return;
      }
    }
  }
  const std::size_t len = static_cast<std::size_t>(last - g);
  Scratch& sc = scratch();
  const std::size_t off = sc.push(len);
  std::copy(x + g + 1, x + last + 1, sc.at(off));
  std::fill(x + g + 1, x + last + 1, 0);
  mul_gen(t, h, x, g);
  for (std::size_t r = 0; r < len; ++r) {
    const std::uint8_t e = sc.at(off)[r];
    const int k = g + 1 + static_cast<int>(r);
    for (std::uint8_t c = 0; c < e; ++c) {
      h.conj(k, g);
      mul_sparse(t, h, x, (*t.conj)[static_cast<std::size_t>(k) * n + g]);
    }
  }
  sc.pop(off);
}

template <class Hook>
void mul_sparse(const Tables& t, Hook& h, std::uint8_t* x, const Sparse& s) {
  for (const auto& [g, e] : s)
    for (std::uint8_t c = 0; c < e; ++c) mul_gen(t, h, x, g);
}

template <class Hook>
void mul_vec(const Tables& t, Hook& h, std::uint8_t* x, const std::uint8_t* y) {
  for (int g = 0; g < t.n; ++g)
    for (std::uint8_t c = 0; c < y[g]; ++c) mul_gen(t, h, x, g);
}

}  // namespace ptower::pc::detail

namespace ptower::pc {

struct CollectorAccess {
  static detail::Tables tables(const PcPresentation& g) {
    return {g.prime(), g.ngens(), &g.conj_, &g.power_sparse_, g.commutes_.data()};
  }
};

}  // namespace ptower::pc

namespace ptower::pc::detail {

// Standard consistency tests over an abstract group model. Ops provides
// Val identity(), mul_gen(Val&, int), mul_val(Val&, const Val&), and
// visit(const Val&, const Val&).
template <class Ops>
void run_consistency(int n, int p, Ops& ops) {
  using Val = decltype(ops.identity());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        Val l = ops.identity();
        ops.mul_gen(l, k);
        ops.mul_gen(l, j);
        ops.mul_gen(l, i);
        Val y = ops.identity();
        ops.mul_gen(y, j);
        ops.mul_gen(y, i);
        Val r = ops.identity();
        ops.mul_gen(r, k);
        ops.mul_val(r, y);
        ops.visit(l, r);
      }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      Val l = ops.identity();
      for (int c = 0; c < p; ++c) ops.mul_gen(l, j);
      ops.mul_gen(l, i);
      Val y = ops.identity();
      ops.mul_gen(y, j);
      ops.mul_gen(y, i);
      Val r = ops.identity();
      for (int c = 0; c + 1 < p; ++c) ops.mul_gen(r, j);
      ops.mul_val(r, y);
      ops.visit(l, r);

      Val q = ops.identity();
      for (int c = 0; c < p; ++c) ops.mul_gen(q, i);
      Val l2 = ops.identity();
      ops.mul_gen(l2, j);
      ops.mul_val(l2, q);
      Val r2 = ops.identity();
      ops.mul_gen(r2, j);
      for (int c = 0; c < p; ++c) ops.mul_gen(r2, i);
      ops.visit(l2, r2);
    }
  for (int i = 0; i < n; ++i) {
    Val l = ops.identity();
    for (int c = 0; c <= p; ++c) ops.mul_gen(l, i);
    Val q = ops.identity();
    for (int c = 0; c < p; ++c) ops.mul_gen(q, i);
    Val r = ops.identity();
    ops.mul_gen(r, i);
    ops.mul_val(r, q);
    ops.visit(l, r);
  }
}

}  // namespace ptower::pc::detail
