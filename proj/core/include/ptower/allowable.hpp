#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ptower/linalg.hpp"

namespace ptower::tree {

// An allowable subspace U of the multiplicator M (U + N = M, U != M, with N
// the nucleus), addressed by the step size s = dim M/U and its rank among
// all allowable subspaces of that step size.
struct AllowableIndex {
  int s = 0;
  std::uint64_t rank = 0;

  auto operator<=>(const AllowableIndex&) const = default;
  bool operator==(const AllowableIndex&) const = default;
  // "s:rank"
  std::string certificate() const;
  static AllowableIndex parse(const std::string& text);
};

struct OrbitOptions {
  // Upper bound on the visited-set bitmap for a single step size.
  std::uint64_t max_bitmap_bits = std::uint64_t{1} << 34;
  int threads = 1;
};

struct OrbitResult {
  // Least index of every orbit, ascending, and the orbit sizes.
  std::vector<AllowableIndex> representatives;
  std::vector<std::uint64_t> sizes;
};

// Allowable subspaces with a group acting on M by matrices (row vectors,
// v -> v * A). The nucleus must be invariant under every action.
//
// Coordinates: M = C + N where C is spanned by the unit vectors at the
// non-pivot columns of N. Every allowable U is uniquely {c + f(c) : c in C}
// + K with K < N of codimension s and f : C -> N/K, which gives the ranking
// (K in echelon form, then the free entries of f).
class AllowableSpace {
 public:
  // packed selects 64-bit row words for p = 2 (same ranks as the byte engine).
  AllowableSpace(int p, int m, const linalg::Matrix& nucleus, const std::vector<linalg::Matrix>& actions,
                 bool packed = true);
  ~AllowableSpace();
  AllowableSpace(AllowableSpace&&) noexcept;
  AllowableSpace& operator=(AllowableSpace&&) noexcept;

  int prime() const;
  int multiplicator_rank() const;
  int nuclear_rank() const;
  int num_actions() const;

  // Number of allowable subspaces with step size s (0 outside 1..nuclear_rank).
  std::uint64_t count(int s) const;
  std::uint64_t total() const;

  AllowableIndex apply(int action, const AllowableIndex& u) const;
  AllowableIndex apply_matrix(const linalg::Matrix& a, const AllowableIndex& u) const;
  // Basis of U in multiplicator coordinates (RREF).
  linalg::Matrix subspace(const AllowableIndex& u) const;
  // Throws InvalidArgument when the row space is not allowable.
  AllowableIndex index_of(const linalg::Matrix& u) const;

  // Orbits of the acting group, each step size scanned in rank order.
  OrbitResult orbits(const OrbitOptions& opts = {}) const;
  OrbitResult orbits(int s, const OrbitOptions& opts = {}) const;

  class Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace ptower::tree
