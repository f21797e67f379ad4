#pragma once

#include <cstdint>
#include <vector>

namespace ptower::perm {

// Permutations of {0, ..., n-1} acting on the right: x^(ab) = (x^a)^b.
using Perm = std::vector<std::uint32_t>;
using Order = unsigned __int128;

Perm identity(std::size_t n);
Perm multiply(const Perm& a, const Perm& b);
Perm inverse(const Perm& a);
bool is_identity(const Perm& a);
// Least common multiple of the cycle lengths.
std::uint64_t order_of(const Perm& a);

// Stabilizer chain grown by sifting; base points are extended as needed.
class StabChain {
 public:
  StabChain(std::size_t npoints, std::vector<std::uint32_t> base = {});

  // Adds g when it is not already a member. Returns true when the group grew.
  bool add(const Perm& g);
  bool contains(const Perm& g) const;
  Order order() const;
  const std::vector<std::uint32_t>& base() const { return base_; }

 private:
  struct Level {
    std::vector<int> gens;
    std::vector<std::int32_t> label;  // -1 outside the orbit, -2 at the base point
    std::vector<std::uint32_t> orbit;
  };
  // Strips g; returns the level where it left the chain (levels_.size() when it survived).
  std::size_t sift(Perm& g) const;
  void rebuild(std::size_t level);

  std::size_t n_;
  std::vector<std::uint32_t> base_;
  std::vector<Perm> strong_;
  std::vector<Perm> strong_inv_;
  std::vector<Level> levels_;
};

}  // namespace ptower::perm
