#include "ptower/perm_group.hpp"

#include <numeric>

namespace ptower::perm {

Perm identity(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

Perm multiply(const Perm& a, const Perm& b) {
  Perm out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = b[a[x]];
  return out;
}

Perm inverse(const Perm& a) {
  Perm out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[a[x]] = static_cast<std::uint32_t>(x);
  return out;
}

bool is_identity(const Perm& a) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] != x) return false;
  return true;
}

std::uint64_t order_of(const Perm& a) {
  std::vector<char> seen(a.size(), 0);
  std::uint64_t l = 1;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (seen[x]) continue;
    std::uint64_t len = 0;
    for (std::size_t y = x; !seen[y]; y = a[y]) {
      seen[y] = 1;
      ++len;
    }
    l = std::lcm(l, len);
  }
  return l;
}

StabChain::StabChain(std::size_t npoints, std::vector<std::uint32_t> base) : n_(npoints), base_(std::move(base)) {
  for (std::size_t i = 0; i < base_.size(); ++i) {
    Level lv;
    lv.label.assign(n_, -1);
    lv.label[base_[i]] = -2;
    lv.orbit.push_back(base_[i]);
    levels_.push_back(std::move(lv));
  }
}

std::size_t StabChain::sift(Perm& g) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& lv = levels_[i];
    std::uint32_t gamma = g[base_[i]];
    if (lv.label[gamma] == -1) return i;
    while (lv.label[gamma] != -2) {
      const auto& inv = strong_inv_[lv.label[gamma]];
      for (auto& x : g) x = inv[x];
      gamma = inv[gamma];
    }
  }
  return levels_.size();
}

void StabChain::rebuild(std::size_t level) {
  auto& lv = levels_[level];
  for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
    const std::uint32_t x = lv.orbit[k];
    for (int s : lv.gens) {
      const std::uint32_t y = strong_[s][x];
      if (lv.label[y] == -1) {
        lv.label[y] = s;
        lv.orbit.push_back(y);
      }
    }
  }
}

bool StabChain::add(const Perm& g) {
  Perm h = g;
  std::size_t level = sift(h);
  if (level == levels_.size()) {
    if (is_identity(h)) return false;
    std::uint32_t moved = 0;
    while (h[moved] == moved) ++moved;
    base_.push_back(moved);
    Level lv;
    lv.label.assign(n_, -1);
    lv.label[moved] = -2;
    lv.orbit.push_back(moved);
    levels_.push_back(std::move(lv));
  }
  const int id = static_cast<int>(strong_.size());
  strong_inv_.push_back(inverse(h));
  strong_.push_back(std::move(h));
  for (std::size_t i = 0; i <= level; ++i) {
    levels_[i].gens.push_back(id);
    rebuild(i);
  }
  return true;
}

bool StabChain::contains(const Perm& g) const {
  Perm h = g;
  return sift(h) == levels_.size() && is_identity(h);
}

Order StabChain::order() const {
  Order o = 1;
  for (const auto& lv : levels_) o *= lv.orbit.size();
  return o;
}

}  // namespace ptower::perm
