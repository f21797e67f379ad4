#include "ptower/pc.hpp"

#include <algorithm>

#include "collector.hpp"
#include "ptower/errors.hpp"
#include "ptower/linalg.hpp"

namespace ptower::pc {

bool Element::is_identity() const {
  return std::all_of(e_.begin(), e_.end(), [](std::uint8_t v) { return v == 0; });
}

std::size_t Element::depth() const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i]) return i;
  return e_.size();
}

std::size_t ElementHash::operator()(const Element& x) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : x.exponents()) h = (h ^ v) * 1099511628211ull;
  return h;
}

namespace {

void check_rhs(const Element& e, int n, int p, int first, int min_weight, const std::vector<int>& w,
               const std::string& what) {
  if (static_cast<int>(e.size()) != n) throw InvalidPresentation(what + ": wrong length");
  for (int k = 0; k < n; ++k) {
    if (e[k] >= p) throw InvalidPresentation(what + ": exponent out of range");
    if (e[k] && k < first) throw InvalidPresentation(what + ": right-hand side is not in normal position");
    if (e[k] && w[k] < min_weight) throw InvalidPresentation(what + ": weight condition violated");
  }
}

}  // namespace

PcData PcPresentation::trivial_data(int p) {
  PcData d;
  d.prime = p;
  return d;
}

PcPresentation::PcPresentation(PcData data) : data_(std::move(data)) {
  const int p = data_.prime;
  if (!linalg::is_prime(p) || p > 251) throw InvalidPresentation("prime must be a prime below 256");
  const int n = ngens();
  if (n > 4096) throw CapExceeded("too many pc generators");
  if (static_cast<int>(data_.definitions.size()) != n) data_.definitions.resize(n);
  if (static_cast<int>(data_.powers.size()) != n) throw InvalidPresentation("power relation count mismatch");
  if (static_cast<int>(data_.commutators.size()) != n * n)
    throw InvalidPresentation("commutator relation count mismatch");
  for (int g = 0; g < n; ++g) {
    if (data_.weights[g] < 1) throw InvalidPresentation("weights must be positive");
    if (g > 0 && data_.weights[g] < data_.weights[g - 1]) throw InvalidPresentation("weights must be non-decreasing");
  }
  const auto& w = data_.weights;
  for (int g = 0; g < n; ++g) {
    check_rhs(data_.powers[g], n, p, g + 1, w[g] + 1, w, "power relation " + std::to_string(g + 1));
    for (int i = 0; i < g; ++i)
      check_rhs(data_.commutators[g * n + i], n, p, g + 1, w[g] + 1, w,
                "commutator relation " + std::to_string(g + 1) + "," + std::to_string(i + 1));
    const Definition& d = data_.definitions[g];
    if (d.kind == Definition::Kind::kPower && (d.j < 0 || d.j >= g))
      throw InvalidPresentation("bad definition for generator " + std::to_string(g + 1));
    if (d.kind == Definition::Kind::kCommutator && (d.i < 0 || d.j <= d.i || d.j >= g))
      throw InvalidPresentation("bad definition for generator " + std::to_string(g + 1));
  }
  // Entries above the diagonal are ignored; normalize them to the identity.
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) data_.commutators[j * n + i] = Element(static_cast<std::size_t>(n));
  build_tables();
}

void PcPresentation::build_tables() {
  const int n = ngens();
  conj_.assign(static_cast<std::size_t>(n) * n, {});
  power_sparse_.assign(n, {});
  commutes_.assign(static_cast<std::size_t>(n) * n, 1);
  for (int g = 0; g < n; ++g) {
    for (int k = 0; k < n; ++k)
      if (data_.powers[g][k]) power_sparse_[g].emplace_back(static_cast<std::uint16_t>(k), data_.powers[g][k]);
    for (int i = 0; i < g; ++i) {
      auto& s = conj_[static_cast<std::size_t>(g) * n + i];
      s.emplace_back(static_cast<std::uint16_t>(g), 1);
      const Element& c = data_.commutators[g * n + i];
      for (int k = 0; k < n; ++k)
        if (c[k]) {
          s.emplace_back(static_cast<std::uint16_t>(k), c[k]);
          commutes_[static_cast<std::size_t>(g) * n + i] = 0;
        }
    }
  }
}

PcPresentation PcPresentation::elementary_abelian(int p, int d) {
  PcData data;
  data.prime = p;
  data.weights.assign(d, 1);
  data.definitions.assign(d, Definition::none());
  data.powers.assign(d, Element(static_cast<std::size_t>(d)));
  data.commutators.assign(static_cast<std::size_t>(d) * d, Element(static_cast<std::size_t>(d)));
  return PcPresentation(std::move(data));
}

PcPresentation PcPresentation::trivial(int p) { return PcPresentation(trivial_data(p)); }

int PcPresentation::rank() const {
  int r = 0;
  for (int w : data_.weights)
    if (w == 1) ++r;
  return r;
}

Element PcPresentation::generator(int i) const {
  Element e = identity();
  e[i] = 1;
  return e;
}

Element PcPresentation::collect(std::span<const int> word) const {
  Element x = identity();
  const int n = ngens();
  for (int letter : word) {
    const int g = std::abs(letter) - 1;
    if (letter == 0 || g >= n) throw InvalidArgument("generator index out of range in word");
    if (letter > 0) {
      multiply_generator(x, g);
    } else {
      multiply_in_place(x, inverse(generator(g)));
    }
  }
  return x;
}

void PcPresentation::multiply_generator(Element& x, int g, int times) const {
  auto t = CollectorAccess::tables(*this);
  detail::NoHook h;
  for (int c = 0; c < times; ++c) detail::mul_gen(t, h, x.data(), g);
}

void PcPresentation::multiply_in_place(Element& x, const Element& y) const {
  auto t = CollectorAccess::tables(*this);
  detail::NoHook h;
  detail::mul_vec(t, h, x.data(), y.data());
}

Element PcPresentation::multiply(const Element& x, const Element& y) const {
  Element z = x;
  multiply_in_place(z, y);
  return z;
}

Element PcPresentation::left_quotient(const Element& x, const Element& y) const {
  auto t = CollectorAccess::tables(*this);
  detail::NoHook h;
  const int n = ngens();
  const int p = prime();
  Element c = x;
  Element z = identity();
  for (int i = 0; i < n; ++i) {
    const int e = (y[i] - c[i] + p) % p;
    z[i] = static_cast<std::uint8_t>(e);
    for (int r = 0; r < e; ++r) detail::mul_gen(t, h, c.data(), i);
  }
  return z;
}

Element PcPresentation::inverse(const Element& x) const { return left_quotient(x, identity()); }

Element PcPresentation::power(const Element& x, std::int64_t e) const {
  Element base = e < 0 ? inverse(x) : x;
  std::uint64_t k = static_cast<std::uint64_t>(e < 0 ? -e : e);
  Element acc = identity();
  while (k) {
    if (k & 1) multiply_in_place(acc, base);
    k >>= 1;
    if (k) base = multiply(base, base);
  }
  return acc;
}

Element PcPresentation::commutator(const Element& x, const Element& y) const {
  return left_quotient(multiply(y, x), multiply(x, y));
}

Element PcPresentation::conjugate(const Element& x, const Element& y) const {
  return left_quotient(y, multiply(x, y));
}

PcPresentation PcPresentation::truncate(int c) const {
  int m = 0;
  while (m < ngens() && weight(m) <= c) ++m;
  PcData d;
  d.prime = prime();
  d.weights.assign(data_.weights.begin(), data_.weights.begin() + m);
  d.definitions.assign(data_.definitions.begin(), data_.definitions.begin() + m);
  auto cut = [m](const Element& e) { return Element(std::vector<std::uint8_t>(e.data(), e.data() + m)); };
  for (int g = 0; g < m; ++g) d.powers.push_back(cut(data_.powers[g]));
  d.commutators.assign(static_cast<std::size_t>(m) * m, Element(static_cast<std::size_t>(m)));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < j; ++i) d.commutators[j * m + i] = cut(commutator_rhs(j, i));
  return PcPresentation(std::move(d));
}

namespace {

struct PlainOps {
  const PcPresentation& g;
  bool ok = true;
  Element identity() const { return g.identity(); }
  void mul_gen(Element& x, int k) const { g.multiply_generator(x, k); }
  void mul_val(Element& x, const Element& y) const { g.multiply_in_place(x, y); }
  void visit(const Element& a, const Element& b) {
    if (a != b) ok = false;
  }
};

struct VisitOps {
  const PcPresentation& g;
  const std::function<void(const Element&, const Element&)>& f;
  Element identity() const { return g.identity(); }
  void mul_gen(Element& x, int k) const { g.multiply_generator(x, k); }
  void mul_val(Element& x, const Element& y) const { g.multiply_in_place(x, y); }
  void visit(const Element& a, const Element& b) const { f(a, b); }
};

}  // namespace

bool PcPresentation::is_consistent() const {
  PlainOps ops{*this};
  detail::run_consistency(ngens(), prime(), ops);
  return ops.ok;
}

void for_each_consistency_test(const PcPresentation& g,
                               const std::function<void(const Element&, const Element&)>& visit) {
  VisitOps ops{g, visit};
  detail::run_consistency(g.ngens(), g.prime(), ops);
}

bool PcPresentation::has_pure_definitions() const {
  for (int g = 0; g < ngens(); ++g) {
    const Definition& d = definition(g);
    if (d.kind == Definition::Kind::kNone) {
      if (weight(g) != 1) return false;
      continue;
    }
    const Element& rhs = d.kind == Definition::Kind::kPower ? power_rhs(d.j) : commutator_rhs(d.j, d.i);
    if (rhs != generator(g)) return false;
  }
  return true;
}

bool PcPresentation::operator==(const PcPresentation& o) const {
  if (prime() != o.prime() || data_.weights != o.data_.weights) return false;
  if (data_.definitions != o.data_.definitions || data_.powers != o.data_.powers) return false;
  return data_.commutators == o.data_.commutators;
}

std::uint64_t PcPresentation::encode(const Element& x) const {
  std::uint64_t code = 0;
  for (int i = 0; i < ngens(); ++i) code = code * static_cast<std::uint64_t>(prime()) + x[i];
  return code;
}

Element PcPresentation::decode(std::uint64_t code) const {
  Element x = identity();
  for (int i = ngens() - 1; i >= 0; --i) {
    x[i] = static_cast<std::uint8_t>(code % static_cast<std::uint64_t>(prime()));
    code /= static_cast<std::uint64_t>(prime());
  }
  return x;
}

}  // namespace ptower::pc
