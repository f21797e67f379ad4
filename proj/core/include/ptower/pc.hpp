#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ptower::pc {

// Normal-form element a_1^{e_1} ... a_n^{e_n} with 0 <= e_i < p.
class Element {
 public:
  Element() = default;
  explicit Element(std::size_t n) : e_(n, 0) {}
  explicit Element(std::vector<std::uint8_t> e) : e_(std::move(e)) {}

  std::size_t size() const { return e_.size(); }
  std::uint8_t operator[](std::size_t i) const { return e_[i]; }
  std::uint8_t& operator[](std::size_t i) { return e_[i]; }
  std::uint8_t* data() { return e_.data(); }
  const std::uint8_t* data() const { return e_.data(); }
  const std::vector<std::uint8_t>& exponents() const { return e_; }
  std::vector<std::uint8_t>& exponents() { return e_; }

  bool is_identity() const;
  // Index of the first nonzero exponent, or size() for the identity.
  std::size_t depth() const;
  void resize(std::size_t n) { e_.resize(n, 0); }

  auto operator<=>(const Element&) const = default;
  bool operator==(const Element&) const = default;

 private:
  std::vector<std::uint8_t> e_;
};

struct ElementHash {
  std::size_t operator()(const Element& x) const noexcept;
};

struct Definition {
  enum class Kind : std::uint8_t { kNone, kPower, kCommutator };
  Kind kind = Kind::kNone;
  int j = -1;  // a_j^p, or [a_j, a_i]
  int i = -1;

  static Definition none() { return {}; }
  static Definition power(int j) { return {Kind::kPower, j, -1}; }
  static Definition commutator(int j, int i) { return {Kind::kCommutator, j, i}; }
  bool operator==(const Definition&) const = default;
};

// Raw relation data, 0-based. commutators[j * n + i] holds [a_j, a_i] for i < j.
struct PcData {
  int prime = 2;
  std::vector<int> weights;
  std::vector<Definition> definitions;
  std::vector<Element> powers;
  std::vector<Element> commutators;
};

// Consistent weighted power-commutator presentation of a finite p-group with
// a collector (collection from the left). Commutators are [x,y] = x^-1 y^-1 x y.
class PcPresentation {
 public:
  PcPresentation() : PcPresentation(trivial_data(2)) {}
  explicit PcPresentation(PcData data);

  static PcPresentation elementary_abelian(int p, int d);
  static PcPresentation trivial(int p);

  int prime() const { return data_.prime; }
  int ngens() const { return static_cast<int>(data_.weights.size()); }
  // Number of weight-one generators.
  int rank() const;
  int weight(int i) const { return data_.weights[i]; }
  int p_class() const { return data_.weights.empty() ? 0 : data_.weights.back(); }
  const std::vector<int>& weights() const { return data_.weights; }
  const Definition& definition(int i) const { return data_.definitions[i]; }
  const Element& power_rhs(int i) const { return data_.powers[i]; }
  const Element& commutator_rhs(int j, int i) const { return data_.commutators[j * ngens() + i]; }
  const PcData& data() const { return data_; }

  Element identity() const { return Element(static_cast<std::size_t>(ngens())); }
  Element generator(int i) const;

  // Collects a word given as signed 1-based generator indices (-k is a_k^-1).
  Element collect(std::span<const int> word) const;
  Element multiply(const Element& x, const Element& y) const;
  void multiply_in_place(Element& x, const Element& y) const;
  void multiply_generator(Element& x, int g, int times = 1) const;
  Element inverse(const Element& x) const;
  Element power(const Element& x, std::int64_t e) const;
  // x^-1 y
  Element left_quotient(const Element& x, const Element& y) const;
  // x^-1 y^-1 x y
  Element commutator(const Element& x, const Element& y) const;
  // y^-1 x y
  Element conjugate(const Element& x, const Element& y) const;

  // The quotient by all generators of weight > c.
  PcPresentation truncate(int c) const;
  // log_p of the group order.
  int order_log() const { return ngens(); }

  bool is_consistent() const;
  // Checks every relation's definition is pure: the defining relation has RHS a_k.
  bool has_pure_definitions() const;

  bool operator==(const PcPresentation& other) const;

  // Index of x as an integer in [0, p^n); requires p^n < 2^64.
  std::uint64_t encode(const Element& x) const;
  Element decode(std::uint64_t code) const;

  struct Hooks;
  friend struct CollectorAccess;

 private:
  static PcData trivial_data(int p);
  void build_tables();

  PcData data_;
  // a_k^{a_g} = a_k [a_k, a_g] as sparse (gen, exponent) lists, k > g.
  std::vector<std::vector<std::pair<std::uint16_t, std::uint8_t>>> conj_;
  std::vector<std::vector<std::pair<std::uint16_t, std::uint8_t>>> power_sparse_;
  std::vector<std::uint8_t> commutes_;
};

// Runs every standard consistency test, reporting each pair of collected
// results (left, right) that should agree.
void for_each_consistency_test(const PcPresentation& g,
                               const std::function<void(const Element&, const Element&)>& visit);

}  // namespace ptower::pc
