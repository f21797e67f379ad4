#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace ptower::linalg {

using Row = std::vector<std::uint8_t>;
using Matrix = std::vector<Row>;

bool is_prime(int n);

// Arithmetic in GF(p) for primes p < 256.
class PrimeField {
 public:
  explicit PrimeField(int p);

  int prime() const { return p_; }
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return static_cast<std::uint8_t>((a + b) % p_); }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return static_cast<std::uint8_t>((a + p_ - b) % p_); }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return static_cast<std::uint8_t>((a * b) % p_); }
  std::uint8_t neg(std::uint8_t a) const { return static_cast<std::uint8_t>((p_ - a) % p_); }
  std::uint8_t inv(std::uint8_t a) const { return inv_[a]; }
  // Smallest generator of the multiplicative group.
  std::uint8_t primitive_root() const;

 private:
  int p_;
  std::vector<std::uint8_t> inv_;
};

// row += c * other
void axpy(Row& row, std::uint8_t c, const Row& other, const PrimeField& f);

// Reduces the rows in place to reduced row echelon form, drops zero rows and
// returns the pivot column of each remaining row.
std::vector<int> rref(Matrix& rows, const PrimeField& f);

int rank(Matrix rows, const PrimeField& f);

// Reduces v against rows already in RREF (with their pivots). Returns true
// when v reduces to zero.
bool reduce(Row& v, const Matrix& basis, const std::vector<int>& pivots, const PrimeField& f);

// Basis of { x : x * A = 0 } where A has `rows.size()` rows.
Matrix left_kernel(const Matrix& a, int ncols, const PrimeField& f);

Row mul(const Row& v, const Matrix& a, int ncols, const PrimeField& f);
Matrix mul(const Matrix& a, const Matrix& b, int ncols, const PrimeField& f);
Matrix identity(int n);
std::optional<Matrix> inverse(const Matrix& a, const PrimeField& f);

// Solves x * basis = v where the basis rows are linearly independent.
std::optional<Row> solve_in_span(const Matrix& basis, const Row& v, const PrimeField& f);

// Incrementally built row space. Rows are kept in semi-echelon form; p = 2
// uses packed 64-bit words.
class EchelonSpace {
 public:
  EchelonSpace(int ncols, const PrimeField& f);

  // Reduces v and adds it if it is independent. Returns true if added.
  bool add(const Row& v);
  bool contains(const Row& v) const;
  int dimension() const { return static_cast<int>(pivots_.size()); }
  int ncols() const { return ncols_; }
  // Basis in reduced row echelon form with its pivot columns.
  Matrix rref_basis(std::vector<int>* pivots = nullptr) const;

 private:
  using Packed = std::vector<std::uint64_t>;
  Packed pack(const Row& v) const;

  int ncols_;
  PrimeField f_;
  std::vector<int> pivots_;
  Matrix rows_;
  std::vector<Packed> packed_;
};

}  // namespace ptower::linalg
