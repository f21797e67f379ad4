#include "ptower/linalg.hpp"

#include "ptower/errors.hpp"

namespace ptower::linalg {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(int p) : p_(p), inv_(static_cast<std::size_t>(p > 0 ? p : 1), 0) {
  if (!is_prime(p) || p > 251) throw InvalidArgument("prime field requires a prime below 256, got " + std::to_string(p));
  for (int a = 1; a < p; ++a)
    for (int b = 1; b < p; ++b)
      if ((a * b) % p == 1) {
        inv_[a] = static_cast<std::uint8_t>(b);
        break;
      }
}

std::uint8_t PrimeField::primitive_root() const {
  if (p_ == 2) return 1;
  for (int g = 2; g < p_; ++g) {
    int x = 1;
    int ord = 0;
    do {
      x = (x * g) % p_;
      ++ord;
    } while (x != 1);
    if (ord == p_ - 1) return static_cast<std::uint8_t>(g);
  }
  return 1;
}

void axpy(Row& row, std::uint8_t c, const Row& other, const PrimeField& f) {
  if (c == 0) return;
  const int p = f.prime();
  if (p == 2) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] ^= other[i];
    return;
  }
  for (std::size_t i = 0; i < row.size(); ++i)
    if (other[i]) row[i] = static_cast<std::uint8_t>((row[i] + c * other[i]) % p);
}

std::vector<int> rref(Matrix& rows, const PrimeField& f) {
  std::vector<int> pivots;
  if (rows.empty()) return pivots;
  const int ncols = static_cast<int>(rows.front().size());
  std::size_t r = 0;
  for (int col = 0; col < ncols && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const std::uint8_t s = f.inv(rows[r][col]);
    if (s != 1)
      for (auto& x : rows[r]) x = f.mul(x, s);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][col]) axpy(rows[i], f.neg(rows[i][col]), rows[r], f);
    pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

int rank(Matrix rows, const PrimeField& f) { return static_cast<int>(rref(rows, f).size()); }

bool reduce(Row& v, const Matrix& basis, const std::vector<int>& pivots, const PrimeField& f) {
  bool zero = true;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::uint8_t c = v[pivots[i]];
    if (c) axpy(v, f.neg(c), basis[i], f);
  }
  for (auto x : v)
    if (x) {
      zero = false;
      break;
    }
  return zero;
}

Matrix left_kernel(const Matrix& a, int ncols, const PrimeField& f) {
  const int m = static_cast<int>(a.size());
  // Augment [A | I] and row reduce on the A part.
  Matrix aug(m, Row(static_cast<std::size_t>(ncols + m), 0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < ncols; ++j) aug[i][j] = a[i][j];
    aug[i][ncols + i] = 1;
  }
  std::size_t r = 0;
  for (int col = 0; col < ncols && r < aug.size(); ++col) {
    std::size_t sel = r;
    while (sel < aug.size() && aug[sel][col] == 0) ++sel;
    if (sel == aug.size()) continue;
    std::swap(aug[r], aug[sel]);
    const std::uint8_t s = f.inv(aug[r][col]);
    for (auto& x : aug[r]) x = f.mul(x, s);
    for (std::size_t i = 0; i < aug.size(); ++i)
      if (i != r && aug[i][col]) axpy(aug[i], f.neg(aug[i][col]), aug[r], f);
    ++r;
  }
  Matrix kernel;
  for (std::size_t i = r; i < aug.size(); ++i) kernel.emplace_back(aug[i].begin() + ncols, aug[i].end());
  rref(kernel, f);
  return kernel;
}

Row mul(const Row& v, const Matrix& a, int ncols, const PrimeField& f) {
  Row out(static_cast<std::size_t>(ncols), 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) axpy(out, v[i], a[i], f);
  return out;
}

Matrix mul(const Matrix& a, const Matrix& b, int ncols, const PrimeField& f) {
  Matrix out;
  out.reserve(a.size());
  for (const auto& row : a) out.push_back(mul(row, b, ncols, f));
  return out;
}

Matrix identity(int n) {
  Matrix m(n, Row(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

std::optional<Matrix> inverse(const Matrix& a, const PrimeField& f) {
  const int n = static_cast<int>(a.size());
  Matrix aug(n, Row(static_cast<std::size_t>(2 * n), 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int sel = col;
    while (sel < n && aug[sel][col] == 0) ++sel;
    if (sel == n) return std::nullopt;
    std::swap(aug[col], aug[sel]);
    const std::uint8_t s = f.inv(aug[col][col]);
    for (auto& x : aug[col]) x = f.mul(x, s);
    for (int i = 0; i < n; ++i)
      if (i != col && aug[i][col]) axpy(aug[i], f.neg(aug[i][col]), aug[col], f);
  }
  Matrix out;
  out.reserve(n);
  for (auto& row : aug) out.emplace_back(row.begin() + n, row.end());
  return out;
}

std::optional<Row> solve_in_span(const Matrix& basis, const Row& v, const PrimeField& f) {
  const int k = static_cast<int>(basis.size());
  const int n = static_cast<int>(v.size());
  // Reduce [basis | I] to echelon form, then eliminate v.
  Matrix aug(k, Row(static_cast<std::size_t>(n + k), 0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = basis[i][j];
    aug[i][n + i] = 1;
  }
  std::vector<int> piv;
  std::size_t r = 0;
  for (int col = 0; col < n && r < aug.size(); ++col) {
    std::size_t sel = r;
    while (sel < aug.size() && aug[sel][col] == 0) ++sel;
    if (sel == aug.size()) continue;
    std::swap(aug[r], aug[sel]);
    const std::uint8_t s = f.inv(aug[r][col]);
    for (auto& x : aug[r]) x = f.mul(x, s);
    for (std::size_t i = 0; i < aug.size(); ++i)
      if (i != r && aug[i][col]) axpy(aug[i], f.neg(aug[i][col]), aug[r], f);
    piv.push_back(col);
    ++r;
  }
  Row w(static_cast<std::size_t>(n + k), 0);
  for (int j = 0; j < n; ++j) w[j] = v[j];
  for (std::size_t i = 0; i < piv.size(); ++i) {
    const std::uint8_t c = w[piv[i]];
    if (c) axpy(w, f.neg(c), aug[i], f);
  }
  for (int j = 0; j < n; ++j)
    if (w[j]) return std::nullopt;
  Row x(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < k; ++i) x[i] = f.neg(w[n + i]);
  return x;
}

EchelonSpace::EchelonSpace(int ncols, const PrimeField& f) : ncols_(ncols), f_(f) {}

EchelonSpace::Packed EchelonSpace::pack(const Row& v) const {
  Packed w(static_cast<std::size_t>((ncols_ + 63) / 64), 0);
  for (int i = 0; i < ncols_; ++i)
    if (v[i] & 1) w[i >> 6] |= std::uint64_t{1} << (i & 63);
  return w;
}

bool EchelonSpace::add(const Row& v) {
  if (f_.prime() == 2) {
    Packed w = pack(v);
    for (std::size_t r = 0; r < packed_.size(); ++r) {
      const int c = pivots_[r];
      if ((w[c >> 6] >> (c & 63)) & 1)
        for (std::size_t k = 0; k < w.size(); ++k) w[k] ^= packed_[r][k];
    }
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k]) {
        pivots_.push_back(static_cast<int>(k * 64 + __builtin_ctzll(w[k])));
        packed_.push_back(std::move(w));
        return true;
      }
    return false;
  }
  Row w = v;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::uint8_t c = w[pivots_[r]];
    if (c) axpy(w, f_.neg(c), rows_[r], f_);
  }
  for (int i = 0; i < ncols_; ++i)
    if (w[i]) {
      const std::uint8_t s = f_.inv(w[i]);
      for (auto& x : w) x = f_.mul(x, s);
      pivots_.push_back(i);
      rows_.push_back(std::move(w));
      return true;
    }
  return false;
}

bool EchelonSpace::contains(const Row& v) const {
  if (f_.prime() == 2) {
    Packed w = pack(v);
    for (std::size_t r = 0; r < packed_.size(); ++r) {
      const int c = pivots_[r];
      if ((w[c >> 6] >> (c & 63)) & 1)
        for (std::size_t k = 0; k < w.size(); ++k) w[k] ^= packed_[r][k];
    }
    for (auto x : w)
      if (x) return false;
    return true;
  }
  Row w = v;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::uint8_t c = w[pivots_[r]];
    if (c) axpy(w, f_.neg(c), rows_[r], f_);
  }
  for (auto x : w)
    if (x) return false;
  return true;
}

Matrix EchelonSpace::rref_basis(std::vector<int>* pivots) const {
  Matrix m;
  if (f_.prime() == 2) {
    for (const auto& w : packed_) {
      Row r(static_cast<std::size_t>(ncols_), 0);
      for (int i = 0; i < ncols_; ++i) r[i] = static_cast<std::uint8_t>((w[i >> 6] >> (i & 63)) & 1);
      m.push_back(std::move(r));
    }
  } else {
    m = rows_;
  }
  auto piv = rref(m, f_);
  if (pivots) *pivots = std::move(piv);
  return m;
}

}  // namespace ptower::linalg
