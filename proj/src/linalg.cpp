#include "msr/linalg.hpp"

#include <string>
#include <utility>

#include "msr/error.hpp"

namespace msr {
namespace {

void require_square(const Matrix& a, const char* what) {
  if (!a.is_square()) {
    throw DimensionMismatch(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
}

// row[dst] -= factor * row[src], starting at column `from`.
void eliminate(const PrimeField& f, Matrix& m, std::size_t dst, std::size_t src, Symbol factor, std::size_t from) {
  auto d = m.row(dst);
  auto s = m.row(src);
  const Symbol nf = f.neg(factor);
  for (std::size_t c = from; c < m.cols(); ++c) {
    if (s[c] != 0) d[c] = f.mul_add(d[c], nf, s[c]);
  }
}

void swap_rows(Matrix& m, std::size_t a, std::size_t b) {
  auto ra = m.row(a);
  auto rb = m.row(b);
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(ra[c], rb[c]);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Symbol> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw DimensionMismatch("matrix data length does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Symbol> Matrix::column(std::size_t c) const {
  std::vector<Symbol> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
  Matrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_) throw DimensionMismatch("set_block out of range");
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) (*this)(r0 + r, c0 + c) = m(r, c);
}

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
  Matrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = row(idx[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> idx) const {
  Matrix out(rows_, idx.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t i = 0; i < idx.size(); ++i) out(r, i) = (*this)(r, idx[i]);
  return out;
}

bool Matrix::is_zero() const noexcept {
  for (auto v : data_)
    if (v != 0) return false;
  return true;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
    os << '\n';
  }
  return os;
}

Matrix hconcat(std::span<const Matrix> parts) {
  if (parts.empty()) return {};
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw DimensionMismatch("hconcat: row counts differ");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::size_t c0 = 0;
  for (const auto& p : parts) {
    out.set_block(0, c0, p);
    c0 += p.cols();
  }
  return out;
}

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const Symbol s = a(i, t);
      if (s == 0) continue;
      auto src = b.row(t);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] = f.mul_add(dst[j], s, src[j]);
    }
  }
  return out;
}

std::vector<Symbol> multiply(const PrimeField& f, const Matrix& a, std::span<const Symbol> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("multiply: vector length differs from column count");
  std::vector<Symbol> out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    unsigned __int128 acc = 0;
    // Accumulate unreduced; 2^64 products of 63-bit values would overflow
    // 128 bits, so fold periodically.
    std::size_t pending = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] == 0 || x[j] == 0) continue;
      acc += static_cast<unsigned __int128>(r[j]) * x[j];
      if (++pending == 2) {
        acc %= f.modulus();
        pending = 0;
      }
    }
    out[i] = static_cast<Symbol>(acc % f.modulus());
  }
  return out;
}

Symbol determinant(const PrimeField& f, Matrix a) {
  require_square(a, "determinant");
  const std::size_t n = a.rows();
  Symbol det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      swap_rows(a, pivot, col);
      det = f.neg(det);
    }
    const Symbol p = a(col, col);
    det = f.mul(det, p);
    const Symbol p_inv = f.inv(p);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) != 0) eliminate(f, a, r, col, f.mul(a(r, col), p_inv), col);
    }
  }
  return det;
}

std::size_t rank(const PrimeField& f, Matrix a) {
  std::size_t rk = 0;
  for (std::size_t col = 0; col < a.cols() && rk < a.rows(); ++col) {
    std::size_t pivot = rk;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    swap_rows(a, pivot, rk);
    const Symbol p_inv = f.inv(a(rk, col));
    for (std::size_t r = rk + 1; r < a.rows(); ++r) {
      if (a(r, col) != 0) eliminate(f, a, r, rk, f.mul(a(r, col), p_inv), col);
    }
    ++rk;
  }
  return rk;
}

std::optional<Matrix> invert(const PrimeField& f, const Matrix& a) {
  require_square(a, "invert");
  const std::size_t n = a.rows();
  // Gauss-Jordan on [A | I].
  Matrix aug(n, 2 * n);
  aug.set_block(0, 0, a);
  aug.set_block(0, n, Matrix::identity(n));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && aug(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) swap_rows(aug, pivot, col);
    const Symbol p_inv = f.inv(aug(col, col));
    for (auto& v : aug.row(col)) v = f.mul(v, p_inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r != col && aug(r, col) != 0) eliminate(f, aug, r, col, aug(r, col), col);
    }
  }
  return aug.block(0, n, n, n);
}

std::optional<std::vector<Symbol>> solve(const PrimeField& f, const Matrix& a, std::span<const Symbol> b) {
  require_square(a, "solve");
  if (b.size() != a.rows()) throw DimensionMismatch("solve: right-hand side length differs from row count");
  const std::size_t n = a.rows();
  Matrix aug(n, n + 1);
  aug.set_block(0, 0, a);
  for (std::size_t r = 0; r < n; ++r) aug(r, n) = f.reduce(b[r]);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && aug(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) swap_rows(aug, pivot, col);
    const Symbol p_inv = f.inv(aug(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (aug(r, col) != 0) eliminate(f, aug, r, col, f.mul(aug(r, col), p_inv), col);
    }
  }
  std::vector<Symbol> x(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    Symbol acc = aug(i, n);
    for (std::size_t c = i + 1; c < n; ++c) acc = f.sub(acc, f.mul(aug(i, c), x[c]));
    x[i] = f.div(acc, aug(i, i));
  }
  return x;
}

std::vector<std::size_t> independent_rows(const PrimeField& f, const Matrix& a) {
  // Incremental echelon basis; each kept row is stored reduced with its pivot.
  std::vector<std::vector<Symbol>> basis;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < a.rows() && kept.size() < a.cols(); ++r) {
    std::vector<Symbol> v(a.row(r).begin(), a.row(r).end());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Symbol coef = v[pivots[b]];
      if (coef == 0) continue;
      const Symbol nc = f.neg(coef);
      for (std::size_t c = pivots[b]; c < v.size(); ++c) {
        if (basis[b][c] != 0) v[c] = f.mul_add(v[c], nc, basis[b][c]);
      }
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) continue;
    const Symbol p_inv = f.inv(v[p]);
    for (auto& x : v) x = f.mul(x, p_inv);
    // Keep the basis fully reduced in the new pivot column.
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Symbol coef = basis[b][p];
      if (coef == 0) continue;
      const Symbol nc = f.neg(coef);
      for (std::size_t c = p; c < v.size(); ++c) {
        if (v[c] != 0) basis[b][c] = f.mul_add(basis[b][c], nc, v[c]);
      }
    }
    basis.push_back(std::move(v));
    pivots.push_back(p);
    kept.push_back(r);
  }
  return kept;
}

}  // namespace msr
