#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "msr/field.hpp"
#include "msr/linalg.hpp"

namespace msr {

// A formal signed combination of Vandermonde columns, e.g. L0 - L1. Blocks
// carry this alongside their numeric value so structure can be compared
// symbolically.
class LTag {
 public:
  LTag() = default;
  static LTag single(int index, int coef = 1);

  LTag operator+(const LTag& o) const;
  LTag operator-(const LTag& o) const;
  LTag operator-() const;

  bool is_zero() const noexcept { return terms_.empty(); }
  // (lambda index, coefficient) pairs sorted by index, no zero coefficients.
  const std::vector<std::pair<int, int>>& terms() const noexcept { return terms_; }
  // Lambda indices appearing with nonzero coefficient.
  std::vector<int> indices() const;

  // "L0-L1", "-L1", "0"
  std::string to_string() const;

  friend bool operator==(const LTag&, const LTag&) = default;

 private:
  std::vector<std::pair<int, int>> terms_;
};

struct BlockEntry {
  std::size_t col;
  LTag tag;
  std::vector<Symbol> value;  // length r
};

// Block matrix whose entries are length-`height` columns, stored sparsely by
// block row. Used both for the parity-check blocks A_i and for the folded
// matrices of the repair system.
class SparseBlockMatrix {
 public:
  SparseBlockMatrix() = default;
  SparseBlockMatrix(std::size_t block_rows, std::size_t block_cols, std::size_t height)
      : block_cols_(block_cols), height_(height), rows_(block_rows) {}

  std::size_t block_rows() const noexcept { return rows_.size(); }
  std::size_t block_cols() const noexcept { return block_cols_; }
  std::size_t height() const noexcept { return height_; }

  // Adds `value` (with its tag) into block (a, b); entries that cancel to an
  // all-zero tag are removed.
  void accumulate(std::size_t a, std::size_t b, const LTag& tag, std::span<const Symbol> value,
                  const PrimeField& f);

  std::span<const BlockEntry> row(std::size_t a) const { return rows_[a]; }
  const BlockEntry* find(std::size_t a, std::size_t b) const;
  std::size_t nonzero_blocks() const noexcept;

  // Top-left u*height x u dense rendering.
  Matrix dense(std::size_t u) const;
  Matrix dense() const { return dense(block_rows()); }

 private:
  std::size_t block_cols_ = 0;
  std::size_t height_ = 0;
  std::vector<std::vector<BlockEntry>> rows_;
};

// Binary digit `digit` of coordinate index a.
constexpr int digit_of(std::size_t a, int digit) noexcept { return static_cast<int>((a >> digit) & 1U); }

// Insert bit `value` at position `digit`, shifting higher bits up.
constexpr std::size_t insert_digit(std::size_t a, int digit, int value) noexcept {
  const std::size_t low = a & ((std::size_t{1} << digit) - 1);
  const std::size_t high = (a >> digit) << (digit + 1);
  return high | (static_cast<std::size_t>(value) << digit) | low;
}

struct CodeParams {
  int n = 0;
  int k = 0;
  int r = 0;
  int d = 0;
  std::size_t ell = 0;
  PrimeField field{2};
  std::vector<Symbol> lambdas;  // 2n values

  int groups() const noexcept { return n / 3; }
  Symbol lambda(int j) const { return lambdas.at(static_cast<std::size_t>(j)); }
};

// Smallest prime >= max(2n+1, 257): one byte per symbol in file mode.
std::uint64_t default_modulus(int n);

// Smallest prime >= 2n+1, the least field the construction allows.
std::uint64_t minimal_modulus(int n);

// Throws InvalidParams (n not a multiple of 3, k out of range) or FieldTooSmall.
CodeParams make_params(int n, int k, std::optional<std::uint64_t> p = std::nullopt);

// Build from an explicit lambda list; validates distinctness and the
// per-group gamma inequality.
CodeParams make_params(int n, int k, const PrimeField& field, std::vector<Symbol> lambdas);

// Deterministic greedy choice: per group take the 7 smallest unused field
// elements, use the first five directly, and pick the sixth so the group's
// two gamma values differ.
std::vector<Symbol> select_lambdas(int n, const PrimeField& field);

// which = 1 or 2: gamma_{6i+1} or gamma_{6i+2}.
Symbol gamma(const CodeParams& params, int group, int which);

// (1, lambda, ..., lambda^(r-1))
std::vector<Symbol> column_L(Symbol lambda, int r, const PrimeField& field);

struct ParityBlocks {
  std::size_t ell = 0;
  int r = 0;
  std::vector<SparseBlockMatrix> nodes;  // A_0 .. A_{n-1}

  const SparseBlockMatrix& operator[](std::size_t i) const { return nodes[i]; }
  std::size_t size() const noexcept { return nodes.size(); }
};

ParityBlocks build_parity_blocks(const CodeParams& params);

// One node's matrix under the construction rule: `role` is the position in
// the group (0, 1, 2), `digit` the coordinate digit it acts on, and the
// lambdas used are lambdas[sextet_base .. sextet_base+5]. build_parity_blocks
// is this with digit = group and sextet_base = 6 * group.
SparseBlockMatrix construction_block(int role, int digit, int sextet_base, std::size_t ell, int r,
                                     std::span<const Symbol> lambdas, const PrimeField& field);

// Dense top-left (u*r x u) corner of A_node.
Matrix submatrix_A(const CodeParams& params, const ParityBlocks& blocks, int node, std::size_t u);

}  // namespace msr
