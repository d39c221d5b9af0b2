#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "msr/construct.hpp"
#include "msr/field.hpp"
#include "msr/linalg.hpp"

namespace msr {

using NodeVector = std::vector<Symbol>;

// n nodes of ell symbols each; nodes[i][a] is coordinate a of node i.
struct Codeword {
  std::vector<NodeVector> nodes;

  Codeword() = default;
  Codeword(std::size_t n, std::size_t ell) : nodes(n, NodeVector(ell, 0)) {}
  explicit Codeword(std::vector<NodeVector> v) : nodes(std::move(v)) {}

  std::size_t size() const noexcept { return nodes.size(); }
  NodeVector& operator[](std::size_t i) { return nodes[i]; }
  const NodeVector& operator[](std::size_t i) const { return nodes[i]; }

  friend bool operator==(const Codeword&, const Codeword&) = default;
};

// alpha * x + y, symbol-wise.
Codeword axpy(const PrimeField& f, Symbol alpha, const Codeword& x, const Codeword& y);

// Sum over nodes of A_i C_i, one length-r vector per block row.
std::vector<std::vector<Symbol>> parity_syndrome(const CodeParams& params, const ParityBlocks& blocks,
                                                 const Codeword& cw);

bool verify_codeword(const CodeParams& params, const ParityBlocks& blocks, const Codeword& cw);

// Solves the erased columns of a block parity-check system
//   sum_t M_t x_t = 0
// given the remaining columns. The recovery map is computed once at
// construction and then applied per call, so one instance serves many stripes.
class ColumnRecovery {
 public:
  // Throws Error if the erased columns are not uniquely determined.
  ColumnRecovery(const PrimeField& field, std::span<const SparseBlockMatrix> columns, std::vector<int> erased);

  const std::vector<int>& erased() const noexcept { return erased_; }
  // True when every parity row took part in the solve, so any input yields a
  // consistent result.
  bool uses_all_rows() const noexcept { return all_rows_; }

  // values[t] must be filled for every non-erased column; erased entries are
  // overwritten.
  void recover(std::vector<NodeVector>& values) const;

 private:
  PrimeField field_;
  std::vector<int> erased_;
  std::vector<int> known_;
  std::vector<std::size_t> widths_;
  Matrix recovery_;  // erased = recovery_ * known
  bool all_rows_ = false;
};

// Generic dense decoder for one erasure set of the main code.
class ErasureDecoder {
 public:
  // Throws TooManyErasures if |F| > r, InvalidParams on bad node indices.
  ErasureDecoder(const CodeParams& params, const ParityBlocks& blocks, std::span<const int> erased);

  const std::vector<int>& erased() const noexcept { return recovery_.erased(); }

  // Fills in the erased nodes; throws InconsistentSurvivors when the result is
  // not a codeword.
  Codeword decode(Codeword cw) const;
  // Fills in the erased nodes without the final parity check.
  void fill(Codeword& cw) const { recovery_.recover(cw.nodes); }

 private:
  CodeParams params_;
  ParityBlocks blocks_;
  ColumnRecovery recovery_;
};

// Systematic encoder: nodes 0..k-1 carry data, k..n-1 parity.
class Encoder {
 public:
  Encoder(const CodeParams& params, const ParityBlocks& blocks);
  Codeword encode(std::span<const NodeVector> data) const;

 private:
  int k_;
  std::size_t ell_;
  ErasureDecoder parity_;
};

Codeword encode(const CodeParams& params, const ParityBlocks& blocks, std::span<const NodeVector> data);

// ---------------------------------------------------------------------------
// Erasure classification

// Within-group failure shapes, in type order 1..7 (stored 0..6).
inline constexpr std::array<std::array<bool, 3>, 7> kTypeShapes{{
    {true, true, true},
    {true, true, false},
    {true, false, true},
    {false, true, true},
    {true, false, false},
    {false, true, false},
    {false, false, true},
}};
inline constexpr std::array<int, 7> kTypeWeights{3, 2, 2, 2, 1, 1, 1};

using TypeCounts = std::array<int, 7>;

struct ErasureType {
  TypeCounts z{};
  std::array<std::vector<int>, 7> groups;  // group indices per type

  int weighted_count() const noexcept;
  int total() const noexcept;  // z_1 + ... + z_7
};

int weighted_count(const TypeCounts& z) noexcept;

// Throws InvalidParams for out-of-range or duplicate indices.
ErasureType classify_erasure(const CodeParams& params, std::span<const int> erased);

// Canonical pattern: type-1 groups first, then type 2, ... as consecutive
// group ranges starting at group 0. Sorted node indices.
std::vector<int> canonical_pattern(const TypeCounts& z);

// ---------------------------------------------------------------------------
// Group swaps

struct GroupSwap {
  int i;
  int j;
};

// Validated swap with i < j; throws InvalidParams for i == j or out of range.
GroupSwap make_swap(const CodeParams& params, int i, int j);

// Exchanges binary digits i and j of a coordinate index.
std::size_t swap_digits(std::size_t a, int i, int j) noexcept;

CodeParams group_swap_params(const CodeParams& params, GroupSwap s);
Codeword group_swap_word(const Codeword& cw, GroupSwap s);
std::vector<int> group_swap_nodes(std::span<const int> nodes, GroupSwap s);

// Swaps that move every erased group into canonical position (type order,
// ties by original group index).
std::vector<GroupSwap> canonicalizing_swaps(const CodeParams& params, std::span<const int> erased);

// ---------------------------------------------------------------------------
// Decoding

// Dense decode over all block rows. Throws TooManyErasures or
// InconsistentSurvivors.
Codeword decode_erasures(const CodeParams& params, const ParityBlocks& blocks, Codeword cw,
                         std::span<const int> erased);

// Canonicalize by group swaps, solve the ell / 2^z independent systems built
// from the top-left corners of the erased nodes' matrices, swap back.
Codeword decode_erasures_structured(const CodeParams& params, const ParityBlocks& blocks, Codeword cw,
                                    std::span<const int> erased);

}  // namespace msr
