#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "msr/codec.hpp"
#include "msr/construct.hpp"
#include "msr/linalg.hpp"

namespace msr {

// Instances above this length are refused by the exhaustive sweeps.
inline constexpr int kSweepMaxNodes = 12;

// Type vectors z with weighted count r that fit into `groups` groups.
std::vector<TypeCounts> enumerate_type_vectors(int r, int groups);

// Square 2^z r matrix: the top-left 2^z corners of the erased nodes'
// matrices for the canonical pattern of z, side by side in node order.
// Throws InvalidParams unless weighted_count(z) == r and z fits.
Matrix build_M(const CodeParams& params, const ParityBlocks& blocks, const TypeCounts& z);

// Polynomials are coefficient vectors, lowest degree first.
using Poly = std::vector<Symbol>;

Poly poly_mul(const PrimeField& f, const Poly& a, const Poly& b);
Symbol poly_eval(const PrimeField& f, const Poly& a, Symbol x);

struct FilterPolys {
  int z1 = 0;
  std::vector<std::vector<Poly>> factors;  // factors[a][i] = g_{a,i}
  std::vector<Poly> f;                     // f[a], degree 2 z1
};

FilterPolys build_filter_polys(const CodeParams& params, int z1);

// Block-diagonal 2^z1 z1 x 2^z1 r filter. Throws Case1Only unless r == 3 z1.
Matrix build_filter_F(const CodeParams& params, int z1);

// Columns of F M_z, z = (z1, 0, ..., 0), that the filter leaves nonzero:
// node 3i at b with b_i = 1 and node 3i+1 at b with b_i = 0, in M's order.
Matrix build_Q(const CodeParams& params, const ParityBlocks& blocks, int z1);

// Compares F M_z block by block with the closed form
//   B_3i(a,a)   =  f_a(l_{6i+1}) L'   (a_i = 1)
//   B_3i(a,b)   = -f_a(l_{6i+1}) L'   (a_i = 0, b = a + 2^i)
//   B_3i+1(a,a) =  f_a(l_{6i+2}) L'   (a_i = 0)
//   B_3i+1(a,b) = -f_a(l_{6i+2}) L'   (a_i = 1, b = a - 2^i)
//   B_3i+2      =  0
// with f_a evaluated as a product of linear factors and L' of length z1.
bool filtered_blocks_match(const CodeParams& params, const ParityBlocks& blocks, int z1);

// (r-2) x r shifted-window filter of (x - l_{6z-6})(x - l_{6z-3}).
Matrix build_case2_filter(const CodeParams& params, int z);

// I_u (x) m
Matrix kron_identity(std::size_t u, const Matrix& m);

// All m-subsets of [0, n) in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int m);

struct SweepReport {
  std::vector<std::string> lines;  // "kind pattern result bandwidth"
  std::size_t total = 0;
  std::size_t passed = 0;

  bool all_passed() const noexcept { return total == passed; }
};

// Every r-erasure pattern of a random codeword, decoded by the generic and
// the structured decoder.
SweepReport sweep_mds(const CodeParams& params, std::uint64_t seed = 1);

// Every failed node with every d-subset of the other nodes as helpers.
SweepReport sweep_repair(const CodeParams& params, std::uint64_t seed = 1);

// det(M_z) != 0 for every type vector of weight r.
SweepReport sweep_block_determinants(const CodeParams& params);

}  // namespace msr
