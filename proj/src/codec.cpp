#include "msr/codec.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "msr/error.hpp"

namespace msr {
namespace {

std::vector<int> normalize_erasures(const CodeParams& params, std::span<const int> erased) {
  std::vector<int> out(erased.begin(), erased.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw InvalidParams("duplicate node in erasure set");
  for (int i : out)
    if (i < 0 || i >= params.n) throw InvalidParams("node index " + std::to_string(i) + " out of range");
  if (static_cast<int>(out.size()) > params.r) {
    throw TooManyErasures(std::to_string(out.size()) + " erasures exceed r = " + std::to_string(params.r));
  }
  return out;
}

void check_shape(const CodeParams& params, const Codeword& cw) {
  if (cw.size() != static_cast<std::size_t>(params.n)) throw DimensionMismatch("codeword has wrong node count");
  for (const auto& node : cw.nodes)
    if (node.size() != params.ell) throw DimensionMismatch("codeword node has wrong length");
}

// Dense rendering of a list of block columns, stacked side by side.
Matrix stack_columns(std::span<const SparseBlockMatrix> columns, std::span<const int> which) {
  const std::size_t rows = columns[0].block_rows();
  const std::size_t h = columns[0].height();
  std::size_t width = 0;
  for (int t : which) width += columns[static_cast<std::size_t>(t)].block_cols();
  Matrix m(rows * h, width);
  std::size_t c0 = 0;
  for (int t : which) {
    const auto& col = columns[static_cast<std::size_t>(t)];
    for (std::size_t a = 0; a < rows; ++a) {
      for (const auto& e : col.row(a)) {
        for (std::size_t s = 0; s < h; ++s) m(a * h + s, c0 + e.col) = e.value[s];
      }
    }
    c0 += col.block_cols();
  }
  return m;
}

}  // namespace

Codeword axpy(const PrimeField& f, Symbol alpha, const Codeword& x, const Codeword& y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy: codeword sizes differ");
  Codeword out = y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != y[i].size()) throw DimensionMismatch("axpy: node lengths differ");
    for (std::size_t a = 0; a < x[i].size(); ++a) out[i][a] = f.mul_add(y[i][a], alpha, x[i][a]);
  }
  return out;
}

std::vector<std::vector<Symbol>> parity_syndrome(const CodeParams& params, const ParityBlocks& blocks,
                                                 const Codeword& cw) {
  check_shape(params, cw);
  const PrimeField& f = params.field;
  std::vector<std::vector<Symbol>> syn(params.ell, std::vector<Symbol>(static_cast<std::size_t>(params.r), 0));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t a = 0; a < params.ell; ++a) {
      for (const auto& e : blocks[i].row(a)) {
        const Symbol c = cw[i][e.col];
        if (c == 0) continue;
        for (std::size_t s = 0; s < e.value.size(); ++s) syn[a][s] = f.mul_add(syn[a][s], e.value[s], c);
      }
    }
  }
  return syn;
}

bool verify_codeword(const CodeParams& params, const ParityBlocks& blocks, const Codeword& cw) {
  for (const auto& row : parity_syndrome(params, blocks, cw))
    for (auto v : row)
      if (v != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// ColumnRecovery

ColumnRecovery::ColumnRecovery(const PrimeField& field, std::span<const SparseBlockMatrix> columns,
                               std::vector<int> erased)
    : field_(field), erased_(std::move(erased)) {
  if (columns.empty()) throw InvalidParams("no columns to solve");
  std::sort(erased_.begin(), erased_.end());
  for (auto& c : columns) widths_.push_back(c.block_cols());
  for (int t = 0; t < static_cast<int>(columns.size()); ++t)
    if (!std::binary_search(erased_.begin(), erased_.end(), t)) known_.push_back(t);
  if (erased_.empty()) {
    all_rows_ = true;
    return;
  }

  const Matrix me = stack_columns(columns, erased_);
  const Matrix mk = stack_columns(columns, known_);
  const auto rows = independent_rows(field_, me);
  if (rows.size() < me.cols()) throw Error("erased columns are not uniquely determined by the survivors");
  all_rows_ = rows.size() == me.rows();
  auto inv = invert(field_, me.select_rows(rows));
  if (!inv) throw Error("selected parity rows are singular");
  Matrix rhs = mk.select_rows(rows);
  for (std::size_t r = 0; r < rhs.rows(); ++r)
    for (auto& v : rhs.row(r)) v = field_.neg(v);
  recovery_ = multiply(field_, *inv, rhs);
}

void ColumnRecovery::recover(std::vector<NodeVector>& values) const {
  if (values.size() != widths_.size()) throw DimensionMismatch("column count differs from the system");
  if (erased_.empty()) return;
  std::vector<Symbol> known;
  known.reserve(recovery_.cols());
  for (int t : known_) {
    const auto& v = values[static_cast<std::size_t>(t)];
    if (v.size() != widths_[static_cast<std::size_t>(t)]) throw DimensionMismatch("known column has wrong length");
    known.insert(known.end(), v.begin(), v.end());
  }
  const auto solved = multiply(field_, recovery_, known);
  std::size_t off = 0;
  for (int t : erased_) {
    const std::size_t w = widths_[static_cast<std::size_t>(t)];
    values[static_cast<std::size_t>(t)].assign(solved.begin() + static_cast<std::ptrdiff_t>(off),
                                               solved.begin() + static_cast<std::ptrdiff_t>(off + w));
    off += w;
  }
}

// ---------------------------------------------------------------------------
// ErasureDecoder / Encoder

ErasureDecoder::ErasureDecoder(const CodeParams& params, const ParityBlocks& blocks, std::span<const int> erased)
    : params_(params),
      blocks_(blocks),
      recovery_(params.field, blocks.nodes, normalize_erasures(params, erased)) {}

Codeword ErasureDecoder::decode(Codeword cw) const {
  check_shape(params_, cw);
  recovery_.recover(cw.nodes);
  if (!verify_codeword(params_, blocks_, cw)) {
    throw InconsistentSurvivors("surviving nodes are not consistent with any codeword");
  }
  return cw;
}

namespace {

std::vector<int> parity_nodes(const CodeParams& params) {
  std::vector<int> out(static_cast<std::size_t>(params.r));
  std::iota(out.begin(), out.end(), params.k);
  return out;
}

}  // namespace

Encoder::Encoder(const CodeParams& params, const ParityBlocks& blocks)
    : k_(params.k), ell_(params.ell), parity_(params, blocks, parity_nodes(params)) {}

Codeword Encoder::encode(std::span<const NodeVector> data) const {
  if (data.size() != static_cast<std::size_t>(k_)) throw DimensionMismatch("encode expects k data nodes");
  const std::size_t n = static_cast<std::size_t>(k_) + parity_.erased().size();
  Codeword cw(n, ell_);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].size() != ell_) throw DimensionMismatch("data node has wrong length");
    cw[i] = data[i];
  }
  parity_.fill(cw);
  return cw;
}

Codeword encode(const CodeParams& params, const ParityBlocks& blocks, std::span<const NodeVector> data) {
  return Encoder(params, blocks).encode(data);
}

// ---------------------------------------------------------------------------
// Classification

int weighted_count(const TypeCounts& z) noexcept {
  int s = 0;
  for (std::size_t t = 0; t < 7; ++t) s += kTypeWeights[t] * z[t];
  return s;
}

int ErasureType::weighted_count() const noexcept { return msr::weighted_count(z); }

int ErasureType::total() const noexcept { return std::accumulate(z.begin(), z.end(), 0); }

ErasureType classify_erasure(const CodeParams& params, std::span<const int> erased) {
  std::vector<int> f(erased.begin(), erased.end());
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw InvalidParams("duplicate node in erasure set");
  std::vector<std::array<bool, 3>> hit(static_cast<std::size_t>(params.groups()), {false, false, false});
  for (int i : f) {
    if (i < 0 || i >= params.n) throw InvalidParams("node index " + std::to_string(i) + " out of range");
    hit[static_cast<std::size_t>(i / 3)][static_cast<std::size_t>(i % 3)] = true;
  }
  ErasureType out;
  for (int g = 0; g < params.groups(); ++g) {
    for (std::size_t t = 0; t < 7; ++t) {
      if (hit[static_cast<std::size_t>(g)] == kTypeShapes[t]) {
        out.z[t]++;
        out.groups[t].push_back(g);
      }
    }
  }
  return out;
}

std::vector<int> canonical_pattern(const TypeCounts& z) {
  std::vector<int> out;
  int group = 0;
  for (std::size_t t = 0; t < 7; ++t) {
    for (int c = 0; c < z[t]; ++c, ++group) {
      for (int role = 0; role < 3; ++role)
        if (kTypeShapes[t][static_cast<std::size_t>(role)]) out.push_back(3 * group + role);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group swaps

GroupSwap make_swap(const CodeParams& params, int i, int j) {
  if (i == j) throw InvalidParams("a group swap needs two distinct groups");
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= params.groups()) throw InvalidParams("group index out of range");
  return {i, j};
}

std::size_t swap_digits(std::size_t a, int i, int j) noexcept {
  const std::size_t bi = (a >> i) & 1U;
  const std::size_t bj = (a >> j) & 1U;
  if (bi == bj) return a;
  return a ^ ((std::size_t{1} << i) | (std::size_t{1} << j));
}

CodeParams group_swap_params(const CodeParams& params, GroupSwap s) {
  CodeParams out = params;
  for (int t = 0; t < 6; ++t) {
    std::swap(out.lambdas[static_cast<std::size_t>(6 * s.i + t)], out.lambdas[static_cast<std::size_t>(6 * s.j + t)]);
  }
  return out;
}

Codeword group_swap_word(const Codeword& cw, GroupSwap s) {
  Codeword out = cw;
  for (std::size_t node = 0; node < cw.size(); ++node) {
    const int g = static_cast<int>(node / 3);
    std::size_t src = node;
    if (g == s.i) src = node + 3 * static_cast<std::size_t>(s.j - s.i);
    if (g == s.j) src = node - 3 * static_cast<std::size_t>(s.j - s.i);
    const auto& from = cw[src];
    for (std::size_t a = 0; a < from.size(); ++a) out[node][a] = from[swap_digits(a, s.i, s.j)];
  }
  return out;
}

std::vector<int> group_swap_nodes(std::span<const int> nodes, GroupSwap s) {
  std::vector<int> out;
  for (int node : nodes) {
    const int g = node / 3;
    if (g == s.i) node += 3 * (s.j - s.i);
    else if (g == s.j) node -= 3 * (s.j - s.i);
    out.push_back(node);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GroupSwap> canonicalizing_swaps(const CodeParams& params, std::span<const int> erased) {
  const ErasureType type = classify_erasure(params, erased);
  const int groups = params.groups();
  // target[pos] = original group that should end up at position pos
  std::vector<int> target;
  std::vector<bool> placed(static_cast<std::size_t>(groups), false);
  for (const auto& members : type.groups)
    for (int g : members) {
      target.push_back(g);
      placed[static_cast<std::size_t>(g)] = true;
    }
  for (int g = 0; g < groups; ++g)
    if (!placed[static_cast<std::size_t>(g)]) target.push_back(g);

  std::vector<int> current(static_cast<std::size_t>(groups));
  std::iota(current.begin(), current.end(), 0);
  std::vector<GroupSwap> swaps;
  for (int pos = 0; pos < groups; ++pos) {
    const auto it = std::find(current.begin() + pos, current.end(), target[static_cast<std::size_t>(pos)]);
    const int q = static_cast<int>(it - current.begin());
    if (q != pos) {
      swaps.push_back(make_swap(params, pos, q));
      std::swap(current[static_cast<std::size_t>(pos)], current[static_cast<std::size_t>(q)]);
    }
  }
  return swaps;
}

// ---------------------------------------------------------------------------
// Decoding

Codeword decode_erasures(const CodeParams& params, const ParityBlocks& blocks, Codeword cw,
                         std::span<const int> erased) {
  check_shape(params, cw);
  return ErasureDecoder(params, blocks, erased).decode(std::move(cw));
}

Codeword decode_erasures_structured(const CodeParams& params, const ParityBlocks& blocks, Codeword cw,
                                    std::span<const int> erased) {
  check_shape(params, cw);
  const auto f_sorted = normalize_erasures(params, erased);
  const PrimeField& f = params.field;

  if (!f_sorted.empty()) {
    const auto swaps = canonicalizing_swaps(params, f_sorted);
    CodeParams p2 = params;
    std::vector<int> f2 = f_sorted;
    for (auto s : swaps) {
      p2 = group_swap_params(p2, s);
      cw = group_swap_word(cw, s);
      f2 = group_swap_nodes(f2, s);
    }
    const ErasureType type = classify_erasure(params, f_sorted);
    if (f2 != canonical_pattern(type.z)) throw Error("canonicalization did not reach the canonical pattern");

    const ParityBlocks b2 = build_parity_blocks(p2);
    const std::size_t u = std::size_t{1} << type.total();
    const std::size_t r = static_cast<std::size_t>(params.r);

    std::vector<Matrix> parts;
    for (int i : f2) parts.push_back(submatrix_A(p2, b2, i, u));
    const Matrix m = hconcat(parts);
    const auto rows = independent_rows(f, m);
    if (rows.size() < m.cols()) throw Error("block system is singular");
    const auto m_inv = invert(f, m.select_rows(rows));
    if (!m_inv) throw Error("block system is singular");

    std::vector<bool> is_erased(static_cast<std::size_t>(params.n), false);
    for (int i : f2) is_erased[static_cast<std::size_t>(i)] = true;

    for (std::size_t chunk = 0; chunk < params.ell / u; ++chunk) {
      std::vector<Symbol> rhs(u * r, 0);
      for (std::size_t ap = 0; ap < u; ++ap) {
        const std::size_t a = chunk * u + ap;
        for (int node = 0; node < params.n; ++node) {
          if (is_erased[static_cast<std::size_t>(node)]) continue;
          for (const auto& e : b2[static_cast<std::size_t>(node)].row(a)) {
            const Symbol c = cw[static_cast<std::size_t>(node)][e.col];
            if (c == 0) continue;
            for (std::size_t s = 0; s < r; ++s) rhs[ap * r + s] = f.sub(rhs[ap * r + s], f.mul(e.value[s], c));
          }
        }
      }
      std::vector<Symbol> picked;
      picked.reserve(rows.size());
      for (auto idx : rows) picked.push_back(rhs[idx]);
      const auto x = multiply(f, *m_inv, picked);
      for (std::size_t t = 0; t < f2.size(); ++t)
        for (std::size_t bp = 0; bp < u; ++bp) cw[static_cast<std::size_t>(f2[t])][chunk * u + bp] = x[t * u + bp];
    }

    for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) cw = group_swap_word(cw, *it);
  }

  if (!verify_codeword(params, blocks, cw)) {
    throw InconsistentSurvivors("surviving nodes are not consistent with any codeword");
  }
  return cw;
}

}  // namespace msr
