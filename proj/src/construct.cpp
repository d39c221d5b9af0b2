#include "msr/construct.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

#include "msr/error.hpp"

namespace msr {

// ---------------------------------------------------------------------------
// LTag

LTag LTag::single(int index, int coef) {
  LTag t;
  if (coef != 0) t.terms_.emplace_back(index, coef);
  return t;
}

LTag LTag::operator+(const LTag& o) const {
  LTag out;
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      out.terms_.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      out.terms_.push_back(*b++);
    } else {
      const int c = a->second + b->second;
      if (c != 0) out.terms_.emplace_back(a->first, c);
      ++a;
      ++b;
    }
  }
  return out;
}

LTag LTag::operator-() const {
  LTag out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

LTag LTag::operator-(const LTag& o) const { return *this + (-o); }

std::vector<int> LTag::indices() const {
  std::vector<int> out;
  for (const auto& t : terms_) out.push_back(t.first);
  return out;
}

std::string LTag::to_string() const {
  if (terms_.empty()) return "0";
  // Positive terms first so that L0-L1 prints the way it is usually written.
  std::vector<std::pair<int, int>> ordered;
  for (const auto& t : terms_)
    if (t.second > 0) ordered.push_back(t);
  for (const auto& t : terms_)
    if (t.second < 0) ordered.push_back(t);
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, coef] : ordered) {
    if (coef < 0) {
      os << '-';
    } else if (!first) {
      os << '+';
    }
    const int mag = coef < 0 ? -coef : coef;
    if (mag != 1) os << mag << '*';
    os << 'L' << idx;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// SparseBlockMatrix

void SparseBlockMatrix::accumulate(std::size_t a, std::size_t b, const LTag& tag, std::span<const Symbol> value,
                                   const PrimeField& f) {
  if (value.size() != height_) throw DimensionMismatch("block value length differs from block height");
  if (a >= rows_.size() || b >= block_cols_) throw DimensionMismatch("block index out of range");
  auto& row = rows_[a];
  auto it = std::find_if(row.begin(), row.end(), [&](const BlockEntry& e) { return e.col == b; });
  if (it == row.end()) {
    if (tag.is_zero()) return;
    BlockEntry e{b, tag, std::vector<Symbol>(value.begin(), value.end())};
    auto pos = std::find_if(row.begin(), row.end(), [&](const BlockEntry& x) { return x.col > b; });
    row.insert(pos, std::move(e));
    return;
  }
  it->tag = it->tag + tag;
  for (std::size_t t = 0; t < height_; ++t) it->value[t] = f.add(it->value[t], value[t]);
  if (it->tag.is_zero()) row.erase(it);
}

const BlockEntry* SparseBlockMatrix::find(std::size_t a, std::size_t b) const {
  for (const auto& e : rows_.at(a))
    if (e.col == b) return &e;
  return nullptr;
}

std::size_t SparseBlockMatrix::nonzero_blocks() const noexcept {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.size();
  return total;
}

Matrix SparseBlockMatrix::dense(std::size_t u) const {
  if (u > rows_.size() || u > block_cols_) throw DimensionMismatch("dense corner larger than matrix");
  Matrix out(u * height_, u);
  for (std::size_t a = 0; a < u; ++a) {
    for (const auto& e : rows_[a]) {
      if (e.col >= u) continue;
      for (std::size_t t = 0; t < height_; ++t) out(a * height_ + t, e.col) = e.value[t];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

constexpr int kMaxNodes = 60;

void check_shape(int n, int k) {
  if (n < 3 || n % 3 != 0) {
    throw InvalidParams("n = " + std::to_string(n) +
                        " is not a positive multiple of 3; other lengths are obtained by puncturing a code "
                        "whose length is the next multiple of 3");
  }
  if (n > kMaxNodes) throw InvalidParams("n = " + std::to_string(n) + " exceeds the supported maximum of 60");
  if (k < 1 || k > n - 2) {
    throw InvalidParams("k = " + std::to_string(k) + " must satisfy 1 <= k <= n-2 = " + std::to_string(n - 2));
  }
}

Symbol gamma_from(const PrimeField& f, Symbol x, Symbol l0, Symbol l3, Symbol l4, Symbol l5) {
  const Symbol num = f.mul(f.sub(x, l3), f.sub(x, l5));
  const Symbol den = f.mul(f.sub(x, l0), f.sub(x, l4));
  return f.neg(f.div(num, den));
}

}  // namespace

std::uint64_t minimal_modulus(int n) { return next_prime(static_cast<std::uint64_t>(2 * n + 1)); }

std::uint64_t default_modulus(int n) {
  return next_prime(std::max<std::uint64_t>(static_cast<std::uint64_t>(2 * n + 1), 257));
}

std::vector<Symbol> select_lambdas(int n, const PrimeField& field) {
  if (n < 3 || n % 3 != 0) throw InvalidParams("n must be a positive multiple of 3");
  const std::uint64_t p = field.modulus();
  if (p < static_cast<std::uint64_t>(2 * n + 1)) {
    throw FieldTooSmall("GF(" + std::to_string(p) + ") has fewer than 2n+1 = " + std::to_string(2 * n + 1) +
                        " elements");
  }
  const PrimeField& f = field;
  std::vector<Symbol> lambdas;
  lambdas.reserve(static_cast<std::size_t>(2 * n));
  std::set<Symbol> used;
  for (int g = 0; g < n / 3; ++g) {
    std::vector<Symbol> eta;
    for (Symbol c = 0; eta.size() < 7; ++c)
      if (!used.contains(c)) eta.push_back(c);
    const Symbol l0 = eta[0], l1 = eta[1], l2 = eta[2], l3 = eta[3], l4 = eta[4];
    const Symbol xi_num = f.mul(f.mul(f.sub(l2, l0), f.sub(l2, l4)), f.sub(l1, l3));
    const Symbol xi_den = f.mul(f.mul(f.sub(l1, l0), f.sub(l1, l4)), f.sub(l2, l3));
    const Symbol xi = f.div(xi_num, xi_den);
    // xi (l1 - x) = l2 - x  <=>  (xi - 1) x = xi l1 - l2
    Symbol l5 = eta[5];
    if (xi != 1) {
      const Symbol root = f.div(f.sub(f.mul(xi, l1), l2), f.sub(xi, 1));
      if (root == eta[5]) l5 = eta[6];
    }
    for (Symbol v : {l0, l1, l2, l3, l4, l5}) {
      lambdas.push_back(v);
      used.insert(v);
    }
  }
  return lambdas;
}

Symbol gamma(const CodeParams& params, int group, int which) {
  if (group < 0 || group >= params.groups()) throw InvalidParams("group index out of range");
  if (which != 1 && which != 2) throw InvalidParams("gamma selector must be 1 or 2");
  const int b = 6 * group;
  return gamma_from(params.field, params.lambda(b + which), params.lambda(b), params.lambda(b + 3),
                    params.lambda(b + 4), params.lambda(b + 5));
}

CodeParams make_params(int n, int k, const PrimeField& field, std::vector<Symbol> lambdas) {
  check_shape(n, k);
  if (field.modulus() < static_cast<std::uint64_t>(2 * n + 1)) {
    throw FieldTooSmall("GF(" + std::to_string(field.modulus()) + ") is smaller than 2n+1 = " +
                        std::to_string(2 * n + 1));
  }
  if (lambdas.size() != static_cast<std::size_t>(2 * n)) throw InvalidParams("expected 2n lambda values");
  std::set<Symbol> seen;
  for (auto v : lambdas) {
    if (v >= field.modulus()) throw InvalidParams("lambda value outside the field");
    if (!seen.insert(v).second) throw InvalidParams("lambda values must be pairwise distinct");
  }
  CodeParams p;
  p.n = n;
  p.k = k;
  p.r = n - k;
  p.d = k + 1;
  p.ell = std::size_t{1} << (n / 3);
  p.field = field;
  p.lambdas = std::move(lambdas);
  for (int g = 0; g < p.groups(); ++g) {
    if (gamma(p, g, 1) == gamma(p, g, 2)) {
      throw InvalidParams("gamma values of group " + std::to_string(g) + " coincide");
    }
  }
  return p;
}

CodeParams make_params(int n, int k, std::optional<std::uint64_t> p) {
  check_shape(n, k);
  const std::uint64_t modulus = p.value_or(default_modulus(n));
  const PrimeField field(modulus);
  return make_params(n, k, field, select_lambdas(n, field));
}

std::vector<Symbol> column_L(Symbol lambda, int r, const PrimeField& field) {
  if (r < 1) throw InvalidParams("column length must be positive");
  std::vector<Symbol> out(static_cast<std::size_t>(r));
  out[0] = 1;
  const Symbol l = field.reduce(lambda);
  for (std::size_t t = 1; t < out.size(); ++t) out[t] = field.mul(out[t - 1], l);
  return out;
}

// ---------------------------------------------------------------------------
// Parity blocks

SparseBlockMatrix construction_block(int role, int digit, int sextet_base, std::size_t ell, int r,
                                     std::span<const Symbol> lambdas, const PrimeField& field) {
  SparseBlockMatrix m(ell, ell, static_cast<std::size_t>(r));
  auto L = [&](int offset) { return column_L(lambdas[static_cast<std::size_t>(sextet_base + offset)], r, field); };
  auto tag = [&](int offset) { return LTag::single(sextet_base + offset); };
  const std::size_t bit = std::size_t{1} << digit;

  switch (role) {
    case 0: {
      const auto L0 = L(0), L1 = L(1);
      std::vector<Symbol> diff(L0.size());
      for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = field.sub(L0[t], L1[t]);
      for (std::size_t a = 0; a < ell; ++a) {
        const int ai = digit_of(a, digit);
        m.accumulate(a, a, tag(ai), ai ? L1 : L0, field);
        if (ai == 0) m.accumulate(a, a | bit, tag(0) - tag(1), diff, field);
      }
      break;
    }
    case 1: {
      const auto L2 = L(2), L3 = L(3);
      std::vector<Symbol> diff(L2.size());
      for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = field.sub(L3[t], L2[t]);
      for (std::size_t a = 0; a < ell; ++a) {
        const int ai = digit_of(a, digit);
        m.accumulate(a, a, tag(2 + ai), ai ? L3 : L2, field);
        if (ai == 1) m.accumulate(a, a & ~bit, tag(3) - tag(2), diff, field);
      }
      break;
    }
    case 2: {
      const auto L4 = L(4), L5 = L(5);
      for (std::size_t a = 0; a < ell; ++a) {
        const int ai = digit_of(a, digit);
        m.accumulate(a, a, tag(4 + ai), ai ? L5 : L4, field);
      }
      break;
    }
    default:
      throw InvalidParams("node role must be 0, 1 or 2");
  }
  return m;
}

ParityBlocks build_parity_blocks(const CodeParams& params) {
  ParityBlocks blocks;
  blocks.ell = params.ell;
  blocks.r = params.r;
  blocks.nodes.reserve(static_cast<std::size_t>(params.n));
  for (int node = 0; node < params.n; ++node) {
    const int g = node / 3;
    blocks.nodes.push_back(
        construction_block(node % 3, g, 6 * g, params.ell, params.r, params.lambdas, params.field));
  }
  return blocks;
}

Matrix submatrix_A(const CodeParams& params, const ParityBlocks& blocks, int node, std::size_t u) {
  if (node < 0 || node >= params.n) throw InvalidParams("node index out of range");
  if (u < 1 || u > params.ell) throw InvalidParams("corner size must be in [1, ell]");
  return blocks[static_cast<std::size_t>(node)].dense(u);
}

}  // namespace msr
