#include "msr/verify.hpp"

#include <random>
#include <sstream>
#include <string>

#include "msr/error.hpp"
#include "msr/repair.hpp"

namespace msr {
namespace {

void guard_size(const CodeParams& params) {
  if (params.n > kSweepMaxNodes) {
    throw InstanceTooLarge("exhaustive sweeps are limited to n <= " + std::to_string(kSweepMaxNodes) + ", got n = " +
                           std::to_string(params.n));
  }
}

void enumerate(int type, int remaining, int groups_left, TypeCounts& z, std::vector<TypeCounts>& out) {
  if (type == 7) {
    if (remaining == 0) out.push_back(z);
    return;
  }
  const int w = kTypeWeights[static_cast<std::size_t>(type)];
  for (int c = 0; c * w <= remaining && c <= groups_left; ++c) {
    z[static_cast<std::size_t>(type)] = c;
    enumerate(type + 1, remaining - c * w, groups_left - c, z, out);
  }
  z[static_cast<std::size_t>(type)] = 0;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string describe(const TypeCounts& z) {
  std::ostringstream os;
  os << '(';
  for (std::size_t t = 0; t < z.size(); ++t) os << (t ? "," : "") << z[t];
  os << ')';
  return os.str();
}

Codeword random_codeword(const CodeParams& params, const ParityBlocks& blocks, std::mt19937_64& rng) {
  std::uniform_int_distribution<Symbol> dist(0, params.field.modulus() - 1);
  std::vector<NodeVector> data(static_cast<std::size_t>(params.k), NodeVector(params.ell));
  for (auto& node : data)
    for (auto& s : node) s = dist(rng);
  return encode(params, blocks, data);
}

void record(SweepReport& rep, const std::string& kind, const std::string& pattern, bool ok,
            const std::string& bandwidth) {
  rep.lines.push_back(kind + " " + pattern + " " + (ok ? "pass" : "FAIL") + " " + bandwidth);
  ++rep.total;
  if (ok) ++rep.passed;
}

Poly linear_pair(const PrimeField& f, Symbol u, Symbol v) {
  // (x - u)(x - v)
  return {f.mul(u, v), f.neg(f.add(u, v)), 1};
}

Matrix shifted_windows(const Poly& poly, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t c = 0; c < poly.size(); ++c) m(t, t + c) = poly[c];
  return m;
}

}  // namespace

std::vector<TypeCounts> enumerate_type_vectors(int r, int groups) {
  std::vector<TypeCounts> out;
  TypeCounts z{};
  enumerate(0, r, groups, z, out);
  return out;
}

Matrix build_M(const CodeParams& params, const ParityBlocks& blocks, const TypeCounts& z) {
  for (int c : z)
    if (c < 0) throw InvalidParams("type counts must be non-negative");
  if (weighted_count(z) != params.r) {
    throw InvalidParams("type vector " + describe(z) + " has weight " + std::to_string(weighted_count(z)) +
                        ", expected r = " + std::to_string(params.r));
  }
  int total = 0;
  for (int c : z) total += c;
  if (total > params.groups()) throw InvalidParams("type vector " + describe(z) + " needs more groups than exist");
  const std::size_t u = std::size_t{1} << total;
  std::vector<Matrix> parts;
  for (int node : canonical_pattern(z)) parts.push_back(submatrix_A(params, blocks, node, u));
  return hconcat(parts);
}

Poly poly_mul(const PrimeField& f, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = f.mul_add(out[i + j], a[i], b[j]);
  return out;
}

Symbol poly_eval(const PrimeField& f, const Poly& a, Symbol x) {
  Symbol acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = f.mul_add(a[i], acc, x);
  return acc;
}

FilterPolys build_filter_polys(const CodeParams& params, int z1) {
  if (z1 < 1 || z1 > params.groups()) throw InvalidParams("z1 out of range");
  const PrimeField& f = params.field;
  FilterPolys out;
  out.z1 = z1;
  const std::size_t count = std::size_t{1} << z1;
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<Poly> g;
    Poly prod{1};
    for (int i = 0; i < z1; ++i) {
      const int b = 6 * i;
      Poly gi = digit_of(a, i) == 0 ? linear_pair(f, params.lambda(b), params.lambda(b + 4))
                                    : linear_pair(f, params.lambda(b + 3), params.lambda(b + 5));
      prod = poly_mul(f, prod, gi);
      g.push_back(std::move(gi));
    }
    out.factors.push_back(std::move(g));
    out.f.push_back(std::move(prod));
  }
  return out;
}

Matrix build_filter_F(const CodeParams& params, int z1) {
  if (params.r != 3 * z1) {
    throw Case1Only("the filter needs r = 3 z1; r = " + std::to_string(params.r) + ", z1 = " + std::to_string(z1));
  }
  const auto polys = build_filter_polys(params, z1);
  const std::size_t count = polys.f.size();
  const std::size_t h = static_cast<std::size_t>(z1);
  const std::size_t r = static_cast<std::size_t>(params.r);
  Matrix out(count * h, count * r);
  for (std::size_t a = 0; a < count; ++a) out.set_block(a * h, a * r, shifted_windows(polys.f[a], h, r));
  return out;
}

Matrix build_Q(const CodeParams& params, const ParityBlocks& blocks, int z1) {
  const Matrix fm = multiply(params.field, build_filter_F(params, z1), build_M(params, blocks, {z1, 0, 0, 0, 0, 0, 0}));
  const std::size_t u = std::size_t{1} << z1;
  std::vector<std::size_t> keep;
  for (int t = 0; t < 3 * z1; ++t) {
    const int i = t / 3;
    const int role = t % 3;
    if (role == 2) continue;
    for (std::size_t b = 0; b < u; ++b)
      if (digit_of(b, i) == (role == 0 ? 1 : 0)) keep.push_back(static_cast<std::size_t>(t) * u + b);
  }
  return fm.select_columns(keep);
}

bool filtered_blocks_match(const CodeParams& params, const ParityBlocks& blocks, int z1) {
  const PrimeField& f = params.field;
  const Matrix fm = multiply(f, build_filter_F(params, z1), build_M(params, blocks, {z1, 0, 0, 0, 0, 0, 0}));
  const std::size_t u = std::size_t{1} << z1;
  const std::size_t h = static_cast<std::size_t>(z1);

  // f_a(x) as a product of its linear factors.
  auto f_at = [&](std::size_t a, Symbol x) {
    Symbol v = 1;
    for (int i = 0; i < z1; ++i) {
      const int b = 6 * i;
      const int lo = digit_of(a, i) == 0 ? 0 : 3;
      const int hi = digit_of(a, i) == 0 ? 4 : 5;
      v = f.mul(v, f.mul(f.sub(x, params.lambda(b + lo)), f.sub(x, params.lambda(b + hi))));
    }
    return v;
  };

  for (int t = 0; t < 3 * z1; ++t) {
    const int i = t / 3;
    const int role = t % 3;
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t a = 0; a < u; ++a) {
      for (std::size_t b = 0; b < u; ++b) {
        Symbol scale = 0;
        Symbol lambda = 0;
        const int ai = digit_of(a, i);
        if (role == 0) {
          lambda = params.lambda(6 * i + 1);
          if (ai == 1 && b == a) scale = f_at(a, lambda);
          if (ai == 0 && b == (a | bit)) scale = f.neg(f_at(a, lambda));
        } else if (role == 1) {
          lambda = params.lambda(6 * i + 2);
          if (ai == 0 && b == a) scale = f_at(a, lambda);
          if (ai == 1 && b == (a & ~bit)) scale = f.neg(f_at(a, lambda));
        }
        const auto lp = column_L(lambda, z1, f);
        for (std::size_t s = 0; s < h; ++s) {
          const Symbol want = f.mul(scale, lp[s]);
          if (fm(a * h + s, static_cast<std::size_t>(t) * u + b) != want) return false;
        }
      }
    }
  }
  return true;
}

Matrix build_case2_filter(const CodeParams& params, int z) {
  if (z < 1 || z > params.groups()) throw InvalidParams("group count out of range");
  if (params.r < 3) throw InvalidParams("the two-root filter needs r >= 3");
  const Poly poly = linear_pair(params.field, params.lambda(6 * z - 6), params.lambda(6 * z - 3));
  const std::size_t r = static_cast<std::size_t>(params.r);
  return shifted_windows(poly, r - 2, r);
}

Matrix kron_identity(std::size_t u, const Matrix& m) {
  Matrix out(u * m.rows(), u * m.cols());
  for (std::size_t i = 0; i < u; ++i) out.set_block(i * m.rows(), i * m.cols(), m);
  return out;
}

std::vector<std::vector<int>> combinations(int n, int m) {
  std::vector<std::vector<int>> out;
  if (m < 0 || m > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = m - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

SweepReport sweep_mds(const CodeParams& params, std::uint64_t seed) {
  guard_size(params);
  const auto blocks = build_parity_blocks(params);
  std::mt19937_64 rng(seed);
  const Codeword cw = random_codeword(params, blocks, rng);
  SweepReport rep;
  for (const auto& erased : combinations(params.n, params.r)) {
    Codeword damaged = cw;
    for (int i : erased) std::fill(damaged[static_cast<std::size_t>(i)].begin(), damaged[static_cast<std::size_t>(i)].end(), 0);
    bool ok = false;
    try {
      ok = decode_erasures(params, blocks, damaged, erased) == cw &&
           decode_erasures_structured(params, blocks, damaged, erased) == cw;
    } catch (const Error&) {
      ok = false;
    }
    record(rep, "mds", join(erased), ok, "-");
  }
  return rep;
}

SweepReport sweep_repair(const CodeParams& params, std::uint64_t seed) {
  guard_size(params);
  const auto blocks = build_parity_blocks(params);
  std::mt19937_64 rng(seed);
  const Codeword cw = random_codeword(params, blocks, rng);
  const std::size_t expected = static_cast<std::size_t>(params.d) * params.ell / 2;
  SweepReport rep;
  for (int failed = 0; failed < params.n; ++failed) {
    std::vector<int> others;
    for (int t = 0; t < params.n; ++t)
      if (t != failed) others.push_back(t);
    const auto plan = plan_repair(params, failed);
    for (const auto& pick : combinations(params.n - 1, params.d)) {
      std::vector<int> helpers;
      for (int idx : pick) helpers.push_back(others[static_cast<std::size_t>(idx)]);
      bool ok = false;
      std::size_t bw = 0;
      try {
        std::vector<NodeVector> data;
        for (int h : helpers) data.push_back(helper_response(params.field, plan, cw[static_cast<std::size_t>(h)]));
        const auto tr = repair_node(params, blocks, failed, helpers, data);
        bw = tr.symbols_downloaded;
        ok = tr.recovered == cw[static_cast<std::size_t>(failed)] && bw == expected;
      } catch (const Error&) {
        ok = false;
      }
      record(rep, "repair", std::to_string(failed) + ":" + join(helpers), ok, std::to_string(bw));
    }
  }
  return rep;
}

SweepReport sweep_block_determinants(const CodeParams& params) {
  guard_size(params);
  const auto blocks = build_parity_blocks(params);
  SweepReport rep;
  for (const auto& z : enumerate_type_vectors(params.r, params.groups())) {
    const bool ok = determinant(params.field, build_M(params, blocks, z)) != 0;
    record(rep, "det", describe(z), ok, "-");
  }
  return rep;
}

}  // namespace msr
