#include "msr/repair.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "msr/error.hpp"

namespace msr {
namespace {

constexpr std::size_t remove_digit(std::size_t b, int digit) noexcept {
  const std::size_t low = b & ((std::size_t{1} << digit) - 1);
  return low | ((b >> (digit + 1)) << digit);
}

// Coefficients of C(ins0 b') and C(ins1 b') in the folded block rows of one
// node: rows with digit == v for roles 0 and 1, the pairwise row sum for role 2.
std::pair<SparseBlockMatrix, SparseBlockMatrix> fold(const SparseBlockMatrix& a, int role, int digit,
                                                     const PrimeField& f) {
  const std::size_t half = a.block_rows() / 2;
  SparseBlockMatrix s0(half, half, a.height());
  SparseBlockMatrix s1(half, half, a.height());
  std::vector<int> bits;
  if (role == 2) {
    bits = {0, 1};
  } else {
    bits = {role};
  }
  for (std::size_t ap = 0; ap < half; ++ap) {
    for (int v : bits) {
      for (const auto& e : a.row(insert_digit(ap, digit, v))) {
        auto& dst = digit_of(e.col, digit) ? s1 : s0;
        dst.accumulate(ap, remove_digit(e.col, digit), e.tag, e.value, f);
      }
    }
  }
  return {std::move(s0), std::move(s1)};
}

SparseBlockMatrix combine(const SparseBlockMatrix& x, const SparseBlockMatrix& y, bool subtract,
                          const PrimeField& f) {
  SparseBlockMatrix out = x;
  for (std::size_t a = 0; a < y.block_rows(); ++a) {
    for (const auto& e : y.row(a)) {
      if (!subtract) {
        out.accumulate(a, e.col, e.tag, e.value, f);
        continue;
      }
      std::vector<Symbol> v(e.value.size());
      for (std::size_t t = 0; t < v.size(); ++t) v[t] = f.neg(e.value[t]);
      out.accumulate(a, e.col, -e.tag, v, f);
    }
  }
  return out;
}

bool same_blocks(const SparseBlockMatrix& x, const SparseBlockMatrix& y) {
  if (x.block_rows() != y.block_rows()) return false;
  for (std::size_t a = 0; a < x.block_rows(); ++a) {
    const auto rx = x.row(a);
    const auto ry = y.row(a);
    if (rx.size() != ry.size()) return false;
    for (std::size_t t = 0; t < rx.size(); ++t) {
      if (rx[t].col != ry[t].col || !(rx[t].tag == ry[t].tag) || rx[t].value != ry[t].value) return false;
    }
  }
  return true;
}

void check_failed(const CodeParams& params, int failed) {
  if (failed < 0 || failed >= params.n) {
    throw InvalidParams("failed node " + std::to_string(failed) + " out of range");
  }
}

std::vector<int> checked_helpers(const CodeParams& params, int failed, std::span<const int> helpers) {
  check_failed(params, failed);
  std::vector<int> out(helpers.begin(), helpers.end());
  std::sort(out.begin(), out.end());
  if (static_cast<int>(out.size()) != params.d) {
    throw WrongHelperCount("repair needs exactly d = " + std::to_string(params.d) + " helpers, got " +
                           std::to_string(out.size()));
  }
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw WrongHelperCount("helper listed twice");
  for (int h : out) {
    if (h < 0 || h >= params.n) throw WrongHelperCount("helper " + std::to_string(h) + " out of range");
    if (h == failed) throw WrongHelperCount("the failed node cannot be its own helper");
  }
  return out;
}

std::vector<int> unknown_columns(const ReducedSystem& sys, const std::vector<int>& helpers) {
  std::vector<int> out;
  for (std::size_t c = 0; c < sys.columns.size(); ++c) {
    const auto& col = sys.columns[c];
    if (col.kind != ColumnKind::Folded || !std::binary_search(helpers.begin(), helpers.end(), col.node)) {
      out.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace

RepairPlan plan_repair(const CodeParams& params, int failed) {
  check_failed(params, failed);
  RepairPlan plan;
  plan.failed = failed;
  plan.group = failed / 3;
  plan.role = failed % 3;
  const std::size_t half = params.ell / 2;
  plan.request.reserve(half);
  for (std::size_t ap = 0; ap < half; ++ap) {
    const std::size_t x0 = insert_digit(ap, plan.group, 0);
    const std::size_t x1 = insert_digit(ap, plan.group, 1);
    switch (plan.role) {
      case 0:
        plan.request.push_back({x0});
        break;
      case 1:
        plan.request.push_back({x1});
        break;
      default:
        plan.request.push_back({x0, x1});
        break;
    }
  }
  return plan;
}

NodeVector helper_response(const PrimeField& f, const RepairPlan& plan, std::span<const Symbol> data) {
  NodeVector out;
  out.reserve(plan.request.size());
  for (const auto& coords : plan.request) {
    Symbol s = 0;
    for (auto c : coords) {
      if (c >= data.size()) throw PlanMismatch("helper node shorter than the plan expects");
      s = f.add(s, data[c]);
    }
    out.push_back(s);
  }
  return out;
}

std::size_t ReducedSystem::index_of(int node, ColumnKind kind) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c].node == node && columns[c].kind == kind) return c;
  throw InvalidParams("no such column in the reduced system");
}

ReducedSystem build_reduced_system(const CodeParams& params, const ParityBlocks& blocks, int failed) {
  check_failed(params, failed);
  const PrimeField& f = params.field;
  const int group = failed / 3;
  const int role = failed % 3;
  ReducedSystem sys;
  for (int t = 0; t < params.n; ++t) {
    auto [s0, s1] = fold(blocks[static_cast<std::size_t>(t)], role, group, f);
    if (t == failed) {
      switch (role) {
        case 0:
          sys.blocks.push_back(s0);
          sys.blocks.push_back(combine(s1, s0, true, f));
          break;
        case 1:
          sys.blocks.push_back(combine(s0, s1, true, f));
          sys.blocks.push_back(s1);
          break;
        default:
          sys.blocks.push_back(s0);
          sys.blocks.push_back(s1);
          break;
      }
      sys.columns.push_back({t, ColumnKind::Tilde});
      sys.columns.push_back({t, ColumnKind::Hat});
      continue;
    }
    // A helper's transmitted value must be all the folded rows see of it.
    const bool ok = role == 2 ? same_blocks(s0, s1) : (role == 0 ? s1 : s0).nonzero_blocks() == 0;
    if (!ok) throw Error("node " + std::to_string(t) + " does not fold onto the repair request");
    sys.blocks.push_back(role == 1 ? std::move(s1) : std::move(s0));
    sys.columns.push_back({t, ColumnKind::Folded});
  }
  return sys;
}

Repairer::Repairer(const CodeParams& params, const ParityBlocks& blocks, int failed, std::span<const int> helpers)
    : field_(params.field),
      n_(params.n),
      ell_(params.ell),
      plan_(plan_repair(params, failed)),
      helpers_(checked_helpers(params, failed, helpers)),
      system_(build_reduced_system(params, blocks, failed)),
      recovery_(params.field, system_.blocks, unknown_columns(system_, helpers_)) {}

NodeVector Repairer::recover(std::span<const NodeVector> helper_data) const {
  if (helper_data.size() != helpers_.size()) {
    throw PlanMismatch("expected data from " + std::to_string(helpers_.size()) + " helpers, got " +
                       std::to_string(helper_data.size()));
  }
  const std::size_t half = ell_ / 2;
  std::vector<NodeVector> values(system_.columns.size(), NodeVector(half, 0));
  for (std::size_t j = 0; j < helpers_.size(); ++j) {
    if (helper_data[j].size() != half) {
      throw PlanMismatch("helper " + std::to_string(helpers_[j]) + " sent " + std::to_string(helper_data[j].size()) +
                         " symbols, plan asks for " + std::to_string(half));
    }
    values[system_.index_of(helpers_[j], ColumnKind::Folded)] = helper_data[j];
  }
  recovery_.recover(values);

  const auto& tilde = values[system_.index_of(plan_.failed, ColumnKind::Tilde)];
  const auto& hat = values[system_.index_of(plan_.failed, ColumnKind::Hat)];
  NodeVector out(ell_, 0);
  for (std::size_t ap = 0; ap < half; ++ap) {
    const std::size_t x0 = insert_digit(ap, plan_.group, 0);
    const std::size_t x1 = insert_digit(ap, plan_.group, 1);
    switch (plan_.role) {
      case 0:
        out[x1] = hat[ap];
        out[x0] = field_.sub(tilde[ap], hat[ap]);
        break;
      case 1:
        out[x0] = tilde[ap];
        out[x1] = field_.sub(hat[ap], tilde[ap]);
        break;
      default:
        out[x0] = tilde[ap];
        out[x1] = hat[ap];
        break;
    }
  }
  return out;
}

BandwidthRatio bandwidth_ratio(const CodeParams& params) {
  BandwidthRatio out;
  out.repair = static_cast<std::uint64_t>(params.d) * (params.ell / 2);
  out.naive = static_cast<std::uint64_t>(params.k) * params.ell;
  const std::uint64_t g = std::gcd(out.repair, out.naive);
  out.num = out.repair / g;
  out.den = out.naive / g;
  return out;
}

RepairTranscript repair_node(const CodeParams& params, const ParityBlocks& blocks, int failed,
                             std::span<const int> helpers, std::span<const NodeVector> helper_data) {
  const Repairer repairer(params, blocks, failed, helpers);
  // helper_data follows the caller's helper order; the repairer wants sorted.
  std::vector<std::pair<int, const NodeVector*>> order;
  if (helper_data.size() != helpers.size()) throw PlanMismatch("one response per helper expected");
  for (std::size_t j = 0; j < helpers.size(); ++j) order.emplace_back(helpers[j], &helper_data[j]);
  std::sort(order.begin(), order.end());
  std::vector<NodeVector> sorted;
  RepairTranscript tr;
  tr.failed = failed;
  for (const auto& [h, data] : order) {
    sorted.push_back(*data);
    tr.helpers.push_back(h);
    tr.symbols_downloaded += data->size();
  }
  tr.recovered = repairer.recover(sorted);
  return tr;
}

}  // namespace msr
