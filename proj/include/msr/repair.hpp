#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msr/codec.hpp"
#include "msr/construct.hpp"

namespace msr {

// Each helper transmits one value per functional; a functional is the sum of
// the listed coordinates of the helper's node (one or two entries).
struct RepairPlan {
  int failed = 0;
  int group = 0;
  int role = 0;
  std::vector<std::vector<std::size_t>> request;  // ell/2 functionals
};

RepairPlan plan_repair(const CodeParams& params, int failed);

// What helper `data` sends under `plan`.
NodeVector helper_response(const PrimeField& f, const RepairPlan& plan, std::span<const Symbol> data);

enum class ColumnKind { Tilde, Hat, Folded };

struct ReducedColumn {
  int node;
  ColumnKind kind;
};

// Parity structure seen by the repair: ell/2 block rows, n+1 block columns.
// Column order is node order with the failed node expanded into its tilde
// and hat parts.
struct ReducedSystem {
  std::vector<ReducedColumn> columns;
  std::vector<SparseBlockMatrix> blocks;

  // Position of the folded column of `node`, or of the failed node's part.
  std::size_t index_of(int node, ColumnKind kind) const;
};

ReducedSystem build_reduced_system(const CodeParams& params, const ParityBlocks& blocks, int failed);

struct RepairTranscript {
  int failed = 0;
  std::vector<int> helpers;
  std::size_t symbols_downloaded = 0;
  NodeVector recovered;
};

// Repair of one node from one fixed helper set. The solve is set up once so
// the same object can rebuild many stripes.
class Repairer {
 public:
  // Throws WrongHelperCount unless exactly d distinct helpers other than the
  // failed node are given.
  Repairer(const CodeParams& params, const ParityBlocks& blocks, int failed, std::span<const int> helpers);

  const RepairPlan& plan() const noexcept { return plan_; }
  const std::vector<int>& helpers() const noexcept { return helpers_; }

  // helper_data[j] is the response of helpers()[j]. Throws PlanMismatch on
  // wrong counts or lengths.
  NodeVector recover(std::span<const NodeVector> helper_data) const;

 private:
  PrimeField field_;
  int n_;
  std::size_t ell_;
  RepairPlan plan_;
  std::vector<int> helpers_;
  ReducedSystem system_;
  ColumnRecovery recovery_;
};

// Repair download over the naive k*ell download, as an exact fraction.
struct BandwidthRatio {
  std::uint64_t repair = 0;  // d * ell / 2
  std::uint64_t naive = 0;   // k * ell
  std::uint64_t num = 0;     // reduced
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

BandwidthRatio bandwidth_ratio(const CodeParams& params);

RepairTranscript repair_node(const CodeParams& params, const ParityBlocks& blocks, int failed,
                             std::span<const int> helpers, std::span<const NodeVector> helper_data);

}  // namespace msr
