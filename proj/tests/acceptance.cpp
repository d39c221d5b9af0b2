#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "example_tables.hpp"
#include "msr/cli.hpp"
#include "msr/codec.hpp"
#include "msr/construct.hpp"
#include "msr/repair.hpp"
#include "msr/storage.hpp"
#include "msr/verify.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace msr;
using msr::testing::all_valid_k;
using msr::testing::random_codeword;
using msr::testing::tag_table;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.ok) ++failures;
  std::printf("%s %s (%.2f s) %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), s, o.detail.c_str());
  std::fflush(stdout);
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "msr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << e.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome worked_example() {
  const auto params = make_params(9, 5);
  if (params.field.modulus() != 257) return {false, "p != 257"};
  const auto blocks = build_parity_blocks(params);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (tag_table(blocks[i]) != kExampleBlocks[i]) return {false, "A" + std::to_string(i) + " differs"};
  return {true, "A0..A8 match"};
}

Outcome exhaustive_mds() {
  std::size_t total = 0, passed = 0;
  std::size_t n9k5 = 0;
  for (int n : {3, 6, 9}) {
    for (int k : all_valid_k(n)) {
      const auto params = make_params(n, k);
      const auto blocks = build_parity_blocks(params);
      std::mt19937_64 rng(static_cast<std::uint64_t>(100 * n + k));
      const Codeword cw = random_codeword(params, blocks, rng);
      for (const auto& erased : combinations(n, params.r)) {
        Codeword damaged = cw;
        for (int i : erased) std::fill(damaged[static_cast<std::size_t>(i)].begin(), damaged[static_cast<std::size_t>(i)].end(), 0);
        ++total;
        if (decode_erasures(params, blocks, damaged, erased) == cw) {
          ++passed;
          if (n == 9 && k == 5) ++n9k5;
        }
      }
    }
  }
  return {passed == total && n9k5 == 126,
          std::to_string(passed) + "/" + std::to_string(total) + " patterns, n=9 k=5: " + std::to_string(n9k5) + "/126"};
}

Outcome exhaustive_repair() {
  std::size_t total = 0, passed = 0, n9k5 = 0;
  for (int n : {3, 6, 9}) {
    for (int k : all_valid_k(n)) {
      const auto params = make_params(n, k);
      const auto blocks = build_parity_blocks(params);
      std::mt19937_64 rng(static_cast<std::uint64_t>(200 * n + k));
      const Codeword cw = random_codeword(params, blocks, rng);
      const std::size_t bound = static_cast<std::size_t>(params.d) * params.ell / static_cast<std::size_t>(params.d - params.k + 1);
      for (int failed = 0; failed < n; ++failed) {
        std::vector<int> others;
        for (int j = 0; j < n; ++j)
          if (j != failed) others.push_back(j);
        const RepairPlan plan = plan_repair(params, failed);
        for (const auto& pick : combinations(n - 1, params.d)) {
          std::vector<int> helpers;
          std::vector<NodeVector> data;
          for (int q : pick) {
            helpers.push_back(others[static_cast<std::size_t>(q)]);
            data.push_back(helper_response(params.field, plan, cw[static_cast<std::size_t>(helpers.back())]));
          }
          const auto t = repair_node(params, blocks, failed, helpers, data);
          ++total;
          if (t.recovered == cw[static_cast<std::size_t>(failed)] && t.symbols_downloaded == bound &&
              bound == static_cast<std::size_t>(k + 1) * params.ell / 2) {
            ++passed;
            if (n == 9 && k == 5 && t.symbols_downloaded == 24) ++n9k5;
          }
        }
      }
    }
  }
  return {passed == total && n9k5 == 252,
          std::to_string(passed) + "/" + std::to_string(total) + " cases, n=9 k=5: " + std::to_string(n9k5) + "/252 at 24 symbols"};
}

Outcome ratio() {
  for (int n : {3, 6, 9, 12}) {
    for (int k : all_valid_k(n)) {
      const auto b = bandwidth_ratio(make_params(n, k));
      // num/den == (k+1)/(2k) as rationals
      const std::uint64_t want_num = static_cast<std::uint64_t>(k + 1), want_den = static_cast<std::uint64_t>(2 * k);
      if (b.num * want_den != b.den * want_num || b.repair * want_den != b.naive * want_num)
        return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k)};
    }
  }
  std::string out;
  if (cli({"bench", "--n", "9", "--k", "5", "--trials", "3"}, &out) != 0) return {false, "bench failed"};
  const bool ok = out.find("ratio: 24/40 = 3/5 = 0.6\n") != std::string::npos;
  return {ok, ok ? "bench: 24/40 = 3/5" : "bench output lacks the expected ratio"};
}

Outcome lambda_sweep() {
  for (int n = 3; n <= 30; n += 3) {
    const PrimeField f(minimal_modulus(n));
    const auto l = select_lambdas(n, f);
    std::vector<Symbol> sorted = l;
    std::sort(sorted.begin(), sorted.end());
    if (l.size() != static_cast<std::size_t>(2 * n) || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      return {false, "n=" + std::to_string(n) + " lambdas not distinct"};
    const auto params = make_params(n, 1, f, l);
    for (int g = 0; g < n / 3; ++g)
      if (gamma(params, g, 1) == gamma(params, g, 2)) return {false, "n=" + std::to_string(n) + " gammas equal"};
  }
  return {true, "n=3..30"};
}

Outcome mds_oracle() {
  std::size_t dets = 0;
  for (int n : {3, 6, 9, 12}) {
    for (int k : all_valid_k(n)) {
      const auto rep = sweep_block_determinants(make_params(n, k));
      if (!rep.all_passed()) return {false, "det(M) = 0 at n=" + std::to_string(n) + " k=" + std::to_string(k)};
      dets += rep.total;
    }
  }
  for (int z1 : {1, 2, 3}) {
    const auto params = make_params(3 * z1 + 3, 3);
    const auto blocks = build_parity_blocks(params);
    if (!filtered_blocks_match(params, blocks, z1)) return {false, "filtered pattern differs for z1=" + std::to_string(z1)};
    if (determinant(params.field, build_Q(params, blocks, z1)) == 0) return {false, "det(Q) = 0 for z1=" + std::to_string(z1)};
  }
  return {true, std::to_string(dets) + " type vectors, Q for z1=1,2,3"};
}

Outcome swap_equivalence() {
  std::size_t pairs = 0;
  for (int n : {6, 9}) {
    for (int k : all_valid_k(n)) {
      const auto params = make_params(n, k);
      const auto blocks = build_parity_blocks(params);
      std::mt19937_64 rng(static_cast<std::uint64_t>(300 * n + k));
      for (int t = 0; t < 3; ++t) {
        const Codeword cw = random_codeword(params, blocks, rng);
        for (int i = 0; i < params.groups(); ++i) {
          for (int j = i + 1; j < params.groups(); ++j) {
            const GroupSwap s = make_swap(params, i, j);
            const CodeParams sp = group_swap_params(params, s);
            const Codeword sw = group_swap_word(cw, s);
            if (!verify_codeword(sp, build_parity_blocks(sp), sw)) return {false, "swapped word not a codeword"};
            if (group_swap_word(sw, s) != cw) return {false, "double swap is not the identity"};
            if (group_swap_params(sp, s).lambdas != params.lambdas) return {false, "double swap changes lambdas"};
            ++pairs;
          }
        }
      }
    }
  }
  return {true, std::to_string(pairs) + " swaps"};
}

Outcome decoder_equivalence() {
  std::size_t total = 0;
  for (int n : {3, 6, 9}) {
    for (int k : all_valid_k(n)) {
      const auto params = make_params(n, k);
      const auto blocks = build_parity_blocks(params);
      std::mt19937_64 rng(static_cast<std::uint64_t>(400 * n + k));
      const Codeword cw = random_codeword(params, blocks, rng);
      for (const auto& erased : combinations(n, params.r)) {
        Codeword damaged = cw;
        for (int i : erased) std::fill(damaged[static_cast<std::size_t>(i)].begin(), damaged[static_cast<std::size_t>(i)].end(), 0);
        const Codeword a = decode_erasures(params, blocks, damaged, erased);
        const Codeword b = decode_erasures_structured(params, blocks, damaged, erased);
        if (a != b || a != cw) return {false, "mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k)};
        ++total;
      }
    }
  }
  return {true, std::to_string(total) + " patterns"};
}

Outcome file_round_trip() {
  const fs::path dir = fs::temp_directory_path() / ("msr_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path input = dir / "input.bin";
  std::mt19937_64 rng(2024);
  {
    std::string bytes(1 << 20, '\0');
    for (auto& c : bytes) c = static_cast<char>(rng() & 0xFF);
    std::ofstream(input, std::ios::binary) << bytes;
  }
  const fs::path chunks = dir / "chunks";
  Outcome o{true, ""};
  if (cli({"encode", input.string(), "--n", "9", "--k", "5", "--out", chunks.string()}) != 0) o = {false, "encode failed"};

  std::vector<int> nodes(9);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::vector<int> lost(nodes.begin(), nodes.begin() + 4);
  std::sort(lost.begin(), lost.end());
  const Manifest m = load_manifest(chunks);
  const int target = lost[0];
  const std::string original_chunk = slurp(chunks / m.chunks[static_cast<std::size_t>(target)]);
  for (int i : lost) fs::remove(chunks / m.chunks[static_cast<std::size_t>(i)]);

  if (o.ok && cli({"decode", chunks.string(), "--out", (dir / "output.bin").string()}) != 0) o = {false, "decode failed"};
  if (o.ok && slurp(dir / "output.bin") != slurp(input)) o = {false, "decoded file differs"};

  // Only five chunks survive, so rebuild the full set from the decoded file
  // and then lose the target chunk again.
  if (o.ok && cli({"encode", (dir / "output.bin").string(), "--n", "9", "--k", "5", "--out", chunks.string()}) != 0)
    o = {false, "re-encode failed"};
  fs::remove(chunks / m.chunks[static_cast<std::size_t>(target)]);
  std::string helpers;
  for (int i = 0, used = 0; i < 9 && used < 6; ++i) {
    if (i == target) continue;
    helpers += (used++ ? "," : "") + std::to_string(i);
  }
  std::string out;
  if (o.ok && (cli({"repair", chunks.string(), "--failed", std::to_string(target), "--helpers", helpers}, &out) != 0))
    o = {false, "repair failed"};
  if (o.ok && slurp(chunks / m.chunks[static_cast<std::size_t>(target)]) != original_chunk) o = {false, "repaired chunk differs"};
  if (o.ok && out.find("optimal: yes") == std::string::npos) o = {false, "repair not at the cut-set bound"};
  if (o.ok) {
    std::string l;
    for (int i : lost) l += (l.empty() ? "" : ",") + std::to_string(i);
    o.detail = "lost " + l + ", repaired " + std::to_string(target) + " from " + helpers;
  }
  fs::remove_all(dir);
  return o;
}

Outcome structural() {
  for (int n = 3; n <= 60; n += 3) {
    const auto params = make_params(n, 1);
    if (params.ell != (std::size_t{1} << (n / 3))) return {false, "ell wrong at n=" + std::to_string(n)};
    if (minimal_modulus(n) > static_cast<std::uint64_t>(2 * (2 * n + 1))) return {false, "minimal p too large at n=" + std::to_string(n)};
  }
  return {true, "ell = 2^(n/3), minimal p <= 2(2n+1) for n=3..60"};
}

}  // namespace

int main() {
  criterion("1 worked example blocks", worked_example);
  criterion("2 exhaustive MDS", exhaustive_mds);
  criterion("3 exhaustive repair", exhaustive_repair);
  criterion("4 bandwidth ratio", ratio);
  criterion("5 lambda sweep", lambda_sweep);
  criterion("6 determinant oracle", mds_oracle);
  criterion("7 group swap equivalence", swap_equivalence);
  criterion("8 structured vs generic decode", decoder_equivalence);
  criterion("9 file round trip", file_round_trip);
  criterion("structural ell and field size", structural);
  std::printf("%s: %d failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
