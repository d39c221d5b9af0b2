#include "msr/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "msr/codec.hpp"
#include "msr/construct.hpp"
#include "msr/error.hpp"
#include "msr/repair.hpp"
#include "msr/storage.hpp"
#include "msr/verify.hpp"

namespace msr {
namespace {

struct CodeArgs {
  int n = 0;
  int k = 0;
  std::optional<std::uint64_t> p;
};

void add_code_options(CLI::App* cmd, CodeArgs& a) {
  cmd->add_option("--n", a.n, "code length, a multiple of 3")->required();
  cmd->add_option("--k", a.k, "data nodes, 1 <= k <= n-2")->required();
  cmd->add_option("--p", a.p, "prime field modulus");
}

CodeParams file_params(const CodeArgs& a) {
  if (a.p && *a.p < kMinFileModulus) {
    throw InvalidParams("p = " + std::to_string(*a.p) + " is too small: file mode stores one byte per symbol and needs a prime p >= 257");
  }
  return make_params(a.n, a.k, a.p);
}

void print_params(std::ostream& out, const CodeParams& params) {
  out << "n=" << params.n << '\n'
      << "k=" << params.k << '\n'
      << "r=" << params.r << '\n'
      << "d=" << params.d << '\n'
      << "ell=" << params.ell << '\n'
      << "p=" << params.field.modulus() << '\n'
      << "lambdas=";
  for (std::size_t i = 0; i < params.lambdas.size(); ++i) out << (i ? "," : "") << params.lambdas[i];
  out << '\n';
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(std::ostream& out, const CodeArgs& a, int trials) {
  const CodeParams params = make_params(a.n, a.k, a.p);
  const auto blocks = build_parity_blocks(params);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Symbol> dist(0, params.field.modulus() - 1);

  std::vector<int> erased(static_cast<std::size_t>(params.r));
  for (int i = 0; i < params.r; ++i) erased[static_cast<std::size_t>(i)] = i;
  std::vector<int> helpers;
  for (int i = 1; i <= params.d; ++i) helpers.push_back(i);

  const Encoder encoder(params, blocks);
  const ErasureDecoder decoder(params, blocks, erased);
  const Repairer repairer(params, blocks, 0, helpers);

  double t_enc = 0, t_dec = 0, t_rep = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<NodeVector> data(static_cast<std::size_t>(params.k), NodeVector(params.ell));
    for (auto& node : data)
      for (auto& s : node) s = dist(rng);
    auto t0 = std::chrono::steady_clock::now();
    const Codeword cw = encoder.encode(data);
    t_enc += ms_since(t0);

    Codeword damaged = cw;
    for (int i : erased) damaged[static_cast<std::size_t>(i)].assign(params.ell, 0);
    t0 = std::chrono::steady_clock::now();
    if (!(decoder.decode(damaged) == cw)) throw Error("bench: decode mismatch");
    t_dec += ms_since(t0);

    std::vector<NodeVector> sent;
    for (int h : repairer.helpers()) sent.push_back(helper_response(params.field, repairer.plan(), cw[static_cast<std::size_t>(h)]));
    t0 = std::chrono::steady_clock::now();
    if (repairer.recover(sent) != cw[0]) throw Error("bench: repair mismatch");
    t_rep += ms_since(t0);
  }

  const auto ratio = bandwidth_ratio(params);
  out << "n=" << params.n << " k=" << params.k << " ell=" << params.ell << " p=" << params.field.modulus()
      << " trials=" << trials << '\n';
  if (trials > 0) {
    out << "encode ms/stripe: " << t_enc / trials << '\n'
        << "decode ms/stripe: " << t_dec / trials << " (" << params.r << " erasures)\n"
        << "repair ms/stripe: " << t_rep / trials << '\n';
  }
  out << "repair download: " << ratio.repair << " symbols, naive download: " << ratio.naive << " symbols\n"
      << "ratio: " << ratio.repair << '/' << ratio.naive << " = " << ratio.num << '/' << ratio.den << " = "
      << ratio.value() << '\n';
  return 0;
}

int cmd_verify(std::ostream& out, const CodeArgs& a, bool report) {
  const CodeParams params = make_params(a.n, a.k, a.p);
  const auto mds = sweep_mds(params);
  const auto rep = sweep_repair(params);
  if (report) {
    for (const auto& l : mds.lines) out << l << '\n';
    for (const auto& l : rep.lines) out << l << '\n';
  }
  out << "mds " << mds.passed << '/' << mds.total << ' ' << (mds.all_passed() ? "pass" : "FAIL") << ", repair "
      << rep.passed << '/' << rep.total << ' ' << (rep.all_passed() ? "pass" : "FAIL") << '\n';
  return mds.all_passed() && rep.all_passed() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MSR array code tool: encode, decode and repair files; verify small instances"};
  app.require_subcommand(1);

  CodeArgs params_args;
  auto* params_cmd = app.add_subcommand("params", "show the code parameters and lambda values");
  add_code_options(params_cmd, params_args);

  CodeArgs enc_args;
  std::string enc_input;
  std::string enc_out;
  auto* enc_cmd = app.add_subcommand("encode", "split a file into n chunk files");
  add_code_options(enc_cmd, enc_args);
  enc_cmd->add_option("input", enc_input, "file to encode")->required();
  enc_cmd->add_option("--out", enc_out, "output directory")->required();

  std::string dec_dir;
  std::string dec_out;
  auto* dec_cmd = app.add_subcommand("decode", "rebuild the original file from the surviving chunks");
  dec_cmd->add_option("dir", dec_dir, "directory holding the manifest and chunks")->required();
  dec_cmd->add_option("--out", dec_out, "output file")->required();

  std::string rep_dir;
  int rep_failed = -1;
  std::vector<int> rep_helpers;
  auto* rep_cmd = app.add_subcommand("repair", "regenerate one lost chunk from k+1 helpers");
  rep_cmd->add_option("dir", rep_dir, "directory holding the manifest and chunks")->required();
  rep_cmd->add_option("--failed", rep_failed, "index of the lost node")->required();
  rep_cmd->add_option("--helpers", rep_helpers, "helper node indices, comma separated")->required()->delimiter(',');

  CodeArgs ver_args;
  bool ver_report = false;
  auto* ver_cmd = app.add_subcommand("verify", "exhaustive decode and repair check of a small instance");
  add_code_options(ver_cmd, ver_args);
  ver_cmd->add_flag("--report", ver_report, "print one line per case");

  CodeArgs bench_args;
  int bench_trials = 10;
  auto* bench_cmd = app.add_subcommand("bench", "time encode, decode and repair; report bandwidth");
  add_code_options(bench_cmd, bench_args);
  bench_cmd->add_option("--trials", bench_trials, "number of stripes to time")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*params_cmd) {
      print_params(out, file_params(params_args));
      return 0;
    }
    if (*enc_cmd) {
      const CodeParams params = file_params(enc_args);
      const Manifest m = encode_file(enc_input, enc_out, params);
      out << "encoded " << m.length << " bytes into " << m.stripes << " stripes, " << m.n << " chunks in " << enc_out
          << '\n';
      return 0;
    }
    if (*dec_cmd) {
      decode_file(dec_dir, dec_out);
      out << "decoded " << dec_out << '\n';
      return 0;
    }
    if (*rep_cmd) {
      const RepairStats s = repair_chunk(rep_dir, rep_failed, rep_helpers);
      out << "repaired node " << rep_failed << " over " << s.stripes << " stripes\n"
          << "symbols per stripe: " << s.symbols_per_stripe << '\n'
          << "cut-set bound: " << s.cut_set_bound << '\n'
          << "symbols total: " << s.symbols_total << '\n'
          << "optimal: " << (s.symbols_per_stripe == s.cut_set_bound ? "yes" : "no") << '\n';
      return 0;
    }
    if (*ver_cmd) return cmd_verify(out, ver_args, ver_report);
    if (*bench_cmd) return cmd_bench(out, bench_args, bench_trials);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace msr
