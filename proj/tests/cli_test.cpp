#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "msr/cli.hpp"

namespace msr {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "msr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& sub) { return s.find(sub) != std::string::npos; }

TEST(Cli, Params) {
  const auto r = run({"params", "--n", "9", "--k", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "n=9\nk=5\nr=4\nd=6\nell=8\np=257\nlambdas="));
}

TEST(Cli, ParamsWithExplicitPrime) {
  const auto r = run({"params", "--n", "9", "--k", "5", "--p", "263"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "p=263"));
}

TEST(Cli, RejectsBadLength) {
  const auto r = run({"params", "--n", "10", "--k", "5"});
  EXPECT_NE(r.code, 0);
  EXPECT_TRUE(contains(r.err, "error:"));
  EXPECT_TRUE(contains(r.err, "multiple of 3"));
}

TEST(Cli, RejectsSmallOrCompositeModulus) {
  EXPECT_NE(run({"params", "--n", "9", "--k", "5", "--p", "37"}).code, 0);
  EXPECT_NE(run({"params", "--n", "9", "--k", "5", "--p", "258"}).code, 0);
}

TEST(Cli, MissingSubcommand) { EXPECT_NE(run({}).code, 0); }

TEST(Cli, VerifySummary) {
  const auto r = run({"verify", "--n", "9", "--k", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "mds 126/126 pass, repair 252/252 pass\n");
  const auto small = run({"verify", "--n", "3", "--k", "1", "--p", "7", "--report"});
  ASSERT_EQ(small.code, 0) << small.err;
  EXPECT_TRUE(contains(small.out, "mds 1,2 pass -"));
  EXPECT_TRUE(contains(small.out, "repair 0:1,2 pass 2"));
}

TEST(Cli, BenchReportsRatio) {
  const auto r = run({"bench", "--n", "9", "--k", "5", "--trials", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "ratio: 24/40 = 3/5 = 0.6"));
}

TEST(Cli, EncodeDecodeRepairChain) {
  const fs::path dir = fs::temp_directory_path() / ("msr_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path in = dir / "in.bin";
  {
    std::ofstream os(in, std::ios::binary);
    for (int i = 0; i < 1000; ++i) os.put(static_cast<char>((i * 37) & 0xFF));
  }
  const std::string chunks = (dir / "c").string();
  const auto enc = run({"encode", in.string(), "--n", "9", "--k", "5", "--out", chunks});
  ASSERT_EQ(enc.code, 0) << enc.err;
  EXPECT_TRUE(contains(enc.out, "1000 bytes into 25 stripes"));

  for (const char* name : {"node_00.chunk", "node_04.chunk", "node_06.chunk", "node_08.chunk"}) fs::remove(dir / "c" / name);
  const auto dec = run({"decode", chunks, "--out", (dir / "out.bin").string()});
  ASSERT_EQ(dec.code, 0) << dec.err;
  std::ifstream a(in, std::ios::binary), b(dir / "out.bin", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);

  const auto bad = run({"repair", chunks, "--failed", "0", "--helpers", "1,2,3"});
  EXPECT_NE(bad.code, 0);
  EXPECT_TRUE(contains(bad.err, "error:"));

  fs::remove(dir / "c" / "node_01.chunk");
  EXPECT_NE(run({"decode", chunks, "--out", (dir / "out2.bin").string()}).code, 0);

  // restore node 0 then node 1 from helpers that are still present
  run({"encode", in.string(), "--n", "9", "--k", "5", "--out", chunks});
  fs::remove(dir / "c" / "node_00.chunk");
  const auto rep = run({"repair", chunks, "--failed", "0", "--helpers", "1,2,3,4,5,6"});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_TRUE(contains(rep.out, "symbols per stripe: 24"));
  EXPECT_TRUE(contains(rep.out, "cut-set bound: 24"));
  EXPECT_TRUE(contains(rep.out, "symbols total: 600"));
  EXPECT_TRUE(contains(rep.out, "optimal: yes"));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace msr
