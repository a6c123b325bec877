// Copyright 2026 The udds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "data_file.hpp"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "udds/codec.hpp"
#include "udds/errors.hpp"

namespace udds::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("udds_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
  }

  static std::vector<std::uint8_t> bytes(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  // Files in the scratch directory, for checking nothing was left behind.
  std::vector<std::string> listing() const {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir_)) names.push_back(e.path().filename());
    std::sort(names.begin(), names.end());
    return names;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateWritesDocumentedLayout) {
  const auto r = run({"generate", "--dist", "uniform", "--params", "5,1000000", "--n", "1000",
                      "--seed", "7", "--out", path("u.uddv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto b = bytes(path("u.uddv"));
  ASSERT_EQ(b.size(), 8024u);
  EXPECT_EQ(std::memcmp(b.data(), "UDDV", 4), 0);
  std::uint64_t n_head = 0, n_tail = 0;
  std::memcpy(&n_head, b.data() + 8, 8);
  std::memcpy(&n_tail, b.data() + 8016, 8);
  EXPECT_EQ(n_head, 1000u);
  EXPECT_EQ(n_tail, 1000u);
  for (double x : decode_values(b)) {
    EXPECT_GE(x, 5.0);
    EXPECT_LE(x, 1e6);
  }
  EXPECT_EQ(json::parse(r.out).at("n"), 1000);

  // Same flags, same bytes.
  ASSERT_EQ(run({"generate", "--dist", "uniform", "--params", "5,1000000", "--n", "1000",
                 "--seed", "7", "--out", path("v.uddv")})
                .code,
            0);
  EXPECT_EQ(bytes(path("v.uddv")), b);
}

TEST_F(CliTest, GenerateEmptyAndBeta) {
  ASSERT_EQ(run({"generate", "--dist", "exponential", "--params", "3.5", "--n", "0", "--out",
                 path("e.uddv")})
                .code,
            0);
  EXPECT_TRUE(decode_values(bytes(path("e.uddv"))).empty());
  EXPECT_EQ(bytes(path("e.uddv")).size(), 24u);

  ASSERT_EQ(run({"generate", "--dist", "beta", "--params", "5,1.5", "--n", "5000", "--out",
                 path("b.uddv")})
                .code,
            0);
  for (double x : decode_values(bytes(path("b.uddv")))) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST_F(CliTest, BuildMergeQueryEvaluate) {
  for (const char* name : {"a", "b"}) {
    ASSERT_EQ(run({"generate", "--dist", "lognormal", "--params", "1,1.5", "--n", "20000",
                   "--seed", name[0] == 'a' ? "1" : "2", "--out", path(std::string(name) + ".uddv")})
                  .code,
              0);
    const auto r = run({"build", "--in", path(std::string(name) + ".uddv"), "--out",
                        path(std::string(name) + ".udds"), "--buckets", "64"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("n"), 20000);
    EXPECT_GT(j.at("epoch").get<int>(), 0);
    EXPECT_GT(j.at("collapses").get<int>(), 0);
  }
  const auto m = run({"merge", "--out", path("ab.udds"), path("a.udds"), path("b.udds")});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(json::parse(m.out).at("n"), 40000);

  const auto q = run({"query", "--q", "0,0.5,1", path("ab.udds")});
  ASSERT_EQ(q.code, 0) << q.err;
  std::istringstream lines(q.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_NE(line.find(','), std::string::npos);
    ++count;
  }
  EXPECT_EQ(count, 3);
  EXPECT_EQ(q.out.substr(0, 4), "0,0.");

  const auto e = run({"evaluate", "--data", path("a.uddv"), "--sketch", path("a.udds")});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto ej = json::parse(e.out);
  EXPECT_EQ(ej.at("q0_accuracy"), 0.0);
  EXPECT_EQ(ej.at("violations"), 0);

  const auto csv = run({"evaluate", "--data", path("a.uddv"), "--sketch", path("a.udds"),
                        "--grid", "11", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, 24), "q,estimate,exact,rel_err");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 12);

  // n mismatch between data and sketch.
  const auto bad = run({"evaluate", "--data", path("a.uddv"), "--sketch", path("ab.udds")});
  EXPECT_EQ(bad.code, 2);
}

TEST_F(CliTest, EvaluateUniformDataHasZeroQ0) {
  ASSERT_EQ(run({"generate", "--dist", "uniform", "--params", "5,1000000", "--n", "100000",
                 "--out", path("u.uddv")})
                .code,
            0);
  ASSERT_EQ(run({"build", "--alpha", "0.001", "--buckets", "512", "--policy", "uniform", "--in",
                 path("u.uddv"), "--out", path("u.udds")})
                .code,
            0);
  const auto e = run({"evaluate", "--data", path("u.uddv"), "--sketch", path("u.udds")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(json::parse(e.out).at("q0_accuracy"), 0.0);
}

TEST_F(CliTest, MergeWithEmptySketchIsByteIdentical) {
  ASSERT_EQ(run({"generate", "--dist", "normal", "--params", "1000000,20000", "--n", "5000",
                 "--out", path("d.uddv")})
                .code,
            0);
  ASSERT_EQ(run({"generate", "--dist", "normal", "--params", "1000000,20000", "--n", "0",
                 "--out", path("z.uddv")})
                .code,
            0);
  ASSERT_EQ(run({"build", "--buckets", "32", "--in", path("d.uddv"), "--out", path("d.udds")}).code, 0);
  ASSERT_EQ(run({"build", "--buckets", "32", "--in", path("z.uddv"), "--out", path("z.udds")}).code, 0);
  ASSERT_EQ(run({"merge", "--out", path("m.udds"), path("d.udds"), path("z.udds")}).code, 0);
  EXPECT_EQ(bytes(path("m.udds")), bytes(path("d.udds")));
  ASSERT_EQ(run({"merge", "--out", path("m2.udds"), path("z.udds"), path("d.udds")}).code, 0);
  EXPECT_EQ(bytes(path("m2.udds")), bytes(path("d.udds")));
}

TEST_F(CliTest, SimulateComparesSequential) {
  for (const char* tree : {"balanced", "linear", "random"}) {
    const auto r = run({"simulate", "--dist", "exponential", "--params", "3.5", "--n", "100000",
                        "--seed", "3", "--procs", "8", "--tree", tree, "--compare-sequential"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("identical"), true) << tree;
    EXPECT_EQ(j.at("q0_accuracy"), 0.0);
    EXPECT_EQ(j.at("merges"), 7);
  }
  const auto pretty = run({"simulate", "--dist", "beta", "--n", "1000", "--pretty"});
  ASSERT_EQ(pretty.code, 0);
  EXPECT_NE(pretty.out.find("q0_accuracy"), std::string::npos);
  EXPECT_THROW(json::parse(pretty.out), json::parse_error);
}

TEST_F(CliTest, SimulateIsDeterministicAcrossThreads) {
  auto strip_timings = [](json j) {
    j.erase("timings");
    return j;
  };
  const auto a = run({"simulate", "--dist", "lognormal", "--n", "50000", "--procs", "4",
                      "--threads", "1", "--csv", path("a.csv")});
  const auto b = run({"simulate", "--dist", "lognormal", "--n", "50000", "--procs", "4",
                      "--threads", "4", "--csv", path("b.csv")});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(strip_timings(json::parse(a.out)), strip_timings(json::parse(b.out)));
  EXPECT_EQ(bytes(path("a.csv")), bytes(path("b.csv")));
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"generate", "--dist", "uniform", "--n", "10"}).code, 1);  // no --out
  EXPECT_EQ(run({"generate", "--dist", "uniform", "--n", "10", "--out", path("x"), "--bogus"}).code,
            1);
  EXPECT_EQ(run({"generate", "--dist", "beta", "--params", "0,1", "--n", "10", "--out",
                 path("x")})
                .code,
            1);
  EXPECT_EQ(run({"simulate", "--dist", "uniform", "--n", "10", "--policy", "nope"}).code, 1);
  EXPECT_EQ(run({"simulate", "--dist", "uniform", "--n", "10", "--procs", "0"}).code, 1);
  EXPECT_TRUE(listing().empty());
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, DataErrorsExitTwoWithoutPartialOutput) {
  // Missing input.
  EXPECT_EQ(run({"build", "--in", path("missing.uddv"), "--out", path("s.udds")}).code, 2);

  // Malformed data file.
  {
    std::ofstream(path("junk.uddv"), std::ios::binary) << "not a data file at all";
  }
  EXPECT_EQ(run({"build", "--in", path("junk.uddv"), "--out", path("s.udds")}).code, 2);

  // Corrupt sketch.
  {
    std::ofstream(path("junk.udds"), std::ios::binary) << "UDDX";
  }
  EXPECT_EQ(run({"query", "--q", "0.5", path("junk.udds")}).code, 2);
  EXPECT_EQ(listing(), (std::vector<std::string>{"junk.udds", "junk.uddv"}));
}

TEST_F(CliTest, IncompatibleMergeNamesField) {
  ASSERT_EQ(run({"generate", "--dist", "uniform", "--n", "100", "--out", path("d.uddv")}).code, 0);
  ASSERT_EQ(run({"build", "--buckets", "32", "--in", path("d.uddv"), "--out", path("a.udds")}).code, 0);
  ASSERT_EQ(run({"build", "--buckets", "64", "--in", path("d.uddv"), "--out", path("b.udds")}).code, 0);
  const auto r = run({"merge", "--out", path("m.udds"), path("a.udds"), path("b.udds")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("max_buckets"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("m.udds")));

  ASSERT_EQ(run({"build", "--alpha", "0.01", "--buckets", "32", "--in", path("d.uddv"), "--out",
                 path("c.udds")})
                .code,
            0);
  const auto r2 = run({"merge", "--out", path("m.udds"), path("a.udds"), path("c.udds")});
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.err.find("alpha0"), std::string::npos);
}

TEST(DataFileTest, RoundTripAndErrors) {
  const std::vector<double> v = {1.5, 2.5, 1e300};
  const auto b = encode_values(v);
  EXPECT_EQ(b.size(), 16u + 24 + 8);
  EXPECT_EQ(decode_values(b), v);
  auto cut = b;
  cut.pop_back();
  EXPECT_THROW(decode_values(cut), LengthError);
  auto bad = b;
  bad[0] = 'X';
  EXPECT_THROW(decode_values(bad), FormatError);
  auto trailer = b;
  trailer[b.size() - 8] ^= 1;
  EXPECT_THROW(decode_values(trailer), Error);
}

}  // namespace
}  // namespace udds::tools
