#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypermatch/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Invocation {
  int status = -1;
  std::string out;
};

/// Runs the installed binary from the data directory and captures stdout.
Invocation run_binary(const std::string& args) {
  const std::string cmd = std::string("cd '") + HYPERMATCH_DATA_DIR + "' && '" + HYPERMATCH_CLI + "' " + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

/// Runs the dispatcher in-process.
Invocation run_inline(std::vector<std::string> args) {
  args.insert(args.begin(), "hypermatch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.status = hypermatch::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  return r;
}

json normalized(const std::string& text) {
  json j = json::parse(text);
  j.erase("timing");
  j.erase("arguments");
  return j;
}

json golden(const std::string& name) {
  std::ifstream in(std::string(HYPERMATCH_GOLDEN_DIR) + "/" + name + ".json");
  return json::parse(in);
}

std::string data(const std::string& file) { return std::string(HYPERMATCH_DATA_DIR) + "/" + file; }

}  // namespace

TEST(Golden, OutputsMatchPinnedFiles) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"solve_k4", "solve k4.hg"},
      {"storage_phi", "storage phi --r 2 --alloc a.wt"},
      {"conjecture_cor17", "conjecture Cor1.7 --k 4 --d 1"},
      {"threshold_m1_2_4", "threshold --mode integral --k 2 --n 4 --d 1 --s 2"},
      {"reduce_example", "reduce --weights reduce.wt --k 3 --d 1"},
      {"samuels_qmin", "samuels qmin --l 3 --x 3/10"},
      {"construct_h0", "construct h0 --k 3 --n 6"},
      {"storage_candidates", "storage candidates --n 10 --r 2 --T 4"},
  };
  for (const auto& [name, args] : cases) {
    const Invocation r = run_binary(args);
    EXPECT_EQ(r.status, 0) << args;
    EXPECT_EQ(normalized(r.out), golden(name)) << args;
  }
}

TEST(Dispatch, KnownValues) {
  const json solve = json::parse(run_binary("solve k4.hg").out);
  EXPECT_EQ(solve["payload"]["nu"], 1);
  EXPECT_EQ(solve["payload"]["nu_star"], "4/3");
  EXPECT_EQ(solve["payload"]["tau"], 2);
  EXPECT_TRUE(solve["timing"].contains("seconds"));

  const json scan = json::parse(run_binary("samuels scan --l 3").out);
  EXPECT_NEAR(scan["payload"]["x_star"].get<double>(), 0.277, 0.002);

  const json phi = json::parse(run_binary("storage phi --r 2 --alloc a.wt").out);
  EXPECT_EQ(phi["payload"]["phi"], 5);
  EXPECT_EQ(phi["payload"]["success_probability"], "5/6");
}

TEST(Dispatch, ExitCodes) {
  EXPECT_EQ(run_binary("bogus").status, 2);
  EXPECT_EQ(run_binary("").status, 2);
  EXPECT_EQ(run_binary("solve").status, 2);
  EXPECT_EQ(run_binary("solve missing.hg").status, 2);
  EXPECT_EQ(run_binary("threshold --k 3 --n 6 --d 5").status, 2);
  EXPECT_EQ(run_binary("samuels qt --l 3 --x 1/2 --t 0").status, 2);
  EXPECT_EQ(run_binary("--jobs 0 solve k4.hg").status, 2);

  const Invocation budget = run_binary("threshold --k 3 --n 7 --d 1 --s 2");
  EXPECT_EQ(budget.status, 1);
  const json err = json::parse(budget.out);
  EXPECT_EQ(err["error"]["type"], "BudgetExceeded");
  EXPECT_EQ(err["error"]["kind"], "computational");

  EXPECT_EQ(run_binary("randcons --complete 8 --k 3 --p 1 --rounds 2 --policy strict").status, 1);
  EXPECT_EQ(run_binary("reduce --weights third.wt --k 3 --d 1").status, 1);
}

TEST(Dispatch, SeedIsAlwaysEchoed) {
  EXPECT_EQ(json::parse(run_binary("solve k4.hg").out)["seed"], 0);
  const json mc = json::parse(run_binary("--seed 12 samuels mc --l 3 --x 1/5 --t 0 --samples 2000").out);
  EXPECT_EQ(mc["seed"], 12);
  const json again = json::parse(run_binary("--seed 12 samuels mc --l 3 --x 1/5 --t 0 --samples 2000").out);
  EXPECT_EQ(normalized(mc.dump()), normalized(again.dump()));
  const json other = json::parse(run_binary("--seed 99 samuels mc --l 3 --x 1/5 --t 0 --samples 2000").out);
  EXPECT_NE(mc["payload"], other["payload"]);
}

TEST(Dispatch, JobsDoNotChangeResults) {
  const json one = normalized(run_binary("threshold --mode fractional --k 3 --n 6 --d 1 --s 2").out);
  json four = normalized(run_binary("--jobs 4 threshold --mode fractional --k 3 --n 6 --d 1 --s 2").out);
  EXPECT_EQ(four["jobs"], 4);
  four["jobs"] = 1;
  EXPECT_EQ(one["payload"]["value"], four["payload"]["value"]);
  EXPECT_EQ(one["payload"]["witness"], four["payload"]["witness"]);
}

TEST(Csv, KeyValueAndTables) {
  const Invocation phi = run_binary("--csv storage phi --r 2 --alloc a.wt");
  EXPECT_EQ(phi.status, 0);
  EXPECT_EQ(phi.out.rfind("key,value\n", 0), 0u);
  EXPECT_NE(phi.out.find("\nphi,5\n"), std::string::npos);
  EXPECT_NE(phi.out.find("\nsuccess_probability,5/6\n"), std::string::npos);

  const Invocation scan = run_binary("--csv samuels scan --l 3");
  EXPECT_EQ(scan.status, 0);
  EXPECT_EQ(scan.out.rfind("x,q0,min_other\n", 0), 0u);
  EXPECT_GT(std::count(scan.out.begin(), scan.out.end(), '\n'), 50);
}

TEST(InProcess, RunsAndWritesFiles) {
  const std::string out_path = ::testing::TempDir() + "/h1.hg";
  const Invocation r = run_inline({"construct", "h1", "--k", "3", "--n", "6", "--s", "2", "--out", out_path});
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["payload"]["edges"].size(), 10u);
  std::ifstream written(out_path);
  const auto h = hypermatch::read_hypergraph(written);
  EXPECT_EQ(h, hypermatch::construct_h1(3, 6, 2));

  const Invocation solved = run_inline({"solve", out_path});
  ASSERT_EQ(solved.status, 0);
  EXPECT_EQ(json::parse(solved.out)["payload"]["nu"], 1);
  EXPECT_EQ(json::parse(solved.out)["payload"]["nu_star"], "1/1");
}

TEST(InProcess, ConjectureAndSamuelsSubcommands) {
  const json e = json::parse(run_inline({"conjecture", "Conj1.8", "--k", "3", "--n", "6", "--s", "2"}).out);
  EXPECT_EQ(e["payload"]["count"], 11);
  const json qt = json::parse(run_inline({"samuels", "qt", "--mus", "1/10,1/5,3/10", "--t", "1"}).out);
  EXPECT_EQ(qt["payload"]["q_t"], "14/27");
  const json p = json::parse(run_inline({"samuels", "prop23", "--l", "4", "--x", "1/5"}).out);
  EXPECT_EQ(p["payload"]["holds"], true);
  const json b = json::parse(run_inline({"samuels", "edgebound", "--weights", data("a.wt"), "--l", "2"}).out);
  EXPECT_EQ(b["payload"]["bound"], 5);
  EXPECT_EQ(run_inline({"conjecture", "Nope", "--k", "3"}).status, 2);
}

TEST(InProcess, StorageAndRandcons) {
  const json g = json::parse(run_inline({"storage", "optimize", "--n", "5", "--r", "2", "--T", "2", "--q", "4"}).out);
  EXPECT_EQ(g["payload"]["phi"], 7);
  const json s = json::parse(run_inline({"storage", "sandwich", "--n", "5", "--r", "2", "--T", "2"}).out);
  EXPECT_EQ(s["payload"]["holds"], true);

  const Invocation rc = run_inline({"--seed", "7", "randcons", "--complete", "12", "--k", "3", "--p", "0.5", "--rounds", "6",
                             "--policy", "overlapping"});
  ASSERT_EQ(rc.status, 0);
  const json j = json::parse(rc.out);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["payload"]["checks"].size(), 5u);
  std::size_t sets = 0;
  for (const auto& bin : j["payload"]["set_sizes"]) sets += bin["count"].get<std::size_t>();
  EXPECT_EQ(sets, 6u);
  EXPECT_EQ(normalized(rc.out), normalized(run_inline({"--seed", "7", "randcons", "--complete", "12", "--k", "3",
                                                       "--p", "0.5", "--rounds", "6", "--policy", "overlapping"})
                                               .out));
}
