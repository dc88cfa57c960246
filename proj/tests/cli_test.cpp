#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pqe/cli.hpp"
#include "pqe/dimacs.hpp"
#include "pqe/reference_oracle.hpp"

using namespace pqe;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string &name) {
  return std::string(PQE_TEST_DATA_DIR) + "/" + name;
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pqeverify_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                  ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string tmp(const std::string &name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

} // namespace

TEST_F(CliTest, VerifyCorrect) {
  auto r = run({"verify", "-f", data("example1.pqe"), "-s", data("h_y1.cnf")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("s CORRECT"), std::string::npos);
  EXPECT_NE(r.out.find("c sat_calls_implication 1"), std::string::npos);
}

TEST_F(CliTest, VerifyRefutedPrintsWitness) {
  auto r = run({"verify", "-f", data("example1.pqe"), "-s", data("h_true.cnf")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("s NOT_REDUNDANT"), std::string::npos);
  EXPECT_NE(r.out.find("w 1=0 2=1 3=1 4=0\n"), std::string::npos);
}

TEST_F(CliTest, VerifyNotImplied) {
  auto r = run({"verify", "-f", data("example1.pqe"), "-s", data("h_y2.cnf")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("s NOT_IMPLIED"), std::string::npos);
}

TEST_F(CliTest, VerifyResourceOut) {
  auto r = run({"verify", "-f", data("example1.pqe"), "-s", data("h_y1.cnf"),
                "--time-limit", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("s RESOURCE_OUT"), std::string::npos);
}

TEST_F(CliTest, UsageAndParseErrors) {
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"verify", "-f", data("example1.pqe")}).code, 3);
  EXPECT_EQ(run({"verify", "-f", tmp("missing.pqe"), "-s", data("h_y1.cnf")}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  {
    std::ofstream(tmp("bad.cnf")) << "p cnf 4 1\n3 0\n";
  }
  auto r = run({"verify", "-f", data("example1.pqe"), "-s", tmp("bad.cnf")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, JsonReport) {
  auto a = run({"verify", "-f", data("example1.pqe"), "-s", data("h_true.cnf"),
                "--json", tmp("a.json")});
  auto b = run({"verify", "-f", data("example1.pqe"), "-s", data("h_true.cnf"),
                "--json", tmp("b.json")});
  ASSERT_EQ(a.code, 1);
  auto ja = nlohmann::json::parse(slurp(tmp("a.json")));
  auto jb = nlohmann::json::parse(slurp(tmp("b.json")));
  EXPECT_EQ(ja["tool"], "pqeverify");
  EXPECT_EQ(ja["status"], "not_redundant");
  EXPECT_EQ(ja["exit_code"], 1);
  EXPECT_EQ(ja["witness"]["clause_ordinal"], 1);
  EXPECT_EQ(ja["witness"]["clause"], nlohmann::json::parse("[-3, 4]"));
  EXPECT_EQ(ja["witness"]["point"].size(), 4u);
  EXPECT_EQ(ja["stats"]["sat_calls_redundancy"], 2);
  ja.erase("wall_time_sec");
  jb.erase("wall_time_sec");
  EXPECT_EQ(ja, jb);
}

TEST_F(CliTest, DumpCnf) {
  auto r = run({"verify", "-f", data("example1.pqe"), "-s", data("h_y1.cnf"),
                "--dump-cnf", tmp("db.cnf")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(slurp(tmp("db.cnf")).rfind("p cnf ", 0), 0u);
}

TEST_F(CliTest, CheckEquiv) {
  EXPECT_EQ(run({"check-equiv", "-f", data("example1.pqe"), "-s",
                 data("h_y1.cnf")}).code,
            0);
  auto r = run({"check-equiv", "-f", data("example1.pqe"), "-s",
                data("h_true.cnf")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("c divergence 1=0 2=1"), std::string::npos) << r.out;
  EXPECT_EQ(run({"check-equiv", "-f", data("example1.pqe"), "-s",
                 data("h_y1.cnf"), "--y-cap", "1"}).code,
            2);
}

TEST_F(CliTest, Census) {
  auto r = run({"census", "-f", data("example1.pqe")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("c boundary points total 2"), std::string::npos);
  EXPECT_NE(r.out.find("c boundary points removable 1"), std::string::npos);
  auto r2 = run({"census", "-f", data("example1.pqe"), "-s", data("h_y1.cnf")});
  EXPECT_NE(r2.out.find("c boundary points total 1"), std::string::npos);
  EXPECT_EQ(run({"census", "-f", data("example1.pqe"), "--var-cap", "2"}).code, 2);
}

TEST_F(CliTest, SolveRef) {
  auto r = run({"solve-ref", "-f", data("example1.pqe"), "-o", tmp("h.cnf")});
  EXPECT_EQ(r.code, 0);
  PqeProblem p = parse_problem(slurp(data("example1.pqe")));
  Solution h = parse_solution(slurp(tmp("h.cnf")), p);
  EXPECT_EQ(h.formula(), (CnfFormula{Clause{1, -2}}));
  EXPECT_EQ(run({"verify", "-f", data("example1.pqe"), "-s", tmp("h.cnf")}).code, 0);
}

TEST_F(CliTest, GenIsDeterministicAndParses) {
  std::vector<std::string> args{"gen", "--vars", "20", "--clauses", "40",
                                "--seed", "5"};
  auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  PqeProblem p = parse_problem(a.out);
  EXPECT_EQ(p.formula().size(), 40u);
  EXPECT_EQ(run({"gen", "--vars", "1"}).code, 3);
}

TEST_F(CliTest, BenchSmall) {
  auto r = run({"bench", "--sizes", "10,12", "--per-size", "2", "--seed", "3",
                "--csv", tmp("b.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  std::string csv = slurp(tmp("b.csv"));
  EXPECT_EQ(csv.rfind("instance,seed,num_clauses,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}
