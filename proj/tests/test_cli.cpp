#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqsl/model.hpp"
#include "seqsl/parser.hpp"
#include "seqsl/semantics.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("seqsl_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

  std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Result run(const std::string& args) {
    std::string out = (dir_ / "stdout").string();
    std::string cmd = std::string(SEQSL_BIN) + " " + args + " > " + out + " 2> " + (dir_ / "stderr").string();
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(out)};
  }

  std::string err() { return read((dir_ / "stderr").string()); }

  fs::path dir_;
};

const char* kEmptyModel = R"({"stack": {"x": 1}, "seq": {}, "heap": {}})";

}  // namespace

TEST_F(Cli, CheckVerdicts) {
  std::string m = file("m.json", kEmptyModel);
  Result r = run("check " + m + " emp");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "True\n");
  r = run("check " + m + " 'x |-> @a'");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "False\n");
  r = run("check " + m + " 'forall @a. @a ^ nil == nil ^ @a => ini(@a)' --seq-bound 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out.substr(0, 8), "Unknown\n");
}

TEST_F(Cli, CheckFormulaFileAndJson) {
  std::string m = file("m.json", R"({"stack": {"x": 1}, "seq": {"@a": [2]}, "heap": {"1": [2]}})");
  std::string f = file("f.sl", "x |-> @a\n");
  Result r = run("check " + m + " " + f + " --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"verdict\": \"true\""), std::string::npos) << r.out;
  r = run("check " + m + " 'exists @b. x |-> @b' --trace");
  EXPECT_EQ(r.code, 0);
  EXPECT_GT(r.out.size(), 5u);
}

TEST_F(Cli, CheckErrors) {
  std::string m = file("m.json", kEmptyModel);
  EXPECT_EQ(run("check " + m + " 'x |->'").code, 3);
  EXPECT_NE(err().find("error:"), std::string::npos);
  EXPECT_EQ(run("check " + file("bad.json", R"({"heap": {"nil": []}})") + " emp").code, 3);
  EXPECT_EQ(run("check " + (dir_ / "missing.json").string() + " emp").code, 3);
  EXPECT_EQ(run("check " + m + " 'y = nil'").code, 3);
  EXPECT_EQ(run("frobnicate").code, 3);
  EXPECT_EQ(run("").code, 3);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, SatWritesCheckableWitness) {
  std::string w = (dir_ / "w.json").string();
  Result r = run("sat '(x |-> nil) -* false' --witness " + w);
  EXPECT_EQ(r.code, 0);
  seqsl::Model m = seqsl::load_model(w);
  EXPECT_TRUE(m.heap.count(m.stack.at("x").nat_value()));
  EXPECT_EQ(run("check " + w + " '(x |-> nil) -* false'").code, 0);
  r = run("sat 'x1 |-> @a * x2 |-> @a' --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("witness"), std::string::npos);
}

TEST_F(Cli, SatVerdicts) {
  EXPECT_EQ(run("sat 'emp /\\ x |-> @a'").code, 1);
  EXPECT_EQ(run("sat 'exists x. emp'").code, 3);
  EXPECT_EQ(run("sat emp --max-len 2 --max-nodes 10").code, 0);
}

TEST_F(Cli, Valid) {
  EXPECT_EQ(run("valid 'forall @a. @a == @a'").code, 0);
  std::string w = (dir_ / "cm.json").string();
  EXPECT_EQ(run("valid 'forall @a. @a == nil' --witness " + w).code, 1);
  EXPECT_EQ(run("check " + w + " '@a == nil'").code, 1);
}

TEST_F(Cli, WordEquations) {
  Result r = run("we solve '@a == 1 ^ 2'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("@a = 1 ^ 2"), std::string::npos) << r.out;
  EXPECT_EQ(run("we solve '@a ^ 2 == 1 ^ @a'").code, 1);
  r = run("we transform '@a == 1 & @b == 2'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "@a ^ 1 ^ @b ^ @a ^ 2 ^ @b == 1 ^ 1 ^ 2 ^ 1 ^ 2 ^ 2\n");
  EXPECT_EQ(run("we transform '@a == 1'").code, 3);
  EXPECT_EQ(run("we transform '@a == 1' --alphabet 1,2").code, 0);
  EXPECT_EQ(run("we solve '@a =='").code, 3);
}

TEST_F(Cli, Minsky) {
  std::string m1 = file("m1.txt", "1: inc C1 goto 2\n2: halt\n");
  std::string m2 = file("m2.txt", "1: test C1 zero 1 dec 1\n2: halt\n");
  EXPECT_EQ(run("minsky validate " + m1).code, 0);
  EXPECT_EQ(run("minsky validate " + m1 + " --regrouped").code, 0);
  Result r = run("minsky run " + m1);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 20), "(1, 0, 0)\n(2, 1, 0)\n");
  EXPECT_EQ(run("minsky run " + m2 + " --max-steps 100").code, 2);
  EXPECT_EQ(run("minsky validate " + m2 + " --max-steps 100").code, 2);
  r = run("minsky encode " + m1);
  EXPECT_EQ(r.code, 0);
  EXPECT_NO_THROW(seqsl::parse_formula(r.out));
  EXPECT_NE(err().find("shape:"), std::string::npos);
  EXPECT_EQ(run("minsky encode " + file("bad.txt", "1: inc C1 goto 3\n2: halt\n")).code, 3);
}
