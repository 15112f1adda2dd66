#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using gradsum::cli::run;

namespace {

const fs::path kGolden = GRADSUM_GOLDEN_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / ("gradsum_test_" + name);
  std::ofstream(p) << text;
  return p;
}

// Whitespace-separated words; double quotes group.
std::vector<std::string> split_args(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, any = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      any = true;
    } else if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
      if (any) out.push_back(cur);
      cur.clear();
      any = false;
    } else {
      cur += c;
      any = true;
    }
  }
  if (any) out.push_back(cur);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
  auto ok = write_temp("ok.gsum", "(inj2 () : Unit +? Unit)");
  auto bad = write_temp("bad.gsum", "case () of inj1 x => x");
  auto garbled = write_temp("garbled.gsum", "fn => (");
  auto doomed = write_temp("doomed.gsum", "case (inj1 () : Unit +? Unit) of inj2 y => y");
  auto loop = write_temp("loop.gsum", "(fn f => f ()) (fn x => x) : Unit");

  EXPECT_EQ(cli({"check", ok.string()}).code, gradsum::cli::kOk);
  EXPECT_EQ(cli({"check", bad.string(), "--type", "Unit"}).code, gradsum::cli::kTypeError);
  EXPECT_EQ(cli({"check", garbled.string()}).code, gradsum::cli::kParseError);
  EXPECT_EQ(cli({"run", doomed.string(), "--type", "Unit"}).code, gradsum::cli::kMatchfail);
  EXPECT_EQ(cli({"frobnicate"}).code, gradsum::cli::kUsage);
  EXPECT_EQ(cli({}).code, gradsum::cli::kUsage);
  EXPECT_EQ(cli({"check", "/no/such/file.gsum"}).code, gradsum::cli::kUsage);
  EXPECT_EQ(cli({"relations", "--table", "nonsense"}).code, gradsum::cli::kUsage);
}

TEST(Cli, BudgetExceeded) {
  auto p = write_temp("budget.gsum", "((fn f => f (f ())) : (Unit -> Unit) -> Unit) (fn x => x)");
  auto r = cli({"run", p.string(), "--type", "Unit", "--max-steps", "1"});
  EXPECT_EQ(r.code, gradsum::cli::kBudget) << r.out << r.err;
}

TEST(Cli, SynthAndCheckOutput) {
  auto p = write_temp("synth.gsum", "(inj2 () : Unit +? Unit)");
  auto r = cli({"synth", p.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(inj2 () : Unit +? Unit) => Unit +? Unit\n");
  r = cli({"check", p.string(), "--type", "Unit +2 Unit"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "(inj2 () : Unit +? Unit) <= Unit +2 Unit\n");
}

TEST(Cli, FragmentChecks) {
  auto dyn = write_temp("dyn.gsum", "(inj1 () : Unit +? Unit)");
  EXPECT_EQ(cli({"fragment", "--dynamic", dyn.string()}).code, 0);
  EXPECT_NE(cli({"fragment", "--static", dyn.string()}).code, 0);
}

TEST(Cli, FuzzSmallSuite) {
  auto r = cli({"fuzz", "--suite", "relations-oracle", "--oracle-depth", "1"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("relations-oracle"), std::string::npos);
}

// Golden outputs: each line of cases.txt is `name | args`; the expected
// file holds the exit code then stdout. GRADSUM_UPDATE_GOLDEN=1 rewrites.
TEST(Cli, Golden) {
  std::ifstream cases(kGolden / "cases.txt");
  ASSERT_TRUE(cases) << kGolden;
  const bool update = std::getenv("GRADSUM_UPDATE_GOLDEN") != nullptr;
  std::string line;
  int n = 0;
  while (std::getline(cases, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto bar = line.find('|');
    ASSERT_NE(bar, std::string::npos) << line;
    std::string name = line.substr(0, bar);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    auto args = split_args(line.substr(bar + 1));
    for (auto& a : args)
      if (a.size() > 5 && a.substr(a.size() - 5) == ".gsum") a = (kGolden / a).string();
    auto r = cli(args);
    std::string got = "exit: " + std::to_string(r.code) + "\n" + r.out;
    fs::path want = kGolden / "expected" / (name + ".out");
    if (update) {
      std::ofstream(want) << got;
    } else {
      ASSERT_TRUE(fs::exists(want)) << want;
      EXPECT_EQ(got, slurp(want)) << name;
    }
    ++n;
  }
  EXPECT_EQ(n, 24);
}
