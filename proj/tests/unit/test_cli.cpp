#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(KERNELOP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "kernelop_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, SuccessWritesArtifacts) {
  const fs::path cfg = write_config("ok.json", R"({"J": 12, "n0": 2, "n_sims": 2, "l_max": 8})");
  const fs::path out = fs::temp_directory_path() / "kernelop_cli_test" / "ok_out";
  fs::remove_all(out);
  EXPECT_EQ(run("experiment --config " + cfg.string() + " --out " + out.string() + " --jobs 2"), 0);
  EXPECT_TRUE(fs::exists(out / "runs.csv"));
  EXPECT_TRUE(fs::exists(out / "summary.csv"));
  EXPECT_EQ(run("generate --config " + cfg.string() + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "integral_sim1.kop"));
  EXPECT_EQ(run("solve --config " + cfg.string() + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "report.json"));
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path bad = write_config("bad.json", R"({"experiment": "ablation"})");
  EXPECT_EQ(run("experiment --config " + bad.string()), 2);
  EXPECT_EQ(run("experiment --config /nonexistent/cfg.json"), 2);
  EXPECT_EQ(run("experiment"), 2);
  EXPECT_EQ(run("frobnicate --config x.json"), 2);
}

TEST(Cli, RuntimeErrorsExitOne) {
  const fs::path cfg = write_config("rt.json", R"({"J": 12, "n0": 2, "n_sims": 1})");
  EXPECT_EQ(run("experiment --config " + cfg.string() + " --out /proc/kernelop_forbidden"), 1);
}
