#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "afbench/cli.hpp"

#include <sys/wait.h>
#include <unistd.h>

using namespace afbench;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("afbench_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const std::string kTable = std::string(AFBENCH_TEST_DATA_DIR) + "/published_accuracy.csv";

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"--nope"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"rank"}).code == 2);
  CHECK(run({"rank", "--input", kTable, "--baseline", "selu"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("rank on the published grid") {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run({"rank", "--input", kTable});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(r.code == 0);
  CHECK(secs < 1.0);
  CHECK(r.out.find("activation,mean_rank,score\nrelu,6.88,-\nswish,4.44,7\n") == 0);
  CHECK(r.out.find("pfts,2.25,8\n") != std::string::npos);
  CHECK(r.out.find("best mean rank: pfts 2.25") != std::string::npos);

  TempDir dir("rank");
  CHECK(run({"rank", "--input", kTable, "--out", dir.path.string()}).code == 0);
  CHECK(fs::exists(dir.path / "report.md"));
  CHECK(run({"rank", "--input", "/nonexistent.csv"}).code == 1);
}

TEST_CASE("gradcheck") {
  const auto r = run({"gradcheck"});
  CHECK(r.code == 0);
  CHECK(r.out.find("gradcheck: all passed") != std::string::npos);
  CHECK(run({"gradcheck", "--fn", "pfts", "--param", "0.3"}).code == 0);
  // A tolerance this tight cannot be met by finite differences.
  CHECK(run({"gradcheck", "--fn", "tanh", "--tol", "1e-15"}).code == 1);
}

TEST_CASE("analyze mean-activation") {
  const auto r = run({"analyze", "mean-activation", "--fn", "relu", "--samples", "100000"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("kind,param,n,seed,mean\nrelu,") == 0);
  CHECK(r.out.find("0.39894") != std::string::npos);
  CHECK(run({"analyze", "mean-activation", "--fn", "nope"}).code == 2);
}

TEST_CASE("train and benchmark from configs") {
  TempDir dir("bench");
  write(dir.path / "train.json",
        R"({"dataset": {"kind": "blobs", "n": 200, "d": 6, "classes": 3}, "network": "16-C",
            "activation": "pfts", "train": {"epochs": 2, "seed": 3}})");
  const auto t = run({"train", "--config", (dir.path / "train.json").string()});
  CHECK(t.code == 0);
  CHECK(t.out.find("epoch 2 loss") != std::string::npos);
  CHECK(t.out.find("activation parameters") != std::string::npos);

  write(dir.path / "bench.json",
        R"({"dataset": {"kind": "blobs", "n": 200, "d": 6, "classes": 3},
            "configs": ["16-C", "12-8-C"], "activations": ["relu", "pfts"], "runs": 2,
            "train": {"epochs": 2}})");
  const std::string cfg = (dir.path / "bench.json").string();
  REQUIRE(run({"benchmark", "--config", cfg, "--out", (dir.path / "a").string(), "--threads", "1"}).code == 0);
  REQUIRE(run({"benchmark", "--config", cfg, "--out", (dir.path / "b").string(), "--threads", "3"}).code == 0);
  for (const char* name : {"raw.csv", "summary.csv", "report.md", "curves.csv"}) {
    CAPTURE(name);
    CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
    CHECK_FALSE(slurp(dir.path / "a" / name).empty());
  }

  write(dir.path / "broken.json", "{\"dataset\": ");
  const auto broken = run({"benchmark", "--config", (dir.path / "broken.json").string(), "--out",
                           (dir.path / "c").string()});
  CHECK(broken.code == 2);
  CHECK(broken.err.find("config error") != std::string::npos);
  CHECK(run({"train", "--config", (dir.path / "missing.json").string()}).code == 2);
}

TEST_CASE("demo fit1d writes a curve") {
  TempDir dir("fit");
  const auto r = run({"demo", "fit1d", "--target", "sine", "--fn", "pfts", "--epochs", "5", "--hidden",
                      "8,8", "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir.path / "fit1d_sine_pfts.csv"));
  CHECK(run({"demo", "fit1d", "--fn", "selu"}).code == 2);
}

TEST_CASE("installed binary reports usage errors through its exit status") {
  const std::string cmd = std::string("\"") + AFBENCH_CLI_PATH + "\" --nope >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 2);
}
