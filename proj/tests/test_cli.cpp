#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "asg/io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "asg_cli_test";

std::string inst(const std::string& name) { return std::string(ASG_INSTANCE_DIR) + "/" + name; }
std::string work(const std::string& name) { return (kWork / name).string(); }

int run_cli(const std::string& args) {
  fs::create_directories(kWork);
  const std::string cmd = std::string(ASG_BINARY) + " " + args + " >" + work("stdout.txt") + " 2>" + work("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string write_instance(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  std::ofstream(work(name)) << text;
  return work(name);
}

}  // namespace

TEST_CASE("validate") {
  CHECK(run_cli("validate " + inst("single_subgroup.json")) == 0);
  CHECK(slurp(work("stdout.txt")) == "K=1 N=1\n");

  CHECK(run_cli("validate " + inst("not_symmetric.json")) == 2);
  CHECK(slurp(work("stderr.txt")).find("member 1") != std::string::npos);

  const auto bad = write_instance("bad_matrix.json",
                                  R"({"group": {"kind": "cayley", "table": [[0, 1], [1]]}, "family": [[0]]})");
  CHECK(run_cli("validate " + bad) == 1);
  CHECK(slurp(work("stderr.txt")).find("group.table[1]") != std::string::npos);

  const auto broken = write_instance("broken.json", "{\"group\": ");
  CHECK(run_cli("validate " + broken) == 1);
}

TEST_CASE("run") {
  CHECK(run_cli("run " + inst("single_subgroup.json") + " --out " + work("single.json")) == 0);
  auto report = asg::Json::parse(slurp(work("single.json")));
  CHECK(report["h_prime"] == asg::Json::array({0, 3}));
  CHECK(report["instance"]["family"][0] == report["h_prime"]);

  CHECK(run_cli("run " + inst("d4_five_subgroups.json") + " --oracle --check-lemmas --out " + work("d4.json")) == 0);
  report = asg::Json::parse(slurp(work("d4.json")));
  CHECK(report["oracle"]["status"] == "match");
  CHECK(report["status"] == "ok");
  CHECK(run_cli("verify " + work("d4.json")) == 0);

  report["h"] = asg::Json::array({0});
  std::ofstream(work("tampered.json")) << report.dump();
  CHECK(run_cli("verify " + work("tampered.json")) == 3);

  std::string family;
  for (int i = 1; i <= 13; ++i) family += std::string(i > 1 ? ", " : "") + "[0, " + std::to_string(i) + ", " +
                                          std::to_string(30 - i) + "]";
  const auto big = write_instance("big.json", R"({"group": {"kind": "cyclic", "n": 30}, "family": [)" + family + "]}");
  CHECK(run_cli("run " + big + " --out " + work("big_out.json")) == 4);

  CHECK(run_cli("run " + inst("z12_intervals.json") + " --out " + work("a.json")) == 0);
  CHECK(run_cli("run " + inst("z12_intervals.json") + " --out " + work("b.json") + " --quiet") == 0);
  CHECK(slurp(work("a.json")) == slurp(work("b.json")));

  CHECK(run_cli("oracle " + inst("z12_intervals.json")) == 0);
  CHECK(run_cli("oracle " + inst("d4_five_subgroups.json") + " --budget 1000000") == 0);
}

TEST_CASE("battery") {
  CHECK(run_cli("battery --trials 1 --seed 0 --out " + work("bat0.json")) == 0);
  CHECK(asg::Json::parse(slurp(work("bat0.json")))["violations"] == 0);

  CHECK(run_cli("battery --trials 3 --seed 2 --inject-fault --out " + work("fault.json") + " --reproducer " +
            work("repro.json")) == 3);
  CHECK(slurp(work("stderr.txt")).find(work("repro.json")) != std::string::npos);
  const auto repro = asg::parse_instance(slurp(work("repro.json")));
  CHECK(!repro.family.empty());
  CHECK(!fs::exists(work("fault.json")));
}

TEST_CASE("help documents exit codes") {
  CHECK(run_cli("--help") == 0);
  const auto help = slurp(work("stdout.txt"));
  CHECK(help.find("Exit codes") != std::string::npos);
  CHECK(help.find("4  a size cap") != std::string::npos);
  CHECK(run_cli("") == 1);
}
