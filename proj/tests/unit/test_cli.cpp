#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "dlkb/io.hpp"
#include "dlkb/service.hpp"
#include "dlkb/text_format.hpp"

using namespace dlkb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// stdout and stderr together
Run cli(const std::string& args) {
  const std::string cmd = std::string(DLKB_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* name) { return std::string(DLKB_SOURCE_DIR) + "/data/" + name; }

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("dlkb_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("check and classify") {
  Run r = cli("check " + data("traffic.kb"));
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("consistent"));

  r = cli("classify " + data("traffic.kb"));
  CHECK(r.code == 0);
  CHECK(r.out.find("    WeatherDanger\n      BlindingLightDanger\n      LowFrictionDanger\n") != std::string::npos);
  r = cli("classify " + data("traffic.kb") + " --format pairs");
  CHECK(r.out.find("LowFrictionDanger WeatherDanger\n") != std::string::npos);
  CHECK(r.out.find("WetSurfaceDanger LowFrictionDanger\n") != std::string::npos);
}

TEST_CASE("sat, query and realize") {
  Run r = cli("sat " + data("traffic.kb") + " \"Computer and hasConnection only Nothing\"");
  CHECK(r.code == 0);
  CHECK(r.out == "satisfiable\n");
  CHECK(cli("sat " + data("traffic.kb") + " \"LowFrictionDanger and not WeatherDanger\"").out == "unsatisfiable\n");

  r = cli("realize " + data("goodcpu.kb"));
  CHECK(r.out.find("Itanium: GoodCPU\n") != std::string::npos);
}

TEST_CASE("sync matches the service") {
  TempDir tmp;
  const std::string synced = (tmp.path / "synced.kb").string();
  Run r = cli("sync --core " + data("traffic.kb") + " --store " + data("sample_store.json") + " --out " + synced);
  REQUIRE(r.code == 0);
  r = cli("query " + synced + " \"TrafficDanger and hasCondition some (hasLocation value c30-020)\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("\nsubclasses: TrafficCongestionDanger\n") != std::string::npos);

  Service service(parse_text(read_file(data("traffic.kb"))), data("sample_store.json"));
  CHECK(read_file(synced) == service.synchronize_now()->text);
  CHECK(cli("classify " + synced).out == render_tree(service.snapshot()->taxonomy()));
}

TEST_CASE("convert sniffs the input format") {
  TempDir tmp;
  const std::string xml = (tmp.path / "goodcpu.owl").string();
  const std::string back = (tmp.path / "goodcpu.kb").string();
  REQUIRE(cli("convert " + data("goodcpu.kb") + " " + xml).code == 0);
  CHECK(read_file(xml).starts_with("<?xml"));
  REQUIRE(cli("convert " + xml + " " + back).code == 0);
  CHECK(serialize_text(parse_text(read_file(back))) == serialize_text(parse_text(read_file(data("goodcpu.kb")))));
  REQUIRE(cli("convert " + data("goodcpu.kb") + " " + back + " --to text").code == 0);
  CHECK(read_file(back) == serialize_text(parse_text(read_file(data("goodcpu.kb")))));
}

TEST_CASE("exit codes") {
  CHECK(cli("hash-password traffic").out == "c8ab51895da8a2a3ea04f31bd7e317af88596327\n");
  CHECK(cli("").code == 2);
  CHECK(cli("classify").code == 2);
  CHECK(cli("classify x.kb --format xml").code == 2);
  CHECK(cli("--help").code == 0);

  Run r = cli("check /nonexistent.kb");
  CHECK(r.code == 1);
  CHECK(r.out.find("nonexistent.kb") != std::string::npos);

  TempDir tmp;
  write_file(tmp.path / "bad.kb", "Class: A\n    SubClassOf: B and and C\n");
  r = cli("check " + (tmp.path / "bad.kb").string());
  CHECK(r.code == 1);
  CHECK(r.out.find("bad.kb:2:") != std::string::npos);

  write_file(tmp.path / "inconsistent.kb", "Class: A\nClass: B\n    DisjointWith: A\nIndividual: x\n    Types: A, B\n");
  r = cli("check " + (tmp.path / "inconsistent.kb").string());
  CHECK(r.code == 1);
  CHECK(r.out.find("inconsistent") != std::string::npos);
  CHECK(r.out.find("terminate") == std::string::npos);
}
