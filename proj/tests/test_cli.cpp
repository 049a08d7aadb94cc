// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "ptspin_cli/commands.hpp"
#include "ptspin_cli/config.hpp"
#include "ptspin_cli/table.hpp"

using namespace ptspin;
using namespace ptspin::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_test_out" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_config(const fs::path& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> o{"system.omega=1", "system.omega1=1", "system.omega2=1",
                             "run.out_dir=\"" + out.string() + "\""};
  o.insert(o.end(), extra.begin(), extra.end());
  return config_from_json("{}", o);
}

int run_quiet(const std::string& command, const RunConfig& cfg) {
  std::ostringstream log;
  std::ostringstream err;
  return run(command, cfg, log, err);
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = config_from_json("{}", {});
  CHECK(c.model.D == 2.878);
  CHECK(c.model.g == 1.73);
  CHECK(c.workers == 1);
  CHECK(c.temperatures.size() == 200);
  CHECK(c.temperatures.front() == doctest::Approx(0.01));
  CHECK(c.temperatures.back() == doctest::Approx(3.75));
  CHECK(c.resolved.count("model.D") == 1);
  CHECK(known_keys().size() == c.resolved.size());
}

TEST_CASE("unknown keys and type mismatches are rejected") {
  CHECK_THROWS_AS(config_from_json(R"({"model.Dee": 1})", {}), ConfigError);
  CHECK_THROWS_AS(config_from_json("{}", {"grid.nope=3"}), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"model": {"D": "big"}})", {}), ConfigError);
  CHECK_THROWS_AS(config_from_json("{}", {"grid.t_steps=2.5"}), ConfigError);
  CHECK_THROWS_AS(config_from_json("{}", {"no_equals_sign"}), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1, 2]", {}), ConfigError);
  try {
    config_from_json(R"({"model.Dee": 1})", {});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("model.D") != std::string::npos);
  }
}

TEST_CASE("nested files, flat keys and overrides") {
  const RunConfig nested = config_from_json(R"({"model": {"g": 2.5, "alpha": 0.3}})", {});
  CHECK(nested.model.g == 2.5);
  CHECK(nested.model.alpha == 0.3);
  const RunConfig flat = config_from_json(R"({"model.g": 2.5})", {"model.g=0.7"});
  CHECK(flat.model.g == 0.7);
  const RunConfig list = config_from_json("{}", {"grid.g_values=[1, 2, 3]", "cycle.kind=stirling"});
  CHECK(list.g_values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(list.cycle_kind == CycleKind::kStirling);

  const fs::path dir = fresh_dir("file");
  std::ofstream(dir / "c.json") << R"({"grid": {"t_steps": 5}})";
  const RunConfig from_file = load_config((dir / "c.json").string(), {});
  CHECK(from_file.temperatures.size() == 5);
  CHECK_THROWS_AS(load_config((dir / "missing.json").string(), {}), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2) == "2");
  CHECK(format_number(std::int64_t{1} << 48) == "281474976710656");
}

TEST_CASE("table round trip") {
  const fs::path dir = fresh_dir("table");
  const RunConfig cfg = config_from_json("{}", {});
  {
    TableWriter w((dir / "t.tsv").string(), "demo", cfg, {"x", "y"});
    w.row({format_number(1.25), format_number(-3)});
    w.row({format_number(2.0), "nan"});
    CHECK_THROWS(w.row({"1"}));
  }
  const Table t = read_table((dir / "t.tsv").string());
  CHECK(t.columns == std::vector<std::string>{"x", "y"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.number(0, "x") == 1.25);
  CHECK(t.number(0, "y") == -3.0);
  CHECK(std::isnan(t.number(1, "y")));
  CHECK(t.comments.at(1) == "command: demo");
  CHECK_THROWS(t.column("z"));
}

TEST_CASE("blocks-dump") {
  const fs::path dir = fresh_dir("blocks");
  CHECK(run_quiet("blocks-dump", small_config(dir)) == kExitOk);
  const Table summary = read_table((dir / "blocks_summary.tsv").string());
  CHECK(summary.rows.at(0).at(summary.column("complete")) == "1");
  CHECK(summary.number(0, "dimension") == 256.0);
  const Table blocks = read_table((dir / "blocks.tsv").string());
  double total = 0.0;
  for (std::size_t r = 0; r < blocks.rows.size(); ++r) {
    total += blocks.number(r, "mult") * blocks.number(r, "dim");
  }
  CHECK(total == 256.0);
}

TEST_CASE("spectrum and thermo are deterministic") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const std::vector<std::string> extra{"grid.t_steps=12", "model.alpha=0.4"};
  for (const char* cmd : {"spectrum", "thermo"}) {
    CAPTURE(cmd);
    CHECK(run_quiet(cmd, small_config(a, extra)) == kExitOk);
    CHECK(run_quiet(cmd, small_config(b, extra)) == kExitOk);
  }
  for (const char* f : {"spectrum.tsv", "spectrum_ground.tsv", "thermo.tsv"}) {
    CAPTURE(f);
    const std::string x = slurp(a / f);
    CHECK(!x.empty());
    // Only the out_dir comment line differs.
    const auto strip = [](const std::string& s) {
      std::istringstream in(s);
      std::string line;
      std::string out;
      while (std::getline(in, line)) {
        if (line.rfind("# run.out_dir", 0) != 0) {
          out += line + '\n';
        }
      }
      return out;
    };
    CHECK(strip(x) == strip(slurp(b / f)));
  }
  const Table t = read_table((a / "thermo.tsv").string());
  CHECK(t.rows.size() == 12);
}

TEST_CASE("invalid grids are a request error") {
  const fs::path dir = fresh_dir("bad");
  CHECK(run_quiet("thermo", small_config(dir, {"grid.t_steps=0"})) == kExitInfeasible);
  CHECK(run_quiet("tc-map", small_config(dir, {"grid.alpha_min=1", "grid.alpha_max=0.5"})) ==
        kExitInfeasible);
  CHECK(run_quiet("no-such-command", small_config(dir)) == kExitInfeasible);
}

TEST_CASE("oracle-check passes") {
  const fs::path dir = fresh_dir("oracle");
  CHECK(run_quiet("oracle-check", small_config(dir)) == kExitOk);
  const Table t = read_table((dir / "oracle.tsv").string());
  // alpha and g values are paired.
  CHECK(t.rows.size() == 2 * 4);
  CHECK_THROWS_AS(small_config(dir, {"oracle.g_values=[1]"}), ConfigError);
}

TEST_CASE("executable exit codes") {
  const std::string exe = PTSPIN_EXE;
  const fs::path dir = fresh_dir("exe");
  const std::string small = " --set system.omega=1 --set system.omega1=1 --set system.omega2=1";
  CHECK(shell(exe + " --help") == 0);
  CHECK(shell(exe + " blocks-dump --out " + dir.string() + small) == 0);
  CHECK(fs::exists(dir / "blocks.tsv"));
  CHECK(shell(exe + " blocks-dump --set model.bogus=1") == 2);
  CHECK(shell(exe + " frobnicate") == 2);
  CHECK(shell(exe + " thermo --out " + dir.string() + small + " --t-min 2 --t-max 1") == 2);
  CHECK(shell(exe + " --list-keys") == 0);
}
