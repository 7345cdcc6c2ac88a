#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "zk3d/config.hpp"
#include "zk3d/diagnostics.hpp"
#include "zk3d/error.hpp"
#include "zk3d/ground_state.hpp"
#include "zk3d/runner.hpp"
#include "zk3d/scenarios.hpp"
#include "zk3d/snapshot.hpp"

using namespace zk3d;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zk3d_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Shell {
  int status = -1;
  std::string out;
};

Shell cli(const std::string& args) {
  const fs::path capture = fs::temp_directory_path() / "zk3d_test_cli_capture.txt";
  const std::string cmd = std::string(ZK3D_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  Shell s;
  s.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  s.out = slurp(capture);
  return s;
}

int parse_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string small_run(const fs::path& dir) {
  return "grid.n = 16 16 16\n"
         "grid.l = 1.5\n"
         "scenario.kind = gaussian\n"
         "scenario.A = 2\n"
         "evolution.t_end = 0.02\n"
         "evolution.n_steps = 20\n"
         "evolution.v_x = 0.5\n"
         "evolution.sample_every = 5\n"
         "evolution.snapshot_times = 0.01\n"
         "diagnostics.fit = false\n"
         "diagnostics.cone = true\n"
         "output.dir = " +
         dir.string() + "\n";
}

RealField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RealField u(g);
  for (auto& v : u.values()) v = nd(rng);
  return u;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("long-run preset text") {
    const RunConfig c = parse_config(
        "grid.n = 256 256 256\n"
        "grid.l = 6 6 6\n"
        "scenario.preset = stability_1.1Q\n"
        "evolution.n_steps = 10000\n"
        "evolution.v_x = 1\n");
    CHECK(c.n == Extent3{256, 256, 256});
    CHECK(c.l[0] == 6.0);
    CHECK(c.evolution.n_steps == 10000);
    CHECK(c.evolution.v_x == 1.0);
    CHECK(c.evolution.t_end == 12.0);
    CHECK(c.scenario.kind == ScenarioKind::scaled_soliton);
    CHECK(c.scenario.param("lambda") == doctest::Approx(1.1));
  }
  SUBCASE("scenario is required") {
    try {
      parse_config("grid.n = 32\n# nothing else\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("scenario required") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(""), ParseError);
  }
  SUBCASE("evenness is the only grid constraint") {
    const RunConfig c = parse_config("scenario.preset = soliton_test\ngrid.n = 100 100 100\n");
    CHECK(c.n == Extent3{100, 100, 100});
    CHECK(parse_line("scenario.preset = soliton_test\ngrid.n = 101\n") == 2);
  }
  SUBCASE("errors name the line") {
    CHECK(parse_line("scenario.preset = soliton_test\n\nevolution.bogus = 3\n") == 3);
    CHECK(parse_line("scenario.preset = soliton_test\nevolution.n_steps = many\n") == 2);
    CHECK(parse_line("scenario.preset = soliton_test\nevolution.n_steps = 0\n") == 2);
    CHECK(parse_line("scenario.preset = soliton_test\ngrid.l = 3\ngrid.l = 4\n") == 3);
    CHECK(parse_line("scenario.preset = no_such_preset\n") == 1);
    CHECK(parse_line("scenario.preset = soliton_test\nscenario.kind = gaussian\n") == 2);
    CHECK(parse_line("scenario.preset = soliton_test\njust words\n") == 2);
    CHECK(parse_line("scenario.preset = soliton_test\ndiagnostics.cone_theta = 2\n") == 2);
  }
  SUBCASE("explicit scenario with pi arithmetic") {
    const RunConfig c = parse_config(
        "scenario.kind = twin_pair\n"
        "scenario.a = 6*pi/8   # half separation\n"
        "scenario.v_x = 1\n"
        "evolution.t_end = 0.3\n"
        "evolution.n_steps = 7\n");
    CHECK(c.scenario.param("a") == doctest::Approx(6.0 * std::numbers::pi / 8.0).epsilon(1e-15));
    CHECK(c.evolution.time_at(c.evolution.n_steps) == c.evolution.t_end);
  }
  SUBCASE("every preset parses and validates") {
    for (const auto& p : preset_catalog()) {
      CAPTURE(p.name);
      const RunConfig c = parse_config(preset_config_text(p.name));
      CHECK(c.preset_name == p.name);
      CHECK_NOTHROW(validate(c.scenario));
      CHECK_NOTHROW(validate(c.evolution));
      CHECK(c.evolution.time_at(c.evolution.n_steps) == c.evolution.t_end);
    }
  }
}

TEST_CASE("snapshot files") {
  const Grid g = make_grid({8, 6, 4}, {1.0, 2.0, 0.5});
  const RealField u = random_field(g, 11);
  const std::string bytes = encode_snapshot(u, 0.25, -1.5);
  REQUIRE(bytes.size() == kSnapshotHeaderBytes + 8 * g.size());
  CHECK(bytes.substr(0, 4) == "ZK3D");
  CHECK(bytes.substr(4, 4) == std::string("\x01\x00\x00\x00", 4));
  CHECK(bytes.substr(8, 8) == std::string("\x08\0\0\0\0\0\0\0", 8));

  SUBCASE("round trip is bitwise") {
    const fs::path dir = scratch("snap");
    fs::create_directories(dir);
    write_snapshot(dir / "u.zk3d", u, 0.25, -1.5);
    const Snapshot s = read_snapshot(dir / "u.zk3d");
    CHECK(s.time == 0.25);
    CHECK(s.v_x == -1.5);
    CHECK(s.field.grid().nx() == 8);
    CHECK(s.field.grid().l(Axis::y) == 2.0);
    CHECK(encode_snapshot(s.field, s.time, s.v_x) == bytes);
    fs::remove_all(dir);
  }
  SUBCASE("malformed input") {
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_snapshot(bad), FormatError);
    bad = bytes;
    bad[4] = 2;
    CHECK_THROWS_AS(decode_snapshot(bad), FormatError);
    CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, bytes.size() - 8)), FormatError);
    CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, 20)), FormatError);
    bad = bytes;
    bad[8] = 9;  // n_x no longer matches the payload
    CHECK_THROWS_AS(decode_snapshot(bad), FormatError);
    CHECK_THROWS_AS(read_snapshot(scratch("missing") / "nope.zk3d"), IoError);
  }
}

TEST_CASE("number formatting keeps 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(std::stod(format_number(std::numbers::pi)) == std::numbers::pi);
}

TEST_CASE("run writes the artifacts and is deterministic") {
  const fs::path a = scratch("run_a") / "nested" / "dir";
  const fs::path b = scratch("run_b");
  const RunReport ra = run(parse_config(small_run(a)));
  REQUIRE(ra.exit_code == kExitOk);
  CHECK(fs::is_directory(a));
  for (const char* f : {"timeseries.csv", "initial.zk3d", "final.zk3d", "spectral_decay.csv", "snapshot_t0.010000.zk3d"})
    CHECK(fs::exists(a / f));
  CHECK_FALSE(fs::exists(a / "fit_report.txt"));

  const std::string csv = slurp(a / "timeseries.csv");
  CHECK(csv.rfind("t,linf,argmax_x,argmax_y,argmax_z,mass,energy,mass_drift,energy_drift,cone_inside,cone_outside\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  REQUIRE(ra.series.size() == 5);
  CHECK(ra.series.back().t == 0.02);
  CHECK(ra.series.back().has_cone);

  const RunReport rb = run(parse_config(small_run(b)));
  REQUIRE(rb.exit_code == kExitOk);
  CHECK(slurp(b / "timeseries.csv") == csv);
  CHECK(slurp(b / "final.zk3d") == slurp(a / "final.zk3d"));
  CHECK(slurp(b / "spectral_decay.csv") == slurp(a / "spectral_decay.csv"));
  fs::remove_all(scratch("run_a"));
  fs::remove_all(b);
}

TEST_CASE("run reports failures with distinct exit codes") {
  const fs::path blocker = scratch("blocker");
  { std::ofstream(blocker) << "not a directory"; }
  const RunReport io = run(parse_config(small_run(blocker / "out")));
  CHECK(io.exit_code == kExitIo);
  CHECK_FALSE(io.message.empty());
  fs::remove(blocker);

  const fs::path dir = scratch("blowup");
  std::string text = small_run(dir);
  text += "scenario.A = 400\n";
  text.erase(text.find("scenario.A = 2\n"), 15);
  text.replace(text.find("evolution.n_steps = 20"), 22, "evolution.n_steps = 2");
  text.replace(text.find("evolution.t_end = 0.02"), 22, "evolution.t_end = 5");
  const RunReport blow = run(parse_config(text));
  CHECK(blow.exit_code == kExitEvolution);
  CHECK(fs::exists(dir / "timeseries.csv"));
  fs::remove_all(dir);

  CHECK(exit_code_for(ParseError("x", 3)) == kExitParse);
  CHECK(exit_code_for(IoError("x")) == kExitIo);
  CHECK(exit_code_for(NewtonNonConvergence("x", {1.0})) == kExitSolver);
}

TEST_CASE("run with a soliton scenario fits the final state") {
  const fs::path dir = scratch("soliton");
  const RunConfig cfg = parse_config(
      "grid.n = 48\n"
      "grid.l = 2\n"
      "scenario.kind = scaled_soliton\n"
      "scenario.lambda = 1\n"
      "scenario.v_x = 1\n"
      "evolution.t_end = 0.05\n"
      "evolution.n_steps = 50\n"
      "output.dir = " +
      dir.string() + "\n");
  const RunReport r = run(cfg);
  REQUIRE(r.exit_code == kExitOk);
  REQUIRE(r.fit.has_value());
  CHECK(r.fit->c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.fit->relative_residual < 1e-9);
  CHECK(r.series.back().energy_drift < 1e-10);
  CHECK(slurp(dir / "fit_report.txt").find("c = ") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");

  const Shell presets = cli("presets");
  CHECK(presets.status == 0);
  CHECK(std::count(presets.out.begin(), presets.out.end(), '\n') >= 14);
  for (const auto& p : preset_catalog()) CHECK(presets.out.find(p.name) != std::string::npos);

  const Shell sol = cli("--out " + dir.string() + " soliton --c 2 --n 32 --l 2 --file q2.zk3d");
  REQUIRE(sol.status == 0);
  const Shell one = cli("--out " + dir.string() + " --quiet soliton --n 32 --l 2 --file q1.zk3d");
  REQUIRE(one.status == 0);
  const Snapshot q2 = read_snapshot(dir / "q2.zk3d");
  const Snapshot q1 = read_snapshot(dir / "q1.zk3d");
  CHECK(max_abs(q2.field) / max_abs(q1.field) == doctest::Approx(2.0).epsilon(1e-3));

  const std::string q1p = (dir / "q1.zk3d").string();
  const Shell self = cli("fit " + q1p + " --reference " + q1p);
  CHECK(self.status == 0);
  CHECK(self.out.find("c = 1\n") != std::string::npos);
  const Shell two = cli("fit " + (dir / "q2.zk3d").string() + " --reference " + q1p);
  CHECK(two.status == 0);
  CHECK(two.out.find("c = 2") != std::string::npos);

  const Shell diag = cli("diag " + q1p);
  CHECK(diag.status == 0);
  CHECK(diag.out.find("mass = ") != std::string::npos);
  CHECK(diag.out.find("spectral_outer_shell = ") != std::string::npos);

  CHECK(cli("fit").status == kExitParse);
  CHECK(cli("soliton --c -1").status == kExitParse);
  CHECK(cli("bogus").status == kExitParse);
  CHECK(cli("diag " + (dir / "absent.zk3d").string()).status == kExitIo);

  { std::ofstream(dir / "bad.cfg") << "grid.n = 33\nscenario.preset = soliton_test\n"; }
  const Shell bad = cli("--config " + (dir / "bad.cfg").string() + " evolve");
  CHECK(bad.status == kExitParse);
  CHECK(bad.out.find("line 1") != std::string::npos);
  fs::remove_all(dir);
}
