// zk3d: command line front end for the solver library.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "zk3d/config.hpp"
#include "zk3d/diagnostics.hpp"
#include "zk3d/ground_state.hpp"
#include "zk3d/runner.hpp"
#include "zk3d/scenarios.hpp"
#include "zk3d/snapshot.hpp"
#include "zk3d/spectral.hpp"

namespace {

using namespace zk3d;
namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::string out;
  int threads = 1;
  bool quiet = false;
};

std::string num(double v) { return format_number(v); }

Extent3 extent_from(const std::vector<std::size_t>& n) {
  if (n.size() == 1) return {n[0], n[0], n[0]};
  return {n[0], n[1], n[2]};
}

Vec3 scale_from(const std::vector<double>& l) {
  if (l.size() == 1) return {l[0], l[0], l[0]};
  return {l[0], l[1], l[2]};
}

int cmd_soliton(const Globals& g, double c, const std::vector<std::size_t>& n, const std::vector<double>& l,
                std::string file) {
  const Grid grid = make_grid(extent_from(n), scale_from(l));
  GroundStateSettings settings;
  if (!g.config.empty()) settings = load_config(g.config).ground_state;
  const GroundStateResult r = solve_profile(grid, c, settings);
  const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  if (file.empty()) file = "soliton_c" + num(c) + ".zk3d";
  write_snapshot(dir / file, r.q);
  if (!g.quiet) {
    std::cout << "c = " << num(c) << "\nnewton_iters = " << r.newton_iters << "\ngmres_iterations = "
              << r.gmres_iterations << "\nresidual = " << num(r.residual_norm) << "\npeak = " << num(max_abs(r.q))
              << "\nmass = " << num(mass(r.q)) << "\nenergy = " << num(energy(r.q)) << "\nfile = "
              << (dir / file).string() << '\n';
  }
  return kExitOk;
}

int cmd_evolve(const Globals& g, const std::string& preset_name) {
  RunConfig cfg;
  if (!g.config.empty()) {
    cfg = load_config(g.config);
  } else if (!preset_name.empty()) {
    cfg = parse_config(preset_config_text(preset_name));
  } else {
    throw ParseError("evolve needs --config or --preset", 0);
  }
  if (!g.out.empty()) cfg.output_dir = g.out;
  const RunReport report = run(cfg, g.quiet ? nullptr : &std::cerr);
  if (report.exit_code != kExitOk) {
    std::cerr << "error: " << report.message << '\n';
    return report.exit_code;
  }
  if (!g.quiet) {
    if (!report.series.empty()) {
      const auto& last = report.series.back();
      std::cout << "t = " << num(last.t) << "\nlinf = " << num(last.linf) << "\nmass_drift = " << num(last.mass_drift)
                << "\nenergy_drift = " << num(last.energy_drift) << '\n';
    }
    if (report.fit) std::cout << format_fit_report(*report.fit);
    if (report.two_fit) std::cout << format_fit_report(*report.two_fit);
    std::cout << "output = " << report.output_dir.string() << '\n';
  }
  return kExitOk;
}

int cmd_fit(const std::string& snapshot, const std::string& reference, int peaks, double exclusion, bool interpolated) {
  const PeakMode mode = interpolated ? PeakMode::interpolated : PeakMode::node;
  const Snapshot u = read_snapshot(snapshot);
  const Snapshot q = read_snapshot(reference);
  if (!(u.field.grid() == q.field.grid())) throw ParameterError("snapshot and reference grids differ");
  if (peaks == 2) std::cout << format_fit_report(fit_two_solitons(u.field, q.field, exclusion, mode));
  else std::cout << format_fit_report(fit_soliton(u.field, q.field, mode));
  return kExitOk;
}

int cmd_diag(const std::string& snapshot, std::optional<double> theta, double delta, const std::string& frame,
             std::optional<double> front_threshold) {
  const Snapshot s = read_snapshot(snapshot);
  const RealField& u = s.field;
  const SpectralField uh = forward_transform(u);
  const auto am = argmax_index(u);
  const Vec3 center = node_coordinates(u.grid(), am);
  std::cout << "time = " << num(s.time) << "\nv_x = " << num(s.v_x) << "\nlinf = " << num(max_abs(u))
            << "\nargmax = " << num(center[0]) << ' ' << num(center[1]) << ' ' << num(center[2])
            << "\nmass = " << num(mass(u)) << "\nenergy = " << num(energy(u, uh)) << '\n';
  if (theta) {
    ConeParams p{delta, *theta, frame == "lab" ? ConeFrame::lab : ConeFrame::soliton};
    validate(p);
    const ConeNorms c = cone_norms(u, s.time, p, center);
    std::cout << "cone_inside = " << num(c.inside) << "\ncone_outside = " << num(c.outside) << '\n';
  }
  try {
    std::cout << "front_angle = " << num(radiation_front_angle(u, front_threshold.value_or(0.0))) << '\n';
  } catch (const NoRadiationError& e) {
    std::cout << "front_angle = none (" << e.what() << ")\n";
  }
  const SpectralDecay d = spectral_decay_report(uh);
  std::cout << "spectral_outer_shell = " << num(d.outer()) << "\nspectral_outer_band4 = " << num(d.outer_band(4))
            << "\nspectral_peak = " << num(d.shell_max.empty() ? 0.0 : d.shell_max.front()) << '\n';
  return kExitOk;
}

int cmd_presets() {
  for (const auto& p : preset_catalog()) {
    std::printf("%-28s %-24s t_end=%-5g n_steps=%-6ld v_x=%g  %s\n", p.name.c_str(),
                std::string(to_string(p.spec.kind)).c_str(), p.t_end, p.n_steps, p.spec.v_x, p.description.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D Zakharov-Kuznetsov pseudospectral solver"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run configuration file");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "FFT threads")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  double c = 1.0;
  std::vector<std::size_t> n{64};
  std::vector<double> l{6.0};
  std::string file;
  auto* soliton = app.add_subcommand("soliton", "Solve for the speed-c ground state and write a snapshot");
  soliton->add_option("--c", c, "Soliton speed")->check(CLI::PositiveNumber);
  soliton->add_option("--n", n, "Modes per axis (1 or 3 values)")->expected(1, 3);
  soliton->add_option("--l", l, "Domain scale per axis (1 or 3 values)")->expected(1, 3);
  soliton->add_option("--file", file, "Snapshot file name inside --out");

  std::string preset_name;
  auto* evolve = app.add_subcommand("evolve", "Run a configuration or preset");
  evolve->add_option("--preset", preset_name, "Preset name (ignored when --config is given)");

  std::string snapshot, reference;
  int peaks = 1;
  double exclusion = 3.0;
  bool interpolated = false;
  auto* fit = app.add_subcommand("fit", "Fit a snapshot against a reference profile");
  fit->add_option("snapshot", snapshot, "Snapshot to fit")->required();
  fit->add_option("--reference", reference, "Unit-speed reference snapshot")->required();
  fit->add_option("--peaks", peaks, "Number of solitons to fit")->check(CLI::IsMember({1, 2}));
  fit->add_option("--exclusion", exclusion, "Exclusion radius around the first peak");
  fit->add_flag("--interpolated", interpolated, "Locate peaks on the spectral interpolant instead of the grid");

  std::optional<double> theta, front;
  double delta = 0.05;
  std::string frame = "soliton";
  auto* diag = app.add_subcommand("diag", "Report mass, energy, cone norms and spectral decay");
  diag->add_option("snapshot", snapshot, "Snapshot to inspect")->required();
  diag->add_option("--cone-theta", theta, "Cone angle; enables the cone report");
  diag->add_option("--cone-delta", delta, "Cone speed margin");
  diag->add_option("--cone-frame", frame, "soliton or lab")->check(CLI::IsMember({"soliton", "lab"}));
  diag->add_option("--front-threshold", front, "Absolute threshold for the radiation front angle (default: 5% of the trailing maximum)");

  auto* presets = app.add_subcommand("presets", "List the scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    set_fft_threads(g.threads);
    if (soliton->parsed()) {
      if (n.size() == 2 || l.size() == 2) throw ParseError("--n and --l take 1 or 3 values", 0);
      return cmd_soliton(g, c, n, l, file);
    }
    if (evolve->parsed()) return cmd_evolve(g, preset_name);
    if (fit->parsed()) return cmd_fit(snapshot, reference, peaks, exclusion, interpolated);
    if (diag->parsed()) return cmd_diag(snapshot, theta, delta, frame, front);
    if (presets->parsed()) return cmd_presets();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}
