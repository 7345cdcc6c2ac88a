#include "zk3d/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "zk3d/etd.hpp"
#include "zk3d/gmres.hpp"
#include "zk3d/scenarios.hpp"
#include "zk3d/snapshot.hpp"
#include "zk3d/spectral.hpp"

namespace zk3d {
namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ScenarioError*>(&e) ||
      dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const InvalidGridError*>(&e)) {
    return kExitParse;
  }
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const fs::filesystem_error*>(&e)) {
    return kExitIo;
  }
  if (dynamic_cast<const BlowUpError*>(&e)) return kExitEvolution;
  return kExitSolver;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_timeseries_csv(const fs::path& path, const DiagnosticsSeries& series) {
  std::ostringstream s;
  s << "t,linf,argmax_x,argmax_y,argmax_z,mass,energy,mass_drift,energy_drift,cone_inside,cone_outside\n";
  for (const auto& r : series) {
    s << format_number(r.t) << ',' << format_number(r.linf) << ',' << format_number(r.argmax[0]) << ','
      << format_number(r.argmax[1]) << ',' << format_number(r.argmax[2]) << ',' << format_number(r.mass) << ','
      << format_number(r.energy) << ',' << format_number(r.mass_drift) << ',' << format_number(r.energy_drift)
      << ',';
    if (r.has_cone) s << format_number(r.cone_inside) << ',' << format_number(r.cone_outside);
    else s << ',';
    s << '\n';
  }
  write_text(path, s.str());
}

void write_spectral_decay_csv(const fs::path& path, const SpectralDecay& initial, const SpectralDecay& final) {
  std::ostringstream s;
  s << "shell,initial_max,final_max\n";
  const std::size_t n = std::max(initial.shell_max.size(), final.shell_max.size());
  for (std::size_t k = 0; k < n; ++k) {
    s << k << ',' << (k < initial.shell_max.size() ? format_number(initial.shell_max[k]) : "") << ','
      << (k < final.shell_max.size() ? format_number(final.shell_max[k]) : "") << '\n';
  }
  write_text(path, s.str());
}

std::string format_fit_report(const SolitonFit& fit) {
  std::ostringstream s;
  s << "peaks = 1\n"
    << "c = " << format_number(fit.c) << '\n'
    << "center = " << format_number(fit.center[0]) << ' ' << format_number(fit.center[1]) << ' '
    << format_number(fit.center[2]) << '\n'
    << "residual_inf = " << format_number(fit.residual_inf) << '\n'
    << "residual_l2 = " << format_number(fit.residual_l2) << '\n'
    << "relative_residual = " << format_number(fit.relative_residual) << '\n';
  return s.str();
}

std::string format_fit_report(const TwoSolitonFit& fit) {
  std::ostringstream s;
  s << "peaks = 2\n";
  const SolitonFit* parts[] = {&fit.first, &fit.second};
  for (int i = 0; i < 2; ++i) {
    const auto& f = *parts[i];
    s << "c" << i + 1 << " = " << format_number(f.c) << '\n'
      << "center" << i + 1 << " = " << format_number(f.center[0]) << ' ' << format_number(f.center[1]) << ' '
      << format_number(f.center[2]) << '\n';
  }
  s << "residual_inf = " << format_number(fit.residual_inf) << '\n'
    << "residual_l2 = " << format_number(fit.residual_l2) << '\n'
    << "relative_residual = " << format_number(fit.relative_residual) << '\n';
  return s.str();
}

GroundStateResult solve_profile(const Grid& grid, double c, const GroundStateSettings& settings) {
  GroundStateParams p;
  p.c = c;
  p.newton_tol = settings.newton_tol;
  p.max_newton_iters = settings.max_newton_iters;
  p.gmres_tol = settings.gmres_tol;
  p.gmres_restart = settings.gmres_restart;
  return solve_ground_state(grid, p);
}

RealField reference_profile(const Grid& grid, const GroundStateSettings& settings) {
  if (!settings.reference.empty()) {
    Snapshot s = read_snapshot(settings.reference);
    if (!(s.field.grid() == grid)) {
      throw ParameterError("reference snapshot '" + settings.reference + "' lives on a different grid");
    }
    return std::move(s.field);
  }
  return solve_profile(grid, 1.0, settings).q;
}

namespace {

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%.6f.zk3d", t);
  return buf;
}

void say(std::ostream* log, const std::string& msg) {
  if (log != nullptr) *log << msg << '\n' << std::flush;
}

}  // namespace

RunReport run(const RunConfig& cfg, std::ostream* log) {
  RunReport report;
  report.output_dir = cfg.output_dir;
  try {
    const fs::path dir = cfg.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
    // Probe writability before spending time on the solve.
    write_text(dir / ".zk3d_probe", "");
    fs::remove(dir / ".zk3d_probe", ec);

    const Grid grid = cfg.grid();
    const bool need_q = needs_soliton(cfg.scenario.kind) || cfg.diagnostics.fit;
    std::optional<RealField> q_ref;
    std::optional<RealField> q_c;
    if (need_q) {
      say(log, "reference profile on " + std::to_string(grid.nx()) + "x" + std::to_string(grid.ny()) + "x" +
                   std::to_string(grid.nz()));
      q_ref = reference_profile(grid, cfg.ground_state);
      write_snapshot(dir / "reference.zk3d", *q_ref);
    }
    if (auto c = companion_speed(cfg.scenario)) {
      say(log, "companion profile c = " + format_number(*c));
      GroundStateParams p;
      p.c = *c;
      p.newton_tol = cfg.ground_state.newton_tol;
      p.max_newton_iters = cfg.ground_state.max_newton_iters;
      p.gmres_tol = cfg.ground_state.gmres_tol;
      p.gmres_restart = cfg.ground_state.gmres_restart;
      p.initial_iterate = dilate(*q_ref, *c);
      q_c = solve_ground_state(grid, p).q;
    }

    const RealField u0 = build_initial_data(grid, cfg.scenario, q_ref ? &*q_ref : nullptr, q_c ? &*q_c : nullptr,
                                            &report.warnings);
    for (const auto& w : report.warnings) say(log, "warning: " + w);
    write_snapshot(dir / "initial.zk3d", u0, 0.0, cfg.evolution.v_x);
    const SpectralDecay initial_decay = spectral_decay_report(forward_transform(u0));

    EvolutionHooks hooks;
    hooks.sampler = make_sampler(SamplerOptions{cfg.diagnostics.cone});
    hooks.on_snapshot = [&](double t, const RealField& u, const SpectralField&) {
      write_snapshot(dir / snapshot_name(t), u, t, cfg.evolution.v_x);
    };
    if (log != nullptr) {
      hooks.observers.push_back([&](double t, const RealField& u, const SpectralField&) {
        *log << "t = " << format_number(t) << "  linf = " << format_number(max_abs(u)) << '\n' << std::flush;
      });
    }
    say(log, "evolving " + std::to_string(cfg.evolution.n_steps) + " steps to t = " +
                 format_number(cfg.evolution.t_end));
    std::optional<EvolutionResult> evolved;
    try {
      evolved = evolve(u0, cfg.evolution, hooks);
    } catch (const BlowUpError& e) {
      report.series = e.partial_series();
      write_timeseries_csv(dir / "timeseries.csv", report.series);
      throw;
    }
    EvolutionResult& result = *evolved;
    report.series = result.series;
    write_timeseries_csv(dir / "timeseries.csv", report.series);
    write_snapshot(dir / "final.zk3d", result.final_field, cfg.evolution.t_end, cfg.evolution.v_x);
    write_spectral_decay_csv(dir / "spectral_decay.csv", initial_decay,
                             spectral_decay_report(result.final_spectrum));

    if (cfg.diagnostics.fit) {
      if (cfg.diagnostics.fit_peaks == 2) {
        report.two_fit = fit_two_solitons(result.final_field, *q_ref, cfg.diagnostics.exclusion_radius, cfg.diagnostics.peak);
        write_text(dir / "fit_report.txt", format_fit_report(*report.two_fit));
      } else {
        report.fit = fit_soliton(result.final_field, *q_ref, cfg.diagnostics.peak);
        write_text(dir / "fit_report.txt", format_fit_report(*report.fit));
      }
    }
    report.final_field = std::move(result.final_field);
    report.message = "ok";
  } catch (const std::exception& e) {
    report.exit_code = exit_code_for(e);
    report.message = e.what();
  }
  return report;
}

}  // namespace zk3d
