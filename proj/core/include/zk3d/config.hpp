#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "zk3d/diagnostics.hpp"
#include "zk3d/error.hpp"
#include "zk3d/etd.hpp"
#include "zk3d/grid.hpp"
#include "zk3d/scenarios.hpp"

namespace zk3d {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line number, or 0 for whole-file problems.
  int line() const { return line_; }

 private:
  int line_;
};

struct GroundStateSettings {
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  double gmres_tol = 1e-8;
  int gmres_restart = 30;
  /// Snapshot holding a converged unit-speed profile on the run grid; solved when empty.
  std::string reference;
};

struct DiagnosticsSettings {
  std::optional<ConeParams> cone;
  bool fit = true;
  int fit_peaks = 1;
  double exclusion_radius = 3.0;
  PeakMode peak = PeakMode::node;
};

/// Everything a run needs. Omitted keys take these defaults:
///   grid.n = 64 64 64, grid.l = preset scale (6 6 6 without a preset),
///   evolution.t_end / n_steps / v_x = preset values (1, 1000, 0 without a preset),
///   evolution.dealias = false, evolution.sample_every = 10,
///   diagnostics.fit = true, diagnostics.peak = node, diagnostics.cone = off, output.dir = zk3d_out.
struct RunConfig {
  Extent3 n{64, 64, 64};
  Vec3 l{6.0, 6.0, 6.0};
  std::string preset_name;
  ScenarioSpec scenario;
  EvolutionConfig evolution;
  GroundStateSettings ground_state;
  DiagnosticsSettings diagnostics;
  std::string output_dir = "zk3d_out";
  std::uint64_t seed = 0;  ///< reserved; no scenario draws random numbers

  Grid grid() const { return make_grid(n, l); }
};

/// Parses the line-oriented `section.key = value` format. `#` starts a
/// comment. Throws ParseError naming the offending line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Config text that selects a preset with its defaults.
std::string preset_config_text(std::string_view preset_name);

}  // namespace zk3d
