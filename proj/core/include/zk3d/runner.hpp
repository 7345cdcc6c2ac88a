#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zk3d/config.hpp"
#include "zk3d/diagnostics.hpp"
#include "zk3d/field.hpp"
#include "zk3d/ground_state.hpp"
#include "zk3d/records.hpp"

namespace zk3d {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitSolver = 3,
  kExitEvolution = 4,
  kExitIo = 5,
};

/// Maps a library exception to the CLI exit code; anything unrecognised
/// counts as a solver failure.
int exit_code_for(const std::exception& e);

struct RunReport {
  int exit_code = kExitOk;
  std::string message;
  std::filesystem::path output_dir;
  DiagnosticsSeries series;
  std::vector<std::string> warnings;
  std::optional<SolitonFit> fit;
  std::optional<TwoSolitonFit> two_fit;
  std::optional<RealField> final_field;
};

/// Unit-speed reference profile for the run grid: loaded from
/// settings.reference when set, solved otherwise.
RealField reference_profile(const Grid& grid, const GroundStateSettings& settings);
GroundStateResult solve_profile(const Grid& grid, double c, const GroundStateSettings& settings);

/// Executes a full run and writes its artifacts into cfg.output_dir:
///   reference.zk3d, initial.zk3d, snapshot_<t>.zk3d, final.zk3d,
///   timeseries.csv, spectral_decay.csv and (when fitting) fit_report.txt.
/// Never throws; failures are reported through exit_code and message.
RunReport run(const RunConfig& cfg, std::ostream* log = nullptr);

/// Number formatting shared by every CSV: 17 significant digits.
std::string format_number(double v);

void write_timeseries_csv(const std::filesystem::path& path, const DiagnosticsSeries& series);
void write_spectral_decay_csv(const std::filesystem::path& path, const SpectralDecay& initial,
                              const SpectralDecay& final);
std::string format_fit_report(const SolitonFit& fit);
std::string format_fit_report(const TwoSolitonFit& fit);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace zk3d
