#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zk3d/field.hpp"
#include "zk3d/grid.hpp"

namespace zk3d {

enum class ScenarioKind {
  scaled_soliton,
  asym_perturbed_soliton,
  gaussian,
  flat_gaussian,
  wall,
  super_lorentzian,
  flat_polynomial,
  head_on_pair,
  twin_pair,
  offset_pair,
};

std::string_view to_string(ScenarioKind kind);
/// Throws ScenarioError for an unknown name.
ScenarioKind scenario_kind_from_string(std::string_view name);

/// One family of initial data and its parameters.
///
/// Parameter names per kind:
///   scaled_soliton          lambda
///   asym_perturbed_soliton  alpha
///   gaussian                A
///   flat_gaussian           A, flatten (default 0.05)
///   wall                    A, a
///   super_lorentzian        A, p
///   flat_polynomial         A, p (default 10)
///   head_on_pair            c, a
///   twin_pair               a
///   offset_pair             a
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::scaled_soliton;
  std::map<std::string, double> params;
  double v_x = 0.0;  ///< recommended co-moving speed

  double param(const std::string& name) const;
  double param_or(const std::string& name, double fallback) const;
};

/// Parameter names required (and optional) for a kind.
std::vector<std::string> required_params(ScenarioKind kind);
std::vector<std::string> optional_params(ScenarioKind kind);
bool needs_soliton(ScenarioKind kind);
/// Speed of the second profile needed by head_on_pair, if any.
std::optional<double> companion_speed(const ScenarioSpec& spec);

void validate(const ScenarioSpec& spec);

/// Samples the initial data on the grid. q_ref is the unit-speed ground
/// state on the same grid (needed by soliton-based kinds); q_c is the
/// faster profile for head_on_pair. Soliton shifts use spectral phases.
/// Overlap warnings for pair data are appended to `warnings` when given.
RealField build_initial_data(const Grid& grid, const ScenarioSpec& spec, const RealField* q_ref,
                             const RealField* q_c = nullptr, std::vector<std::string>* warnings = nullptr);

/// Largest pointwise min(|a|, |b|); a measure of how much two profiles overlap.
double overlap(const RealField& a, const RealField& b);

/// A named run: scenario, horizon, step count and full-scale grid.
struct Preset {
  std::string name;
  std::string description;
  ScenarioSpec spec;
  double t_end = 1.0;
  long n_steps = 10000;
  Extent3 n{256, 256, 256};
  Vec3 l{6.0, 6.0, 6.0};
};

const std::vector<Preset>& preset_catalog();
/// Throws ScenarioError for an unknown name.
const Preset& find_preset(std::string_view name);
ScenarioSpec preset(std::string_view name);

}  // namespace zk3d
