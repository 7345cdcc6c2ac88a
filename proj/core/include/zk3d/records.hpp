#pragma once

#include <vector>

#include "zk3d/grid.hpp"

namespace zk3d {

/// One sample of a run's time series.
struct DiagnosticsRecord {
  double t = 0.0;
  double linf = 0.0;
  Vec3 argmax{};
  double mass = 0.0;
  double energy = 0.0;
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  bool has_cone = false;
  double cone_inside = 0.0;
  double cone_outside = 0.0;
};

using DiagnosticsSeries = std::vector<DiagnosticsRecord>;

}  // namespace zk3d
