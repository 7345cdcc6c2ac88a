#pragma once

#include <functional>
#include <vector>

#include "zk3d/error.hpp"
#include "zk3d/field.hpp"
#include "zk3d/grid.hpp"
#include "zk3d/records.hpp"

namespace zk3d {

/// Diagonal linear part of the co-moving ZK system,
///   L(xi) = i xi_x (xi_x^2 + xi_y^2 + xi_z^2) + i xi_x v_x,
/// in half-spectrum storage. The x Nyquist plane uses xi_x = 0 like every
/// other odd-order operator, so L vanishes there as on the xi_x = 0 plane.
struct LinearSymbol {
  Grid grid;
  double v_x = 0.0;
  AlignedVector<Complex> values;
};

LinearSymbol linear_symbol(const Grid& grid, double v_x);

/// -i xi_x F[(F^-1 u^)^2]. With dealias set, modes beyond n/3 are removed
/// from the input before squaring and from the product afterwards.
SpectralField nonlinear_term(const SpectralField& uh, bool dealias);

/// Cox-Matthews ETDRK4 coefficients for one mode with step h.
struct EtdCoefficients {
  Complex e, e2, q, f1, f2, f3;
};

/// Small |L h| (< 0.5) goes through a 32-point contour mean on the circle
/// of radius 1 around L h; L = 0 returns the exact RK4 limits.
EtdCoefficients etd_coefficients(Complex l, double h);

inline constexpr double kContourThreshold = 0.5;
inline constexpr double kContourRadius = 1.0;
inline constexpr int kContourPoints = 32;

struct EtdWeights {
  Grid grid;
  double h = 0.0;
  double v_x = 0.0;
  AlignedVector<Complex> e, e2, q, f1, f2, f3;
};

EtdWeights make_weights(const LinearSymbol& sym, double h);

using Nonlinearity = std::function<SpectralField(const SpectralField&)>;

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, long step, double t, DiagnosticsSeries partial = {})
      : Error(what), step_(step), t_(t), partial_(std::move(partial)) {}
  long step() const { return step_; }
  double time() const { return t_; }
  const DiagnosticsSeries& partial_series() const { return partial_; }

 private:
  long step_;
  double t_;
  DiagnosticsSeries partial_;
};

/// One Cox-Matthews step with the ZK nonlinearity.
SpectralField etdrk4_step(const SpectralField& uh, const EtdWeights& w, bool dealias, long step_index = -1);
/// Same step with a caller-supplied nonlinearity (used to test the linear advance).
SpectralField etdrk4_step(const SpectralField& uh, const EtdWeights& w, const Nonlinearity& nonlinear,
                          long step_index = -1);

struct EvolutionConfig {
  double t_end = 1.0;
  long n_steps = 1000;
  double v_x = 0.0;
  /// Also projects the initial data onto the retained modes.
  bool dealias = false;
  long sample_every = 1;
  std::vector<double> snapshot_times;

  double step_size() const { return t_end / static_cast<double>(n_steps); }
  double time_at(long step) const {
    return static_cast<double>(step) * t_end / static_cast<double>(n_steps);
  }
};

void validate(const EvolutionConfig& cfg);

using FieldObserver = std::function<void(double t, const RealField& u, const SpectralField& uh)>;
using Sampler = std::function<DiagnosticsRecord(double t, const RealField& u, const SpectralField& uh)>;

struct EvolutionHooks {
  /// Builds the record stored in the series; defaults to (t, linf, argmax).
  Sampler sampler;
  /// Called at every sample, after the sampler.
  std::vector<FieldObserver> observers;
  /// Called at the step nearest to each requested snapshot time.
  FieldObserver on_snapshot;
};

struct EvolutionResult {
  RealField final_field;
  SpectralField final_spectrum;
  DiagnosticsSeries series;
};

/// Advances u0 from t = 0 to cfg.t_end with n_steps uniform ETDRK4 steps.
/// Samples at t = 0, every sample_every steps, and at t_end. A blow-up
/// surfaces as BlowUpError carrying the series recorded so far.
EvolutionResult evolve(const RealField& u0, const EvolutionConfig& cfg, const EvolutionHooks& hooks = {});

}  // namespace zk3d
