#pragma once

#include <optional>
#include <vector>

#include "zk3d/etd.hpp"
#include "zk3d/field.hpp"
#include "zk3d/grid.hpp"
#include "zk3d/records.hpp"

namespace zk3d {

/// Integral of u^2.
double mass(const RealField& u);
/// (1/2) int |grad u|^2 - (1/3) int u^3, gradients taken spectrally.
double energy(const RealField& u);
double energy(const RealField& u, const SpectralField& uh);

/// |value / initial - 1|; throws UndefinedDriftError when initial == 0.
double drift(double value, double initial);
std::vector<double> drift(const std::vector<double>& series);

struct SolitonFit {
  double c = 0.0;
  Vec3 center{};
  double residual_inf = 0.0;
  double residual_l2 = 0.0;
  double relative_residual = 0.0;  ///< residual_inf / ||u||_inf
};

/// Rescaled and shifted copy of the unit-speed profile: Q_c(x - center).
RealField soliton_model(const RealField& q_ref, double c, const Vec3& center);

struct Peak {
  Vec3 location{};
  double value = 0.0;
};

/// Maximum of the trigonometric interpolant of u near its argmax node,
/// located by Newton iteration on the gradient (Nyquist slots dropped).
/// Falls back to the node when the iteration leaves the surrounding cell
/// or the Hessian there is not negative definite.
Peak interpolated_peak(const RealField& u);

enum class PeakMode { node, interpolated };

/// c = max(u) / max(q_ref), center = argmax node of u, residual
/// u - Q_c(x - center) measured over the whole box. With
/// PeakMode::interpolated both come from interpolated_peak instead.
SolitonFit fit_soliton(const RealField& u, const RealField& q_ref, PeakMode mode = PeakMode::node);

struct TwoSolitonFit {
  SolitonFit first;   ///< around the global maximum
  SolitonFit second;  ///< around the maximum outside the exclusion ball
  double residual_inf = 0.0;
  double residual_l2 = 0.0;
  double relative_residual = 0.0;
};

/// Fits the global peak, then the largest peak farther than
/// exclusion_radius (periodic distance) from it, and measures
/// u - Q_c1 - Q_c2.
TwoSolitonFit fit_two_solitons(const RealField& u, const RealField& q_ref, double exclusion_radius = 3.0,
                               PeakMode mode = PeakMode::node);

enum class ConeFrame { soliton, lab };

struct ConeParams {
  double delta = 0.05;
  double theta = 0.0;
  ConeFrame frame = ConeFrame::soliton;
};

/// Throws ParameterError unless 0 <= delta < 1 and 0 <= theta <= pi/3 - delta.
void validate(const ConeParams& p);

struct ConeNorms {
  double inside = 0.0;   ///< L2 norm over the cone region C (ahead of the radiation)
  double outside = 0.0;  ///< L2 norm over its complement
};

/// Splits the nodes (relative to `center`, periodic minimal image) by
///   soliton frame: x > (-1 + delta) t - rho tan(theta)
///   lab frame:     x > delta t - rho tan(theta)
/// with rho = sqrt(y^2 + z^2).
ConeNorms cone_norms(const RealField& u, double t, const ConeParams& p, const Vec3& center);

struct FrontAngleOptions {
  /// Nodes with |u| above this belong to the radiation set. Zero selects
  /// relative_threshold times the largest |u| behind the soliton body.
  double threshold = 0.0;
  double relative_threshold = 0.05;
  /// With the automatic threshold, trailing values below noise_floor times
  /// the peak count as no radiation.
  double noise_floor = 1e-6;
};

/// Half-opening angle (radians, from the negative x axis) of the trailing
/// radiation in the z = 0 slice. The apex is the front-most node attaining
/// the slice maximum; the soliton body extends back along the apex row while
/// |u| keeps decreasing. For every column behind the body the outermost
/// above-threshold nodes give the upper and lower front. Each front is fitted
/// by a least-squares line through the apex, using the columns up to the
/// widest one, and the two angles are averaged.
/// Throws NoRadiationError when nothing lies behind the body.
double radiation_front_angle(const RealField& u, const FrontAngleOptions& opts);
double radiation_front_angle(const RealField& u, double threshold);

/// dx * sum_i u(x_i, y_j, z_m) for every (j, m); entry j + ny m.
std::vector<double> xline_integrals(const RealField& u);

/// Largest coefficient magnitude on each shell of max(|k_x|, |k_y|, |k_z|)
/// index, from shell 0 up to the Nyquist shell.
struct SpectralDecay {
  std::vector<double> shell_max;
  double outer() const { return shell_max.empty() ? 0.0 : shell_max.back(); }
  /// Max over the outermost `count` shells.
  double outer_band(std::size_t count) const;
};

SpectralDecay spectral_decay_report(const SpectralField& uh);

struct SamplerOptions {
  std::optional<ConeParams> cone;
};

/// Builds full DiagnosticsRecord entries; drifts are measured against the
/// first sample it sees.
Sampler make_sampler(const SamplerOptions& opts = {});

}  // namespace zk3d
