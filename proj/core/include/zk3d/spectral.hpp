#pragma once

#include "zk3d/field.hpp"
#include "zk3d/grid.hpp"

namespace zk3d {

/// Forward DFT normalized by the node count: constant c -> zero mode c.
SpectralField forward_transform(const RealField& u);
/// Inverse of forward_transform. Assumes Hermitian-symmetric coefficients.
RealField inverse_transform(const SpectralField& uh);

/// Allocation-free variants for inner loops. inverse_transform_into
/// overwrites its input.
void forward_transform_into(const RealField& u, SpectralField& out);
void inverse_transform_into(SpectralField& uh_destroyed, RealField& out);

/// Raw FFTW transforms: unnormalized and indexed from the first node, so
/// coefficients differ from the centred convention by (-1)^(kx + ky + kz).
/// Diagonal operators commute with that sign, which lets time steppers stay
/// in the raw convention and convert only at the boundaries.
void raw_forward_into(const RealField& u, SpectralField& out);
void raw_inverse_into(SpectralField& uh_destroyed, RealField& out);
/// Multiplies mode k by scale * (-1)^(kx + ky + kz); an involution for scale 1.
void toggle_origin_phase(SpectralField& uh, double scale = 1.0);

/// Multiply every mode by i xi_axis. The Nyquist slot of the differentiated
/// axis is zeroed.
SpectralField spectral_derivative(const SpectralField& uh, Axis axis);
RealField spectral_derivative(const RealField& u, Axis axis);

/// Periodic rectangle rule: cell volume times the sum of all samples.
double integrate(const RealField& u);

/// Returns v(x) = u(x - shift) exactly for band-limited u. Shifts are
/// applied as phases exp(-2 pi i k s) with s the shift in periods, so a
/// whole-period shift multiplies every coefficient by exactly 1.
SpectralField translate(const SpectralField& uh, const Vec3& shift);
/// Whole-node shifts are done by an index roll; other shifts go through
/// the spectral phase.
RealField translate(const RealField& u, const Vec3& shift);

/// Returns v(x) = u(factor * x) on the same grid, evaluating the
/// trigonometric interpolant of u at the scaled points. Points that leave the
/// box (factor > 1) are clamped to its boundary per axis, so a decayed profile
/// keeps its tail value instead of picking up a periodic image.
RealField rescale_coordinates(const RealField& u, double factor);

/// 2/3 rule: zero every mode with |k| > n/3 along any axis.
void apply_dealias(SpectralField& uh);
bool dealias_keeps(const Grid& g, std::size_t kx, std::size_t ky, std::size_t kz);

/// Thread count used for transforms planned after this call.
void set_fft_threads(int n);
int fft_threads();

}  // namespace zk3d
