#include "zk3d/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zk3d/error.hpp"

namespace zk3d {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw DimensionError(std::string(what) + ": operands live on different grids");
}

RealField::RealField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

RealField::RealField(const Grid& grid, AlignedVector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DimensionError("RealField: " + std::to_string(values_.size()) + " values for a grid of " +
                         std::to_string(grid_.size()) + " nodes");
  }
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(grid_, other.grid_, "RealField +=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(grid_, other.grid_, "RealField -=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

RealField& RealField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

double max_abs(const RealField& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const RealField& u) {
  return std::all_of(u.values().begin(), u.values().end(), [](double v) { return std::isfinite(v); });
}

std::size_t argmax_index(const RealField& u) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < u.size(); ++k) {
    if (u[k] > u[best]) best = k;
  }
  return best;
}

Vec3 node_coordinates(const Grid& g, std::size_t flat) {
  const std::size_t i = flat % g.nx();
  const std::size_t j = (flat / g.nx()) % g.ny();
  const std::size_t m = flat / (g.nx() * g.ny());
  return {g.node(Axis::x, i), g.node(Axis::y, j), g.node(Axis::z, m)};
}

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

Complex SpectralField::coefficient(long kx, long ky, long kz) const {
  auto wrap = [](long k, std::size_t n) {
    const auto nn = static_cast<long>(n);
    return static_cast<std::size_t>(((k % nn) + nn) % nn);
  };
  const std::size_t nx = grid_.nx();
  std::size_t ix = wrap(kx, nx);
  if (ix <= nx / 2) return at(ix, wrap(ky, grid_.ny()), wrap(kz, grid_.nz()));
  ix = nx - ix;
  return std::conj(at(ix, wrap(-ky, grid_.ny()), wrap(-kz, grid_.nz())));
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField +=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField -=");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  const Grid& g = a.grid();
  const std::size_t sx = g.spectral_nx();
  double sum = 0.0;
  for (std::size_t row = 0; row < g.ny() * g.nz(); ++row) {
    const Complex* pa = a.data() + row * sx;
    const Complex* pb = b.data() + row * sx;
    for (std::size_t kx = 0; kx < sx; ++kx) {
      const double re = pa[kx].real() * pb[kx].real() + pa[kx].imag() * pb[kx].imag();
      sum += a.multiplicity(kx) * re;
    }
  }
  return sum;
}

double l2_norm(const SpectralField& a) { return std::sqrt(std::max(0.0, inner(a, a))); }

double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& c : a.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace zk3d
