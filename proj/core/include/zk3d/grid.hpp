#pragma once

#include <array>
#include <cstddef>

namespace zk3d {

enum class Axis : int { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

using Vec3 = std::array<double, 3>;
using Extent3 = std::array<std::size_t, 3>;

/// Periodic box [-pi l, pi l)^3 sampled on n uniform nodes per axis.
///
/// Physical wavenumbers are xi = k / l for the integer indices
/// k in {-n/2+1, ..., n/2}, so that exp(i xi x) is periodic on the box.
/// Real data is stored with x fastest, then y, then z. Spectral data keeps
/// only k_x >= 0 (n_x/2 + 1 entries); negative k_x follows from Hermitian
/// symmetry.
class Grid {
 public:
  /// Throws InvalidGridError unless every n is even and >= 4 and every l > 0.
  Grid(Extent3 n, Vec3 l);

  std::size_t n(Axis a) const { return n_[index(a)]; }
  double l(Axis a) const { return l_[index(a)]; }
  const Extent3& modes() const { return n_; }
  const Vec3& scales() const { return l_; }

  std::size_t nx() const { return n_[0]; }
  std::size_t ny() const { return n_[1]; }
  std::size_t nz() const { return n_[2]; }

  /// Number of physical nodes.
  std::size_t size() const { return n_[0] * n_[1] * n_[2]; }
  /// Number of stored (half-spectrum) coefficients.
  std::size_t spectral_size() const { return spectral_nx() * n_[1] * n_[2]; }
  std::size_t spectral_nx() const { return n_[0] / 2 + 1; }

  double spacing(Axis a) const;
  double period(Axis a) const;
  double node(Axis a, std::size_t j) const;
  double cell_volume() const;
  double box_volume() const;

  /// Signed integer index of storage slot j along an axis. For x this is j
  /// itself (half spectrum); for y and z it wraps to {-n/2+1, ..., n/2}.
  long wave_index(Axis a, std::size_t j) const;
  /// Physical wavenumber k / l of storage slot j.
  double wavenumber(Axis a, std::size_t j) const;
  /// Wavenumber used by odd-order derivatives: the Nyquist slot maps to 0.
  double odd_wavenumber(Axis a, std::size_t j) const;
  bool is_nyquist(Axis a, std::size_t j) const { return j == n(a) / 2; }

  std::size_t flat(std::size_t i, std::size_t j, std::size_t m) const {
    return i + n_[0] * (j + n_[1] * m);
  }
  std::size_t spectral_flat(std::size_t kx, std::size_t ky, std::size_t kz) const {
    return kx + spectral_nx() * (ky + n_[1] * kz);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static constexpr std::size_t index(Axis a) { return static_cast<std::size_t>(a); }

  Extent3 n_;
  Vec3 l_;
};

Grid make_grid(Extent3 n, Vec3 l);

}  // namespace zk3d
