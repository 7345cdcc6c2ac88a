#include "zk3d/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zk3d/error.hpp"

namespace zk3d {

Grid::Grid(Extent3 n, Vec3 l) : n_(n), l_(l) {
  static constexpr const char* names[] = {"x", "y", "z"};
  for (std::size_t a = 0; a < 3; ++a) {
    if (n_[a] < 4 || n_[a] % 2 != 0) {
      throw InvalidGridError("grid: n_" + std::string(names[a]) + " = " + std::to_string(n_[a]) +
                             " must be even and >= 4");
    }
    if (!(l_[a] > 0.0) || !std::isfinite(l_[a])) {
      throw InvalidGridError("grid: l_" + std::string(names[a]) + " must be a positive finite number");
    }
  }
}

double Grid::spacing(Axis a) const { return period(a) / static_cast<double>(n(a)); }

double Grid::period(Axis a) const { return 2.0 * std::numbers::pi * l(a); }

double Grid::node(Axis a, std::size_t j) const {
  return -std::numbers::pi * l(a) + period(a) * static_cast<double>(j) / static_cast<double>(n(a));
}

double Grid::cell_volume() const {
  return spacing(Axis::x) * spacing(Axis::y) * spacing(Axis::z);
}

double Grid::box_volume() const { return period(Axis::x) * period(Axis::y) * period(Axis::z); }

long Grid::wave_index(Axis a, std::size_t j) const {
  const auto nn = static_cast<long>(n(a));
  const auto jj = static_cast<long>(j);
  if (a == Axis::x) return jj;
  return jj <= nn / 2 ? jj : jj - nn;
}

double Grid::wavenumber(Axis a, std::size_t j) const {
  return static_cast<double>(wave_index(a, j)) / l(a);
}

double Grid::odd_wavenumber(Axis a, std::size_t j) const {
  return is_nyquist(a, j) ? 0.0 : wavenumber(a, j);
}

Grid make_grid(Extent3 n, Vec3 l) { return Grid(n, l); }

}  // namespace zk3d
