#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <span>
#include <vector>

#include "zk3d/grid.hpp"

namespace zk3d {

using Complex = std::complex<double>;

/// 64-byte aligned storage so buffers can be handed straight to the FFT.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    const std::size_t bytes = ((n * sizeof(T) + alignment - 1) / alignment) * alignment;
    void* p = std::aligned_alloc(alignment, bytes == 0 ? alignment : bytes);
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// Physical-space samples u(x_i, y_j, z_m), x index fastest.
class RealField {
 public:
  explicit RealField(const Grid& grid);
  RealField(const Grid& grid, AlignedVector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(std::size_t i, std::size_t j, std::size_t m) { return values_[grid_.flat(i, j, m)]; }
  double at(std::size_t i, std::size_t j, std::size_t m) const { return values_[grid_.flat(i, j, m)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double s);

  /// Fill by evaluating f(x, y, z) at every node.
  template <class F>
  static RealField sample(const Grid& grid, F&& f) {
    RealField u(grid);
    for (std::size_t m = 0; m < grid.nz(); ++m) {
      const double z = grid.node(Axis::z, m);
      for (std::size_t j = 0; j < grid.ny(); ++j) {
        const double y = grid.node(Axis::y, j);
        for (std::size_t i = 0; i < grid.nx(); ++i) {
          u.at(i, j, m) = f(grid.node(Axis::x, i), y, z);
        }
      }
    }
    return u;
  }

 private:
  Grid grid_;
  AlignedVector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);

double max_abs(const RealField& u);
bool all_finite(const RealField& u);
void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Node holding the largest value of u; ties go to the lowest flattened index.
std::size_t argmax_index(const RealField& u);
Vec3 node_coordinates(const Grid& g, std::size_t flat);

/// Fourier coefficients in half-spectrum storage (k_x >= 0).
///
/// The logical coefficient cube is indexed by (k_x, k_y, k_z) with each
/// index in {-n/2+1, ..., n/2}; `coefficient` resolves negative k_x through
/// conj(c(-k)). Coefficients are normalized so that a constant field c has
/// zero mode c.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex& operator[](std::size_t k) { return coeffs_[k]; }
  const Complex& operator[](std::size_t k) const { return coeffs_[k]; }
  Complex& at(std::size_t kx, std::size_t ky, std::size_t kz) {
    return coeffs_[grid_.spectral_flat(kx, ky, kz)];
  }
  const Complex& at(std::size_t kx, std::size_t ky, std::size_t kz) const {
    return coeffs_[grid_.spectral_flat(kx, ky, kz)];
  }

  /// Coefficient of the logical mode (kx, ky, kz); indices are reduced modulo n.
  Complex coefficient(long kx, long ky, long kz) const;

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex* data() { return coeffs_.data(); }
  const Complex* data() const { return coeffs_.data(); }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  /// Multiplicity of a stored slot in the full cube (1 on the k_x = 0 and
  /// Nyquist planes, 2 elsewhere).
  double multiplicity(std::size_t kx) const {
    return (kx == 0 || kx == grid_.nx() / 2) ? 1.0 : 2.0;
  }

 private:
  Grid grid_;
  AlignedVector<Complex> coeffs_;
};

/// Re sum over the full cube of conj(a(k)) b(k); equals the mean of a*b in
/// physical space for real data.
double inner(const SpectralField& a, const SpectralField& b);
double l2_norm(const SpectralField& a);
/// Largest |c(k)| over the stored half spectrum.
double max_abs(const SpectralField& a);

}  // namespace zk3d
