#include "zk3d/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "zk3d/error.hpp"

namespace zk3d {
namespace {

// FFTW_ESTIMATE keeps plan selection deterministic, which makes repeated
// runs bitwise reproducible.
class FftPlan {
 public:
  FftPlan(const Grid& g, int threads) {
    const int nz = static_cast<int>(g.nz());
    const int ny = static_cast<int>(g.ny());
    const int nx = static_cast<int>(g.nx());
    AlignedVector<double> rbuf(g.size());
    AlignedVector<Complex> cbuf(g.spectral_size());
    auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
    fftw_plan_with_nthreads(threads);
    // Row-major dims (z, y, x): x is contiguous and gets halved by r2c.
    forward_ = fftw_plan_dft_r2c_3d(nz, ny, nx, rbuf.data(), cptr, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_3d(nz, ny, nx, cptr, rbuf.data(), FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr) throw Error("fft: plan creation failed");
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  void forward(const double* in, Complex* out) const {
    // r2c leaves its input untouched.
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  void backward(Complex* in_destroyed, double* out) const {
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in_destroyed), out);
  }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, std::unique_ptr<FftPlan>> plans;
  int threads = 1;
  bool threads_initialized = false;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

const FftPlan& plan_for(const Grid& g) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  if (!c.threads_initialized) {
    fftw_init_threads();
    c.threads_initialized = true;
  }
  const auto key = std::make_tuple(g.nx(), g.ny(), g.nz(), c.threads);
  auto it = c.plans.find(key);
  if (it == c.plans.end()) it = c.plans.emplace(key, std::make_unique<FftPlan>(g, c.threads)).first;
  return *it->second;
}

// FFTW indexes samples from the first node x = -pi l, whereas coefficients
// are defined against exp(i xi x) with x measured from the box centre. The
// two differ by (-1)^(kx + ky + kz); `scale` folds in the 1/N normalisation.
void origin_phase(const Grid& g, Complex* c, double scale) {
  const std::size_t sx = g.spectral_nx();
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      Complex* row = c + g.spectral_flat(0, ky, kz);
      const double first = ((ky + kz) % 2 == 0) ? scale : -scale;
      for (std::size_t kx = 0; kx < sx; kx += 2) row[kx] *= first;
      for (std::size_t kx = 1; kx < sx; kx += 2) row[kx] *= -first;
    }
  }
}

}  // namespace

void set_fft_threads(int n) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  c.threads = std::max(1, n);
}

int fft_threads() {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  return c.threads;
}

SpectralField forward_transform(const RealField& u) {
  const Grid& g = u.grid();
  if (u.size() != g.size()) throw DimensionError("forward_transform: field does not match its grid");
  SpectralField uh(g);
  plan_for(g).forward(u.data(), uh.data());
  origin_phase(g, uh.data(), 1.0 / static_cast<double>(g.size()));
  return uh;
}

RealField inverse_transform(const SpectralField& uh) {
  const Grid& g = uh.grid();
  if (uh.size() != g.spectral_size()) throw DimensionError("inverse_transform: field does not match its grid");
  SpectralField scratch = uh;
  origin_phase(g, scratch.data(), 1.0);
  RealField u(g);
  plan_for(g).backward(scratch.data(), u.data());
  return u;
}

void forward_transform_into(const RealField& u, SpectralField& out) {
  const Grid& g = u.grid();
  require_same_grid(g, out.grid(), "forward_transform_into");
  plan_for(g).forward(u.data(), out.data());
  origin_phase(g, out.data(), 1.0 / static_cast<double>(g.size()));
}

void inverse_transform_into(SpectralField& uh_destroyed, RealField& out) {
  const Grid& g = uh_destroyed.grid();
  require_same_grid(g, out.grid(), "inverse_transform_into");
  origin_phase(g, uh_destroyed.data(), 1.0);
  plan_for(g).backward(uh_destroyed.data(), out.data());
}

void raw_forward_into(const RealField& u, SpectralField& out) {
  require_same_grid(u.grid(), out.grid(), "raw_forward_into");
  plan_for(u.grid()).forward(u.data(), out.data());
}

void raw_inverse_into(SpectralField& uh_destroyed, RealField& out) {
  require_same_grid(uh_destroyed.grid(), out.grid(), "raw_inverse_into");
  plan_for(out.grid()).backward(uh_destroyed.data(), out.data());
}

void toggle_origin_phase(SpectralField& uh, double scale) { origin_phase(uh.grid(), uh.data(), scale); }

SpectralField spectral_derivative(const SpectralField& uh, Axis axis) {
  const Grid& g = uh.grid();
  SpectralField out(g);
  const std::size_t sx = g.spectral_nx();
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      for (std::size_t kx = 0; kx < sx; ++kx) {
        double xi = 0.0;
        switch (axis) {
          case Axis::x: xi = g.odd_wavenumber(Axis::x, kx); break;
          case Axis::y: xi = g.odd_wavenumber(Axis::y, ky); break;
          case Axis::z: xi = g.odd_wavenumber(Axis::z, kz); break;
        }
        const Complex c = uh.at(kx, ky, kz);
        out.at(kx, ky, kz) = Complex(-xi * c.imag(), xi * c.real());
      }
    }
  }
  return out;
}

RealField spectral_derivative(const RealField& u, Axis axis) {
  return inverse_transform(spectral_derivative(forward_transform(u), axis));
}

double integrate(const RealField& u) {
  double sum = 0.0;
  for (double v : u.values()) sum += v;
  return u.grid().cell_volume() * sum;
}

namespace {

// exp(-2 pi i k s) reduced to the fractional part so whole periods are exact.
Complex shift_phase(long k, double periods, bool nyquist) {
  double frac = periods - std::floor(periods);
  double turns = static_cast<double>(k) * frac;
  turns -= std::round(turns);
  if (turns == 0.0) return {1.0, 0.0};
  const double angle = -2.0 * std::numbers::pi * turns;
  if (nyquist) return {std::cos(angle), 0.0};
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

SpectralField translate(const SpectralField& uh, const Vec3& shift) {
  const Grid& g = uh.grid();
  const std::size_t sx = g.spectral_nx();
  std::array<AlignedVector<Complex>, 3> phase;
  for (Axis a : kAxes) {
    const auto ai = static_cast<std::size_t>(a);
    const std::size_t count = a == Axis::x ? sx : g.n(a);
    phase[ai].resize(count);
    const double periods = shift[ai] / g.period(a);
    for (std::size_t j = 0; j < count; ++j) {
      phase[ai][j] = shift_phase(g.wave_index(a, j), periods, g.is_nyquist(a, j));
    }
  }
  SpectralField out(g);
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const Complex pyz = phase[1][ky] * phase[2][kz];
      for (std::size_t kx = 0; kx < sx; ++kx) {
        out.at(kx, ky, kz) = uh.at(kx, ky, kz) * (phase[0][kx] * pyz);
      }
    }
  }
  return out;
}

RealField translate(const RealField& u, const Vec3& shift) {
  const Grid& g = u.grid();
  std::array<long, 3> nodes{};
  bool whole = true;
  for (Axis a : kAxes) {
    const auto ai = static_cast<std::size_t>(a);
    const double steps = shift[ai] / g.spacing(a);
    const double r = std::round(steps);
    if (std::abs(steps - r) > 1e-12 * std::max(1.0, std::abs(steps))) {
      whole = false;
      break;
    }
    const auto n = static_cast<long>(g.n(a));
    nodes[ai] = ((static_cast<long>(r) % n) + n) % n;
  }
  if (!whole) return inverse_transform(translate(forward_transform(u), shift));

  RealField out(g);
  for (std::size_t m = 0; m < g.nz(); ++m) {
    const std::size_t ms = (m + g.nz() - static_cast<std::size_t>(nodes[2])) % g.nz();
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const std::size_t js = (j + g.ny() - static_cast<std::size_t>(nodes[1])) % g.ny();
      for (std::size_t i = 0; i < g.nx(); ++i) {
        const std::size_t is = (i + g.nx() - static_cast<std::size_t>(nodes[0])) % g.nx();
        out.at(i, j, m) = u.at(is, js, ms);
      }
    }
  }
  return out;
}

namespace {

// Row i holds the weights that evaluate the real trigonometric interpolant
// of n periodic samples at factor * x_i, clamped to the box.
std::vector<double> interpolation_matrix(const Grid& g, Axis a, double factor) {
  const std::size_t n = g.n(a);
  const double l = g.l(a);
  std::vector<double> t(n * n);
  const double half = std::numbers::pi * l;
  for (std::size_t i = 0; i < n; ++i) {
    // Outside the box the (decaying) profile is continued by its boundary
    // value rather than wrapped around periodically.
    const double target = std::clamp(factor * g.node(a, i), -half, half);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = (target - g.node(a, j)) / l;
      double s = 1.0;
      for (std::size_t k = 1; k < n / 2; ++k) s += 2.0 * std::cos(static_cast<double>(k) * d);
      s += std::cos(static_cast<double>(n / 2) * d);
      t[i * n + j] = s / static_cast<double>(n);
    }
  }
  return t;
}

}  // namespace

RealField rescale_coordinates(const RealField& u, double factor) {
  if (factor == 1.0) return u;
  const Grid& g = u.grid();
  const std::size_t nx = g.nx(), ny = g.ny(), nz = g.nz();
  const auto tx = interpolation_matrix(g, Axis::x, factor);
  const auto ty = interpolation_matrix(g, Axis::y, factor);
  const auto tz = interpolation_matrix(g, Axis::z, factor);

  RealField a(g);
  for (std::size_t m = 0; m < nz; ++m) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double* src = u.data() + g.flat(0, j, m);
      double* dst = a.data() + g.flat(0, j, m);
      for (std::size_t i = 0; i < nx; ++i) {
        const double* row = tx.data() + i * nx;
        double s = 0.0;
        for (std::size_t ii = 0; ii < nx; ++ii) s += row[ii] * src[ii];
        dst[i] = s;
      }
    }
  }
  RealField b(g);
  for (std::size_t m = 0; m < nz; ++m) {
    for (std::size_t j = 0; j < ny; ++j) {
      double* dst = b.data() + g.flat(0, j, m);
      const double* row = ty.data() + j * ny;
      for (std::size_t jj = 0; jj < ny; ++jj) {
        const double w = row[jj];
        if (w == 0.0) continue;
        const double* src = a.data() + g.flat(0, jj, m);
        for (std::size_t i = 0; i < nx; ++i) dst[i] += w * src[i];
      }
    }
  }
  RealField c(g);
  const std::size_t plane = nx * ny;
  for (std::size_t m = 0; m < nz; ++m) {
    double* dst = c.data() + m * plane;
    const double* row = tz.data() + m * nz;
    for (std::size_t mm = 0; mm < nz; ++mm) {
      const double w = row[mm];
      if (w == 0.0) continue;
      const double* src = b.data() + mm * plane;
      for (std::size_t k = 0; k < plane; ++k) dst[k] += w * src[k];
    }
  }
  return c;
}

bool dealias_keeps(const Grid& g, std::size_t kx, std::size_t ky, std::size_t kz) {
  auto keep = [&](Axis a, std::size_t j) {
    return 3 * static_cast<std::size_t>(std::labs(g.wave_index(a, j))) <= g.n(a);
  };
  return keep(Axis::x, kx) && keep(Axis::y, ky) && keep(Axis::z, kz);
}

void apply_dealias(SpectralField& uh) {
  const Grid& g = uh.grid();
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx) {
        if (!dealias_keeps(g, kx, ky, kz)) uh.at(kx, ky, kz) = 0.0;
      }
    }
  }
}

}  // namespace zk3d
