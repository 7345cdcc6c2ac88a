#include "zk3d/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>

#include "zk3d/error.hpp"
#include "zk3d/ground_state.hpp"
#include "zk3d/spectral.hpp"

namespace zk3d {

double mass(const RealField& u) {
  double sum = 0.0;
  for (double v : u.values()) sum += v * v;
  return u.grid().cell_volume() * sum;
}

double energy(const RealField& u, const SpectralField& uh) {
  // Discrete Parseval: the rectangle rule applied to |grad u|^2 equals the
  // box volume times the coefficient sum of |xi|^2 |u^|^2.
  const Grid& g = u.grid();
  double grad = 0.0;
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    const double zz = g.odd_wavenumber(Axis::z, kz);
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const double yy = g.odd_wavenumber(Axis::y, ky);
      for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx) {
        const double xx = g.odd_wavenumber(Axis::x, kx);
        grad += uh.multiplicity(kx) * (xx * xx + yy * yy + zz * zz) * std::norm(uh.at(kx, ky, kz));
      }
    }
  }
  grad *= g.box_volume();
  double cubic = 0.0;
  for (double v : u.values()) cubic += v * v * v;
  cubic *= g.cell_volume();
  return 0.5 * grad - cubic / 3.0;
}

double energy(const RealField& u) { return energy(u, forward_transform(u)); }

double drift(double value, double initial) {
  if (initial == 0.0) throw UndefinedDriftError("drift: initial value is zero");
  return std::abs(value / initial - 1.0);
}

std::vector<double> drift(const std::vector<double>& series) {
  std::vector<double> out;
  if (series.empty()) return out;
  out.reserve(series.size());
  for (double v : series) out.push_back(drift(v, series.front()));
  return out;
}

RealField soliton_model(const RealField& q_ref, double c, const Vec3& center) {
  return translate(dilate(q_ref, c), center);
}

namespace {

struct Local {
  double value = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
};

Local evaluate_interpolant(const SpectralField& uh, const Vec3& p) {
  const Grid& g = uh.grid();
  auto phases = [&](Axis a, std::size_t n) {
    std::vector<Complex> e(n);
    for (std::size_t k = 0; k < n; ++k) e[k] = std::polar(1.0, g.wavenumber(a, k) * p[static_cast<std::size_t>(a)]);
    return e;
  };
  const std::vector<Complex> ex = phases(Axis::x, g.spectral_nx());
  const std::vector<Complex> ey = phases(Axis::y, g.ny());
  const std::vector<Complex> ez = phases(Axis::z, g.nz());
  // s[0..2]: sums over kx of c, i xi_x c, -xi_x^2 c.
  Local r;
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    if (g.is_nyquist(Axis::z, kz)) continue;
    const double zz = g.wavenumber(Axis::z, kz);
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      if (g.is_nyquist(Axis::y, ky)) continue;
      const double yy = g.wavenumber(Axis::y, ky);
      Complex s0, s1, s2;
      for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx) {
        if (g.is_nyquist(Axis::x, kx)) continue;
        const double xx = g.wavenumber(Axis::x, kx);
        const Complex t = uh.multiplicity(kx) * uh.at(kx, ky, kz) * ex[kx];
        s0 += t;
        s1 += Complex(0.0, xx) * t;
        s2 -= xx * xx * t;
      }
      const Complex e = ey[ky] * ez[kz];
      const Complex iy(0.0, yy), iz(0.0, zz);
      r.value += (s0 * e).real();
      r.grad[0] += (s1 * e).real();
      r.grad[1] += (iy * s0 * e).real();
      r.grad[2] += (iz * s0 * e).real();
      r.hess[0][0] += (s2 * e).real();
      r.hess[1][1] -= yy * yy * (s0 * e).real();
      r.hess[2][2] -= zz * zz * (s0 * e).real();
      r.hess[0][1] += (iy * s1 * e).real();
      r.hess[0][2] += (iz * s1 * e).real();
      r.hess[1][2] -= yy * zz * (s0 * e).real();
    }
  }
  r.hess[1][0] = r.hess[0][1];
  r.hess[2][0] = r.hess[0][2];
  r.hess[2][1] = r.hess[1][2];
  return r;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

double det3(const Mat3& h) {
  return h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
         h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
}

bool negative_definite(const Mat3& h) {
  return h[0][0] < 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0 && det3(h) < 0.0;
}

// Cramer's rule; h is known to be nonsingular here.
std::array<double, 3> solve3(const Mat3& h, const std::array<double, 3>& b) {
  const double d = det3(h);
  std::array<double, 3> x{};
  for (std::size_t k = 0; k < 3; ++k) {
    Mat3 m = h;
    for (std::size_t a = 0; a < 3; ++a) m[a][k] = b[a];
    x[k] = det3(m) / d;
  }
  return x;
}

Peak refine_peak(const RealField& u, const SpectralField& uh, std::size_t node) {
  const Grid& g = u.grid();
  const Vec3 start = node_coordinates(g, node);
  const Peak fallback{start, u[node]};
  Vec3 p = start;
  for (int it = 0; it < 20; ++it) {
    const Local l = evaluate_interpolant(uh, p);
    if (!negative_definite(l.hess)) return fallback;
    const std::array<double, 3> step = solve3(l.hess, {-l.grad[0], -l.grad[1], -l.grad[2]});
    double biggest = 0.0;
    for (Axis a : kAxes) {
      const auto ai = static_cast<std::size_t>(a);
      p[ai] += step[ai];
      if (std::abs(p[ai] - start[ai]) > g.spacing(a)) return fallback;
      biggest = std::max(biggest, std::abs(step[ai]) / g.spacing(a));
    }
    if (biggest < 1e-12) break;
  }
  const double value = evaluate_interpolant(uh, p).value;
  if (!(value >= fallback.value)) return fallback;
  return Peak{p, value};
}

}  // namespace

Peak interpolated_peak(const RealField& u) {
  if (!(max_abs(u) > 0.0)) throw ParameterError("interpolated_peak: field is identically zero");
  return refine_peak(u, forward_transform(u), argmax_index(u));
}

SolitonFit fit_soliton(const RealField& u, const RealField& q_ref, PeakMode mode) {
  require_same_grid(u.grid(), q_ref.grid(), "fit_soliton");
  const double peak = max_abs(u);
  if (!(peak > 0.0)) throw ParameterError("fit_soliton: field is identically zero");
  SolitonFit fit;
  Peak top{node_coordinates(u.grid(), argmax_index(u)), peak};
  if (mode == PeakMode::interpolated) top = interpolated_peak(u);
  fit.c = top.value / max_abs(q_ref);
  if (!(fit.c > 0.0)) throw ParameterError("fit_soliton: field has no positive peak");
  fit.center = top.location;
  const RealField residual = u - soliton_model(q_ref, fit.c, fit.center);
  fit.residual_inf = max_abs(residual);
  fit.residual_l2 = std::sqrt(mass(residual));
  fit.relative_residual = fit.residual_inf / peak;
  return fit;
}

namespace {

double periodic_offset(double d, double period) { return d - period * std::round(d / period); }

}  // namespace

TwoSolitonFit fit_two_solitons(const RealField& u, const RealField& q_ref, double exclusion_radius,
                               PeakMode mode) {
  const Grid& g = u.grid();
  TwoSolitonFit out;
  out.first = fit_soliton(u, q_ref, mode);
  const RealField first_model = soliton_model(q_ref, out.first.c, out.first.center);

  std::size_t best = g.size();
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Vec3 p = node_coordinates(g, k);
    double r2 = 0.0;
    for (Axis a : kAxes) {
      const auto ai = static_cast<std::size_t>(a);
      const double d = periodic_offset(p[ai] - out.first.center[ai], g.period(a));
      r2 += d * d;
    }
    if (r2 <= exclusion_radius * exclusion_radius) continue;
    if (best == g.size() || u[k] > u[best]) best = k;
  }
  if (best == g.size() || !(u[best] > 0.0)) {
    throw ParameterError("fit_two_solitons: no second peak outside the exclusion ball");
  }
  SolitonFit& second = out.second;
  Peak low{node_coordinates(g, best), u[best]};
  if (mode == PeakMode::interpolated) low = refine_peak(u, forward_transform(u), best);
  second.c = low.value / max_abs(q_ref);
  second.center = low.location;
  const RealField second_model = soliton_model(q_ref, second.c, second.center);

  RealField r1 = u - second_model;
  r1 -= first_model;
  const double peak = max_abs(u);
  out.residual_inf = max_abs(r1);
  out.residual_l2 = std::sqrt(mass(r1));
  out.relative_residual = out.residual_inf / peak;

  const RealField r_second = u - second_model;
  second.residual_inf = max_abs(r_second);
  second.residual_l2 = std::sqrt(mass(r_second));
  second.relative_residual = second.residual_inf / peak;
  return out;
}

void validate(const ConeParams& p) {
  if (!(p.delta >= 0.0 && p.delta < 1.0)) throw ParameterError("cone: delta must lie in [0, 1)");
  if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi / 3.0 - p.delta)) {
    throw ParameterError("cone: theta must satisfy 0 <= theta <= pi/3 - delta");
  }
}

ConeNorms cone_norms(const RealField& u, double t, const ConeParams& p, const Vec3& center) {
  validate(p);
  const Grid& g = u.grid();
  const double offset = p.frame == ConeFrame::soliton ? (-1.0 + p.delta) * t : p.delta * t;
  const double slope = std::tan(p.theta);
  double in = 0.0, out = 0.0;
  for (std::size_t m = 0; m < g.nz(); ++m) {
    const double z = periodic_offset(g.node(Axis::z, m) - center[2], g.period(Axis::z));
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double y = periodic_offset(g.node(Axis::y, j) - center[1], g.period(Axis::y));
      const double bound = offset - std::sqrt(y * y + z * z) * slope;
      for (std::size_t i = 0; i < g.nx(); ++i) {
        const double x = periodic_offset(g.node(Axis::x, i) - center[0], g.period(Axis::x));
        const double v = u.at(i, j, m);
        (x > bound ? in : out) += v * v;
      }
    }
  }
  const double w = g.cell_volume();
  return {std::sqrt(w * in), std::sqrt(w * out)};
}

double radiation_front_angle(const RealField& u, const FrontAngleOptions& opts) {
  const Grid& g = u.grid();
  const std::size_t m0 = g.nz() / 2;  // z = 0 node
  const std::size_t nx = g.nx(), ny = g.ny();
  auto at = [&](std::size_t i, std::size_t j) { return std::abs(u.at(i, j, m0)); };

  double peak = -1.0;
  std::size_t pi = 0, pj = 0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = at(i, j);
      if (v > peak || (v == peak && i > pi)) {
        peak = v;
        pi = i;
        pj = j;
      }
    }
  }
  const double apex_x = g.node(Axis::x, pi), apex_y = g.node(Axis::y, pj);

  // The body ends where |u| stops decreasing along the row behind the apex
  // (or drops below an explicit threshold).
  std::size_t body = pi;
  while (body > 0 && at(body - 1, pj) < at(body, pj) && at(body - 1, pj) > opts.threshold) --body;
  if (body == 0) throw NoRadiationError("radiation_front_angle: no radiation behind the peak");
  const std::size_t first = body - 1;  // columns first, first - 1, ..., 0 trail the body

  double threshold = opts.threshold;
  if (!(threshold > 0.0)) {
    double own = 0.0;
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i <= first; ++i) own = std::max(own, at(i, j));
    if (!(own > opts.noise_floor * peak)) throw NoRadiationError("radiation_front_angle: no radiation behind the peak");
    threshold = opts.relative_threshold * own;
  }

  std::vector<double> xs, top, bottom;
  std::size_t widest = 0;
  double width = -1.0;
  for (std::size_t i = first + 1; i-- > 0;) {
    bool any = false;
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      if (at(i, j) > threshold) {
        const double y = g.node(Axis::y, j) - apex_y;
        if (!any) lo = hi = y;
        lo = std::min(lo, y);
        hi = std::max(hi, y);
        any = true;
      }
    }
    if (!any) continue;
    xs.push_back(apex_x - g.node(Axis::x, i));
    top.push_back(hi);
    bottom.push_back(-lo);
    if (hi - lo > width) {
      width = hi - lo;
      widest = xs.size();
    }
  }
  if (widest < 2) throw NoRadiationError("radiation_front_angle: no radiation behind the peak");
  // Lines through the apex, fitted over the columns up to the widest one.
  double sxx = 0.0, sxt = 0.0, sxb = 0.0;
  for (std::size_t k = 0; k < widest; ++k) {
    sxx += xs[k] * xs[k];
    sxt += xs[k] * top[k];
    sxb += xs[k] * bottom[k];
  }
  return 0.5 * (std::atan(sxt / sxx) + std::atan(sxb / sxx));
}

double radiation_front_angle(const RealField& u, double threshold) {
  FrontAngleOptions opts;
  opts.threshold = threshold;
  return radiation_front_angle(u, opts);
}

std::vector<double> xline_integrals(const RealField& u) {
  const Grid& g = u.grid();
  std::vector<double> out(g.ny() * g.nz(), 0.0);
  const double dx = g.spacing(Axis::x);
  for (std::size_t row = 0; row < out.size(); ++row) {
    const double* p = u.data() + row * g.nx();
    double s = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) s += p[i];
    out[row] = dx * s;
  }
  return out;
}

double SpectralDecay::outer_band(std::size_t count) const {
  double m = 0.0;
  const std::size_t n = shell_max.size();
  for (std::size_t s = n > count ? n - count : 0; s < n; ++s) m = std::max(m, shell_max[s]);
  return m;
}

SpectralDecay spectral_decay_report(const SpectralField& uh) {
  const Grid& g = uh.grid();
  const std::size_t shells = std::max({g.nx(), g.ny(), g.nz()}) / 2 + 1;
  SpectralDecay report{std::vector<double>(shells, 0.0)};
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    const auto az = static_cast<std::size_t>(std::labs(g.wave_index(Axis::z, kz)));
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const auto ay = static_cast<std::size_t>(std::labs(g.wave_index(Axis::y, ky)));
      for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx) {
        const std::size_t s = std::max({kx, ay, az});
        report.shell_max[s] = std::max(report.shell_max[s], std::abs(uh.at(kx, ky, kz)));
      }
    }
  }
  return report;
}

Sampler make_sampler(const SamplerOptions& opts) {
  struct Reference {
    bool set = false;
    double mass = 0.0;
    double energy = 0.0;
  };
  auto ref = std::make_shared<Reference>();
  return [opts, ref](double t, const RealField& u, const SpectralField& uh) {
    DiagnosticsRecord r;
    r.t = t;
    r.linf = max_abs(u);
    r.argmax = node_coordinates(u.grid(), argmax_index(u));
    r.mass = mass(u);
    r.energy = energy(u, uh);
    if (!ref->set) {
      ref->set = true;
      ref->mass = r.mass;
      ref->energy = r.energy;
    }
    r.mass_drift = ref->mass == 0.0 ? 0.0 : drift(r.mass, ref->mass);
    r.energy_drift = ref->energy == 0.0 ? 0.0 : drift(r.energy, ref->energy);
    if (opts.cone) {
      const ConeNorms cn = cone_norms(u, t, *opts.cone, r.argmax);
      r.has_cone = true;
      r.cone_inside = cn.inside;
      r.cone_outside = cn.outside;
    }
    return r;
  };
}

}  // namespace zk3d
