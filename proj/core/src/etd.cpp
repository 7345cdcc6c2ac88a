#include "zk3d/etd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "zk3d/spectral.hpp"

namespace zk3d {

LinearSymbol linear_symbol(const Grid& g, double v_x) {
  LinearSymbol sym{g, v_x, AlignedVector<Complex>(g.spectral_size())};
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    const double zz = g.wavenumber(Axis::z, kz);
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const double yy = g.wavenumber(Axis::y, ky);
      for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx) {
        const double xi = g.odd_wavenumber(Axis::x, kx);
        const double xx = g.wavenumber(Axis::x, kx);
        sym.values[g.spectral_flat(kx, ky, kz)] = Complex(0.0, xi * (xx * xx + yy * yy + zz * zz) + xi * v_x);
      }
    }
  }
  return sym;
}

namespace {

// Reusable buffers for N(u^) = -i xi_x F[u^2], acting on coefficients in the
// raw phase convention (see toggle_origin_phase).
class ZkNonlinearity {
 public:
  ZkNonlinearity(const Grid& g, bool dealias)
      : grid_(g), dealias_(dealias), scratch_(g), physical_(g), xi_(g.spectral_nx()) {
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx) xi_[kx] = g.odd_wavenumber(Axis::x, kx) * inv_n;
    if (dealias_) {
      keep_.resize(g.spectral_size());
      for (std::size_t kz = 0; kz < g.nz(); ++kz)
        for (std::size_t ky = 0; ky < g.ny(); ++ky)
          for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx)
            keep_[g.spectral_flat(kx, ky, kz)] = dealias_keeps(g, kx, ky, kz) ? 1.0 : 0.0;
    }
  }

  void operator()(const SpectralField& in, SpectralField& out) {
    if (dealias_) {
      for (std::size_t k = 0; k < in.size(); ++k) scratch_[k] = in[k] * keep_[k];
    } else {
      std::copy(in.coeffs().begin(), in.coeffs().end(), scratch_.coeffs().begin());
    }
    raw_inverse_into(scratch_, physical_);
    for (auto& v : physical_.values()) v *= v;
    raw_forward_into(physical_, out);
    const std::size_t sx = grid_.spectral_nx();
    Complex* p = out.data();
    const double* keep = dealias_ ? keep_.data() : nullptr;
    for (std::size_t row = 0; row < grid_.ny() * grid_.nz(); ++row, p += sx) {
      for (std::size_t kx = 0; kx < sx; ++kx) {
        // -i xi w = (xi im(w), -xi re(w)); xi_ carries the 1/N normalisation.
        const double s = keep != nullptr ? xi_[kx] * keep[row * sx + kx] : xi_[kx];
        p[kx] = Complex(s * p[kx].imag(), -s * p[kx].real());
      }
    }
  }

 private:
  Grid grid_;
  bool dealias_;
  SpectralField scratch_;
  RealField physical_;
  std::vector<double> xi_;
  std::vector<double> keep_;
};

// Plain complex product; std::complex operator* takes the slow C99 Annex G
// path for inf/nan handling.
inline Complex mul(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// Cox-Matthews stages with buffers reused across steps.
class Stepper {
 public:
  using Apply = std::function<void(const SpectralField&, SpectralField&)>;

  Stepper(const EtdWeights& w, Apply nonlinear)
      : w_(w), nonlinear_(std::move(nonlinear)), nu_(w.grid), na_(w.grid), nb_(w.grid), nc_(w.grid),
        a_(w.grid), b_(w.grid), c_(w.grid) {}

  void step(SpectralField& u, long step_index) {
    require_same_grid(u.grid(), w_.grid, "etdrk4_step");
    const std::size_t n = u.size();
    nonlinear_(u, nu_);
    for (std::size_t k = 0; k < n; ++k) a_[k] = mul(w_.e2[k], u[k]) + mul(w_.q[k], nu_[k]);
    nonlinear_(a_, na_);
    for (std::size_t k = 0; k < n; ++k) b_[k] = mul(w_.e2[k], u[k]) + mul(w_.q[k], na_[k]);
    nonlinear_(b_, nb_);
    for (std::size_t k = 0; k < n; ++k) c_[k] = mul(w_.e2[k], a_[k]) + mul(w_.q[k], 2.0 * nb_[k] - nu_[k]);
    nonlinear_(c_, nc_);
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
      u[k] = mul(w_.e[k], u[k]) + mul(w_.f1[k], nu_[k]) + mul(w_.f2[k], na_[k] + nb_[k]) + mul(w_.f3[k], nc_[k]);
      ok &= std::isfinite(u[k].real()) && std::isfinite(u[k].imag());
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "evolution: non-finite coefficients after step " << step_index;
      throw BlowUpError(msg.str(), step_index, 0.0);
    }
  }

 private:
  const EtdWeights& w_;
  Apply nonlinear_;
  SpectralField nu_, na_, nb_, nc_, a_, b_, c_;
};

}  // namespace

SpectralField nonlinear_term(const SpectralField& uh, bool dealias) {
  SpectralField in = uh;
  toggle_origin_phase(in);
  SpectralField out(uh.grid());
  ZkNonlinearity n(uh.grid(), dealias);
  n(in, out);
  toggle_origin_phase(out);
  return out;
}

EtdCoefficients etd_coefficients(Complex l, double h) {
  if (l == Complex(0.0, 0.0)) return {1.0, 1.0, h / 2.0, h / 6.0, h / 3.0, h / 6.0};
  const Complex z = l * h;
  auto bracket = [](Complex s) {
    const Complex es = std::exp(s);
    const Complex s3 = s * s * s;
    return std::array<Complex, 4>{
        (std::exp(s / 2.0) - 1.0) / s,
        (-4.0 - s + es * (4.0 - 3.0 * s + s * s)) / s3,
        2.0 * (2.0 + s + es * (s - 2.0)) / s3,
        (-4.0 - 3.0 * s - s * s + es * (4.0 - s)) / s3,
    };
  };
  std::array<Complex, 4> g{};
  if (std::abs(z) < kContourThreshold) {
    for (int j = 0; j < kContourPoints; ++j) {
      const double theta = 2.0 * std::numbers::pi * (j + 0.5) / kContourPoints;
      const auto b = bracket(z + kContourRadius * std::polar(1.0, theta));
      for (std::size_t i = 0; i < 4; ++i) g[i] += b[i];
    }
    for (auto& v : g) v /= static_cast<double>(kContourPoints);
  } else {
    g = bracket(z);
  }
  return {std::exp(z), std::exp(z / 2.0), h * g[0], h * g[1], h * g[2], h * g[3]};
}

EtdWeights make_weights(const LinearSymbol& sym, double h) {
  if (!(h > 0.0)) throw ParameterError("make_weights: step size must be positive");
  const std::size_t n = sym.values.size();
  EtdWeights w{sym.grid, h, sym.v_x, {}, {}, {}, {}, {}, {}};
  for (auto* a : {&w.e, &w.e2, &w.q, &w.f1, &w.f2, &w.f3}) a->resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = etd_coefficients(sym.values[k], h);
    w.e[k] = c.e;
    w.e2[k] = c.e2;
    w.q[k] = c.q;
    w.f1[k] = c.f1;
    w.f2[k] = c.f2;
    w.f3[k] = c.f3;
  }
  return w;
}

SpectralField etdrk4_step(const SpectralField& uh, const EtdWeights& w, bool dealias, long step_index) {
  ZkNonlinearity n(uh.grid(), dealias);
  Stepper stepper(w, [&n](const SpectralField& in, SpectralField& out) { n(in, out); });
  SpectralField u = uh;
  toggle_origin_phase(u);
  stepper.step(u, step_index);
  toggle_origin_phase(u);
  return u;
}

SpectralField etdrk4_step(const SpectralField& uh, const EtdWeights& w, const Nonlinearity& nonlinear,
                          long step_index) {
  Stepper stepper(w, [&nonlinear](const SpectralField& in, SpectralField& out) { out = nonlinear(in); });
  SpectralField u = uh;
  stepper.step(u, step_index);
  return u;
}

void validate(const EvolutionConfig& cfg) {
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw ParameterError("evolution: t_end must be > 0");
  if (cfg.n_steps < 1) throw ParameterError("evolution: n_steps must be >= 1");
  if (cfg.sample_every < 1) throw ParameterError("evolution: sample_every must be >= 1");
  if (!std::isfinite(cfg.v_x)) throw ParameterError("evolution: v_x must be finite");
  for (double t : cfg.snapshot_times) {
    if (!(t >= 0.0 && t <= cfg.t_end)) throw ParameterError("evolution: snapshot time outside [0, t_end]");
  }
}

namespace {

DiagnosticsRecord default_record(double t, const RealField& u) {
  DiagnosticsRecord r;
  r.t = t;
  r.linf = max_abs(u);
  r.argmax = node_coordinates(u.grid(), argmax_index(u));
  return r;
}

}  // namespace

EvolutionResult evolve(const RealField& u0, const EvolutionConfig& cfg, const EvolutionHooks& hooks) {
  validate(cfg);
  if (!all_finite(u0)) throw ParameterError("evolution: initial data is not finite");
  const Grid& g = u0.grid();
  const double h = cfg.step_size();
  const EtdWeights w = make_weights(linear_symbol(g, cfg.v_x), h);

  std::set<long> snapshot_steps;
  for (double t : cfg.snapshot_times) snapshot_steps.insert(std::lround(t / h));

  ZkNonlinearity nonlinear(g, cfg.dealias);
  Stepper stepper(w, [&nonlinear](const SpectralField& in, SpectralField& out) { nonlinear(in, out); });

  EvolutionResult result{u0, forward_transform(u0), {}};
  SpectralField& uh = result.final_spectrum;
  // With the 2/3 rule the initial data is projected too, so the truncated
  // system conserves mass and energy up to time-stepping error.
  if (cfg.dealias) apply_dealias(uh);
  // Stepping runs in the raw phase convention; `raw` holds the state.
  SpectralField raw = uh;
  toggle_origin_phase(raw);

  auto visit = [&](long step, bool sample) {
    const bool snap = hooks.on_snapshot && snapshot_steps.count(step) > 0;
    if (!sample && !snap) return;
    const double t = cfg.time_at(step);
    uh = raw;
    toggle_origin_phase(uh);
    const RealField u = inverse_transform(uh);
    if (sample) {
      result.series.push_back(hooks.sampler ? hooks.sampler(t, u, uh) : default_record(t, u));
      for (const auto& obs : hooks.observers) obs(t, u, uh);
    }
    if (snap) hooks.on_snapshot(t, u, uh);
  };

  visit(0, true);
  for (long step = 1; step <= cfg.n_steps; ++step) {
    try {
      stepper.step(raw, step);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.what(), step, cfg.time_at(step), result.series);
    }
    visit(step, step % cfg.sample_every == 0 || step == cfg.n_steps);
  }
  uh = raw;
  toggle_origin_phase(uh);
  result.final_field = inverse_transform(uh);
  return result;
}

}  // namespace zk3d
