#include "zk3d/ground_state.hpp"

#include <cmath>
#include <sstream>

#include "zk3d/spectral.hpp"

namespace zk3d {
namespace {

// Multiply by the real even symbol s(xi) = c + |xi|^2 (or its inverse).
template <class F>
SpectralField apply_symbol(const SpectralField& vh, F&& symbol) {
  const Grid& g = vh.grid();
  SpectralField out(g);
  for (std::size_t kz = 0; kz < g.nz(); ++kz) {
    const double zz = g.wavenumber(Axis::z, kz);
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const double yy = g.wavenumber(Axis::y, ky);
      const double perp = yy * yy + zz * zz;
      for (std::size_t kx = 0; kx < g.spectral_nx(); ++kx) {
        const double xx = g.wavenumber(Axis::x, kx);
        out.at(kx, ky, kz) = symbol(xx * xx + perp) * vh.at(kx, ky, kz);
      }
    }
  }
  return out;
}

RealField pointwise_product(const RealField& a, const RealField& b) {
  RealField out(a.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

}  // namespace

SpectralField gs_residual(const SpectralField& qh, double c) {
  const RealField q = inverse_transform(qh);
  SpectralField res = apply_symbol(qh, [c](double xi2) { return c + xi2; });
  res -= forward_transform(pointwise_product(q, q));
  return res;
}

namespace {

SpectralField jacobian_with_physical(const RealField& q, const SpectralField& vh, double c) {
  const RealField v = inverse_transform(vh);
  SpectralField out = apply_symbol(vh, [c](double xi2) { return c + xi2; });
  SpectralField qv = forward_transform(pointwise_product(q, v));
  KrylovTraits<SpectralField>::axpy(-2.0, qv, out);
  return out;
}

}  // namespace

SpectralField gs_jacobian_apply(const SpectralField& qh, const SpectralField& vh, double c) {
  require_same_grid(qh.grid(), vh.grid(), "gs_jacobian_apply");
  return jacobian_with_physical(inverse_transform(qh), vh, c);
}

double amplitude_factor(const SpectralField& qh, double c) {
  const RealField q = inverse_transform(qh);
  const SpectralField lq = apply_symbol(qh, [c](double xi2) { return c + xi2; });
  const SpectralField q2 = forward_transform(pointwise_product(q, q));
  return inner(qh, lq) / inner(qh, q2);
}

RealField default_initial_iterate(const Grid& grid, double c) {
  return RealField::sample(grid, [c](double x, double y, double z) {
    return 2.0 * c * std::exp(-c * (x * x + y * y + z * z));
  });
}

GroundStateResult solve_ground_state(const Grid& grid, const GroundStateParams& params) {
  const double c = params.c;
  if (!(c > 0.0)) throw ParameterError("ground state: c must be positive");
  if (!(params.newton_tol > 0.0 && params.newton_tol < 1.0) ||
      !(params.gmres_tol > 0.0 && params.gmres_tol < 1.0)) {
    throw ParameterError("ground state: tolerances must lie in (0, 1)");
  }
  if (params.max_newton_iters < 1 || params.gmres_restart < 1 || params.gmres_max_iters < 1) {
    throw ParameterError("ground state: iteration caps must be >= 1");
  }

  RealField q0 = params.initial_iterate ? *params.initial_iterate : default_initial_iterate(grid, c);
  require_same_grid(grid, q0.grid(), "solve_ground_state");
  SpectralField qh = forward_transform(q0);
  if (params.rescale_initial) {
    const double alpha = amplitude_factor(qh, c);
    if (std::isfinite(alpha) && alpha > 0.0) qh *= alpha;
  }

  GroundStateResult result{RealField(grid), 0.0, 0, false, 0, {}};
  const GmresOptions gmres{params.gmres_tol, params.gmres_restart, params.gmres_max_iters};
  auto precondition = [c](const SpectralField& v) {
    return apply_symbol(v, [c](double xi2) { return 1.0 / (c + xi2); });
  };

  for (int it = 0;; ++it) {
    const SpectralField res = gs_residual(qh, c);
    const double norm = l2_norm(res);
    result.residual_history.push_back(norm);
    if (!std::isfinite(norm)) {
      throw NewtonNonConvergence("ground state: residual became non-finite", result.residual_history);
    }
    if (norm <= params.newton_tol) {
      result.residual_norm = norm;
      result.newton_iters = it;
      result.converged = true;
      break;
    }
    if (it >= params.max_newton_iters) {
      std::ostringstream msg;
      msg << "ground state: no convergence after " << it << " Newton steps, residual " << norm;
      throw NewtonNonConvergence(msg.str(), result.residual_history);
    }
    const RealField q = inverse_transform(qh);
    auto jac = [&](const SpectralField& v) { return jacobian_with_physical(q, v, c); };
    const auto step = gmres_solve(jac, res, gmres, precondition);
    result.gmres_iterations += step.iterations;
    qh -= step.x;
  }

  result.q = inverse_transform(qh);
  if (max_abs(result.q) < 0.1 * c) {
    throw DegenerateSolution("ground state: iteration collapsed to the trivial solution");
  }
  double lo = result.q[0], hi = result.q[0];
  for (double v : result.q.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 0.1 * c) {
    throw DegenerateSolution("ground state: iteration collapsed to the constant solution");
  }
  return result;
}

RealField dilate(const RealField& q, double c) {
  if (!(c > 0.0)) throw ParameterError("dilate: c must be positive");
  RealField out = rescale_coordinates(q, std::sqrt(c));
  out *= c;
  return out;
}

}  // namespace zk3d
