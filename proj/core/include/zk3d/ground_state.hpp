#pragma once

#include <optional>
#include <vector>

#include "zk3d/error.hpp"
#include "zk3d/field.hpp"
#include "zk3d/gmres.hpp"
#include "zk3d/grid.hpp"

namespace zk3d {

template <>
struct KrylovTraits<SpectralField> {
  static double dot(const SpectralField& a, const SpectralField& b) { return inner(a, b); }
  static void axpy(double a, const SpectralField& x, SpectralField& y) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
  }
  static void scale(SpectralField& x, double a) { x *= a; }
  static SpectralField zeros_like(const SpectralField& x) { return SpectralField(x.grid()); }
};

struct GroundStateParams {
  double c = 1.0;
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  double gmres_tol = 1e-8;
  int gmres_restart = 30;
  int gmres_max_iters = 600;
  /// Defaults to default_initial_iterate(grid, c) when empty.
  std::optional<RealField> initial_iterate;
  /// Scale the initial iterate by <q, Lq> / <q, q^2> (L = c - Delta) before
  /// the first Newton step. Without it small iterates fall into the basin
  /// of the zero solution.
  bool rescale_initial = true;
};

struct GroundStateResult {
  RealField q;
  double residual_norm = 0.0;
  int newton_iters = 0;
  bool converged = false;
  int gmres_iterations = 0;
  std::vector<double> residual_history;
};

class NewtonNonConvergence : public Error {
 public:
  NewtonNonConvergence(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// The iteration collapsed onto the zero or constant solution.
class DegenerateSolution : public Error {
 public:
  using Error::Error;
};

/// (c + |xi|^2) q^ - F[q^2]: zero exactly when -cQ + Delta Q + Q^2 = 0.
SpectralField gs_residual(const SpectralField& qh, double c);

/// Frechet derivative of gs_residual at qh applied to vh:
/// (c + |xi|^2) v^ - 2 F[q v].
SpectralField gs_jacobian_apply(const SpectralField& qh, const SpectralField& vh, double c);

/// 2c exp(-c |x|^2), the dilation of the standard 2 exp(-|x|^2) iterate.
RealField default_initial_iterate(const Grid& grid, double c);

/// <q, (c - Delta) q> / <q, q^2>; equals 1 at any nontrivial solution.
double amplitude_factor(const SpectralField& qh, double c);

/// Matrix-free Newton-Krylov solve for Q_c on the given grid. Each Newton
/// correction solves J delta = residual by GMRES preconditioned with
/// (c + |xi|^2)^-1. Throws NewtonNonConvergence, DegenerateSolution or
/// KrylovStagnation.
GroundStateResult solve_ground_state(const Grid& grid, const GroundStateParams& params);

/// c q(sqrt(c) x) on the same grid by trigonometric interpolation.
RealField dilate(const RealField& q, double c);

}  // namespace zk3d
