#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "zk3d/error.hpp"

namespace zk3d {

/// Vector-space operations GMRES needs. Specialize for each vector type:
///   static double dot(const V&, const V&);
///   static void axpy(double a, const V& x, V& y);   // y += a x
///   static void scale(V& x, double a);
///   static V zeros_like(const V&);
template <class V>
struct KrylovTraits;

struct GmresOptions {
  double tol = 1e-8;   ///< relative residual target ||A x - b|| <= tol ||b||
  int restart = 30;
  int max_iters = 2000;  ///< total Arnoldi steps over all restarts
};

template <class V>
struct GmresResult {
  V x;
  double relative_residual = 0.0;
  int iterations = 0;
};

class KrylovStagnation : public Error {
 public:
  KrylovStagnation(const std::string& what, double relative_residual)
      : Error(what), relative_residual_(relative_residual) {}
  double relative_residual() const { return relative_residual_; }

 private:
  double relative_residual_;
};

/// Carries the best iterate found before giving up.
template <class V>
class KrylovStagnationError : public KrylovStagnation {
 public:
  KrylovStagnationError(V best, double relative_residual)
      : KrylovStagnation("gmres: no convergence, relative residual " + std::to_string(relative_residual),
                         relative_residual),
        best_(std::move(best)) {}
  const V& best_iterate() const { return best_; }

 private:
  V best_;
};

struct IdentityPreconditioner {
  template <class V>
  V operator()(const V& v) const {
    return v;
  }
};

/// Restarted GMRES with right preconditioning, so the monitored residual
/// is the true residual of the original system. `apply` and `precondition`
/// are callbacks V -> V; nothing else about the operator is needed.
template <class V, class Apply, class Precondition = IdentityPreconditioner>
GmresResult<V> gmres_solve(Apply&& apply, const V& rhs, const GmresOptions& opts,
                           Precondition&& precondition = {}) {
  using T = KrylovTraits<V>;
  if (opts.restart < 1 || opts.max_iters < 1 || !(opts.tol > 0.0)) {
    throw ParameterError("gmres: restart and max_iters must be >= 1, tol > 0");
  }

  GmresResult<V> result{T::zeros_like(rhs), 0.0, 0};
  const double bnorm = std::sqrt(T::dot(rhs, rhs));
  if (bnorm == 0.0) return result;

  V& x = result.x;
  V best = x;
  double best_rel = 1.0;
  const auto m = static_cast<std::size_t>(opts.restart);

  V r = rhs;
  double beta = bnorm;
  for (;;) {
    std::vector<V> basis;
    basis.reserve(m + 1);
    basis.push_back(r);
    T::scale(basis.back(), 1.0 / beta);

    // Hessenberg columns, Givens rotations, and the rotated rhs.
    std::vector<std::vector<double>> h;
    std::vector<double> cs, sn, g{beta};
    std::size_t k = 0;
    bool inner_done = false;
    while (k < m && result.iterations < opts.max_iters && !inner_done) {
      V w = apply(precondition(basis[k]));
      std::vector<double> col(k + 2, 0.0);
      for (std::size_t i = 0; i <= k; ++i) {
        col[i] = T::dot(basis[i], w);
        T::axpy(-col[i], basis[i], w);
      }
      col[k + 1] = std::sqrt(T::dot(w, w));

      for (std::size_t i = 0; i < k; ++i) {
        const double t = cs[i] * col[i] + sn[i] * col[i + 1];
        col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
        col[i] = t;
      }
      const double denom = std::hypot(col[k], col[k + 1]);
      const double c = denom == 0.0 ? 1.0 : col[k] / denom;
      const double s = denom == 0.0 ? 0.0 : col[k + 1] / denom;
      const double hk1 = col[k + 1];
      cs.push_back(c);
      sn.push_back(s);
      col[k] = c * col[k] + s * col[k + 1];
      col[k + 1] = 0.0;
      g.push_back(-s * g[k]);
      g[k] = c * g[k];
      h.push_back(std::move(col));
      ++k;
      ++result.iterations;

      if (std::abs(g[k]) <= opts.tol * bnorm || hk1 <= 1e-14 * bnorm) {
        inner_done = true;
      } else {
        basis.push_back(std::move(w));
        T::scale(basis.back(), 1.0 / hk1);
      }
    }

    // Back substitution for the k x k upper-triangular system.
    std::vector<double> y(k, 0.0);
    for (std::size_t ii = k; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t jj = ii + 1; jj < k; ++jj) s -= h[jj][ii] * y[jj];
      y[ii] = h[ii][ii] == 0.0 ? 0.0 : s / h[ii][ii];
    }
    V update = T::zeros_like(rhs);
    for (std::size_t i = 0; i < k; ++i) T::axpy(y[i], basis[i], update);
    T::axpy(1.0, precondition(update), x);

    r = rhs;
    T::axpy(-1.0, apply(x), r);
    beta = std::sqrt(T::dot(r, r));
    result.relative_residual = beta / bnorm;
    if (result.relative_residual < best_rel) {
      best_rel = result.relative_residual;
      best = x;
    }
    if (result.relative_residual <= opts.tol) return result;
    if (result.iterations >= opts.max_iters) {
      throw KrylovStagnationError<V>(std::move(best), best_rel);
    }
  }
}

}  // namespace zk3d
