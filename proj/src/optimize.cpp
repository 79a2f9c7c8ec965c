#include "zinc/optimize.hpp"

#include <cmath>

#include "zinc/errors.hpp"

namespace zinc {

void OptimizerConfig::validate() const {
  if (!(gradient_tolerance > 0)) throw ConfigError("gradient_tolerance must be > 0");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(step_shrink_factor > 0 && step_shrink_factor < 1))
    throw ConfigError("step_shrink_factor must lie in (0, 1)");
}

namespace {

bool finite(const ObjectiveEval& e) {
  if (!std::isfinite(e.value)) return false;
  for (double g : e.gradient)
    if (!std::isfinite(g)) return false;
  return true;
}

}  // namespace

MinimizeResult minimize(const Objective& f, Vector x0, const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t n = x0.size();

  ObjectiveEval cur = f(x0);
  if (!finite(cur)) throw NonFiniteObjective("at the starting point");

  MinimizeResult best{x0, cur.value, max_abs(cur.gradient), false, 0};
  if (best.grad_max_norm <= cfg.gradient_tolerance) {
    best.converged = true;
    return best;
  }

  Matrix H = Matrix::identity(n);  // inverse Hessian approximation
  Vector x = std::move(x0);
  bool first_update = true;
  int stalled = 0;  // consecutive iterations with negligible objective change
  constexpr double armijo_c1 = 1e-4;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    Vector p = matvec(H, cur.gradient);
    for (double& v : p) v = -v;

    double slope = dot(cur.gradient, p);
    if (!(slope < 0)) {  // not a descent direction: reset curvature
      H = Matrix::identity(n);
      first_update = true;
      p = cur.gradient;
      for (double& v : p) v = -v;
      slope = dot(cur.gradient, p);
      if (!(slope < 0)) {  // gradient numerically zero
        best.converged = max_abs(cur.gradient) <= cfg.gradient_tolerance;
        break;
      }
    }

    double alpha = 1.0;
    Vector xn(n);
    ObjectiveEval next;
    bool accepted = false;
    bool saw_finite = false;
    for (int ls = 0; ls < 80; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + alpha * p[i];
      next = f(xn);
      if (finite(next)) {
        saw_finite = true;
        if (next.value <= cur.value + armijo_c1 * alpha * slope) {
          accepted = true;
          break;
        }
      }
      alpha *= cfg.step_shrink_factor;
      if (alpha < 1e-20) break;
    }
    if (!accepted) {
      if (!saw_finite) throw NonFiniteObjective("line search found no finite value");
      // stuck: at worst we sit at a flat spot; honest convergence check
      best.converged = max_abs(cur.gradient) <= cfg.gradient_tolerance;
      break;
    }

    Vector s(n), yv(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      yv[i] = next.gradient[i] - cur.gradient[i];
    }
    const double sy = dot(s, yv);

    if (first_update && sy > 0) {
      // Scale the initial inverse Hessian to the observed curvature.
      const double yy = dot(yv, yv);
      if (yy > 0) {
        const double scale = sy / yy;
        for (std::size_t i = 0; i < n; ++i) H(i, i) = scale;
      }
      first_update = false;
    }

    if (sy > 1e-14 * max_abs(s) * max_abs(yv) && sy > 0) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      Vector Hy = matvec(H, yv);
      const double yHy = dot(yv, Hy);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H(i, j) += rho * rho * (sy + yHy) * s[i] * s[j] - rho * (Hy[i] * s[j] + s[i] * Hy[j]);
    }

    const double rel_change =
        std::abs(cur.value - next.value) / std::max(1.0, std::abs(next.value));
    x = std::move(xn);
    cur = std::move(next);

    const double gnorm = max_abs(cur.gradient);
    if (cur.value <= best.value) {
      best.x = x;
      best.value = cur.value;
      best.grad_max_norm = gnorm;
    }
    best.iterations = it;
    if (gnorm <= cfg.gradient_tolerance && rel_change <= cfg.f_rel_tolerance) {
      best.converged = true;
      break;
    }
    // Once objective improvements sit below the value's resolution the line
    // search only harvests rounding noise; stop and let the caller polish.
    stalled = rel_change <= cfg.f_rel_tolerance ? stalled + 1 : 0;
    if (stalled >= 5) break;
  }
  return best;
}

Vector finite_diff_gradient(const ScalarFn& f, const Vector& x, double rel_step) {
  Vector g(x.size(), 0.0);
  Vector xp = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NonFiniteObjective("finite differences hit a non-finite value");
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix finite_diff_hessian(const Objective& f, const Vector& x, double rel_step) {
  const std::size_t n = x.size();
  Matrix Hs(n, n, 0.0);
  Vector xp = x;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    Vector gp = f(xp).gradient;
    xp[i] = x[i] - h;
    Vector gm = f(xp).gradient;
    xp[i] = x[i];
    for (std::size_t j = 0; j < n; ++j) Hs(i, j) = (gp[j] - gm[j]) / (2.0 * h);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b) {
      const double m = 0.5 * (Hs(a, b) + Hs(b, a));
      Hs(a, b) = Hs(b, a) = m;
    }
  return Hs;
}

}  // namespace zinc
