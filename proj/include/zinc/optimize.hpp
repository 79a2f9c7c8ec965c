#ifndef ZINC_OPTIMIZE_HPP
#define ZINC_OPTIMIZE_HPP

#include <functional>

#include "zinc/linalg.hpp"

namespace zinc {

struct OptimizerConfig {
  double gradient_tolerance = 1e-8;  // max-norm of the gradient
  int max_iterations = 500;
  double step_shrink_factor = 0.5;  // backtracking ratio, in (0, 1)
  double f_rel_tolerance = 1e-10;   // relative objective change for convergence

  void validate() const;
};

struct ObjectiveEval {
  double value = 0.0;
  Vector gradient;
};

using Objective = std::function<ObjectiveEval(const Vector&)>;
using ScalarFn = std::function<double(const Vector&)>;

struct MinimizeResult {
  Vector x;
  double value = 0.0;
  double grad_max_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Quasi-Newton (BFGS inverse-Hessian updates) with backtracking Armijo line
// search. Convergence requires gradient max-norm <= gradient_tolerance and
// relative objective change <= f_rel_tolerance. Hitting max_iterations returns
// the best point with converged = false. Throws NonFiniteObjective when the
// objective is non-finite at the start or the line search cannot recover a
// finite value.
MinimizeResult minimize(const Objective& f, Vector x0, const OptimizerConfig& cfg = {});

// Central differences with a relative step; a test oracle, not a fitting path.
Vector finite_diff_gradient(const ScalarFn& f, const Vector& x, double rel_step = 1e-6);

// Hessian via central differences of an analytic gradient (for observed
// information / standard errors).
Matrix finite_diff_hessian(const Objective& f, const Vector& x, double rel_step = 1e-5);

}  // namespace zinc

#endif  // ZINC_OPTIMIZE_HPP
