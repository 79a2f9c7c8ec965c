#ifndef ZINC_FAMILIES_HPP
#define ZINC_FAMILIES_HPP

#include "zinc/dataset.hpp"
#include "zinc/linalg.hpp"

namespace zinc {

// Packed parameter layout per family (count coefficients use a log link,
// zero-component coefficients a logit link; dispersion and scale parameters
// enter through their logs so optimization stays unconstrained):
//   linear : [beta (1+p), log_sigma]
//   poisson: [beta (1+p)]
//   negbin : [beta (1+p), log_theta]
//   zip    : [beta (1+p), gamma (1+q)]
//   zinb   : [beta (1+p), gamma (1+q), log_theta]
std::size_t packed_param_count(Family family, const DesignMatrices& dm);

struct LogLikEval {
  double value = 0.0;
  Vector grad;
  bool clamped = false;  // a linear predictor hit the +/-500 guard
};

// Log-likelihood and analytic gradient at a packed parameter vector.
// Throws NonFiniteLikelihood if the value cannot be represented.
LogLikEval loglik_eval(Family family, const Vector& params, const DesignMatrices& dm);

double loglik(Family family, const Vector& params, const DesignMatrices& dm);

// Zero-inflated Poisson probability mass: pi + (1-pi) e^-lambda at h = 0,
// (1-pi) lambda^h e^-lambda / h! at h >= 1.
double zip_pmf(long long h, double lambda, double pi);

// NB2 log pmf with mean mu and size theta.
double nb_logpmf(long long y, double mu, double theta);

}  // namespace zinc

#endif  // ZINC_FAMILIES_HPP
