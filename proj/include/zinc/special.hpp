#ifndef ZINC_SPECIAL_HPP
#define ZINC_SPECIAL_HPP

#include <cmath>

#include "zinc/errors.hpp"

namespace zinc {

// Linear predictors are clamped to this window before exponentiation so a
// wild optimizer step cannot produce inf/NaN cascades.
inline constexpr double kEtaClamp = 500.0;

inline double clamp_eta(double eta, bool* clamped = nullptr) {
  if (eta > kEtaClamp) {
    if (clamped) *clamped = true;
    return kEtaClamp;
  }
  if (eta < -kEtaClamp) {
    if (clamped) *clamped = true;
    return -kEtaClamp;
  }
  return eta;
}

inline double log_sum_exp(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log(1 + e^x) without overflow.
inline double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

inline double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// log Pr(y = 0) of the zero-inflated Poisson mixture: log(pi + (1-pi) e^-lambda),
// evaluated through log-sum-exp so neither branch underflows.
inline double zip_zero_logprob(double lambda, double pi) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("lambda must be finite and >= 0");
  if (!(pi >= 0.0 && pi <= 1.0)) throw DomainError("pi must lie in [0, 1]");
  if (pi >= 1.0) return 0.0;
  if (pi <= 0.0) return -lambda;
  return log_sum_exp(std::log(pi), std::log1p(-pi) - lambda);
}

}  // namespace zinc

#endif  // ZINC_SPECIAL_HPP
