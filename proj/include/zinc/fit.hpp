#ifndef ZINC_FIT_HPP
#define ZINC_FIT_HPP

#include <optional>

#include "zinc/dataset.hpp"
#include "zinc/families.hpp"
#include "zinc/optimize.hpp"

namespace zinc {

// Maximum-likelihood fit of one family. Coefficients are on the raw covariate
// scale; count coefficients use a log link (identity for linear) and
// zero-component coefficients a logit link. `dispersion` is the NB2 size
// theta for negbin/zinb and the residual standard deviation for linear.
struct FittedModel {
  ModelSpec spec;
  Vector beta_count;
  std::optional<Vector> gamma_zero;
  std::optional<double> dispersion;
  double loglik = 0.0;
  int k = 0;
  std::size_t n = 0;
  Vector fitted_lambda;              // per-row count-component mean
  std::optional<Vector> fitted_pi;   // per-row structural-zero probability
  bool converged = false;
  bool clamped = false;              // linear-predictor guard fired during fitting

  double aic() const { return 2.0 * k - 2.0 * loglik; }
  double bic() const;

  // Parameters re-packed in the layout loglik_eval expects.
  Vector packed_params() const;
};

// Generic fitter for all five families. Poisson/negbin/zip/zinb are driven by
// the quasi-Newton minimizer on internally standardized columns (zip/zinb
// start from one EM pass; negbin interleaves a dispersion profile); linear is
// closed-form least squares.
FittedModel fit(const ModelSpec& spec, const DesignMatrices& dm,
                const OptimizerConfig& cfg = {});

// IRLS fast path; same optimum as fit() with family = poisson.
FittedModel fit_poisson_irls(const DesignMatrices& dm);

// Full EM over latent structural-zero indicators. The observed-data
// log-likelihood sequence (appended to *trace when given) is non-decreasing.
FittedModel fit_zip_em(const DesignMatrices& dm, std::vector<double>* trace = nullptr);

// Per-row expectation: (1-pi) lambda for zip/zinb, lambda for poisson/negbin,
// the linear predictor for linear models.
Vector predict_expected(const FittedModel& m, const DesignMatrices& dm);
double predict_total(const FittedModel& m, const DesignMatrices& dm);

// sqrt of the diagonal of the inverse observed information at the estimate.
Vector standard_errors(const FittedModel& m, const DesignMatrices& dm);

}  // namespace zinc

#endif  // ZINC_FIT_HPP
