#ifndef ZINC_SCALING_HPP
#define ZINC_SCALING_HPP

#include "zinc/dataset.hpp"
#include "zinc/linalg.hpp"

namespace zinc {

// Internal column standardization for the optimizer and sampler paths.
// Covariates stay raw at the interface; fitting on centered/scaled columns is
// an exact affine reparameterization, so likelihood values and fitted means
// are unchanged while conditioning improves by orders of magnitude on
// CK-metric scales. The intercept column is never touched.
struct ColumnScaling {
  Vector center;  // per column; 0 for the intercept
  Vector scale;   // per column; 1 for the intercept

  // Map coefficients estimated on the scaled columns back to raw columns.
  Vector unscale(const Vector& coef) const;
  // Map raw-column coefficients into the scaled parameterization.
  Vector rescale(const Vector& coef) const;
};

ColumnScaling standardize_columns(Matrix& M);

// Standardized copy of a design (X and Z when present).
struct ScaledDesign {
  DesignMatrices dm;
  ColumnScaling x_scaling;
  ColumnScaling z_scaling;
};

ScaledDesign scale_design(const DesignMatrices& dm);

// Pivot-checks the Gram matrices of the standardized design; throws
// SingularDesign on collinear covariates (including constant columns, which
// alias the intercept).
void check_design_rank(const DesignMatrices& scaled_dm);

}  // namespace zinc

#endif  // ZINC_SCALING_HPP
