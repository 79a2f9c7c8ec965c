#ifndef ZINC_SIMULATE_HPP
#define ZINC_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <utility>

#include "zinc/dataset.hpp"

namespace zinc {

// Generative spec for synthetic count data. Covariates x1..xm (m = max
// coefficient width minus the intercept) are drawn uniformly over
// covariate_ranges (default [0, 100], roughly CK-metric scale); the count
// component uses x1..xp, the zero component x1..xq. With gamma_zero present
// rows are structural zeros with probability logistic(z gamma); otherwise
// counts are Poisson(exp(x beta)), or NB2 when dispersion is set.
struct SimSpec {
  std::size_t n = 0;
  Vector beta_count;                 // intercept first
  std::optional<Vector> gamma_zero;  // intercept first
  std::optional<double> dispersion;  // NB2 size theta for the count draw
  std::vector<std::pair<double, double>> covariate_ranges;  // empty: all [0,100]
  std::uint64_t seed = 0;
};

// Per-row draw order (fixed, so a seed pins the dataset bit-for-bit):
// covariates in index order, then the structural-zero uniform (only when
// gamma_zero is present), then the count draw (only for non-structural rows).
struct SimDraws {
  Dataset data;
  std::vector<int> structural_zero;  // w_j; empty when gamma_zero is absent
  Vector lambda;
  Vector pi;  // empty when gamma_zero is absent
};

SimDraws gen_draws(const SimSpec& spec);
Dataset gen_dataset(const SimSpec& spec);

// Exhaustive intercept-only ZIP MLE: lambda over (0, 2 max(mean(y), 1)] and
// pi over [0, 0.999], both in 1e-3 steps; ties resolve to the smallest lambda
// then the smallest pi. Test oracle for the EM and quasi-Newton fitters.
struct GridMle {
  double lambda = 0.0;
  double pi = 0.0;
};

GridMle grid_mle_oracle(const std::vector<long long>& y);

}  // namespace zinc

#endif  // ZINC_SIMULATE_HPP
