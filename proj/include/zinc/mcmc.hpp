#ifndef ZINC_MCMC_HPP
#define ZINC_MCMC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "zinc/dataset.hpp"

namespace zinc {

struct McmcConfig {
  int chains = 3;
  int iterations = 20000;  // per chain
  int burn_in = 5000;
  int thin = 1;
  std::uint64_t seed = 0;
  double prior_sd = 10.0;     // Normal(0, prior_sd^2) on every coefficient
  double proposal_sd = 0.1;   // initial random-walk scale, adapted in burn-in

  void validate() const;
};

// Retained ZIP posterior draws. Each draw is packed [beta, gamma] on the raw
// covariate scale; deviance is -2 x observed-data log-likelihood at the draw.
struct PosteriorChains {
  std::vector<std::vector<Vector>> draws;      // [chain][draw]
  std::vector<std::vector<double>> deviance;   // [chain][draw]
  McmcConfig config;
  std::size_t beta_dim = 0;
  std::size_t gamma_dim = 0;
  std::vector<std::string> param_names;
  double accept_rate_beta = 0.0;   // post burn-in
  double accept_rate_gamma = 0.0;  // post burn-in

  std::size_t total_draws() const;
};

// Metropolis-within-Gibbs for the ZIP model: (a) Gibbs draw of the latent
// structural-zero indicators on zero-count rows, (b) random-walk block update
// of the count coefficients against the Poisson likelihood of the
// non-structural rows, (c) random-walk block update of the zero coefficients
// against the Bernoulli likelihood of the indicators. Proposal scales follow
// a Robbins-Monro recursion toward 0.35 acceptance during burn-in and are
// frozen afterwards. Chain c uses the documented generator seeded with
// seed + c, so runs are bit-for-bit reproducible.
PosteriorChains sample_zip_posterior(const DesignMatrices& dm, const McmcConfig& cfg);

struct DicResult {
  double dic = 0.0;
  double p_d = 0.0;
  double mean_deviance = 0.0;
  bool negative_p_d = false;
};

// Spiegelhalter DIC: D-bar + p_D with p_D = D-bar - D(posterior mean).
DicResult dic(const PosteriorChains& p, const DesignMatrices& dm);

// Sentinel reported when the between-chain spread dwarfs a zero within-chain
// variance (constant, unequal chains).
inline constexpr double kRhatDivergent = 1e12;

struct ParamDiagnostic {
  std::string name;
  double r_hat = 0.0;
  double ess = 0.0;
};

// Split R-hat and effective sample size per coordinate.
std::vector<ParamDiagnostic> diagnostics(const PosteriorChains& p);

// Posterior mean of the packed (beta, gamma) vector across all chains.
Vector posterior_mean(const PosteriorChains& p);

}  // namespace zinc

#endif  // ZINC_MCMC_HPP
