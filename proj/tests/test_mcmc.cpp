#include <doctest.h>

#include <cmath>

#include "zinc/errors.hpp"
#include "zinc/families.hpp"
#include "zinc/fit.hpp"
#include "zinc/mcmc.hpp"
#include "zinc/rng.hpp"
#include "zinc/simulate.hpp"
#include "zinc/special.hpp"

using namespace zinc;

namespace {

Dataset zip_data(std::size_t n, std::uint64_t seed) {
  SimSpec s;
  s.n = n;
  s.seed = seed;
  s.beta_count = {0.6, 0.4};
  s.gamma_zero = Vector{-0.8, 0.3};
  s.covariate_ranges = {{0.0, 2.0}};
  return gen_dataset(s);
}

McmcConfig quick_config(std::uint64_t seed, int iters = 4000, int burn = 1500) {
  McmcConfig cfg;
  cfg.chains = 3;
  cfg.iterations = iters;
  cfg.burn_in = burn;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("configuration invariants are enforced before sampling") {
  const Dataset d = zip_data(50, 1);
  const DesignMatrices dm = build_design(d, ModelSpec{Family::zip, {"x1"}, {"x1"}});

  McmcConfig cfg = quick_config(0);
  cfg.burn_in = cfg.iterations;  // burn_in must stay below iterations
  CHECK_THROWS_AS(sample_zip_posterior(dm, cfg), ConfigError);
  cfg = quick_config(0);
  cfg.chains = 1;
  CHECK_THROWS_AS(sample_zip_posterior(dm, cfg), ConfigError);
  cfg = quick_config(0);
  cfg.proposal_sd = 0.0;
  CHECK_THROWS_AS(sample_zip_posterior(dm, cfg), ConfigError);
}

TEST_CASE("indicator responsibilities match the mixture posterior empirically") {
  // r = pi / (pi + (1-pi) e^-lambda), sampled as Bernoulli(logistic(eta2 + lambda))
  Rng rng(77);
  const double cases[10][2] = {{0.5, -2.0}, {1.0, -1.0}, {2.0, 0.0},  {3.0, 0.5},
                               {0.2, 1.0},  {4.0, -0.5}, {1.5, 1.5},  {0.8, -1.5},
                               {2.5, 2.0},  {5.0, 0.25}};
  for (const auto& c : cases) {
    const double lambda = c[0], eta2 = c[1];
    const double pi = logistic(eta2);
    const double r_analytic = pi / (pi + (1.0 - pi) * std::exp(-lambda));
    CHECK(logistic(eta2 + lambda) == doctest::Approx(r_analytic).epsilon(1e-12));
    double mean = 0.0;
    for (int it = 0; it < 100000; ++it)
      mean += rng.bernoulli(logistic(eta2 + lambda)) ? 1.0 : 0.0;
    mean /= 1e5;
    CHECK(std::abs(mean - r_analytic) < 0.01);
  }
}

TEST_CASE("sampling is bitwise reproducible under a fixed seed") {
  const Dataset d = zip_data(200, 5);
  const DesignMatrices dm = build_design(d, ModelSpec{Family::zip, {"x1"}, {"x1"}});
  const McmcConfig cfg = quick_config(42, 600, 200);

  const PosteriorChains a = sample_zip_posterior(dm, cfg);
  const PosteriorChains b = sample_zip_posterior(dm, cfg);
  REQUIRE(a.draws.size() == b.draws.size());
  for (std::size_t c = 0; c < a.draws.size(); ++c) {
    REQUIRE(a.draws[c].size() == b.draws[c].size());
    for (std::size_t i = 0; i < a.draws[c].size(); ++i) {
      CHECK(a.draws[c][i] == b.draws[c][i]);
      CHECK(a.deviance[c][i] == b.deviance[c][i]);
    }
  }

  McmcConfig other = cfg;
  other.seed = 43;
  const PosteriorChains cdiff = sample_zip_posterior(dm, other);
  CHECK(cdiff.draws[0][0] != a.draws[0][0]);
}

TEST_CASE("retained draw counts follow chains x (iterations - burn_in) / thin") {
  const Dataset d = zip_data(120, 9);
  const DesignMatrices dm = build_design(d, ModelSpec{Family::zip, {"x1"}, {}});
  McmcConfig cfg = quick_config(1, 900, 300);
  cfg.thin = 3;
  const PosteriorChains p = sample_zip_posterior(dm, cfg);
  CHECK(p.total_draws() == 3 * (900 - 300) / 3);
}

TEST_CASE("posterior centers on the MLE and mixes acceptably") {
  const Dataset d = zip_data(1000, 12);
  const ModelSpec spec{Family::zip, {"x1"}, {"x1"}};
  const DesignMatrices dm = build_design(d, spec);
  const FittedModel mle = fit_zip_em(dm);

  const PosteriorChains p = sample_zip_posterior(dm, quick_config(7, 6000, 2000));
  const Vector mean = posterior_mean(p);
  const Vector mle_packed{mle.beta_count[0], mle.beta_count[1], (*mle.gamma_zero)[0],
                          (*mle.gamma_zero)[1]};
  for (std::size_t i = 0; i < mean.size(); ++i)
    CHECK(std::abs(mean[i] - mle_packed[i]) < 0.1);

  CHECK(p.accept_rate_beta > 0.1);
  CHECK(p.accept_rate_beta < 0.6);
  CHECK(p.accept_rate_gamma > 0.1);
  CHECK(p.accept_rate_gamma < 0.6);

  for (const auto& diag : diagnostics(p)) {
    CHECK(diag.r_hat < 1.1);
    CHECK(diag.ess > 50.0);
  }
}

TEST_CASE("posterior spread shrinks like sqrt(n)") {
  auto posterior_sd = [](const PosteriorChains& p, std::size_t coord) {
    double m = 0.0, m2 = 0.0;
    std::size_t total = 0;
    for (const auto& chain : p.draws)
      for (const auto& d : chain) {
        m += d[coord];
        m2 += d[coord] * d[coord];
        ++total;
      }
    m /= static_cast<double>(total);
    return std::sqrt(std::max(m2 / static_cast<double>(total) - m * m, 0.0));
  };

  const Dataset small = zip_data(1000, 3);
  const Dataset big = zip_data(10000, 4);
  const ModelSpec spec{Family::zip, {"x1"}, {"x1"}};
  const PosteriorChains ps =
      sample_zip_posterior(build_design(small, spec), quick_config(21, 5000, 2000));
  const PosteriorChains pb =
      sample_zip_posterior(build_design(big, spec), quick_config(22, 5000, 2000));

  for (std::size_t coord = 0; coord < 4; ++coord) {
    const double ratio = posterior_sd(ps, coord) / posterior_sd(pb, coord);
    CHECK(ratio > std::sqrt(10.0) / 1.5);
    CHECK(ratio < std::sqrt(10.0) * 1.5);
  }
}

TEST_CASE("degenerate single-point chains give DIC = D(theta0) and p_D = 0") {
  const Dataset d = zip_data(80, 8);
  const DesignMatrices dm = build_design(d, ModelSpec{Family::zip, {"x1"}, {"x1"}});

  const Vector theta0{0.5, 0.25, -1.0, 0.125};
  const double dev0 = -2.0 * loglik(Family::zip, theta0, dm);

  PosteriorChains p;
  p.beta_dim = 2;
  p.gamma_dim = 2;
  p.draws.assign(2, std::vector<Vector>(64, theta0));
  p.deviance.assign(2, std::vector<double>(64, dev0));

  const DicResult r = dic(p, dm);
  CHECK(r.p_d == 0.0);
  CHECK(r.dic == dev0);
  CHECK(r.mean_deviance == dev0);
  CHECK_FALSE(r.negative_p_d);
}

TEST_CASE("dic needs enough draws") {
  const Dataset d = zip_data(80, 8);
  const DesignMatrices dm = build_design(d, ModelSpec{Family::zip, {"x1"}, {"x1"}});
  PosteriorChains p;
  p.beta_dim = 2;
  p.gamma_dim = 2;
  p.draws.assign(2, std::vector<Vector>(10, Vector{0.0, 0.0, 0.0, 0.0}));
  p.deviance.assign(2, std::vector<double>(10, 100.0));
  CHECK_THROWS_AS(dic(p, dm), InsufficientDraws);
}

TEST_CASE("split R-hat is near 1 for iid chains and diverges for split ones") {
  Rng rng(2025);
  PosteriorChains p;
  p.beta_dim = 1;
  p.gamma_dim = 0;
  p.param_names = {"count:intercept"};
  p.draws.resize(3);
  for (auto& chain : p.draws) {
    chain.reserve(10000);
    for (int i = 0; i < 10000; ++i) chain.push_back(Vector{rng.normal()});
  }
  auto diags = diagnostics(p);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].r_hat > 0.99);
  CHECK(diags[0].r_hat < 1.01);
  CHECK(diags[0].ess > 5000.0);

  // two constant, unequal chains
  PosteriorChains split;
  split.beta_dim = 1;
  split.gamma_dim = 0;
  split.draws.assign(2, std::vector<Vector>(50, Vector{0.0}));
  for (auto& v : split.draws[1]) v[0] = 1.0;
  auto sd = diagnostics(split);
  CHECK(sd[0].r_hat == kRhatDivergent);
}

TEST_CASE("diagnostics reject starved chains") {
  PosteriorChains p;
  p.beta_dim = 1;
  p.gamma_dim = 0;
  p.draws.assign(2, std::vector<Vector>(1, Vector{0.0}));  // one draw per chain
  CHECK_THROWS_AS(diagnostics(p), InsufficientDraws);

  PosteriorChains single;
  single.beta_dim = 1;
  single.gamma_dim = 0;
  single.draws.assign(1, std::vector<Vector>(100, Vector{0.0}));
  CHECK_THROWS_AS(diagnostics(single), InsufficientDraws);
}

TEST_CASE("zip sampling guards its preconditions") {
  const Dataset d = zip_data(60, 2);
  const DesignMatrices no_z = build_design(d, ModelSpec{Family::poisson, {"x1"}, {}});
  CHECK_THROWS_AS(sample_zip_posterior(no_z, quick_config(0)), ShapeMismatch);

  DesignMatrices all_pos;
  all_pos.X = Matrix(30, 1, 1.0);
  all_pos.Z = Matrix(30, 1, 1.0);
  all_pos.x_names = {"intercept"};
  all_pos.z_names = {"intercept"};
  for (int j = 0; j < 30; ++j) all_pos.y.push_back(1 + j % 3);
  CHECK_THROWS_AS(sample_zip_posterior(all_pos, quick_config(0)), NoZerosForZIP);
}
