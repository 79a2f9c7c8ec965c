#include "zinc/mcmc.hpp"

#include <cmath>
#include <cstdio>

#include "zinc/errors.hpp"
#include "zinc/families.hpp"
#include "zinc/fit.hpp"
#include "zinc/rng.hpp"
#include "zinc/scaling.hpp"
#include "zinc/special.hpp"

namespace zinc {

void McmcConfig::validate() const {
  if (chains < 2) throw ConfigError("need at least 2 chains");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations)
    throw ConfigError("burn_in must satisfy 0 <= burn_in < iterations");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (!(prior_sd > 0)) throw ConfigError("prior_sd must be > 0");
  if (!(proposal_sd > 0)) throw ConfigError("proposal_sd must be > 0");
}

std::size_t PosteriorChains::total_draws() const {
  std::size_t t = 0;
  for (const auto& c : draws) t += c.size();
  return t;
}

namespace {

// Pairwise summation: lower roundoff on long chains, and exact for
// power-of-two runs of identical values (keeps p_D at exactly 0 for
// degenerate single-point chains).
double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  if (n == 2) return v[0] + v[1];
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double log_prior(const Vector& raw_coef, double prior_sd) {
  // Normal(0, prior_sd^2), constants dropped
  double s = 0.0;
  for (double b : raw_coef) s += b * b;
  return -0.5 * s / (prior_sd * prior_sd);
}

struct BlockState {
  Vector value;       // sampled (standardized) coordinates
  double log_target;  // block log-likelihood + prior at value
};

}  // namespace

PosteriorChains sample_zip_posterior(const DesignMatrices& dm, const McmcConfig& cfg) {
  cfg.validate();
  if (!dm.Z) throw ShapeMismatch("zip sampling needs a zero-component design matrix");
  {
    bool any_zero = false, any_pos = false;
    for (long long y : dm.y) (y == 0 ? any_zero : any_pos) = true;
    if (!any_zero) throw NoZerosForZIP();
    if (!any_pos) throw DegenerateResponse("all counts are zero");
  }

  // Sampling runs in standardized coordinates (an exact reparameterization;
  // the constant Jacobian cancels in every Metropolis ratio) while the prior
  // is evaluated on the raw-scale coefficients it is stated for.
  ScaledDesign sd = scale_design(dm);
  check_design_rank(sd.dm);
  const Matrix& X = sd.dm.X;
  const Matrix& Z = *sd.dm.Z;
  const std::size_t n = dm.n();
  const std::size_t p = X.cols();
  const std::size_t q = Z.cols();

  // One EM fit centers every chain's start.
  const FittedModel em = fit_zip_em(dm);
  const Vector beta_center = sd.x_scaling.rescale(em.beta_count);
  const Vector gamma_center = sd.z_scaling.rescale(*em.gamma_zero);

  std::vector<std::size_t> zero_rows;
  for (std::size_t j = 0; j < n; ++j)
    if (dm.y[j] == 0) zero_rows.push_back(j);

  PosteriorChains out;
  out.config = cfg;
  out.beta_dim = p;
  out.gamma_dim = q;
  for (const auto& nm : dm.x_names) out.param_names.push_back("count:" + nm);
  for (const auto& nm : dm.z_names) out.param_names.push_back("zero:" + nm);
  out.draws.resize(cfg.chains);
  out.deviance.resize(cfg.chains);

  const int kept_per_chain = (cfg.iterations - cfg.burn_in) / cfg.thin;
  long long accept_beta = 0, accept_gamma = 0, post_updates = 0;

  for (int chain = 0; chain < cfg.chains; ++chain) {
    Rng rng(cfg.seed + static_cast<std::uint64_t>(chain));
    out.draws[chain].reserve(kept_per_chain);
    out.deviance[chain].reserve(kept_per_chain);

    Vector beta = beta_center, gamma = gamma_center;
    for (std::size_t c = 0; c < p; ++c) beta[c] += 0.1 * rng.normal();
    for (std::size_t c = 0; c < q; ++c) gamma[c] += 0.1 * rng.normal();

    Vector eta1(n), lambda(n), eta2(n);
    std::vector<int> w(n, 0);
    double scale_beta = cfg.proposal_sd, scale_gamma = cfg.proposal_sd;

    auto refresh_eta1 = [&](const Vector& b) {
      for (std::size_t j = 0; j < n; ++j) {
        double e = 0.0;
        for (std::size_t c = 0; c < p; ++c) e += X(j, c) * b[c];
        eta1[j] = clamp_eta(e);
        lambda[j] = std::exp(eta1[j]);
      }
    };
    auto refresh_eta2 = [&](const Vector& g) {
      for (std::size_t j = 0; j < n; ++j) {
        double e = 0.0;
        for (std::size_t c = 0; c < q; ++c) e += Z(j, c) * g[c];
        eta2[j] = clamp_eta(e);
      }
    };
    // Poisson part over non-structural rows (factorial terms constant).
    auto beta_target = [&](const Vector& b) {
      double t = log_prior(sd.x_scaling.unscale(b), cfg.prior_sd);
      for (std::size_t j = 0; j < n; ++j) {
        if (w[j]) continue;
        double e = 0.0;
        for (std::size_t c = 0; c < p; ++c) e += X(j, c) * b[c];
        e = clamp_eta(e);
        t += static_cast<double>(dm.y[j]) * e - std::exp(e);
      }
      return t;
    };
    // Bernoulli likelihood of the indicators.
    auto gamma_target = [&](const Vector& g) {
      double t = log_prior(sd.z_scaling.unscale(g), cfg.prior_sd);
      for (std::size_t j = 0; j < n; ++j) {
        double e = 0.0;
        for (std::size_t c = 0; c < q; ++c) e += Z(j, c) * g[c];
        e = clamp_eta(e);
        t += (w[j] ? e : 0.0) - softplus(e);
      }
      return t;
    };

    refresh_eta1(beta);
    refresh_eta2(gamma);

    Vector prop(std::max(p, q));
    for (int it = 1; it <= cfg.iterations; ++it) {
      // (a) latent indicators on zero rows
      for (std::size_t idx : zero_rows) {
        const double r = logistic(eta2[idx] + lambda[idx]);
        w[idx] = rng.bernoulli(r) ? 1 : 0;
      }

      // (b) count-coefficient block
      double cur = beta_target(beta);
      for (std::size_t c = 0; c < p; ++c) prop[c] = beta[c] + scale_beta * rng.normal();
      Vector cand(prop.begin(), prop.begin() + p);
      double cand_t = beta_target(cand);
      if (!std::isfinite(cur)) throw ChainDiverged("count block");
      double alpha = std::min(1.0, std::exp(cand_t - cur));
      if (!std::isfinite(cand_t)) alpha = 0.0;
      if (rng.uniform() <= alpha) {
        beta = std::move(cand);
        refresh_eta1(beta);
        if (it > cfg.burn_in) ++accept_beta;
      }
      if (it <= cfg.burn_in)
        scale_beta *= std::exp(std::pow(it, -0.6) * (alpha - 0.35));

      // (c) zero-coefficient block
      cur = gamma_target(gamma);
      for (std::size_t c = 0; c < q; ++c) prop[c] = gamma[c] + scale_gamma * rng.normal();
      Vector candg(prop.begin(), prop.begin() + q);
      cand_t = gamma_target(candg);
      if (!std::isfinite(cur)) throw ChainDiverged("zero block");
      alpha = std::min(1.0, std::exp(cand_t - cur));
      if (!std::isfinite(cand_t)) alpha = 0.0;
      if (rng.uniform() <= alpha) {
        gamma = std::move(candg);
        refresh_eta2(gamma);
        if (it > cfg.burn_in) ++accept_gamma;
      }
      if (it <= cfg.burn_in)
        scale_gamma *= std::exp(std::pow(it, -0.6) * (alpha - 0.35));
      if (it > cfg.burn_in) ++post_updates;

      if (it > cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0) {
        Vector raw = sd.x_scaling.unscale(beta);
        const Vector raw_gamma = sd.z_scaling.unscale(gamma);
        raw.insert(raw.end(), raw_gamma.begin(), raw_gamma.end());
        Vector packed = beta;
        packed.insert(packed.end(), gamma.begin(), gamma.end());
        const double ll = loglik(Family::zip, packed, sd.dm);
        if (!std::isfinite(ll)) throw ChainDiverged("deviance");
        for (double v : raw)
          if (!std::isfinite(v)) throw ChainDiverged("draw");
        out.draws[chain].push_back(std::move(raw));
        out.deviance[chain].push_back(-2.0 * ll);
      }
    }
  }

  out.accept_rate_beta = static_cast<double>(accept_beta) / static_cast<double>(post_updates);
  out.accept_rate_gamma = static_cast<double>(accept_gamma) / static_cast<double>(post_updates);
  for (const auto& [name, rate] : {std::pair{"count", out.accept_rate_beta},
                                   std::pair{"zero", out.accept_rate_gamma}}) {
    if (rate < 0.1 || rate > 0.6)
      std::fprintf(stderr, "zinc mcmc: %s-block acceptance %.3f outside [0.1, 0.6]\n", name,
                   rate);
  }
  return out;
}

Vector posterior_mean(const PosteriorChains& p) {
  const std::size_t total = p.total_draws();
  if (total == 0) throw InsufficientDraws("no retained draws");
  Vector mean(p.beta_dim + p.gamma_dim, 0.0);
  Vector scratch(total);
  for (std::size_t c = 0; c < mean.size(); ++c) {
    std::size_t i = 0;
    for (const auto& chain : p.draws)
      for (const auto& d : chain) scratch[i++] = d[c];
    mean[c] = pairwise_sum(scratch.data(), total) / static_cast<double>(total);
  }
  return mean;
}

DicResult dic(const PosteriorChains& p, const DesignMatrices& dm) {
  const std::size_t total = p.total_draws();
  if (total < 100)
    throw InsufficientDraws("DIC needs at least 100 retained draws, have " +
                            std::to_string(total));
  Vector all;
  all.reserve(total);
  for (const auto& chain : p.deviance) all.insert(all.end(), chain.begin(), chain.end());
  const double dbar = pairwise_sum(all.data(), total) / static_cast<double>(total);

  const Vector at_mean = posterior_mean(p);
  const double d_hat = -2.0 * loglik(Family::zip, at_mean, dm);

  DicResult r;
  r.mean_deviance = dbar;
  r.p_d = dbar - d_hat;
  r.dic = dbar + r.p_d;
  r.negative_p_d = r.p_d < 0.0;
  return r;
}

namespace {

// Split each chain in half; returns sequences of equal length >= 2.
std::vector<Vector> split_sequences(const PosteriorChains& p, std::size_t coord) {
  std::vector<Vector> seqs;
  for (const auto& chain : p.draws) {
    const std::size_t m = chain.size();
    const std::size_t half = m / 2;
    Vector a(half), b(half);
    for (std::size_t i = 0; i < half; ++i) {
      a[i] = chain[i][coord];
      b[i] = chain[m - half + i][coord];
    }
    seqs.push_back(std::move(a));
    seqs.push_back(std::move(b));
  }
  return seqs;
}

double seq_mean(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double seq_var(const Vector& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

std::vector<ParamDiagnostic> diagnostics(const PosteriorChains& p) {
  if (p.draws.size() < 2) throw InsufficientDraws("diagnostics need >= 2 chains");
  for (const auto& chain : p.draws)
    if (chain.size() < 4)
      throw InsufficientDraws("diagnostics need >= 4 retained draws per chain");

  const std::size_t dim = p.beta_dim + p.gamma_dim;
  std::vector<ParamDiagnostic> out(dim);
  for (std::size_t coord = 0; coord < dim; ++coord) {
    out[coord].name = coord < p.param_names.size() ? p.param_names[coord] : "";
    const std::vector<Vector> seqs = split_sequences(p, coord);
    const std::size_t m = seqs.size();
    const std::size_t len = seqs[0].size();

    Vector means(m), vars(m);
    for (std::size_t s = 0; s < m; ++s) {
      means[s] = seq_mean(seqs[s]);
      vars[s] = seq_var(seqs[s], means[s]);
    }
    const double grand = seq_mean(means);
    double b = 0.0;  // between-sequence variance x len
    for (double mu : means) b += (mu - grand) * (mu - grand);
    b *= static_cast<double>(len) / static_cast<double>(m - 1);
    const double w = seq_mean(vars);

    const double nd = static_cast<double>(len);
    const double var_plus = (nd - 1.0) / nd * w + b / nd;

    if (w <= 0.0) {
      const bool spread = b > 0.0;
      out[coord].r_hat = spread ? kRhatDivergent : 1.0;
      out[coord].ess = spread ? 0.0 : static_cast<double>(m * len);
      continue;
    }
    out[coord].r_hat = std::sqrt(var_plus / w);

    // Autocorrelation by lag, averaged over sequences, with Geyer's initial
    // positive-pair truncation.
    double rho_sum = 0.0;
    const std::size_t max_lag = len - 1;
    double prev_pair = HUGE_VAL;
    for (std::size_t t = 1; t + 1 <= max_lag; t += 2) {
      double rho_t = 0.0, rho_t1 = 0.0;
      for (std::size_t lag_off = 0; lag_off < 2; ++lag_off) {
        const std::size_t lag = t + lag_off;
        double acov = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
          double a = 0.0;
          for (std::size_t i = 0; i + lag < len; ++i)
            a += (seqs[s][i] - means[s]) * (seqs[s][i + lag] - means[s]);
          acov += a / static_cast<double>(len);
        }
        acov /= static_cast<double>(m);
        const double rho = 1.0 - (w - acov) / var_plus;
        (lag_off == 0 ? rho_t : rho_t1) = rho;
      }
      double pair = rho_t + rho_t1;
      if (pair < 0.0) break;
      pair = std::min(pair, prev_pair);  // enforce monotone decrease
      prev_pair = pair;
      rho_sum += pair;
    }
    const double tau = 1.0 + 2.0 * rho_sum;
    out[coord].ess = static_cast<double>(m * len) / std::max(tau, 1e-12);
  }
  return out;
}

}  // namespace zinc
