#include "zinc/simulate.hpp"

#include <cmath>
#include <string>

#include "zinc/errors.hpp"
#include "zinc/rng.hpp"
#include "zinc/special.hpp"

namespace zinc {

namespace {

std::size_t covariate_count(const SimSpec& s) {
  std::size_t m = s.beta_count.empty() ? 0 : s.beta_count.size() - 1;
  if (s.gamma_zero && !s.gamma_zero->empty()) m = std::max(m, s.gamma_zero->size() - 1);
  return m;
}

void validate(const SimSpec& s, std::size_t m) {
  if (s.n < 1) throw ConfigError("simulation needs n >= 1");
  if (s.beta_count.empty()) throw ConfigError("beta_count needs at least an intercept");
  if (s.gamma_zero && s.gamma_zero->empty())
    throw ConfigError("gamma_zero, when present, needs at least an intercept");
  if (s.dispersion && !(*s.dispersion > 0)) throw ConfigError("dispersion must be > 0");
  if (!s.covariate_ranges.empty() && s.covariate_ranges.size() != 1 &&
      s.covariate_ranges.size() != m)
    throw ConfigError("covariate_ranges must be empty, a single range, or one per covariate");
  for (const auto& [lo, hi] : s.covariate_ranges)
    if (!(lo <= hi)) throw ConfigError("covariate range must satisfy lo <= hi");
}

}  // namespace

SimDraws gen_draws(const SimSpec& spec) {
  const std::size_t m = covariate_count(spec);
  validate(spec, m);

  std::vector<std::pair<double, double>> ranges(m, {0.0, 100.0});
  if (spec.covariate_ranges.size() == 1)
    ranges.assign(m, spec.covariate_ranges[0]);
  else if (spec.covariate_ranges.size() == m)
    ranges = spec.covariate_ranges;

  SimDraws out;
  out.data.metric_names.reserve(m);
  for (std::size_t c = 0; c < m; ++c) {
    out.data.metric_names.push_back("x" + std::to_string(c + 1));
    out.data.metric_columns.emplace_back();
    out.data.metric_columns.back().reserve(spec.n);
  }
  out.lambda.reserve(spec.n);
  const bool zero_inflated = spec.gamma_zero.has_value();
  if (zero_inflated) {
    out.pi.reserve(spec.n);
    out.structural_zero.reserve(spec.n);
  }

  Rng rng(spec.seed);
  Vector x(m);
  for (std::size_t j = 0; j < spec.n; ++j) {
    for (std::size_t c = 0; c < m; ++c) {
      x[c] = rng.uniform(ranges[c].first, ranges[c].second);
      out.data.metric_columns[c].push_back(x[c]);
    }
    double eta1 = spec.beta_count[0];
    for (std::size_t c = 1; c < spec.beta_count.size(); ++c)
      eta1 += spec.beta_count[c] * x[c - 1];
    const double lambda = std::exp(clamp_eta(eta1));
    out.lambda.push_back(lambda);

    bool structural = false;
    if (zero_inflated) {
      double eta2 = (*spec.gamma_zero)[0];
      for (std::size_t c = 1; c < spec.gamma_zero->size(); ++c)
        eta2 += (*spec.gamma_zero)[c] * x[c - 1];
      const double pi = logistic(eta2);
      out.pi.push_back(pi);
      structural = rng.bernoulli(pi);
      out.structural_zero.push_back(structural ? 1 : 0);
    }

    long long y = 0;
    if (!structural)
      y = spec.dispersion ? rng.neg_binomial(lambda, *spec.dispersion) : rng.poisson(lambda);
    out.data.bugs.push_back(y);
    out.data.module_id.push_back(std::to_string(j + 1));
  }
  return out;
}

Dataset gen_dataset(const SimSpec& spec) { return gen_draws(spec).data; }

GridMle grid_mle_oracle(const std::vector<long long>& y) {
  double n0 = 0.0, npos = 0.0, sum_pos = 0.0, sum_all = 0.0;
  for (long long v : y) {
    if (v < 0) throw DomainError("counts must be >= 0");
    if (v == 0) {
      n0 += 1.0;
    } else {
      npos += 1.0;
      sum_pos += static_cast<double>(v);
    }
    sum_all += static_cast<double>(v);
  }
  if (n0 < 1.0 || npos < 1.0)
    throw DegenerateResponse("grid oracle needs at least one zero and one nonzero count");

  const double ybar = sum_all / static_cast<double>(y.size());
  const double step = 1e-3;
  const long long lambda_steps = std::llround(2.0 * std::max(ybar, 1.0) / step);

  GridMle best;
  double best_ll = -HUGE_VAL;
  for (long long li = 1; li <= lambda_steps; ++li) {
    const double lambda = static_cast<double>(li) * step;
    const double exp_neg_lambda = std::exp(-lambda);
    const double pos_part = sum_pos * std::log(lambda) - npos * lambda;
    for (long long pi_i = 0; pi_i <= 999; ++pi_i) {
      const double pi = static_cast<double>(pi_i) * step;
      const double ll = n0 * std::log(pi + (1.0 - pi) * exp_neg_lambda) +
                        npos * std::log1p(-pi) + pos_part;
      if (ll > best_ll) {
        best_ll = ll;
        best.lambda = lambda;
        best.pi = pi;
      }
    }
  }
  return best;
}

}  // namespace zinc
