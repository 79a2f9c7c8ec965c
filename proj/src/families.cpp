#include "zinc/families.hpp"

#include <cmath>

#include "zinc/errors.hpp"
#include "zinc/special.hpp"

namespace zinc {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;  // log(2*pi)/2

std::size_t x_width(const DesignMatrices& dm) { return dm.X.cols(); }
std::size_t z_width(const DesignMatrices& dm) { return dm.Z ? dm.Z->cols() : 0; }

void check_len(Family family, const Vector& params, const DesignMatrices& dm) {
  if (params.size() != packed_param_count(family, dm))
    throw ShapeMismatch("packed parameter vector has length " +
                        std::to_string(params.size()) + ", expected " +
                        std::to_string(packed_param_count(family, dm)) + " for " +
                        to_string(family));
  if (is_zero_inflated(family) && !dm.Z)
    throw ShapeMismatch("zip/zinb likelihood needs a zero-component design matrix");
}

double row_eta(const Matrix& M, std::size_t j, const double* coef) {
  const double* r = M.row(j);
  double s = 0.0;
  for (std::size_t c = 0; c < M.cols(); ++c) s += r[c] * coef[c];
  return s;
}

void axpy_row(const Matrix& M, std::size_t j, double a, double* out) {
  const double* r = M.row(j);
  for (std::size_t c = 0; c < M.cols(); ++c) out[c] += a * r[c];
}

}  // namespace

std::size_t packed_param_count(Family family, const DesignMatrices& dm) {
  switch (family) {
    case Family::linear: return x_width(dm) + 1;
    case Family::poisson: return x_width(dm);
    case Family::negbin: return x_width(dm) + 1;
    case Family::zip: return x_width(dm) + z_width(dm);
    case Family::zinb: return x_width(dm) + z_width(dm) + 1;
  }
  return 0;
}

double zip_pmf(long long h, double lambda, double pi) {
  if (h < 0) throw DomainError("count must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("lambda must be finite and >= 0");
  if (!(pi >= 0.0 && pi <= 1.0)) throw DomainError("pi must lie in [0, 1]");
  if (h == 0) return std::exp(zip_zero_logprob(lambda, pi));
  if (pi >= 1.0 || lambda <= 0.0) return 0.0;
  const double lp = std::log1p(-pi) + static_cast<double>(h) * std::log(lambda) - lambda -
                    std::lgamma(static_cast<double>(h) + 1.0);
  return std::exp(lp);
}

namespace {

// lgamma(y + theta) - lgamma(theta) as an exact product sum; immune to the
// catastrophic cancellation the lgamma difference hits at large theta.
double log_poch(long long y, double theta) {
  double s = 0.0;
  for (long long i = 0; i < y; ++i) s += std::log(theta + static_cast<double>(i));
  return s;
}

// digamma(y + theta) - digamma(theta), same idea.
double digamma_diff(long long y, double theta) {
  double s = 0.0;
  for (long long i = 0; i < y; ++i) s += 1.0 / (theta + static_cast<double>(i));
  return s;
}

// theta is optimized through its log; bound it so NB2 degenerates gracefully
// toward Poisson (or pure overdispersion) instead of overflowing.
constexpr double kLogThetaClamp = 30.0;

double clamp_log_theta(double xi) {
  return std::min(kLogThetaClamp, std::max(-kLogThetaClamp, xi));
}

}  // namespace

double nb_logpmf(long long y, double mu, double theta) {
  if (y < 0) throw DomainError("count must be >= 0");
  if (!(mu > 0.0) || !(theta > 0.0)) throw DomainError("nb_logpmf needs mu > 0, theta > 0");
  const double yd = static_cast<double>(y);
  // log_poch - y log(theta+mu) pairs each factor with the denominator
  return log_poch(y, theta) - yd * std::log(theta + mu) - std::lgamma(yd + 1.0) -
         theta * std::log1p(mu / theta) + yd * std::log(mu);
}

namespace {

LogLikEval eval_linear(const Vector& params, const DesignMatrices& dm) {
  const std::size_t p = dm.X.cols();
  const double log_sigma = params[p];
  const double sigma = std::exp(clamp_eta(log_sigma));
  const double inv_var = 1.0 / (sigma * sigma);

  LogLikEval out;
  out.grad.assign(params.size(), 0.0);
  double rss = 0.0;
  for (std::size_t j = 0; j < dm.n(); ++j) {
    const double mu = row_eta(dm.X, j, params.data());
    const double r = static_cast<double>(dm.y[j]) - mu;
    rss += r * r;
    axpy_row(dm.X, j, r * inv_var, out.grad.data());
  }
  const double n = static_cast<double>(dm.n());
  out.value = -n * (kHalfLog2Pi + log_sigma) - 0.5 * rss * inv_var;
  out.grad[p] = -n + rss * inv_var;
  return out;
}

LogLikEval eval_poisson(const Vector& params, const DesignMatrices& dm) {
  LogLikEval out;
  out.grad.assign(params.size(), 0.0);
  for (std::size_t j = 0; j < dm.n(); ++j) {
    const double eta = clamp_eta(row_eta(dm.X, j, params.data()), &out.clamped);
    const double lambda = std::exp(eta);
    const double yd = static_cast<double>(dm.y[j]);
    out.value += yd * eta - lambda - std::lgamma(yd + 1.0);
    axpy_row(dm.X, j, yd - lambda, out.grad.data());
  }
  return out;
}

LogLikEval eval_negbin(const Vector& params, const DesignMatrices& dm) {
  const std::size_t p = dm.X.cols();
  const double theta = std::exp(clamp_log_theta(params[p]));

  LogLikEval out;
  out.grad.assign(params.size(), 0.0);
  for (std::size_t j = 0; j < dm.n(); ++j) {
    const double eta = clamp_eta(row_eta(dm.X, j, params.data()), &out.clamped);
    const double lambda = std::exp(eta);
    const double yd = static_cast<double>(dm.y[j]);
    out.value += nb_logpmf(dm.y[j], lambda, theta);
    axpy_row(dm.X, j, theta * (yd - lambda) / (theta + lambda), out.grad.data());
    // d/d(log theta)
    out.grad[p] += theta * (digamma_diff(dm.y[j], theta) - std::log1p(lambda / theta) +
                            (lambda - yd) / (theta + lambda));
  }
  return out;
}

LogLikEval eval_zip(const Vector& params, const DesignMatrices& dm) {
  const std::size_t p = dm.X.cols();
  const Matrix& Z = *dm.Z;

  LogLikEval out;
  out.grad.assign(params.size(), 0.0);
  for (std::size_t j = 0; j < dm.n(); ++j) {
    const double eta1 = clamp_eta(row_eta(dm.X, j, params.data()), &out.clamped);
    const double eta2 = clamp_eta(row_eta(Z, j, params.data() + p), &out.clamped);
    const double lambda = std::exp(eta1);
    const double pi = logistic(eta2);
    const double log_pi = -softplus(-eta2);
    const double log_1mpi = -softplus(eta2);

    if (dm.y[j] == 0) {
      // log(pi + (1-pi) e^-lambda)
      const double log_p0 = log_sum_exp(log_pi, log_1mpi - lambda);
      out.value += log_p0;
      // d/d eta1 = -lambda (1-pi) e^-lambda / p0
      const double du = -lambda * std::exp(log_1mpi - lambda - log_p0);
      // d/d eta2 = pi (1-pi) (1 - e^-lambda) / p0
      const double dv = -std::expm1(-lambda) * std::exp(log_pi + log_1mpi - log_p0);
      axpy_row(dm.X, j, du, out.grad.data());
      axpy_row(Z, j, dv, out.grad.data() + p);
    } else {
      const double yd = static_cast<double>(dm.y[j]);
      out.value += log_1mpi + yd * eta1 - lambda - std::lgamma(yd + 1.0);
      axpy_row(dm.X, j, yd - lambda, out.grad.data());
      axpy_row(Z, j, -pi, out.grad.data() + p);
    }
  }
  return out;
}

LogLikEval eval_zinb(const Vector& params, const DesignMatrices& dm) {
  const std::size_t p = dm.X.cols();
  const std::size_t q = dm.Z->cols();
  const Matrix& Z = *dm.Z;
  const double theta = std::exp(clamp_log_theta(params[p + q]));

  LogLikEval out;
  out.grad.assign(params.size(), 0.0);
  for (std::size_t j = 0; j < dm.n(); ++j) {
    const double eta1 = clamp_eta(row_eta(dm.X, j, params.data()), &out.clamped);
    const double eta2 = clamp_eta(row_eta(Z, j, params.data() + p), &out.clamped);
    const double lambda = std::exp(eta1);
    const double pi = logistic(eta2);
    const double log_pi = -softplus(-eta2);
    const double log_1mpi = -softplus(eta2);
    // log r = log Pr_NB(0) = -theta log(1 + lambda/theta)
    const double log_r = -theta * std::log1p(lambda / theta);
    const double yd = static_cast<double>(dm.y[j]);

    if (dm.y[j] == 0) {
      const double log_p0 = log_sum_exp(log_pi, log_1mpi + log_r);
      out.value += log_p0;
      const double ratio = std::exp(log_1mpi + log_r - log_p0);  // (1-pi) r / p0
      // d log r / d eta1 = -theta lambda / (theta + lambda)
      const double du = -ratio * theta * lambda / (theta + lambda);
      // d log r / d log theta = theta [lambda/(theta+lambda) - log1p(lambda/theta)]
      const double dr_dxi =
          theta * (lambda / (theta + lambda) - std::log1p(lambda / theta));
      const double dv = -std::expm1(log_r) * std::exp(log_pi + log_1mpi - log_p0);
      axpy_row(dm.X, j, du, out.grad.data());
      axpy_row(Z, j, dv, out.grad.data() + p);
      out.grad[p + q] += ratio * dr_dxi;
    } else {
      out.value += log_1mpi + nb_logpmf(dm.y[j], lambda, theta);
      axpy_row(dm.X, j, theta * (yd - lambda) / (theta + lambda), out.grad.data());
      axpy_row(Z, j, -pi, out.grad.data() + p);
      out.grad[p + q] += theta * (digamma_diff(dm.y[j], theta) -
                                  std::log1p(lambda / theta) +
                                  (lambda - yd) / (theta + lambda));
    }
  }
  return out;
}

}  // namespace

LogLikEval loglik_eval(Family family, const Vector& params, const DesignMatrices& dm) {
  check_len(family, params, dm);
  LogLikEval out;
  switch (family) {
    case Family::linear: out = eval_linear(params, dm); break;
    case Family::poisson: out = eval_poisson(params, dm); break;
    case Family::negbin: out = eval_negbin(params, dm); break;
    case Family::zip: out = eval_zip(params, dm); break;
    case Family::zinb: out = eval_zinb(params, dm); break;
  }
  if (!std::isfinite(out.value)) throw NonFiniteLikelihood(to_string(family));
  return out;
}

double loglik(Family family, const Vector& params, const DesignMatrices& dm) {
  return loglik_eval(family, params, dm).value;
}

}  // namespace zinc
