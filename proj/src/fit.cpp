#include "zinc/fit.hpp"

#include <algorithm>
#include <cmath>

#include "zinc/errors.hpp"
#include "zinc/scaling.hpp"
#include "zinc/special.hpp"

namespace zinc {

double FittedModel::bic() const {
  return static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * loglik;
}

Vector FittedModel::packed_params() const {
  Vector p = beta_count;
  if (gamma_zero) p.insert(p.end(), gamma_zero->begin(), gamma_zero->end());
  if (spec.family == Family::negbin || spec.family == Family::zinb)
    p.push_back(std::log(*dispersion));
  else if (spec.family == Family::linear)
    p.push_back(std::log(*dispersion));
  return p;
}

namespace {

ModelSpec spec_from_design(Family family, const DesignMatrices& dm) {
  ModelSpec spec;
  spec.family = family;
  spec.count_covariates.assign(dm.x_names.begin() + (dm.x_names.empty() ? 0 : 1),
                               dm.x_names.end());
  if (is_zero_inflated(family) && !dm.z_names.empty())
    spec.zero_covariates.assign(dm.z_names.begin() + 1, dm.z_names.end());
  return spec;
}

void check_response(Family family, const DesignMatrices& dm) {
  if (dm.n() == 0) throw ShapeMismatch("empty design");
  bool any_nonzero = false, any_zero = false;
  for (long long y : dm.y) {
    if (y > 0) any_nonzero = true;
    if (y == 0) any_zero = true;
  }
  if (is_count_family(family) && !any_nonzero)
    throw DegenerateResponse("all counts are zero; rate MLE sits on the boundary");
  if (is_zero_inflated(family) && !any_zero) throw NoZerosForZIP();
  if (family == Family::linear && !any_nonzero && !any_zero)
    throw DegenerateResponse("empty response");
}

void check_dof(Family family, const DesignMatrices& dm) {
  const std::size_t k = packed_param_count(family, dm);
  if (dm.n() <= k)
    throw ValidationError("need more observations than parameters (n=" +
                          std::to_string(dm.n()) + ", k=" + std::to_string(k) + ")");
  if (is_zero_inflated(family) && !dm.Z)
    throw ShapeMismatch("zip/zinb require a zero-component design matrix");
}

Vector fitted_mean_poisson(const Matrix& X, const Vector& beta, bool* clamped) {
  Vector lambda(X.rows());
  for (std::size_t j = 0; j < X.rows(); ++j) {
    double eta = 0.0;
    for (std::size_t c = 0; c < X.cols(); ++c) eta += X(j, c) * beta[c];
    lambda[j] = std::exp(clamp_eta(eta, clamped));
  }
  return lambda;
}

double poisson_deviance(const std::vector<long long>& y, const Vector& mu) {
  double dev = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double yd = static_cast<double>(y[j]);
    if (yd > 0) dev += yd * std::log(yd / mu[j]) - (yd - mu[j]);
    else dev += mu[j];
  }
  return 2.0 * dev;
}

// Weighted Poisson IRLS on (already scaled) X; returns coefficients in that
// parameterization. Weights may be empty (all ones). Maximizes
// sum_j w_j (y_j eta_j - lambda_j).
Vector poisson_irls_core(const Matrix& X, const std::vector<long long>& y,
                         const Vector& prior_w, Vector beta, bool* converged,
                         bool* clamped) {
  const std::size_t n = X.rows();
  auto objective = [&](const Vector& b) {
    Vector mu = fitted_mean_poisson(X, b, clamped);
    double q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = prior_w.empty() ? 1.0 : prior_w[j];
      q += w * (static_cast<double>(y[j]) * std::log(mu[j]) - mu[j]);
    }
    return q;
  };

  double q = objective(beta);
  if (converged) *converged = false;
  for (int it = 0; it < 200; ++it) {
    Vector mu = fitted_mean_poisson(X, beta, clamped);
    Vector w(n), z(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double pw = prior_w.empty() ? 1.0 : prior_w[j];
      w[j] = pw * mu[j];
      z[j] = std::log(mu[j]) + (static_cast<double>(y[j]) - mu[j]) / mu[j];
    }
    Vector next = solve_linear(xtwx(X, w), xtwz(X, w, z));
    // step-halve if the update overshoots
    double step = 1.0;
    Vector cand(beta.size());
    double q_next = -HUGE_VAL;
    for (int h = 0; h < 40; ++h) {
      for (std::size_t c = 0; c < beta.size(); ++c)
        cand[c] = beta[c] + step * (next[c] - beta[c]);
      q_next = objective(cand);
      if (std::isfinite(q_next) && q_next >= q - 1e-14 * std::abs(q)) break;
      step *= 0.5;
    }
    if (!std::isfinite(q_next)) throw NonFiniteLikelihood("poisson IRLS");
    beta = cand;
    const double delta = std::abs(q_next - q);
    q = q_next;
    if (delta < 1e-13 * (1.0 + std::abs(q))) {
      if (converged) *converged = true;
      break;
    }
  }
  return beta;
}

// Weighted logistic IRLS with fractional responses r in [0,1]; maximizes
// sum_j r_j eta_j - softplus(eta_j).
Vector logistic_irls_core(const Matrix& Z, const Vector& r, Vector gamma) {
  const std::size_t n = Z.rows();
  auto objective = [&](const Vector& g) {
    double q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double eta = 0.0;
      for (std::size_t c = 0; c < Z.cols(); ++c) eta += Z(j, c) * g[c];
      eta = clamp_eta(eta);
      q += r[j] * eta - softplus(eta);
    }
    return q;
  };

  double q = objective(gamma);
  for (int it = 0; it < 200; ++it) {
    Vector w(n), wz(n);
    for (std::size_t j = 0; j < n; ++j) {
      double eta = 0.0;
      for (std::size_t c = 0; c < Z.cols(); ++c) eta += Z(j, c) * gamma[c];
      eta = clamp_eta(eta);
      const double pi = logistic(eta);
      w[j] = std::max(pi * (1.0 - pi), 1e-10);
      wz[j] = eta + (r[j] - pi) / w[j];
    }
    Vector next;
    try {
      next = solve_linear(xtwx(Z, w), xtwz(Z, w, wz));
    } catch (const SingularMatrix&) {
      break;  // keep the current point; the M-step stays monotone
    }
    double step = 1.0;
    Vector cand(gamma.size());
    double q_next = -HUGE_VAL;
    for (int h = 0; h < 40; ++h) {
      for (std::size_t c = 0; c < gamma.size(); ++c)
        cand[c] = gamma[c] + step * (next[c] - gamma[c]);
      q_next = objective(cand);
      if (std::isfinite(q_next) && q_next >= q - 1e-14 * std::abs(q)) break;
      step *= 0.5;
    }
    if (!std::isfinite(q_next)) break;
    const double delta = std::abs(q_next - q);
    gamma = cand;
    q = q_next;
    if (delta < 1e-13 * (1.0 + std::abs(q))) break;
  }
  return gamma;
}

struct ZipState {
  Vector beta;   // scaled parameterization
  Vector gamma;  // scaled parameterization
};

// Starting point: Poisson coefficients on all rows; zero-component intercept
// from the excess-zero fraction, other coordinates 0.
ZipState zip_start(const DesignMatrices& sdm, bool* clamped) {
  ZipState st;
  st.beta = poisson_irls_core(sdm.X, sdm.y, {}, Vector(sdm.X.cols(), 0.0), nullptr, clamped);
  Vector lambda = fitted_mean_poisson(sdm.X, st.beta, clamped);
  double n0 = 0.0, expected_zero = 0.0;
  for (std::size_t j = 0; j < sdm.n(); ++j) {
    if (sdm.y[j] == 0) n0 += 1.0;
    expected_zero += std::exp(-lambda[j]);
  }
  const double excess = (n0 - expected_zero) / static_cast<double>(sdm.n());
  st.gamma.assign(sdm.Z->cols(), 0.0);
  st.gamma[0] = logit(std::max(0.05, std::min(0.95, excess)));
  return st;
}

// One E-step: responsibilities r_j = Pr(structural zero | y_j = 0).
Vector zip_responsibilities(const DesignMatrices& sdm, const ZipState& st, bool* clamped) {
  const Matrix& Z = *sdm.Z;
  Vector r(sdm.n(), 0.0);
  for (std::size_t j = 0; j < sdm.n(); ++j) {
    if (sdm.y[j] != 0) continue;
    double eta1 = 0.0, eta2 = 0.0;
    for (std::size_t c = 0; c < sdm.X.cols(); ++c) eta1 += sdm.X(j, c) * st.beta[c];
    for (std::size_t c = 0; c < Z.cols(); ++c) eta2 += Z(j, c) * st.gamma[c];
    const double lambda = std::exp(clamp_eta(eta1, clamped));
    r[j] = logistic(clamp_eta(eta2, clamped) + lambda);
  }
  return r;
}

void zip_m_step(const DesignMatrices& sdm, const Vector& r, ZipState& st, bool* clamped) {
  Vector w(sdm.n());
  for (std::size_t j = 0; j < sdm.n(); ++j) w[j] = 1.0 - r[j];
  st.beta = poisson_irls_core(sdm.X, sdm.y, w, st.beta, nullptr, clamped);
  st.gamma = logistic_irls_core(*sdm.Z, r, st.gamma);
}

Vector pack_zip(const ZipState& st) {
  Vector p = st.beta;
  p.insert(p.end(), st.gamma.begin(), st.gamma.end());
  return p;
}

double moment_theta(const DesignMatrices& dm) {
  double mean = 0.0;
  for (long long y : dm.y) mean += static_cast<double>(y);
  mean /= static_cast<double>(dm.n());
  double var = 0.0;
  for (long long y : dm.y) {
    const double d = static_cast<double>(y) - mean;
    var += d * d;
  }
  var /= static_cast<double>(dm.n());
  if (var <= mean) return 100.0;  // at/under Poisson dispersion
  return std::clamp(mean * mean / (var - mean), 0.05, 100.0);
}

// Shared finish: unscale coefficients, populate fitted vectors from the raw
// design, recompute the likelihood at the reported (raw) parameters.
FittedModel finalize(Family family, const DesignMatrices& dm, const ScaledDesign& sd,
                     const Vector& scaled_params, bool converged, bool clamped) {
  FittedModel m;
  m.spec = spec_from_design(family, dm);
  m.n = dm.n();
  m.converged = converged;
  m.clamped = clamped;

  const std::size_t p = dm.X.cols();
  Vector beta_s(scaled_params.begin(), scaled_params.begin() + p);
  m.beta_count = sd.x_scaling.unscale(beta_s);
  std::size_t off = p;
  if (is_zero_inflated(family)) {
    const std::size_t q = dm.Z->cols();
    Vector gamma_s(scaled_params.begin() + off, scaled_params.begin() + off + q);
    m.gamma_zero = sd.z_scaling.unscale(gamma_s);
    off += q;
  }
  if (family == Family::negbin || family == Family::zinb)
    m.dispersion = std::exp(scaled_params[off]);

  LogLikEval ev = loglik_eval(family, m.packed_params(), dm);
  m.loglik = ev.value;
  m.clamped = m.clamped || ev.clamped;
  m.k = static_cast<int>(packed_param_count(family, dm));

  m.fitted_lambda = fitted_mean_poisson(dm.X, m.beta_count, nullptr);
  if (is_zero_inflated(family)) {
    Vector pi(dm.n());
    for (std::size_t j = 0; j < dm.n(); ++j) {
      double eta = 0.0;
      for (std::size_t c = 0; c < dm.Z->cols(); ++c) eta += (*dm.Z)(j, c) * (*m.gamma_zero)[c];
      pi[j] = logistic(clamp_eta(eta));
    }
    m.fitted_pi = std::move(pi);
  }
  return m;
}

FittedModel fit_linear(const DesignMatrices& dm) {
  const std::size_t n = dm.n();
  Vector y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = static_cast<double>(dm.y[j]);

  ScaledDesign sd = scale_design(dm);
  check_design_rank(sd.dm);
  Vector beta_s;
  try {
    beta_s = solve_linear(xtwx(sd.dm.X), xtwz(sd.dm.X, {}, y));
  } catch (const SingularMatrix&) {
    throw SingularDesign("count component");
  }
  Vector beta = sd.x_scaling.unscale(beta_s);

  Vector mu = matvec(dm.X, beta);
  double rss = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = y[j] - mu[j];
    rss += r * r;
  }
  const double sigma2 = rss / static_cast<double>(n);
  if (!(sigma2 > 1e-12)) throw DegenerateResponse("response is (numerically) constant");

  FittedModel m;
  m.spec = spec_from_design(Family::linear, dm);
  m.beta_count = std::move(beta);
  m.dispersion = std::sqrt(sigma2);
  m.n = n;
  m.k = static_cast<int>(dm.X.cols()) + 1;  // coefficients + sigma
  m.loglik = loglik(Family::linear, m.packed_params(), dm);
  m.fitted_lambda = std::move(mu);
  m.converged = true;
  return m;
}

// A few Newton steps on the analytic score after the quasi-Newton run. Armijo
// stalls once objective improvements fall under the value's ulp; the gradient
// passes through zero there and still resolves, so Newton drives it to the
// 1e-8 tolerance the convergence contract asks for.
Vector polish_on_score(const Objective& neg, Vector x, double grad_tol) {
  Vector g = neg(x).gradient;
  double gnorm = max_abs(g);
  for (int it = 0; it < 25 && gnorm > grad_tol; ++it) {
    Matrix H;
    try {
      H = finite_diff_hessian(neg, x);
    } catch (const NonFiniteObjective&) {
      break;
    }
    Vector step;
    try {
      step = solve_linear(H, g);
    } catch (const SingularMatrix&) {
      break;
    }
    bool improved = false;
    double scale = 1.0;
    for (int h = 0; h < 8; ++h) {
      Vector cand(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] - scale * step[i];
      Vector gc;
      try {
        gc = neg(cand).gradient;
      } catch (const NonFiniteLikelihood&) {
        scale *= 0.5;
        continue;
      }
      const double gn = max_abs(gc);
      if (std::isfinite(gn) && gn < gnorm) {
        x = std::move(cand);
        g = std::move(gc);
        gnorm = gn;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  return x;
}

FittedModel run_quasi_newton(Family family, const DesignMatrices& dm, const ScaledDesign& sd,
                             Vector start, const OptimizerConfig& cfg, bool clamped_so_far) {
  bool clamped = clamped_so_far;
  Objective neg = [&](const Vector& p) {
    LogLikEval ev = loglik_eval(family, p, sd.dm);
    clamped = clamped || ev.clamped;
    ObjectiveEval o;
    o.value = -ev.value;
    o.gradient.resize(ev.grad.size());
    for (std::size_t i = 0; i < ev.grad.size(); ++i) o.gradient[i] = -ev.grad[i];
    return o;
  };
  MinimizeResult r = minimize(neg, std::move(start), cfg);
  Vector at = r.x;
  bool converged = r.converged;
  if (!converged) {
    at = polish_on_score(neg, std::move(at), cfg.gradient_tolerance);
    converged = max_abs(neg(at).gradient) <= cfg.gradient_tolerance;
  }
  return finalize(family, dm, sd, at, converged, clamped);
}

}  // namespace

FittedModel fit_poisson_irls(const DesignMatrices& dm) {
  check_response(Family::poisson, dm);
  check_dof(Family::poisson, dm);
  ScaledDesign sd = scale_design(dm);
  check_design_rank(sd.dm);

  bool clamped = false;
  Vector beta = Vector(sd.dm.X.cols(), 0.0);
  {
    // classic IRLS on the deviance scale
    Vector mu(dm.n());
    for (std::size_t j = 0; j < dm.n(); ++j) mu[j] = static_cast<double>(dm.y[j]) + 0.1;
    double eta0 = 0.0;
    for (std::size_t j = 0; j < dm.n(); ++j) eta0 += std::log(mu[j]);
    beta[0] = eta0 / static_cast<double>(dm.n());
  }
  double dev = HUGE_VAL;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Vector mu = fitted_mean_poisson(sd.dm.X, beta, &clamped);
    Vector w(dm.n()), z(dm.n());
    for (std::size_t j = 0; j < dm.n(); ++j) {
      w[j] = mu[j];
      z[j] = std::log(mu[j]) + (static_cast<double>(dm.y[j]) - mu[j]) / mu[j];
    }
    try {
      beta = solve_linear(xtwx(sd.dm.X, w), xtwz(sd.dm.X, w, z));
    } catch (const SingularMatrix&) {
      throw SingularDesign("count component");
    }
    const double dev_next = poisson_deviance(dm.y, fitted_mean_poisson(sd.dm.X, beta, &clamped));
    if (!std::isfinite(dev_next)) throw NonFiniteLikelihood("poisson IRLS deviance");
    if (std::abs(dev - dev_next) < 1e-10) {
      dev = dev_next;
      converged = true;
      break;
    }
    dev = dev_next;
  }

  Vector packed = beta;
  return finalize(Family::poisson, dm, sd, packed, converged, clamped);
}

FittedModel fit_zip_em(const DesignMatrices& dm, std::vector<double>* trace) {
  check_response(Family::zip, dm);
  check_dof(Family::zip, dm);
  ScaledDesign sd = scale_design(dm);
  check_design_rank(sd.dm);

  bool clamped = false;
  ZipState st = zip_start(sd.dm, &clamped);

  double ll = loglik(Family::zip, pack_zip(st), sd.dm);
  if (trace) trace->push_back(ll);
  bool converged = false;
  for (int it = 0; it < 2000; ++it) {
    const Vector r = zip_responsibilities(sd.dm, st, &clamped);
    zip_m_step(sd.dm, r, st, &clamped);
    const double ll_next = loglik(Family::zip, pack_zip(st), sd.dm);
    if (trace) trace->push_back(ll_next);
    const double delta = std::abs(ll_next - ll);
    ll = ll_next;
    if (delta < 1e-12 * (1.0 + std::abs(ll))) {
      converged = true;
      break;
    }
  }
  return finalize(Family::zip, dm, sd, pack_zip(st), converged, clamped);
}

FittedModel fit(const ModelSpec& spec, const DesignMatrices& dm, const OptimizerConfig& cfg) {
  const Family family = spec.family;
  if (family == Family::linear) {
    check_response(family, dm);
    check_dof(family, dm);
    return fit_linear(dm);
  }

  check_response(family, dm);
  check_dof(family, dm);
  ScaledDesign sd = scale_design(dm);
  check_design_rank(sd.dm);
  bool clamped = false;

  switch (family) {
    case Family::poisson: {
      Vector start(sd.dm.X.cols(), 0.0);
      double ybar = 0.0;
      for (long long y : dm.y) ybar += static_cast<double>(y);
      start[0] = std::log(ybar / static_cast<double>(dm.n()) + 0.1);
      return run_quasi_newton(family, dm, sd, std::move(start), cfg, clamped);
    }
    case Family::negbin: {
      // beta from a Poisson pass, then alternate dispersion and coefficient
      // steps; a joint quasi-Newton run certifies the optimum.
      Vector beta =
          poisson_irls_core(sd.dm.X, sd.dm.y, {}, Vector(sd.dm.X.cols(), 0.0), nullptr, &clamped);
      double xi = std::log(moment_theta(dm));
      Vector packed = beta;
      packed.push_back(xi);
      double ll = loglik_eval(Family::negbin, packed, sd.dm).value;
      for (int it = 0; it < 100; ++it) {
        // dispersion step: 1-D quasi-Newton in log theta
        OptimizerConfig theta_cfg = cfg;
        theta_cfg.max_iterations = 60;
        Objective neg_theta = [&](const Vector& t) {
          Vector q = beta;
          q.push_back(t[0]);
          LogLikEval ev = loglik_eval(Family::negbin, q, sd.dm);
          return ObjectiveEval{-ev.value, {-ev.grad.back()}};
        };
        xi = minimize(neg_theta, {xi}, theta_cfg).x[0];
        // coefficient step: NB IRLS at fixed theta
        const double theta = std::exp(xi);
        for (int inner = 0; inner < 50; ++inner) {
          Vector mu = fitted_mean_poisson(sd.dm.X, beta, &clamped);
          Vector w(dm.n()), z(dm.n());
          for (std::size_t j = 0; j < dm.n(); ++j) {
            w[j] = mu[j] * theta / (mu[j] + theta);
            z[j] = std::log(mu[j]) + (static_cast<double>(dm.y[j]) - mu[j]) / mu[j];
          }
          Vector next;
          try {
            next = solve_linear(xtwx(sd.dm.X, w), xtwz(sd.dm.X, w, z));
          } catch (const SingularMatrix&) {
            throw SingularDesign("count component");
          }
          double shift = 0.0;
          for (std::size_t c = 0; c < beta.size(); ++c)
            shift = std::max(shift, std::abs(next[c] - beta[c]));
          beta = next;
          if (shift < 1e-12) break;
        }
        packed = beta;
        packed.push_back(xi);
        const double ll_next = loglik_eval(Family::negbin, packed, sd.dm).value;
        const double delta = std::abs(ll_next - ll);
        ll = ll_next;
        if (delta < 1e-8) break;
      }
      return run_quasi_newton(family, dm, sd, std::move(packed), cfg, clamped);
    }
    case Family::zip: {
      ZipState st = zip_start(sd.dm, &clamped);
      const Vector r = zip_responsibilities(sd.dm, st, &clamped);  // one EM pass
      zip_m_step(sd.dm, r, st, &clamped);
      return run_quasi_newton(family, dm, sd, pack_zip(st), cfg, clamped);
    }
    case Family::zinb: {
      // warm start at the ZIP solution with a moment dispersion
      ZipState st = zip_start(sd.dm, &clamped);
      Vector rsp = zip_responsibilities(sd.dm, st, &clamped);
      zip_m_step(sd.dm, rsp, st, &clamped);
      OptimizerConfig zip_cfg = cfg;
      Objective neg_zip = [&](const Vector& p) {
        LogLikEval ev = loglik_eval(Family::zip, p, sd.dm);
        ObjectiveEval o;
        o.value = -ev.value;
        o.gradient.resize(ev.grad.size());
        for (std::size_t i = 0; i < ev.grad.size(); ++i) o.gradient[i] = -ev.grad[i];
        return o;
      };
      Vector zip_params = minimize(neg_zip, pack_zip(st), zip_cfg).x;
      Vector start = zip_params;
      start.push_back(std::log(moment_theta(dm)));
      return run_quasi_newton(family, dm, sd, std::move(start), cfg, clamped);
    }
    default:
      break;
  }
  throw ValidationError("unsupported family");
}

Vector predict_expected(const FittedModel& m, const DesignMatrices& dm) {
  if (dm.X.cols() != m.beta_count.size())
    throw ShapeMismatch("design has " + std::to_string(dm.X.cols()) +
                        " count columns, model expects " + std::to_string(m.beta_count.size()));
  if (is_zero_inflated(m.spec.family)) {
    if (!dm.Z) throw ShapeMismatch("model has a zero component but design has no Z");
    if (dm.Z->cols() != m.gamma_zero->size())
      throw ShapeMismatch("design has " + std::to_string(dm.Z->cols()) +
                          " zero columns, model expects " + std::to_string(m.gamma_zero->size()));
  }

  const std::size_t n = dm.n();
  Vector out(n, 0.0);
  if (m.spec.family == Family::linear) {
    return matvec(dm.X, m.beta_count);
  }
  Vector lambda = fitted_mean_poisson(dm.X, m.beta_count, nullptr);
  if (!is_zero_inflated(m.spec.family)) return lambda;
  for (std::size_t j = 0; j < n; ++j) {
    double eta = 0.0;
    for (std::size_t c = 0; c < dm.Z->cols(); ++c) eta += (*dm.Z)(j, c) * (*m.gamma_zero)[c];
    out[j] = (1.0 - logistic(clamp_eta(eta))) * lambda[j];
  }
  return out;
}

double predict_total(const FittedModel& m, const DesignMatrices& dm) {
  const Vector e = predict_expected(m, dm);
  double total = 0.0;
  for (double v : e) total += v;
  return total;
}

Vector standard_errors(const FittedModel& m, const DesignMatrices& dm) {
  Objective grad_fn = [&](const Vector& p) {
    LogLikEval ev = loglik_eval(m.spec.family, p, dm);
    return ObjectiveEval{ev.value, ev.grad};
  };
  const Vector at = m.packed_params();
  Matrix info = finite_diff_hessian(grad_fn, at);
  for (std::size_t a = 0; a < info.rows(); ++a)
    for (std::size_t b = 0; b < info.cols(); ++b) info(a, b) = -info(a, b);
  Matrix cov = spd_inverse(info);
  Vector se(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) se[i] = std::sqrt(std::max(cov(i, i), 0.0));
  return se;
}

}  // namespace zinc
