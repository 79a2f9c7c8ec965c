#include <doctest.h>

#include <cmath>
#include <random>

#include "zinc/errors.hpp"
#include "zinc/families.hpp"
#include "zinc/optimize.hpp"

using namespace zinc;

namespace {

// Small hand-built design: intercept + 2 count covariates, intercept + 1 zero
// covariate, mixed zero/nonzero counts.
DesignMatrices toy_design() {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const std::size_t n = 40;
  DesignMatrices dm;
  dm.X = Matrix(n, 3, 1.0);
  dm.Z = Matrix(n, 2, 1.0);
  dm.x_names = {"intercept", "x1", "x2"};
  dm.z_names = {"intercept", "x1"};
  std::poisson_distribution<long long> pois(2.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double x1 = u(gen), x2 = u(gen);
    dm.X(j, 1) = x1;
    dm.X(j, 2) = x2;
    (*dm.Z)(j, 1) = x1;
    dm.y.push_back(j % 3 == 0 ? 0 : pois(gen));
  }
  return dm;
}

}  // namespace

TEST_CASE("zip_pmf evaluates both branches") {
  CHECK(zip_pmf(0, 1.0, 0.5) == doctest::Approx(0.683940).epsilon(1e-5));
  CHECK(zip_pmf(2, 1.0, 0.0) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-12));
  CHECK(zip_pmf(2, 1.0, 0.0) == doctest::Approx(0.183940).epsilon(1e-5));
  CHECK(zip_pmf(3, 2.0, 1.0) == 0.0);
  CHECK_THROWS_AS(zip_pmf(1, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(zip_pmf(1, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(zip_pmf(-1, 1.0, 0.5), DomainError);
}

TEST_CASE("zip_pmf sums to one over its support") {
  for (double lambda : {0.05, 0.5, 1.0, 5.0, 25.0}) {
    for (double pi : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      const long long upper =
          static_cast<long long>(lambda + 20.0 * std::sqrt(lambda) + 50.0);
      double total = 0.0;
      for (long long h = 0; h <= upper; ++h) total += zip_pmf(h, lambda, pi);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("poisson loglik matches the hand computation") {
  DesignMatrices dm;
  dm.X = Matrix(3, 1, 1.0);
  dm.x_names = {"intercept"};
  dm.y = {1, 2, 3};
  const double got = loglik(Family::poisson, {std::log(2.0)}, dm);
  const double want = 6.0 * std::log(2.0) - 6.0 - std::log(12.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK(got == doctest::Approx(-4.3260).epsilon(1e-4));
}

TEST_CASE("zip loglik collapses to poisson when the zero component is off") {
  DesignMatrices dm = toy_design();
  const Vector beta{0.3, 0.2, -0.1};
  Vector zip_params = beta;
  zip_params.insert(zip_params.end(), {-500.0, 0.0});  // pi ~ 0 everywhere
  const double lp = loglik(Family::poisson, beta, dm);
  const double lz = loglik(Family::zip, zip_params, dm);
  CHECK(std::abs(lp - lz) < 1e-10);
}

TEST_CASE("zip loglik of an all-zero response at pi=1 is zero") {
  DesignMatrices dm;
  dm.X = Matrix(5, 1, 1.0);
  dm.Z = Matrix(5, 1, 1.0);
  dm.x_names = {"intercept"};
  dm.z_names = {"intercept"};
  dm.y = {0, 0, 0, 0, 0};
  const double ll = loglik(Family::zip, {0.0, 500.0}, dm);
  CHECK(std::abs(ll) < 1e-12);
}

TEST_CASE("packed parameter widths per family") {
  DesignMatrices dm = toy_design();
  CHECK(packed_param_count(Family::linear, dm) == 4);
  CHECK(packed_param_count(Family::poisson, dm) == 3);
  CHECK(packed_param_count(Family::negbin, dm) == 4);
  CHECK(packed_param_count(Family::zip, dm) == 5);
  CHECK(packed_param_count(Family::zinb, dm) == 6);
  CHECK_THROWS_AS(loglik(Family::zip, {0.0, 0.0}, dm), ShapeMismatch);
}

TEST_CASE("analytic gradients agree with central differences for every family") {
  const DesignMatrices dm = toy_design();
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-0.4, 0.4);

  for (Family family : {Family::linear, Family::poisson, Family::negbin, Family::zip,
                        Family::zinb}) {
    const std::size_t dim = packed_param_count(family, dm);
    for (int rep = 0; rep < 20; ++rep) {
      Vector at(dim);
      for (auto& v : at) v = u(gen);
      // keep dispersion/scale coordinates in a benign interior range
      if (family == Family::negbin || family == Family::zinb || family == Family::linear)
        at.back() = 0.3 + 0.5 * std::abs(at.back());

      const LogLikEval ev = loglik_eval(family, at, dm);
      const Vector fd = finite_diff_gradient(
          [&](const Vector& p) { return loglik(family, p, dm); }, at);
      for (std::size_t i = 0; i < dim; ++i) {
        CHECK(std::abs(ev.grad[i] - fd[i]) <=
              1e-5 * std::max(1.0, std::abs(ev.grad[i])));
      }
    }
  }
}

TEST_CASE("nb_logpmf matches the poisson limit for large theta") {
  // theta -> infinity collapses NB2 onto Poisson
  const double mu = 3.2;
  for (long long y : {0LL, 1LL, 4LL, 9LL}) {
    const double yd = static_cast<double>(y);
    const double pois = yd * std::log(mu) - mu - std::lgamma(yd + 1.0);
    CHECK(nb_logpmf(y, mu, 1e9) == doctest::Approx(pois).epsilon(1e-6));
  }
}
