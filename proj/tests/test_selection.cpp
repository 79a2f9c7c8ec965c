#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "zinc/errors.hpp"
#include "zinc/selection.hpp"
#include "zinc/simulate.hpp"

using namespace zinc;

TEST_CASE("aic and bic formulas") {
  CHECK(aic(0.0, 0) == 0.0);
  CHECK(aic(-300.0, 5) == 610.0);
  CHECK(aic(-296.45775, 7) == doctest::Approx(606.9155).epsilon(1e-9));

  CHECK(bic(0.0, 0, 100) == 0.0);
  CHECK(bic(-296.45775, 7, 324) == doctest::Approx(633.3807).epsilon(1e-6));

  // algebraic identity: bic - aic = k (ln n - 2)
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-500.0, 0.0);
  for (int k = 0; k <= 10; ++k) {
    const double ll = u(gen);
    CHECK(bic(ll, k, 324) - aic(ll, k) ==
          doctest::Approx(k * (std::log(324.0) - 2.0)).epsilon(1e-12));
  }
}

namespace {

Dataset mixed_dataset(std::size_t n, std::uint64_t seed) {
  SimSpec s;
  s.n = n;
  s.seed = seed;
  s.beta_count = {0.5, 0.4};
  s.gamma_zero = Vector{-0.7, 0.2};
  s.covariate_ranges = {{0.0, 2.0}};
  return gen_dataset(s);
}

}  // namespace

TEST_CASE("compare produces consistent, sorted rows") {
  const Dataset d = mixed_dataset(800, 6);
  std::vector<ModelSpec> specs{
      {Family::linear, {"x1"}, {}},
      {Family::poisson, {"x1"}, {}},
      {Family::negbin, {"x1"}, {}},
      {Family::zip, {"x1"}, {"x1"}},
      {Family::zinb, {"x1"}, {"x1"}},
  };
  const ComparisonReport report = compare(d, specs);
  REQUIRE(report.rows.size() == 5);
  CHECK(report.n == d.n());

  for (std::size_t i = 1; i < report.rows.size(); ++i)
    CHECK(report.rows[i - 1].sort_key() <= report.rows[i].sort_key());

  for (const auto& row : report.rows) {
    REQUIRE(row.aic.has_value());
    REQUIRE(row.loglik.has_value());
    CHECK(*row.aic == doctest::Approx(aic(*row.loglik, row.k)).epsilon(1e-9));
    CHECK(*row.bic == doctest::Approx(bic(*row.loglik, row.k, report.n)).epsilon(1e-9));
    CHECK(row.predicted_total.has_value());
  }

  // zip data: the zero-inflated rows must beat plain poisson
  const auto find = [&](const std::string& label) {
    const auto it = std::find_if(report.rows.begin(), report.rows.end(),
                                 [&](const ReportRow& r) { return r.label == label; });
    REQUIRE(it != report.rows.end());
    return *it;
  };
  CHECK(*find("zip (zero=x1)").aic < *find("poisson").aic);
}

TEST_CASE("compare on an intercept-only poisson spec matches the hand value") {
  Dataset d;
  d.module_id = {"a", "b", "c"};
  d.bugs = {1, 2, 3};
  const ComparisonReport report = compare(d, {ModelSpec{Family::poisson, {}, {}}});
  REQUIRE(report.rows.size() == 1);
  const double want_ll = 6.0 * std::log(2.0) - 6.0 - std::log(12.0);
  CHECK(*report.rows[0].loglik == doctest::Approx(want_ll).epsilon(1e-9));
  CHECK(*report.rows[0].aic == doctest::Approx(2.0 - 2.0 * want_ll).epsilon(1e-9));
  CHECK(*report.rows[0].aic == doctest::Approx(10.65).epsilon(1e-3));
}

TEST_CASE("compare is invariant to spec order") {
  const Dataset d = mixed_dataset(500, 16);
  std::vector<ModelSpec> specs{
      {Family::poisson, {"x1"}, {}},
      {Family::zip, {"x1"}, {"x1"}},
      {Family::negbin, {"x1"}, {}},
      {Family::linear, {"x1"}, {}},
  };
  const ComparisonReport a = compare(d, specs);
  std::reverse(specs.begin(), specs.end());
  const ComparisonReport b = compare(d, specs);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].label == b.rows[i].label);
    CHECK(a.rows[i].aic == b.rows[i].aic);
    CHECK(a.rows[i].predicted_total == b.rows[i].predicted_total);
  }
}

TEST_CASE("compare annotates failed rows instead of aborting") {
  // all-positive counts: zip row fails with NoZerosForZIP, poisson succeeds
  Dataset d;
  for (int j = 0; j < 40; ++j) {
    d.module_id.push_back(std::to_string(j));
    d.bugs.push_back(1 + j % 4);
  }
  d.metric_names = {"x1"};
  d.metric_columns = {Vector(40, 0.0)};
  for (int j = 0; j < 40; ++j) d.metric_columns[0][static_cast<std::size_t>(j)] = j % 7;

  const ComparisonReport report =
      compare(d, {{Family::poisson, {"x1"}, {}}, {Family::zip, {"x1"}, {}}});
  REQUIRE(report.rows.size() == 2);
  CHECK_FALSE(report.rows[0].error.has_value());
  CHECK(report.rows[1].error.has_value());
  CHECK(report.rows[1].label == "zip (zero=intercept)");

  // every row failing is a hard error
  Dataset zeros = d;
  for (auto& b : zeros.bugs) b = 0;
  CHECK_THROWS_AS(compare(zeros, {{Family::poisson, {"x1"}, {}}}), AllFitsFailed);
  CHECK_THROWS_AS(compare(d, {}), AllFitsFailed);
}

TEST_CASE("report renders an aligned table") {
  const Dataset d = mixed_dataset(300, 23);
  const ComparisonReport report = compare(
      d, {{Family::poisson, {"x1"}, {}}, {Family::zip, {"x1"}, {"x1"}}});
  const std::string text = render_text(report);
  CHECK(text.find("Method") != std::string::npos);
  CHECK(text.find("AIC") != std::string::npos);
  CHECK(text.find("BIC/DIC") != std::string::npos);
  CHECK(text.find("#Bugs predicted") != std::string::npos);
  CHECK(text.find("zip (zero=x1)") != std::string::npos);
}

TEST_CASE("stepwise drops a pure-noise covariate") {
  // y ~ Poisson(exp(0.7)), x1 independent noise
  SimSpec s;
  s.n = 400;
  s.seed = 99;
  s.beta_count = {0.7, 0.0};  // x1 coefficient is exactly zero
  s.covariate_ranges = {{0.0, 2.0}};
  const Dataset d = gen_dataset(s);

  const StepwiseResult res = stepwise_select(d, Family::poisson, {"x1"}, Criterion::aic);
  CHECK(res.selected.count_covariates.empty());
  REQUIRE(res.trace.size() >= 2);
  CHECK(res.trace.front().move == "start");
  CHECK(res.trace.back().move == "stop");
}

TEST_CASE("stepwise keeps a strong covariate") {
  SimSpec s;
  s.n = 2000;
  s.seed = 100;
  s.beta_count = {0.2, 0.8};
  s.covariate_ranges = {{0.0, 2.0}};
  const Dataset d = gen_dataset(s);

  const StepwiseResult res = stepwise_select(d, Family::poisson, {"x1"}, Criterion::aic);
  CHECK(res.selected.count_covariates == std::vector<std::string>{"x1"});
}

TEST_CASE("stepwise result never beats a visited criterion and is deterministic") {
  SimSpec s;
  s.n = 800;
  s.seed = 7;
  s.beta_count = {0.3, 0.6, 0.0, -0.4};
  s.covariate_ranges = {{0.0, 2.0}};
  const Dataset d = gen_dataset(s);

  const StepwiseResult a =
      stepwise_select(d, Family::poisson, {"x1", "x2", "x3"}, Criterion::aic);
  const StepwiseResult b =
      stepwise_select(d, Family::poisson, {"x3", "x1", "x2"}, Criterion::aic);

  for (const auto& st : a.trace) CHECK(a.criterion_value <= st.criterion + 1e-12);
  CHECK(a.selected.count_covariates == b.selected.count_covariates);
  CHECK(a.criterion_value == doctest::Approx(b.criterion_value).epsilon(1e-12));

  // selected model beats both the empty and the full model
  const double empty = *compare(d, {ModelSpec{Family::poisson, {}, {}}}).rows[0].aic;
  const double full =
      *compare(d, {ModelSpec{Family::poisson, {"x1", "x2", "x3"}, {}}}).rows[0].aic;
  CHECK(a.criterion_value <= empty + 1e-12);
  CHECK(a.criterion_value <= full + 1e-12);

  // bic variant runs too
  const StepwiseResult c =
      stepwise_select(d, Family::poisson, {"x1", "x2", "x3"}, Criterion::bic);
  for (const auto& st : c.trace) CHECK(c.criterion_value <= st.criterion + 1e-12);
}

TEST_CASE("stepwise validates its inputs") {
  const Dataset d = mixed_dataset(100, 55);
  CHECK_THROWS_AS(stepwise_select(d, Family::poisson, {}, Criterion::aic),
                  ValidationError);
  CHECK_THROWS_AS(stepwise_select(d, Family::poisson, {"ghost"}, Criterion::aic),
                  UnknownCovariate);
  CHECK_THROWS_AS(criterion_from_string("dic"), ValidationError);
}

TEST_CASE("on non-inflated data the zip row costs only its extra penalty") {
  SimSpec s;
  s.n = 5000;
  s.seed = 404;
  s.beta_count = {0.4, 0.5};  // pure Poisson counts
  s.covariate_ranges = {{0.0, 2.0}};
  const Dataset d = gen_dataset(s);

  const ComparisonReport report = compare(
      d, {{Family::poisson, {"x1"}, {}}, {Family::zip, {"x1"}, {}}});
  REQUIRE(report.rows.size() == 2);
  REQUIRE(report.rows[0].aic.has_value());
  REQUIRE(report.rows[1].aic.has_value());
  // pi adds one parameter and buys (almost) no likelihood
  CHECK(std::abs(*report.rows[0].aic - *report.rows[1].aic) <= 2.01);
  CHECK(report.rows[0].label == "poisson");
}

TEST_CASE("stepwise holds the zero component fixed for zip") {
  const Dataset d = mixed_dataset(600, 77);
  const StepwiseResult res =
      stepwise_select(d, Family::zip, {"x1"}, Criterion::aic, {"x1"});
  CHECK(res.selected.family == Family::zip);
  CHECK(res.selected.zero_covariates == std::vector<std::string>{"x1"});
}
