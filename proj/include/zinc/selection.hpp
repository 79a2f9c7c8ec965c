#ifndef ZINC_SELECTION_HPP
#define ZINC_SELECTION_HPP

#include <cmath>
#include <optional>
#include <string>

#include "zinc/dataset.hpp"
#include "zinc/fit.hpp"
#include "zinc/mcmc.hpp"

namespace zinc {

inline double aic(double loglik, int k) { return 2.0 * k - 2.0 * loglik; }

inline double bic(double loglik, int k, std::size_t n) {
  return static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * loglik;
}

struct ReportRow {
  std::string label;
  Family family = Family::poisson;
  int k = 0;
  std::optional<double> loglik;
  std::optional<double> aic;
  std::optional<double> bic;
  std::optional<double> dic;
  std::optional<double> predicted_total;
  std::optional<std::string> error;

  // ascending criterion; failed rows sink to the bottom
  double sort_key() const;
};

struct ComparisonReport {
  std::vector<ReportRow> rows;
  std::size_t n = 0;
};

// Fit every spec on the dataset and assemble the comparison table, sorted
// ascending by AIC (DIC for the Bayesian row). Individual fit failures become
// error-annotated rows; if every row fails, AllFitsFailed. When bayes_cfg is
// set, the first zip spec is also sampled by MCMC and reported with its DIC.
ComparisonReport compare(const Dataset& data, const std::vector<ModelSpec>& specs,
                         const std::optional<McmcConfig>& bayes_cfg = std::nullopt);

std::string row_label(const ModelSpec& spec);

// Aligned text table: Method | AIC | BIC/DIC | #Bugs predicted.
std::string render_text(const ComparisonReport& report);

enum class Criterion { aic, bic };
Criterion criterion_from_string(const std::string& s);

struct StepwiseStep {
  int step = 0;
  std::string move;  // "start", "+name", "-name", "stop"
  double criterion = 0.0;
};

struct StepwiseResult {
  ModelSpec selected;
  double criterion_value = 0.0;
  std::vector<StepwiseStep> trace;
};

// Greedy bidirectional search over the count component starting from the
// intercept-only model: each step applies the single add-or-drop move with
// the largest criterion decrease, stopping when nothing improves. Ties break
// toward adds before drops, then lexicographic covariate name. The zero
// component (zip/zinb only) stays fixed at zero_covariates throughout.
StepwiseResult stepwise_select(const Dataset& data, Family family,
                               const std::vector<std::string>& candidates,
                               Criterion criterion,
                               const std::vector<std::string>& zero_covariates = {});

}  // namespace zinc

#endif  // ZINC_SELECTION_HPP
