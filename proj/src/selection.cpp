#include "zinc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "zinc/errors.hpp"

namespace zinc {

double ReportRow::sort_key() const {
  if (error) return HUGE_VAL;
  if (aic) return *aic;
  if (dic) return *dic;
  return HUGE_VAL;
}

std::string row_label(const ModelSpec& spec) {
  std::string label = to_string(spec.family);
  if (is_zero_inflated(spec.family)) {
    label += " (zero=";
    if (spec.zero_covariates.empty()) {
      label += "intercept";
    } else {
      for (std::size_t i = 0; i < spec.zero_covariates.size(); ++i) {
        if (i) label += ",";
        label += spec.zero_covariates[i];
      }
    }
    label += ")";
  }
  return label;
}

ComparisonReport compare(const Dataset& data, const std::vector<ModelSpec>& specs,
                         const std::optional<McmcConfig>& bayes_cfg) {
  if (specs.empty()) throw AllFitsFailed("no model specifications given");
  for (const auto& spec : specs) spec.validate(data);

  ComparisonReport report;
  report.n = data.n();

  std::size_t failures = 0;
  for (const auto& spec : specs) {
    ReportRow row;
    row.label = row_label(spec);
    row.family = spec.family;
    try {
      const DesignMatrices dm = build_design(data, spec);
      const FittedModel m = fit(spec, dm);
      row.k = m.k;
      row.loglik = m.loglik;
      row.aic = m.aic();
      row.bic = m.bic();
      row.predicted_total = predict_total(m, dm);
    } catch (const ComputationError& e) {
      row.error = e.what();
      ++failures;
    }
    report.rows.push_back(std::move(row));
  }

  if (bayes_cfg) {
    auto zip_spec = std::find_if(specs.begin(), specs.end(), [](const ModelSpec& s) {
      return s.family == Family::zip;
    });
    if (zip_spec == specs.end())
      throw ConfigError("a Bayesian row needs a zip spec in the battery");
    ReportRow row;
    row.label = row_label(*zip_spec) + " bayes";
    row.family = Family::zip;
    try {
      const DesignMatrices dm = build_design(data, *zip_spec);
      const PosteriorChains chains = sample_zip_posterior(dm, *bayes_cfg);
      const DicResult d = dic(chains, dm);
      row.k = static_cast<int>(packed_param_count(Family::zip, dm));
      row.dic = d.dic;
      // expectation at the posterior mean, matching the DIC plug-in
      FittedModel plug;
      plug.spec = *zip_spec;
      const Vector mean = posterior_mean(chains);
      plug.beta_count.assign(mean.begin(), mean.begin() + chains.beta_dim);
      plug.gamma_zero = Vector(mean.begin() + chains.beta_dim, mean.end());
      row.predicted_total = predict_total(plug, dm);
    } catch (const ComputationError& e) {
      row.error = e.what();
      ++failures;
    }
    report.rows.push_back(std::move(row));
  }

  if (failures == report.rows.size()) throw AllFitsFailed();

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     const double ka = a.sort_key(), kb = b.sort_key();
                     if (ka != kb) return ka < kb;
                     return a.label < b.label;
                   });
  return report;
}

namespace {

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

}  // namespace

std::string render_text(const ComparisonReport& report) {
  std::vector<std::array<std::string, 4>> cells;
  cells.push_back({"Method", "AIC", "BIC/DIC", "#Bugs predicted"});
  for (const auto& row : report.rows) {
    std::array<std::string, 4> c;
    c[0] = row.label;
    if (row.error) {
      c[1] = "error";
      c[2] = *row.error;
      c[3] = "-";
    } else {
      c[1] = row.aic ? fmt(*row.aic) : "-";
      c[2] = row.bic ? fmt(*row.bic) : (row.dic ? "DIC=" + fmt(*row.dic, 1) : "-");
      c[3] = row.predicted_total ? fmt(*row.predicted_total) : "-";
    }
    cells.push_back(std::move(c));
  }

  std::array<std::size_t, 4> width{};
  for (const auto& r : cells)
    for (std::size_t i = 0; i < 4; ++i) width[i] = std::max(width[i], r[i].size());

  std::ostringstream out;
  for (std::size_t ri = 0; ri < cells.size(); ++ri) {
    const auto& r = cells[ri];
    for (std::size_t i = 0; i < 4; ++i) {
      if (i) out << " | ";
      out << r[i];
      if (i + 1 < 4) out << std::string(width[i] - r[i].size(), ' ');
    }
    out << '\n';
    if (ri == 0) {
      for (std::size_t i = 0; i < 4; ++i) {
        if (i) out << "-+-";
        out << std::string(width[i], '-');
      }
      out << '\n';
    }
  }
  return out.str();
}

Criterion criterion_from_string(const std::string& s) {
  if (s == "aic") return Criterion::aic;
  if (s == "bic") return Criterion::bic;
  throw ValidationError("unknown criterion: " + s);
}

namespace {

double criterion_value(const Dataset& data, const ModelSpec& spec, Criterion crit) {
  const DesignMatrices dm = build_design(data, spec);
  const FittedModel m = fit(spec, dm);
  return crit == Criterion::aic ? m.aic() : m.bic();
}

}  // namespace

StepwiseResult stepwise_select(const Dataset& data, Family family,
                               const std::vector<std::string>& candidates,
                               Criterion criterion,
                               const std::vector<std::string>& zero_covariates) {
  if (candidates.empty()) throw ValidationError("stepwise selection needs candidates");
  std::vector<std::string> pool = candidates;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  for (const auto& c : pool)
    if (!data.has_metric(c)) throw UnknownCovariate(c);

  ModelSpec current;
  current.family = family;
  if (is_zero_inflated(family)) current.zero_covariates = zero_covariates;
  current.validate(data);

  StepwiseResult result;
  double best = criterion_value(data, current, criterion);
  result.trace.push_back({0, "start", best});

  std::set<std::string> in_model;
  for (int step = 1;; ++step) {
    std::string best_move;
    ModelSpec best_spec;
    double best_value = best;

    auto consider = [&](const ModelSpec& spec, const std::string& move) {
      double value;
      try {
        value = criterion_value(data, spec, criterion);
      } catch (const ComputationError&) {
        return;  // unfittable candidate, skip the move
      }
      if (value < best_value - 1e-10) {
        best_value = value;
        best_move = move;
        best_spec = spec;
      }
    };

    for (const auto& c : pool) {  // adds, in name order
      if (in_model.count(c)) continue;
      ModelSpec spec = current;
      spec.count_covariates.push_back(c);
      consider(spec, "+" + c);
    }
    for (const auto& c : pool) {  // drops, in name order
      if (!in_model.count(c)) continue;
      ModelSpec spec = current;
      std::erase(spec.count_covariates, c);
      consider(spec, "-" + c);
    }

    if (best_move.empty()) {
      result.trace.push_back({step, "stop", best});
      break;
    }
    current = best_spec;
    best = best_value;
    if (best_move[0] == '+') in_model.insert(best_move.substr(1));
    else in_model.erase(best_move.substr(1));
    result.trace.push_back({step, best_move, best});
  }

  result.selected = current;
  result.criterion_value = best;
  return result;
}

}  // namespace zinc
