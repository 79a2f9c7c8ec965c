// zinc - count-regression models for software defect data.
//
// Subcommands: fit, compare, histogram, select, simulate, predict.
// Exit codes: 0 success, 2 input/validation error, 3 computational failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "zinc/dataset.hpp"
#include "zinc/errors.hpp"
#include "zinc/fit.hpp"
#include "zinc/mcmc.hpp"
#include "zinc/selection.hpp"
#include "zinc/serialize.hpp"
#include "zinc/simulate.hpp"

namespace {

using nlohmann::ordered_json;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

zinc::Vector parse_numbers(const std::string& s, const std::string& what) {
  zinc::Vector out;
  for (const auto& tok : split_list(s)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw zinc::ValidationError("cannot parse " + what + " value: '" + tok + "'");
    }
  }
  return out;
}

// Atomic emit: stdout when no path, temp-file + rename otherwise.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  const std::string tmp = out_path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw zinc::ValidationError("cannot write file: " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, out_path);
}

struct CommonArgs {
  std::string data_path;
  std::string out_path;
  std::string format;
};

zinc::ModelSpec make_spec(const std::string& family, const std::string& count,
                          const std::string& zero) {
  zinc::ModelSpec spec;
  spec.family = zinc::family_from_string(family);
  spec.count_covariates = split_list(count);
  spec.zero_covariates = split_list(zero);
  return spec;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const CommonArgs& common, const zinc::ModelSpec& spec) {
  const zinc::Dataset data = zinc::load_csv(common.data_path);
  spec.validate(data);
  const zinc::DesignMatrices dm = zinc::build_design(data, spec);
  const zinc::FittedModel model = zinc::fit(spec, dm);
  emit(zinc::model_to_json(model).dump(2) + "\n", common.out_path);
  if (!model.converged) {
    std::cerr << "zinc fit: optimizer did not reach the convergence criteria\n";
    return 3;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct ReferenceValues {
  std::optional<double> aic, bic, dic, total;
};

// Published Equinox reference results, printed next to computed values when
// --quote-paper is given.
const std::map<std::string, ReferenceValues>& reference_table() {
  static const std::map<std::string, ReferenceValues> table = {
      {"linear", {904.8354, 927.5198, std::nullopt, 97.76806}},
      {"poisson", {632.1547, 651.0584, std::nullopt, 188.7356}},
      {"negbin", {628.5507, 651.2, std::nullopt, 195.8165}},
      {"zip (zero=nloc)", {606.9155, 633.3807, std::nullopt, 195.7924}},
      {"zip (zero=wmc)", {602.9, 629.0, std::nullopt, std::nullopt}},
      {"zinb (zero=nloc)", {607.5639, 637.8098, std::nullopt, 198.2048}},
      {"zip (zero=nloc) bayes", {std::nullopt, std::nullopt, 622.5, std::nullopt}},
  };
  return table;
}

ordered_json report_to_json(const zinc::ComparisonReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["label"] = row.label;
    r["family"] = to_string(row.family);
    r["k"] = row.k;
    if (row.loglik) r["loglik"] = *row.loglik;
    if (row.aic) r["aic"] = *row.aic;
    if (row.bic) r["bic"] = *row.bic;
    if (row.dic) r["dic"] = *row.dic;
    if (row.predicted_total) r["predicted_total"] = *row.predicted_total;
    if (row.error) r["error"] = *row.error;
    rows.push_back(std::move(r));
  }
  ordered_json doc;
  doc["n"] = report.n;
  doc["rows"] = std::move(rows);
  return doc;
}

std::string render_with_references(const zinc::ComparisonReport& report) {
  std::ostringstream out;
  out << zinc::render_text(report);
  out << "\nreference values (Equinox):\n";
  for (const auto& row : report.rows) {
    auto it = reference_table().find(row.label);
    if (it == reference_table().end()) continue;
    const ReferenceValues& ref = it->second;
    out << "  " << row.label << ":";
    auto field = [&](const char* name, const std::optional<double>& got,
                     const std::optional<double>& want) {
      if (!want) return;
      char buf[96];
      if (got)
        std::snprintf(buf, sizeof(buf), "  %s %.4f (computed %.4f)", name, *want, *got);
      else
        std::snprintf(buf, sizeof(buf), "  %s %.4f (computed -)", name, *want);
      out << buf;
    };
    field("AIC", row.aic, ref.aic);
    field("BIC", row.bic, ref.bic);
    field("DIC", row.dic, ref.dic);
    field("#bugs", row.predicted_total, ref.total);
    out << '\n';
  }
  return out.str();
}

int cmd_compare(const CommonArgs& common, const std::string& count, const std::string& zero,
                bool bayes, const zinc::McmcConfig& mcmc_cfg, bool quote_paper) {
  const zinc::Dataset data = zinc::load_csv(common.data_path);

  const std::vector<std::string> count_covs = split_list(count);
  const std::vector<std::string> zero_cands = split_list(zero);

  std::vector<zinc::ModelSpec> specs;
  for (zinc::Family fam : {zinc::Family::linear, zinc::Family::poisson, zinc::Family::negbin}) {
    zinc::ModelSpec s;
    s.family = fam;
    s.count_covariates = count_covs;
    specs.push_back(std::move(s));
  }
  for (const auto& zc : zero_cands) {
    zinc::ModelSpec s;
    s.family = zinc::Family::zip;
    s.count_covariates = count_covs;
    s.zero_covariates = {zc};
    specs.push_back(std::move(s));
  }
  if (zero_cands.empty()) {
    zinc::ModelSpec s;
    s.family = zinc::Family::zip;
    s.count_covariates = count_covs;
    specs.push_back(std::move(s));
  }
  {
    zinc::ModelSpec s;
    s.family = zinc::Family::zinb;
    s.count_covariates = count_covs;
    if (!zero_cands.empty()) s.zero_covariates = {zero_cands.front()};
    specs.push_back(std::move(s));
  }

  const zinc::ComparisonReport report =
      zinc::compare(data, specs, bayes ? std::optional(mcmc_cfg) : std::nullopt);

  if (common.format == "json")
    emit(report_to_json(report).dump(2) + "\n", common.out_path);
  else if (quote_paper)
    emit(render_with_references(report), common.out_path);
  else
    emit(zinc::render_text(report), common.out_path);

  for (const auto& row : report.rows)
    if (row.error) std::cerr << "zinc compare: " << row.label << " failed: " << *row.error << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// histogram

int cmd_histogram(const CommonArgs& common, bool drop_zeros) {
  const zinc::Dataset data = zinc::load_csv(common.data_path);
  const auto bins = zinc::histogram(data.bugs, drop_zeros);

  std::ostringstream out;
  if (common.format == "csv" || common.format == "json") {
    if (common.format == "json") {
      ordered_json arr = ordered_json::array();
      for (const auto& b : bins) arr.push_back({{"value", b.value}, {"count", b.count}});
      out << arr.dump(2) << '\n';
    } else {
      out << "value,count\n";
      for (const auto& b : bins) out << b.value << ',' << b.count << '\n';
    }
  } else {
    std::size_t max_count = 0;
    for (const auto& b : bins) max_count = std::max(max_count, b.count);
    for (const auto& b : bins) {
      const std::size_t bar =
          max_count == 0 ? 0 : (b.count * 60 + max_count - 1) / max_count;
      char line[128];
      std::snprintf(line, sizeof(line), "%6lld | %8zu | ", b.value, b.count);
      out << line << std::string(bar, '#') << '\n';
    }
  }
  emit(out.str(), common.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// select

int cmd_select(const CommonArgs& common, const std::string& family,
               const std::string& candidates, const std::string& zero,
               const std::string& criterion) {
  const zinc::Dataset data = zinc::load_csv(common.data_path);
  std::vector<std::string> cands = split_list(candidates);
  if (cands.empty()) {
    cands = data.metric_names;  // every metric column
  }
  const zinc::StepwiseResult res =
      zinc::stepwise_select(data, zinc::family_from_string(family), cands,
                            zinc::criterion_from_string(criterion), split_list(zero));

  if (common.format == "json") {
    ordered_json doc;
    doc["family"] = family;
    doc["criterion"] = criterion;
    doc["selected_count_covariates"] = res.selected.count_covariates;
    doc["selected_zero_covariates"] = res.selected.zero_covariates;
    doc["criterion_value"] = res.criterion_value;
    ordered_json trace = ordered_json::array();
    for (const auto& st : res.trace)
      trace.push_back({{"step", st.step}, {"move", st.move}, {"criterion", st.criterion}});
    doc["trace"] = std::move(trace);
    emit(doc.dump(2) + "\n", common.out_path);
  } else {
    std::ostringstream out;
    out << "selected " << zinc::row_label(res.selected) << " with count covariates:";
    if (res.selected.count_covariates.empty()) out << " (intercept only)";
    for (const auto& c : res.selected.count_covariates) out << ' ' << c;
    out << "\n" << criterion << " = " << res.criterion_value << "\ntrace:\n";
    for (const auto& st : res.trace) {
      char line[160];
      std::snprintf(line, sizeof(line), "  %3d  %-12s %.4f\n", st.step, st.move.c_str(),
                    st.criterion);
      out << line;
    }
    emit(out.str(), common.out_path);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const CommonArgs& common, std::size_t n, std::uint64_t seed,
                 const std::string& beta, const std::string& gamma,
                 double dispersion, const std::string& range) {
  zinc::SimSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.beta_count = parse_numbers(beta, "--beta");
  if (!gamma.empty()) spec.gamma_zero = parse_numbers(gamma, "--gamma");
  if (dispersion > 0) spec.dispersion = dispersion;
  if (!range.empty()) {
    const zinc::Vector r = parse_numbers(range, "--range");
    if (r.size() != 2) throw zinc::ValidationError("--range expects 'lo,hi'");
    spec.covariate_ranges = {{r[0], r[1]}};
  }
  const zinc::Dataset data = zinc::gen_dataset(spec);
  std::ostringstream out;
  zinc::write_csv(data, out);
  emit(out.str(), common.out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const CommonArgs& common, const std::string& model_path) {
  const zinc::FittedModel model = zinc::load_model(model_path);
  std::vector<std::string> required = model.spec.count_covariates;
  required.insert(required.end(), model.spec.zero_covariates.begin(),
                  model.spec.zero_covariates.end());
  const zinc::Dataset data = zinc::load_csv(common.data_path, required);
  const zinc::DesignMatrices dm = zinc::build_design(data, model.spec);
  const zinc::Vector expected = zinc::predict_expected(model, dm);
  const double total = zinc::predict_total(model, dm);

  std::ostringstream out;
  if (common.format == "json") {
    ordered_json doc;
    doc["total"] = total;
    ordered_json per = ordered_json::array();
    for (std::size_t j = 0; j < expected.size(); ++j)
      per.push_back({{"id", data.module_id[j]}, {"expected", expected[j]}});
    doc["per_module"] = std::move(per);
    out << doc.dump(2) << '\n';
  } else if (common.format == "csv") {
    out << "id,expected\n";
    for (std::size_t j = 0; j < expected.size(); ++j)
      out << data.module_id[j] << ',' << expected[j] << '\n';
  } else {
    char line[160];
    for (std::size_t j = 0; j < expected.size(); ++j) {
      std::snprintf(line, sizeof(line), "%-12s %10.4f\n", data.module_id[j].c_str(),
                    expected[j]);
      out << line;
    }
    std::snprintf(line, sizeof(line), "total        %10.4f\n", total);
    out << line;
  }
  emit(out.str(), common.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"count-regression models (linear/poisson/negbin/zip/zinb) for "
               "software defect data"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string family = "zip", count, zero, criterion = "aic", candidates;
  std::string compare_count = "wmc,rfc,cbo,lcom", compare_zero = "nloc,wmc";
  std::string beta, gamma, range, model_path;
  bool bayes = false, drop_zeros = false, quote_paper = false;
  std::size_t sim_n = 100;
  double dispersion = 0.0;
  zinc::McmcConfig mcmc_cfg;

  auto add_common = [&](CLI::App* sub, bool needs_data = true) {
    if (needs_data)
      sub->add_option("--data", common.data_path, "input CSV")->required();
    sub->add_option("--out", common.out_path, "output file (atomic write); stdout if absent");
    sub->add_option("--format", common.format, "output format: text, json, csv");
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit of one model");
  add_common(fit_cmd);
  fit_cmd->add_option("--family", family, "linear|poisson|negbin|zip|zinb");
  fit_cmd->add_option("--count", count, "comma-separated count covariates");
  fit_cmd->add_option("--zero", zero, "comma-separated zero covariates (zip/zinb)");

  CLI::App* compare_cmd = app.add_subcommand("compare", "fit the model battery and rank by AIC");
  add_common(compare_cmd);
  compare_cmd->add_option("--count", compare_count,
                          "count covariates (default wmc,rfc,cbo,lcom)");
  compare_cmd->add_option("--zero", compare_zero,
                          "zero-covariate candidates, one zip row each (default nloc,wmc)");
  compare_cmd->add_flag("--bayes", bayes, "add an MCMC zip row with its DIC");
  compare_cmd->add_flag("--quote-paper", quote_paper,
                        "print published Equinox reference values beside computed ones");
  compare_cmd->add_option("--seed", mcmc_cfg.seed, "MCMC seed");
  compare_cmd->add_option("--chains", mcmc_cfg.chains, "MCMC chains");
  compare_cmd->add_option("--iters", mcmc_cfg.iterations, "MCMC iterations per chain");
  compare_cmd->add_option("--burn-in", mcmc_cfg.burn_in, "MCMC burn-in iterations");
  compare_cmd->add_option("--thin", mcmc_cfg.thin, "MCMC thinning stride");
  compare_cmd->add_option("--prior-sd", mcmc_cfg.prior_sd, "prior standard deviation");

  CLI::App* hist_cmd = app.add_subcommand("histogram", "defect-count histogram");
  add_common(hist_cmd);
  hist_cmd->add_flag("--drop-zeros", drop_zeros, "drop the zero bin");

  CLI::App* select_cmd = app.add_subcommand("select", "stepwise covariate selection");
  add_common(select_cmd);
  select_cmd->add_option("--family", family, "model family");
  select_cmd->add_option("--candidates", candidates,
                         "candidate covariates (default: every metric column)");
  select_cmd->add_option("--zero", zero, "fixed zero covariates during the search");
  select_cmd->add_option("--criterion", criterion, "aic or bic");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a seeded synthetic dataset");
  add_common(sim_cmd, /*needs_data=*/false);
  sim_cmd->add_option("--n", sim_n, "rows")->required();
  sim_cmd->add_option("--seed", mcmc_cfg.seed, "generator seed");
  sim_cmd->add_option("--beta", beta, "count coefficients, intercept first")->required();
  sim_cmd->add_option("--gamma", gamma, "zero coefficients, intercept first");
  sim_cmd->add_option("--dispersion", dispersion, "NB2 size theta for the count draw");
  sim_cmd->add_option("--range", range, "covariate range 'lo,hi' (default 0,100)");

  CLI::App* predict_cmd = app.add_subcommand("predict", "apply a saved model to a dataset");
  add_common(predict_cmd);
  predict_cmd->add_option("--model", model_path, "model JSON from 'fit'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(common, make_spec(family, count, zero));
    if (compare_cmd->parsed())
      return cmd_compare(common, compare_count, compare_zero, bayes, mcmc_cfg, quote_paper);
    if (hist_cmd->parsed()) return cmd_histogram(common, drop_zeros);
    if (select_cmd->parsed())
      return cmd_select(common, family, candidates, zero, criterion);
    if (sim_cmd->parsed())
      return cmd_simulate(common, sim_n, mcmc_cfg.seed, beta, gamma, dispersion, range);
    if (predict_cmd->parsed()) return cmd_predict(common, model_path);
  } catch (const zinc::Error& e) {
    std::cerr << "zinc: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "zinc: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
