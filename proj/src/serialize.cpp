#include "zinc/serialize.hpp"

#include <filesystem>
#include <fstream>

#include "zinc/errors.hpp"

namespace zinc {

nlohmann::ordered_json model_to_json(const FittedModel& m) {
  nlohmann::ordered_json doc;
  doc["family"] = to_string(m.spec.family);

  nlohmann::ordered_json coef_count;
  coef_count["intercept"] = m.beta_count[0];
  for (std::size_t c = 0; c < m.spec.count_covariates.size(); ++c)
    coef_count[m.spec.count_covariates[c]] = m.beta_count[c + 1];
  doc["coef_count"] = std::move(coef_count);

  if (m.gamma_zero) {
    nlohmann::ordered_json coef_zero;
    coef_zero["intercept"] = (*m.gamma_zero)[0];
    for (std::size_t c = 0; c < m.spec.zero_covariates.size(); ++c)
      coef_zero[m.spec.zero_covariates[c]] = (*m.gamma_zero)[c + 1];
    doc["coef_zero"] = std::move(coef_zero);
  }
  if (m.dispersion) doc["dispersion"] = *m.dispersion;
  doc["loglik"] = m.loglik;
  doc["k"] = m.k;
  doc["n"] = m.n;
  doc["aic"] = m.aic();
  doc["bic"] = m.bic();
  doc["converged"] = m.converged;
  return doc;
}

FittedModel model_from_json(const nlohmann::ordered_json& doc) {
  try {
    FittedModel m;
    m.spec.family = family_from_string(doc.at("family").get<std::string>());

    const auto& cc = doc.at("coef_count");
    if (!cc.contains("intercept")) throw ValidationError("coef_count lacks 'intercept'");
    m.beta_count.push_back(cc.at("intercept").get<double>());
    for (auto it = cc.begin(); it != cc.end(); ++it) {
      if (it.key() == "intercept") continue;
      m.spec.count_covariates.push_back(it.key());
      m.beta_count.push_back(it.value().get<double>());
    }

    if (doc.contains("coef_zero")) {
      if (!is_zero_inflated(m.spec.family))
        throw ValidationError("coef_zero present for a non-zero-inflated family");
      const auto& cz = doc.at("coef_zero");
      if (!cz.contains("intercept")) throw ValidationError("coef_zero lacks 'intercept'");
      Vector gamma;
      gamma.push_back(cz.at("intercept").get<double>());
      for (auto it = cz.begin(); it != cz.end(); ++it) {
        if (it.key() == "intercept") continue;
        m.spec.zero_covariates.push_back(it.key());
        gamma.push_back(it.value().get<double>());
      }
      m.gamma_zero = std::move(gamma);
    } else if (is_zero_inflated(m.spec.family)) {
      throw ValidationError("zip/zinb model document lacks coef_zero");
    }

    if (doc.contains("dispersion")) m.dispersion = doc.at("dispersion").get<double>();
    m.loglik = doc.at("loglik").get<double>();
    m.k = doc.at("k").get<int>();
    m.n = doc.at("n").get<std::size_t>();
    m.converged = doc.at("converged").get<bool>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
}

FittedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return model_from_json(doc);
}

void save_model(const FittedModel& m, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ValidationError("cannot write model file: " + tmp);
    out << model_to_json(m).dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace zinc
