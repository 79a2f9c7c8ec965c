#ifndef ZINC_SERIALIZE_HPP
#define ZINC_SERIALIZE_HPP

#include <json.hpp>

#include "zinc/fit.hpp"

namespace zinc {

// Stable fitted-model document. Field names are part of the interface:
// family, coef_count (name -> value, "intercept" included), coef_zero
// (optional), dispersion (optional), loglik, k, n, aic, bic, converged.
nlohmann::ordered_json model_to_json(const FittedModel& m);

// Rebuild a model from the document. Fitted per-row vectors are not stored;
// predictions recompute them from the coefficients.
FittedModel model_from_json(const nlohmann::ordered_json& doc);

FittedModel load_model(const std::string& path);
void save_model(const FittedModel& m, const std::string& path);

}  // namespace zinc

#endif  // ZINC_SERIALIZE_HPP
