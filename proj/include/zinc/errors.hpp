#ifndef ZINC_ERRORS_HPP
#define ZINC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zinc {

// Exit-code contract used by the CLI: 2 for input/validation problems,
// 3 for computational failures.
class Error : public std::runtime_error {
public:
  Error(std::string msg, int exit_code)
      : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

private:
  int exit_code_;
};

class ValidationError : public Error {
public:
  explicit ValidationError(std::string msg) : Error(std::move(msg), 2) {}
};

class ComputationError : public Error {
public:
  explicit ComputationError(std::string msg) : Error(std::move(msg), 3) {}
};

// ingest
struct MissingColumn : ValidationError {
  explicit MissingColumn(const std::string& name)
      : ValidationError("missing column: " + name) {}
};
struct NonIntegerBugs : ValidationError {
  explicit NonIntegerBugs(const std::string& detail)
      : ValidationError("bugs column must hold non-negative integers: " + detail) {}
};
struct NonNumericCell : ValidationError {
  explicit NonNumericCell(const std::string& detail)
      : ValidationError("unparsable numeric cell: " + detail) {}
};
struct EmptyFile : ValidationError {
  explicit EmptyFile(const std::string& path)
      : ValidationError("empty or header-only file: " + path) {}
};
struct UnknownCovariate : ValidationError {
  explicit UnknownCovariate(const std::string& name)
      : ValidationError("unknown covariate: " + name) {}
};
struct ZeroCovariatesForNonZIFamily : ValidationError {
  ZeroCovariatesForNonZIFamily()
      : ValidationError("zero-component covariates are only valid for zip/zinb") {}
};

// numerics
struct SingularMatrix : ComputationError {
  explicit SingularMatrix(const std::string& detail = "")
      : ComputationError("singular matrix (collinear covariates?)" +
                         (detail.empty() ? "" : ": " + detail)) {}
};
struct NonFiniteObjective : ComputationError {
  explicit NonFiniteObjective(const std::string& detail = "")
      : ComputationError("objective or gradient became non-finite" +
                         (detail.empty() ? "" : ": " + detail)) {}
};
struct DomainError : ValidationError {
  explicit DomainError(const std::string& detail)
      : ValidationError("domain error: " + detail) {}
};

// count models
struct NonFiniteLikelihood : ComputationError {
  explicit NonFiniteLikelihood(const std::string& detail = "")
      : ComputationError("log-likelihood became non-finite" +
                         (detail.empty() ? "" : ": " + detail)) {}
};
struct DegenerateResponse : ComputationError {
  explicit DegenerateResponse(const std::string& detail)
      : ComputationError("degenerate response: " + detail) {}
};
struct SingularDesign : ComputationError {
  explicit SingularDesign(const std::string& detail = "")
      : ComputationError("singular design matrix (collinear covariates)" +
                         (detail.empty() ? "" : ": " + detail)) {}
};
struct NoZerosForZIP : ComputationError {
  NoZerosForZIP()
      : ComputationError("zero-inflated fit requires at least one zero count") {}
};
struct ShapeMismatch : ValidationError {
  explicit ShapeMismatch(const std::string& detail)
      : ValidationError("shape mismatch: " + detail) {}
};

// mcmc
struct ChainDiverged : ComputationError {
  explicit ChainDiverged(const std::string& detail = "")
      : ComputationError("MCMC chain reached a non-finite state" +
                         (detail.empty() ? "" : ": " + detail)) {}
};
struct InsufficientDraws : ValidationError {
  explicit InsufficientDraws(const std::string& detail)
      : ValidationError("insufficient posterior draws: " + detail) {}
};
struct ConfigError : ValidationError {
  explicit ConfigError(const std::string& detail)
      : ValidationError("invalid configuration: " + detail) {}
};

// selection
struct AllFitsFailed : ComputationError {
  explicit AllFitsFailed(const std::string& detail = "")
      : ComputationError("no model could be fitted" +
                         (detail.empty() ? "" : ": " + detail)) {}
};

}  // namespace zinc

#endif  // ZINC_ERRORS_HPP
