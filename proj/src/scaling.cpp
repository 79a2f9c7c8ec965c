#include "zinc/scaling.hpp"

#include <cmath>

#include "zinc/errors.hpp"

namespace zinc {

Vector ColumnScaling::unscale(const Vector& coef) const {
  Vector raw = coef;
  for (std::size_t c = 1; c < coef.size(); ++c) {
    raw[c] = coef[c] / scale[c];
    raw[0] -= coef[c] * center[c] / scale[c];
  }
  return raw;
}

Vector ColumnScaling::rescale(const Vector& coef) const {
  Vector scaled = coef;
  for (std::size_t c = 1; c < coef.size(); ++c) {
    scaled[c] = coef[c] * scale[c];
    scaled[0] += coef[c] * center[c];
  }
  return scaled;
}

ColumnScaling standardize_columns(Matrix& M) {
  const std::size_t n = M.rows();
  const std::size_t p = M.cols();
  ColumnScaling s;
  s.center.assign(p, 0.0);
  s.scale.assign(p, 1.0);
  for (std::size_t c = 1; c < p; ++c) {
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += M(j, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = M(j, c) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd > 1e-300) {
      s.center[c] = mean;
      s.scale[c] = sd;
      for (std::size_t j = 0; j < n; ++j) M(j, c) = (M(j, c) - mean) / sd;
    }
    // constant columns are left raw; the rank check flags them
  }
  return s;
}

ScaledDesign scale_design(const DesignMatrices& dm) {
  ScaledDesign out;
  out.dm = dm;
  out.x_scaling = standardize_columns(out.dm.X);
  if (out.dm.Z) out.z_scaling = standardize_columns(*out.dm.Z);
  return out;
}

namespace {

void rank_check(const Matrix& M, const char* which) {
  try {
    const Matrix gram = xtwx(M);
    solve_linear(gram, Vector(M.cols(), 0.0));
  } catch (const SingularMatrix&) {
    throw SingularDesign(which);
  }
}

}  // namespace

void check_design_rank(const DesignMatrices& scaled_dm) {
  rank_check(scaled_dm.X, "count component");
  if (scaled_dm.Z) rank_check(*scaled_dm.Z, "zero component");
}

}  // namespace zinc
