#ifndef ZINC_RNG_HPP
#define ZINC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace zinc {

// Reproducible random source. The engine is std::mt19937_64 (bit-exact across
// platforms per the C++ standard) and every transform below is implemented
// here rather than delegated to std::*_distribution, whose output is
// implementation-defined. Draw sequences are therefore stable for a given
// seed on any conforming compiler.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0, 1]: ((x >> 11) + 1) * 2^-53.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; the paired draw is cached, so normals come two per transform.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  bool bernoulli(double p) { return uniform() <= p; }

  // CDF inversion by sequential search, chunked so the running product never
  // underflows: Poisson(a + b) = Poisson(a) + Poisson(b).
  long long poisson(double lambda) {
    long long total = 0;
    while (lambda > 30.0) {
      total += poisson_small(30.0);
      lambda -= 30.0;
    }
    return total + poisson_small(lambda);
  }

  // Marsaglia-Tsang squeeze; shape < 1 boosted through Gamma(shape + 1).
  double gamma(double shape, double scale) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
  }

  // NB2 with mean mu and size theta as a Gamma-Poisson mixture.
  long long neg_binomial(double mu, double theta) {
    return poisson(gamma(theta, mu / theta));
  }

private:
  long long poisson_small(double lambda) {
    if (lambda <= 0.0) return 0;
    const double u = uniform();
    double p = std::exp(-lambda);
    double cdf = p;
    long long k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace zinc

#endif  // ZINC_RNG_HPP
