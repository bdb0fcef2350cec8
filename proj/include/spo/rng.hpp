#pragma once
#include <cmath>
#include <cstdint>
#include <random>

#include "spo/error.hpp"

namespace spo {

// Seeded random source with fully specified output. The engine is
// std::mt19937_64 (bit-exact by the standard); the distribution transforms
// are done here by hand because std::normal_distribution and
// std::uniform_int_distribution are implementation-defined and would break
// the bit-identical-rebuild contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on the open interval (0,1), 53-bit resolution. The +0.5 keeps
  // 0 and 1 unreachable so the normal inverse CDF stays finite.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Acklam's rational approximation of the inverse
  // normal CDF (relative error < 1.2e-9, plenty for initialization draws).
  // Consumes exactly one engine output per draw.
  double normal() { return inverse_normal_cdf(uniform()); }

  double normal(double sigma) { return sigma * normal(); }

  // Unbiased integer in [0, n) by rejection.
  std::size_t below(std::size_t n) {
    if (n == 0) throw UsageError("Rng::below: n must be positive");
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % span);
  }

  static double inverse_normal_cdf(double p) {
    // Acklam 2003 coefficients.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    static constexpr double p_low = 0.02425;

    if (!(p > 0.0 && p < 1.0)) throw NumericError("inverse_normal_cdf: p outside (0,1)");
    if (p < p_low) {
      const double q = std::sqrt(-2.0 * std::log(p));
      return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
      const double q = p - 0.5;
      const double r = q * q;
      return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
             (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace spo
