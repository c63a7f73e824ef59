#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace polarize {

// splitmix64 finalizer, used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

/// Derives the seed of substream (a, b, c) of a master seed.
///
/// All randomized components draw from substreams keyed this way, so draws
/// for one node / restart / grid cell do not depend on the order in which
/// the others are processed. The chain is frozen: changing it changes every
/// generated instance.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (a + kGolden));
  h = mix64(h ^ (b + kGolden));
  h = mix64(h ^ (c + kGolden));
  return h;
}

// Substream tags. Tag values are part of the frozen draw discipline.
inline constexpr std::uint64_t kStreamNodeSide = 1;   // generator pass 1, index = node
inline constexpr std::uint64_t kStreamNodeEdges = 2;  // generator pass 2, index = node
inline constexpr std::uint64_t kStreamRestart = 3;    // local search, index = restart
inline constexpr std::uint64_t kStreamBenchLs = 4;    // bench: LS solve seed per cell

/// Deterministic random stream: mt19937_64 plus fixed mappings to doubles,
/// so results do not depend on the standard library's distribution
/// implementations. One engine output per next_u64/next_bool call; next_unit
/// consumes one output; next_normal consumes two per polar iteration and
/// discards the spare.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  bool next_bool() { return (eng_() >> 63) != 0; }

  /// Uniform in [0, 1) with 53 random mantissa bits.
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Masked rejection; n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    assert(n > 0);
    if (n == 1) return 0;
    const std::uint64_t mask = mask_for(n - 1);
    std::uint64_t v;
    do {
      v = eng_() & mask;
    } while (v >= n);
    return v;
  }

  /// Standard normal draw (Marsaglia polar method, spare discarded).
  double next_normal() {
    double u, v, q;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    return u * std::sqrt(-2.0 * std::log(q) / q);
  }

 private:
  static std::uint64_t mask_for(std::uint64_t x) {
    std::uint64_t m = x;
    m |= m >> 1;
    m |= m >> 2;
    m |= m >> 4;
    m |= m >> 8;
    m |= m >> 16;
    m |= m >> 32;
    return m;
  }

  std::mt19937_64 eng_;
};

/// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Standard normal quantile. Acklam's rational approximation refined with
/// one Halley step; accurate to ~1e-15 away from the extreme tails.
inline double normal_quantile(double p) {
  assert(p > 0.0 && p < 1.0);
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
  constexpr double plow = 0.02425;

  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement against the exact CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

inline constexpr int kTruncnormRejectionCap = 64;

/// One draw from the normal(mu, sigma) distribution conditioned on [a, b].
/// (mu, sigma) are the parent parameters, not the truncated moments.
///
/// Rejection sampling against the parent normal, capped at
/// kTruncnormRejectionCap iterations; afterwards one inverse-CDF draw, so the
/// call always terminates. Requires a < b and sigma > 0.
inline double sample_truncnorm(Rng& rng, double a, double b, double mu,
                               double sigma) {
  assert(a < b && sigma > 0.0);
  const double lo = (a - mu) / sigma;
  const double hi = (b - mu) / sigma;
  for (int it = 0; it < kTruncnormRejectionCap; ++it) {
    const double z = rng.next_normal();
    if (z >= lo && z <= hi) return std::clamp(mu + sigma * z, a, b);
  }
  const double pa = normal_cdf(lo);
  const double pb = normal_cdf(hi);
  double p = pa + rng.next_unit() * (pb - pa);
  p = std::clamp(p, std::numeric_limits<double>::min(),
                 1.0 - std::numeric_limits<double>::epsilon());
  const double z = std::clamp(normal_quantile(p), lo, hi);
  return std::clamp(mu + sigma * z, a, b);
}

}  // namespace polarize
