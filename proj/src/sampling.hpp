#pragma once

#include <cstdint>
#include <vector>

namespace ppreg {

struct DistributionParams {
  double alpha;  // scale > 0
  double beta;   // shape > 0
};

struct LocScaleParams {
  double mu;
  double sigma;  // > 0
};

void validate(const DistributionParams& p);
void validate(const LocScaleParams& p);

// SplitMix64 (Vigna's published constants).  Integer-only state updates, so
// streams are bit-identical across platforms and build modes.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0,1); exact endpoints are rejected so the
  // logit / log(-log) transforms stay finite.
  double uniform_open01() {
    double u;
    do {
      u = uniform01();
    } while (u <= 0.0);
    return u;
  }

 private:
  std::uint64_t state_;
};

// SplitMix64 finalizer, used as a 64-bit mixer for substream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent substream for (seed, stream).  Distinct stream ids give
// decorrelated generators; the same pair always gives the same stream.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(mix64(seed + 0x9E3779B97F4A7C15ull) ^
                    mix64(stream ^ 0xD1B54A32D192ED03ull));
}

// Stream-id tags keep unrelated operations decorrelated when callers reuse
// one seed.  Per-replication ids are tag | replication index.
inline constexpr std::uint64_t kStreamSample = 0x53414D50ull << 32;
inline constexpr std::uint64_t kStreamCovariance = 0x4D43434Full << 32;
inline constexpr std::uint64_t kStreamBootstrap = 0x424F4F54ull << 32;

// Inverse CDFs; u must lie in (0,1).
double loglogistic_quantile(const DistributionParams& p, double u);
double weibull_quantile(const DistributionParams& p, double u);
double logistic_quantile(const LocScaleParams& p, double u);

// Draw n values using the given generator (one uniform per draw, in order).
std::vector<double> sample_loglogistic(const DistributionParams& p, int n,
                                       SplitMix64& rng);
std::vector<double> sample_weibull(const DistributionParams& p, int n,
                                   SplitMix64& rng);
std::vector<double> sample_logistic(const LocScaleParams& p, int n,
                                    SplitMix64& rng);

// Seed-keyed convenience wrappers; identical (params, n, seed) inputs return
// bit-identical vectors.
std::vector<double> sample_loglogistic(const DistributionParams& p, int n,
                                       std::uint64_t seed);
std::vector<double> sample_weibull(const DistributionParams& p, int n,
                                   std::uint64_t seed);
std::vector<double> sample_logistic(const LocScaleParams& p, int n,
                                    std::uint64_t seed);

}  // namespace ppreg
