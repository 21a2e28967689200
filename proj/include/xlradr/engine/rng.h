#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace xlradr {

// mt19937_64 with hand-rolled variate mapping: the standard distributions are
// implementation-defined, so they would break cross-platform trace identity.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : m_seed(seed), m_engine(seed) {}

  // Independent stream derived from (seed, name, index).
  RngStream Substream(std::string_view name, std::uint64_t index = 0) const;

  std::uint64_t seed() const { return m_seed; }
  std::uint64_t NextU64() { return m_engine(); }
  // [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n); n > 0.
  std::uint64_t Below(std::uint64_t n);

 private:
  std::uint64_t m_seed;
  std::mt19937_64 m_engine;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace xlradr
