#include "xlradr/engine/rng.h"

namespace xlradr {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream RngStream::Substream(std::string_view name, std::uint64_t index) const {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a over the name
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return RngStream(SplitMix64(SplitMix64(m_seed ^ h) + index));
}

std::uint64_t RngStream::Below(std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = m_engine();
  } while (v >= limit);
  return v % n;
}

}  // namespace xlradr
