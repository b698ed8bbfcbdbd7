#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace vaxkit {

/// FNV-1a 64-bit over bytes. Stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// 16 lowercase hex digits.
std::string to_hex64(std::uint64_t value);

/// CRC-32 (IEEE 802.3 polynomial) over bytes.
std::uint32_t crc32(std::span<const unsigned char> bytes);

/// Tiny deterministic PRNG stream (splitmix64). Used where bit-stable
/// sequences are required independent of the standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform double in [0, 1), 53 bits of entropy.
  double next_unit();

  /// Uniform double in [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace vaxkit
