#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace disom {

/// Version of the (seed, bytes) -> uniform mapping. Any change to the hash,
/// the key schedule or the word-to-real conversion must bump this number,
/// since landscapes are only reproducible within one version.
inline constexpr std::uint32_t kPrfVersion = 1;

struct Hash128 {
  std::uint64_t first;   // bytes 0..7 of the SipHash-128 digest, little endian
  std::uint64_t second;  // bytes 8..15
  friend bool operator==(const Hash128&, const Hash128&) = default;
};

/// Reference SipHash-2-4 with 64-bit output.
std::uint64_t siphash24_64(std::uint64_t k0, std::uint64_t k1,
                           std::span<const std::uint8_t> message) noexcept;

/// Reference SipHash-2-4 with 128-bit output.
Hash128 siphash24_128(std::uint64_t k0, std::uint64_t k1,
                      std::span<const std::uint8_t> message) noexcept;

/// Keyed pseudorandom function, version kPrfVersion:
/// SipHash-2-4-128 under the key (seed, seed ^ 0x6469736f6d2d7631).
class KeyedPrf {
 public:
  explicit KeyedPrf(std::uint64_t seed) noexcept;

  Hash128 operator()(std::span<const std::uint8_t> message) const noexcept {
    return siphash24_128(k0_, k1_, message);
  }

  std::uint64_t seed() const noexcept { return k0_; }

 private:
  std::uint64_t k0_;
  std::uint64_t k1_;
};

/// Maps a 64-bit word to a real strictly inside (0, 1): the top 53 bits are
/// scaled by 2^-53 (w / 2^64 truncated to double precision) and a zero result
/// is replaced by the smallest positive step 2^-53.
inline double to_open_unit(std::uint64_t word) noexcept {
  const std::uint64_t top = word >> 11;
  constexpr double step = 0x1.0p-53;
  return top == 0 ? step : static_cast<double>(top) * step;
}

/// Derives a child seed from (master, tag, a, b). The message is
/// tag bytes || 0x00 || a (8 bytes BE) || b (8 bytes BE); the first digest
/// word is returned.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t a,
                          std::uint64_t b) noexcept;

}  // namespace disom
