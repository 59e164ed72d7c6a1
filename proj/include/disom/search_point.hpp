#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace disom {

/// Fixed-length bit string x in {0,1}^n.
class SearchPoint {
 public:
  SearchPoint() = default;
  explicit SearchPoint(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  /// Bit i of the point is character i of `bits` ('0' or '1').
  static SearchPoint from_string(std::string_view bits);
  static SearchPoint ones(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
  }
  /// Flips bit i and returns its new value.
  bool flip(std::size_t i) noexcept {
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    return get(i);
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }
  /// Clears storage bits past n (after bulk word writes).
  void clear_padding() noexcept;

  /// Canonical PRF input: 32-bit n big endian, then the bits packed
  /// MSB-first (bit 0 -> MSB of byte 0), zero padded to a whole byte.
  std::vector<std::uint8_t> encode() const;
  /// Writes encode() into `out` (size must be encoded_size()).
  void encode_into(std::span<std::uint8_t> out) const noexcept;
  std::size_t encoded_size() const noexcept { return 4 + (n_ + 7) / 8; }

  std::string to_string() const;

  friend bool operator==(const SearchPoint&, const SearchPoint&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Om(x): number of one bits.
std::size_t onemax(const SearchPoint& x) noexcept;

/// Zm(x) = n - Om(x).
inline std::size_t zeromax(const SearchPoint& x) noexcept { return x.size() - onemax(x); }

/// H(x, y). Throws DimensionError on length mismatch.
std::size_t hamming_distance(const SearchPoint& x, const SearchPoint& y);

}  // namespace disom
