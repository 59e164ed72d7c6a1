#include "disom/search_point.hpp"

#include <array>
#include <bit>
#include <limits>

#include "disom/errors.hpp"

namespace disom {

namespace {

constexpr std::array<std::uint8_t, 256> make_reverse_table() {
  std::array<std::uint8_t, 256> table{};
  for (unsigned v = 0; v < 256; ++v) {
    unsigned r = 0;
    for (unsigned b = 0; b < 8; ++b) {
      if (v & (1U << b)) r |= 1U << (7 - b);
    }
    table[v] = static_cast<std::uint8_t>(r);
  }
  return table;
}

constexpr auto kReverse = make_reverse_table();

}  // namespace

SearchPoint SearchPoint::from_string(std::string_view bits) {
  SearchPoint x(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      x.set(i, true);
    } else if (bits[i] != '0') {
      throw ParseError("search point strings may only contain '0' and '1'");
    }
  }
  return x;
}

SearchPoint SearchPoint::ones(std::size_t n) {
  SearchPoint x(n);
  for (auto& w : x.words_) w = ~std::uint64_t{0};
  x.clear_padding();
  return x;
}

void SearchPoint::clear_padding() noexcept {
  if (n_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }
}

void SearchPoint::encode_into(std::span<std::uint8_t> out) const noexcept {
  const auto n32 = static_cast<std::uint32_t>(n_);
  out[0] = static_cast<std::uint8_t>(n32 >> 24);
  out[1] = static_cast<std::uint8_t>(n32 >> 16);
  out[2] = static_cast<std::uint8_t>(n32 >> 8);
  out[3] = static_cast<std::uint8_t>(n32);
  const std::size_t bytes = (n_ + 7) / 8;
  for (std::size_t j = 0; j < bytes; ++j) {
    const auto raw = static_cast<std::uint8_t>(words_[j >> 3] >> (8 * (j & 7)));
    out[4 + j] = kReverse[raw];
  }
}

std::vector<std::uint8_t> SearchPoint::encode() const {
  std::vector<std::uint8_t> out(encoded_size());
  encode_into(out);
  return out;
}

std::string SearchPoint::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::size_t onemax(const SearchPoint& x) noexcept {
  std::size_t count = 0;
  for (auto w : x.words()) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

std::size_t hamming_distance(const SearchPoint& x, const SearchPoint& y) {
  if (x.size() != y.size()) {
    throw DimensionError("hamming_distance: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()) + " differ");
  }
  std::size_t count = 0;
  const auto a = x.words();
  const auto b = y.words();
  for (std::size_t i = 0; i < a.size(); ++i) {
    count += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  }
  return count;
}

}  // namespace disom
