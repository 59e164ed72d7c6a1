#include "disom/prf.hpp"

#include <bit>
#include <vector>

namespace disom {

namespace {

constexpr std::uint64_t kKeyTweak = 0x6469736f6d2d7631ULL;  // "disom-v1"

inline std::uint64_t load_le64(const std::uint8_t* p) noexcept {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

struct SipState {
  std::uint64_t v0, v1, v2, v3;

  void round() noexcept {
    v0 += v1;
    v1 = std::rotl(v1, 13);
    v1 ^= v0;
    v0 = std::rotl(v0, 32);
    v2 += v3;
    v3 = std::rotl(v3, 16);
    v3 ^= v2;
    v0 += v3;
    v3 = std::rotl(v3, 21);
    v3 ^= v0;
    v2 += v1;
    v1 = std::rotl(v1, 17);
    v1 ^= v2;
    v2 = std::rotl(v2, 32);
  }

  void compress(std::uint64_t m) noexcept {
    v3 ^= m;
    round();
    round();
    v0 ^= m;
  }
};

SipState absorb(std::uint64_t k0, std::uint64_t k1, std::span<const std::uint8_t> message,
                bool wide) noexcept {
  SipState s{k0 ^ 0x736f6d6570736575ULL, k1 ^ 0x646f72616e646f6dULL,
             k0 ^ 0x6c7967656e657261ULL, k1 ^ 0x7465646279746573ULL};
  if (wide) s.v1 ^= 0xee;

  const std::size_t len = message.size();
  const std::uint8_t* p = message.data();
  const std::size_t whole = len & ~std::size_t{7};
  for (std::size_t i = 0; i < whole; i += 8) s.compress(load_le64(p + i));

  std::uint64_t last = static_cast<std::uint64_t>(len & 0xff) << 56;
  for (std::size_t i = 0; i < (len & 7); ++i) {
    last |= static_cast<std::uint64_t>(p[whole + i]) << (8 * i);
  }
  s.compress(last);
  return s;
}

}  // namespace

std::uint64_t siphash24_64(std::uint64_t k0, std::uint64_t k1,
                           std::span<const std::uint8_t> message) noexcept {
  SipState s = absorb(k0, k1, message, false);
  s.v2 ^= 0xff;
  for (int i = 0; i < 4; ++i) s.round();
  return s.v0 ^ s.v1 ^ s.v2 ^ s.v3;
}

Hash128 siphash24_128(std::uint64_t k0, std::uint64_t k1,
                      std::span<const std::uint8_t> message) noexcept {
  SipState s = absorb(k0, k1, message, true);
  s.v2 ^= 0xee;
  for (int i = 0; i < 4; ++i) s.round();
  const std::uint64_t first = s.v0 ^ s.v1 ^ s.v2 ^ s.v3;
  s.v1 ^= 0xdd;
  for (int i = 0; i < 4; ++i) s.round();
  const std::uint64_t second = s.v0 ^ s.v1 ^ s.v2 ^ s.v3;
  return {first, second};
}

KeyedPrf::KeyedPrf(std::uint64_t seed) noexcept : k0_(seed), k1_(seed ^ kKeyTweak) {}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t a,
                          std::uint64_t b) noexcept {
  std::vector<std::uint8_t> msg(tag.begin(), tag.end());
  msg.push_back(0);
  for (std::uint64_t word : {a, b}) {
    for (int shift = 56; shift >= 0; shift -= 8) {
      msg.push_back(static_cast<std::uint8_t>(word >> shift));
    }
  }
  return KeyedPrf(master)(msg).first;
}

}  // namespace disom
