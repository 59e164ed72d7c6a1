#include "disom/landscape.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "disom/errors.hpp"

namespace disom {

FrozenLandscape::FrozenLandscape(std::size_t n, double p, DistortionSpec dist, std::uint64_t seed)
    : n_(n), p_(p), dist_(dist), prf_(seed) {
  if (n == 0 || n > std::numeric_limits<std::uint32_t>::max()) {
    throw ParameterError("landscape size n must be in [1, 2^32)");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("distortion probability p must lie in [0, 1]");
}

FitnessValue FrozenLandscape::evaluate(const SearchPoint& x) const {
  if (x.size() != n_) {
    throw DimensionError("point of length " + std::to_string(x.size()) +
                         " evaluated on landscape with n = " + std::to_string(n_));
  }
  return evaluate_with_om(x, onemax(x));
}

FitnessValue FrozenLandscape::evaluate_with_om(const SearchPoint& x, std::size_t om) const {
  FitnessValue fit;
  fit.om = om;
  fit.total = static_cast<double>(om);
  if (p_ <= 0.0) return fit;

  constexpr std::size_t kInline = 256;
  const std::size_t len = x.encoded_size();
  std::array<std::uint8_t, kInline> inline_buf;
  std::vector<std::uint8_t> heap_buf;
  std::span<std::uint8_t> bytes;
  if (len <= kInline) {
    bytes = std::span<std::uint8_t>(inline_buf.data(), len);
  } else {
    heap_buf.resize(len);
    bytes = heap_buf;
  }
  x.encode_into(bytes);

  const Hash128 h = prf_(bytes);
  if (to_open_unit(h.first) < p_) {
    fit.distorted = true;
    fit.distortion = sample(dist_, to_open_unit(h.second));
    fit.total += fit.distortion;
  }
  return fit;
}

}  // namespace disom
