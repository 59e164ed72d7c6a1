#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "disom/landscape.hpp"
#include "disom/search_point.hpp"

// Exact combinatorial reference values, used to validate the stochastic parts.
namespace disom::oracle {

using BigInt = boost::multiprecision::cpp_int;

/// Focal point with k zero bits out of n; exactly ell bits flip; gain of at
/// least t one-bits is asked for.
struct LayerQuery {
  unsigned n = 0;
  unsigned k = 0;
  unsigned ell = 1;
  unsigned t = 0;
};

/// C(n, r) exactly; 0 when r > n.
BigInt binomial(unsigned n, unsigned r);

/// Pr[Om(y) >= Om(x) + t | exactly ell uniformly chosen bits of x flip]
///   = sum_{i = ceil((ell + t) / 2)}^{ell} C(k, i) C(n - k, ell - i) / C(n, ell),
/// summed exactly and converted to double once. Throws ParameterError unless
/// 0 <= k <= n and 1 <= ell <= n.
double fitness_gain_prob(const LayerQuery& q);

/// Point mass Pr[Om(y) - Om(x) == gain | ell bits flip], gain in [-ell, ell].
double fitness_gain_point_mass(unsigned n, unsigned k, unsigned ell, int gain);

/// |H_ell(x)| = C(n, ell). Throws ParameterError if ell > n.
BigInt hamming_layer_size(unsigned n, unsigned ell);

struct LayerCensus {
  std::uint64_t distorted = 0;
  BigInt total = 0;
};

inline constexpr std::uint64_t kMaxCensusLayer = 10'000'000;

/// Evaluates every point at Hamming distance exactly ell from x. Throws
/// ResourceError when C(n, ell) > kMaxCensusLayer, DimensionError on a
/// length mismatch.
LayerCensus brute_force_layer_census(const FrozenLandscape& landscape, const SearchPoint& x,
                                     unsigned ell);

}  // namespace disom::oracle
