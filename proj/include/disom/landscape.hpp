#pragma once

#include <cstddef>
#include <cstdint>

#include "disom/distributions.hpp"
#include "disom/prf.hpp"
#include "disom/search_point.hpp"

namespace disom {

struct FitnessValue {
  std::size_t om = 0;       // |x|_1
  bool distorted = false;
  double distortion = 0.0;  // 0 unless distorted
  double total = 0.0;       // om + distortion

  friend bool operator==(const FitnessValue&, const FitnessValue&) = default;
};

/// Frozen Distorted OneMax over {0,1}^n.
///
/// Each point x is distorted with probability p, and a distorted point
/// carries an additive bonus D ~ dist. Both draws come from the keyed PRF
/// applied to the canonical encoding of x:
///
///   (w1, w2) = SipHash-2-4-128(seed, encode(x))
///   distorted  iff  to_open_unit(w1) < p
///   D = sample(dist, to_open_unit(w2))
///
/// so the landscape is never materialized and every evaluation of the same
/// point returns the same value. Evaluation is const and thread safe.
class FrozenLandscape {
 public:
  FrozenLandscape(std::size_t n, double p, DistortionSpec dist, std::uint64_t seed);

  std::size_t n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  const DistortionSpec& distribution() const noexcept { return dist_; }
  std::uint64_t seed() const noexcept { return prf_.seed(); }

  /// Throws DimensionError if x.size() != n().
  FitnessValue evaluate(const SearchPoint& x) const;

  /// Same as evaluate() with Om(x) supplied by the caller (the EA tracks it
  /// incrementally). `om` must equal onemax(x).
  FitnessValue evaluate_with_om(const SearchPoint& x, std::size_t om) const;

 private:
  std::size_t n_;
  double p_;
  DistortionSpec dist_;
  KeyedPrf prf_;
};

}  // namespace disom
