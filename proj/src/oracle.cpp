#include "disom/oracle.hpp"

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "disom/errors.hpp"

namespace disom::oracle {

namespace {

using Rational = boost::multiprecision::cpp_rational;

void check_query(unsigned n, unsigned k, unsigned ell) {
  if (k > n) throw ParameterError("layer query needs 0 <= k <= n");
  if (ell < 1 || ell > n) throw ParameterError("layer query needs 1 <= ell <= n");
}

double ratio(const BigInt& num, const BigInt& den) {
  return Rational(num, den).convert_to<double>();
}

}  // namespace

BigInt binomial(unsigned n, unsigned r) {
  if (r > n) return 0;
  if (r > n - r) r = n - r;
  BigInt c = 1;
  for (unsigned i = 0; i < r; ++i) {
    c *= n - i;
    c /= i + 1;  // exact: c is C(n, i + 1) after this step
  }
  return c;
}

double fitness_gain_prob(const LayerQuery& q) {
  check_query(q.n, q.k, q.ell);
  if (q.t > q.ell) return 0.0;
  // Flipping i zero-bits and ell - i one-bits changes Om by 2i - ell.
  const unsigned first = (q.ell + q.t + 1) / 2;
  BigInt num = 0;
  for (unsigned i = first; i <= q.ell; ++i) {
    num += binomial(q.k, i) * binomial(q.n - q.k, q.ell - i);
  }
  return ratio(num, binomial(q.n, q.ell));
}

double fitness_gain_point_mass(unsigned n, unsigned k, unsigned ell, int gain) {
  check_query(n, k, ell);
  const int twice_i = gain + static_cast<int>(ell);
  if (twice_i < 0 || twice_i % 2 != 0 || twice_i / 2 > static_cast<int>(ell)) return 0.0;
  const auto i = static_cast<unsigned>(twice_i / 2);
  return ratio(binomial(k, i) * binomial(n - k, ell - i), binomial(n, ell));
}

BigInt hamming_layer_size(unsigned n, unsigned ell) {
  if (ell > n) throw ParameterError("hamming layer needs 0 <= ell <= n");
  return binomial(n, ell);
}

LayerCensus brute_force_layer_census(const FrozenLandscape& landscape, const SearchPoint& x,
                                     unsigned ell) {
  if (x.size() != landscape.n()) {
    throw DimensionError("census point length does not match landscape n");
  }
  const auto n = static_cast<unsigned>(x.size());
  const BigInt size = hamming_layer_size(n, ell);
  if (size > kMaxCensusLayer) {
    throw ResourceError("layer C(" + std::to_string(n) + ", " + std::to_string(ell) + ") = " +
                        size.str() + " exceeds the census bound of " +
                        std::to_string(kMaxCensusLayer) + " points");
  }

  LayerCensus census;
  census.total = size;

  // Lexicographic enumeration of ell-subsets of [0, n).
  std::vector<unsigned> idx(ell);
  for (unsigned i = 0; i < ell; ++i) idx[i] = i;
  SearchPoint y = x;
  const std::size_t om_x = onemax(x);
  while (true) {
    std::ptrdiff_t delta = 0;
    for (unsigned i : idx) delta += y.flip(i) ? 1 : -1;
    const auto om = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(om_x) + delta);
    if (landscape.evaluate_with_om(y, om).distorted) ++census.distorted;
    for (unsigned i : idx) y.flip(i);

    // Advance to the next subset.
    int pos = static_cast<int>(ell) - 1;
    while (pos >= 0 && idx[static_cast<unsigned>(pos)] == n - ell + static_cast<unsigned>(pos)) {
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<unsigned>(pos)];
    for (unsigned j = static_cast<unsigned>(pos) + 1; j < ell; ++j) idx[j] = idx[j - 1] + 1;
  }
  return census;
}

}  // namespace disom::oracle
