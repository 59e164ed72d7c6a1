#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disom/landscape.hpp"
#include "disom/search_point.hpp"

namespace disom {

enum class Variant { Plus, Comma };

std::string_view variant_name(Variant v) noexcept;  // "plus" / "comma"
Variant parse_variant(std::string_view name);       // throws ParseError

/// Per-run random stream. mt19937_64 is fully specified by the standard, and
/// every conversion to reals or ranges below is done by hand, so a run is
/// reproducible across standard libraries.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound), exact (rejection sampling). bound > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

struct EAConfig {
  Variant variant = Variant::Comma;
  unsigned lambda = 1;
  std::size_t n = 1;
  double kstar = 0.0;                   // target: total fitness >= n - kstar
  std::optional<double> mutation_rate;  // defaults to 1/n
  std::uint64_t cutoff_generations = 1'000'000;
  std::uint64_t rng_seed = 0;
  bool dense_trace = false;  // record every generation instead of parent changes only

  /// Throws ParameterError unless lambda >= 1, 0 < rate <= 1, 0 <= kstar < n.
  void validate() const;
  double rate() const { return mutation_rate.value_or(1.0 / static_cast<double>(n)); }
  double target() const { return static_cast<double>(n) - kstar; }
};

/// Standard bit mutation: every bit flips independently with probability
/// `rate`. Flip positions are drawn by geometric skipping, which yields the
/// same distribution as n independent coin flips.
class BitMutation {
 public:
  explicit BitMutation(double rate);

  struct Outcome {
    std::size_t flips = 0;
    std::ptrdiff_t om_delta = 0;
  };

  /// child <- parent with mutated bits. child must not alias parent.
  Outcome apply(const SearchPoint& parent, SearchPoint& child, Rng& rng) const;

 private:
  double rate_;
  double log_keep_;  // log(1 - rate)
};

/// Returns a mutated copy of x; x itself is unchanged.
SearchPoint mutate(const SearchPoint& x, double rate, Rng& rng);

/// Index of the largest total; exact ties broken uniformly at random.
/// Throws UsageError on an empty list.
std::size_t select_best(std::span<const FitnessValue> fitness, Rng& rng);

struct Individual {
  SearchPoint point;
  FitnessValue fitness;
};

/// Scratch space for one generation. After a step it holds that generation's
/// offspring, their fitness, flip counts and the selected index.
struct Generation {
  std::vector<SearchPoint> offspring;
  std::vector<FitnessValue> fitness;
  std::vector<std::size_t> flips;
  std::size_t chosen = 0;
};

struct StepOutcome {
  bool accepted = false;  // the selected offspring replaced the parent
  bool moved = false;     // ... and differs from it (not a clone)
};

/// One (1+lambda) generation. Ties with the parent are accepted.
StepOutcome step_plus(Individual& parent, const FrozenLandscape& landscape, const EAConfig& config,
                      Rng& rng, Generation& scratch);

/// One (1,lambda) generation. The best offspring always replaces the parent.
StepOutcome step_comma(Individual& parent, const FrozenLandscape& landscape,
                       const EAConfig& config, Rng& rng, Generation& scratch);

struct TraceEvent {
  std::uint64_t generation = 0;
  std::size_t om = 0;
  double distortion = 0.0;
  double total = 0.0;
  bool accepted = false;  // the parent point changed in this generation

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct RunResult {
  bool success = false;            // total >= n - kstar before the cutoff
  bool om_target_reached = false;  // Om alone >= n - kstar at the end
  std::uint64_t generations = 0;
  std::uint64_t evaluations = 0;  // 1 + lambda * generations
  FitnessValue final;
  SearchPoint final_point;
  std::size_t max_flips = 0;  // largest number of bits flipped by one mutation
  std::vector<TraceEvent> trace;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Runs the configured EA from a uniform random start until the total
/// fitness reaches n - kstar or the generation cutoff is hit. Deterministic
/// in (landscape, config). Throws DimensionError if landscape.n() != config.n.
RunResult run(const FrozenLandscape& landscape, const EAConfig& config);

/// Trace as CSV: generation,evaluations,om,distortion,total,accepted
std::string trace_csv(const RunResult& result, unsigned lambda);

}  // namespace disom
