#include "disom/ea.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "disom/errors.hpp"
#include "disom/format.hpp"

namespace disom {

std::string_view variant_name(Variant v) noexcept {
  return v == Variant::Plus ? "plus" : "comma";
}

Variant parse_variant(std::string_view name) {
  if (name == "plus") return Variant::Plus;
  if (name == "comma") return Variant::Comma;
  throw ParseError("unknown algorithm '" + std::string(name) + "' (expected plus or comma)");
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw UsageError("uniform_below: bound must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

void EAConfig::validate() const {
  if (lambda < 1) throw ParameterError("lambda must be >= 1");
  if (n < 1) throw ParameterError("n must be >= 1");
  const double r = rate();
  if (!(r > 0.0 && r <= 1.0)) throw ParameterError("mutation rate must lie in (0, 1]");
  if (!(kstar >= 0.0) || !(kstar < static_cast<double>(n)))
    throw ParameterError("kstar must satisfy 0 <= kstar < n");
}

BitMutation::BitMutation(double rate) : rate_(rate), log_keep_(std::log1p(-rate)) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ParameterError("mutation rate must lie in (0, 1]");
}

BitMutation::Outcome BitMutation::apply(const SearchPoint& parent, SearchPoint& child,
                                        Rng& rng) const {
  child = parent;
  Outcome out;
  const std::size_t n = parent.size();
  auto flip_at = [&](std::size_t i) {
    ++out.flips;
    out.om_delta += child.flip(i) ? 1 : -1;
  };

  if (rate_ >= 1.0) {
    for (std::size_t i = 0; i < n; ++i) flip_at(i);
    return out;
  }

  // Number of untouched bits before the next flip is Geometric(rate).
  std::size_t pos = 0;
  while (true) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    const double gap = std::floor(std::log(u) / log_keep_);
    if (gap >= static_cast<double>(n - pos)) break;
    pos += static_cast<std::size_t>(gap);
    flip_at(pos);
    ++pos;
    if (pos >= n) break;
  }
  return out;
}

SearchPoint mutate(const SearchPoint& x, double rate, Rng& rng) {
  SearchPoint child;
  BitMutation(rate).apply(x, child, rng);
  return child;
}

std::size_t select_best(std::span<const FitnessValue> fitness, Rng& rng) {
  if (fitness.empty()) throw UsageError("select_best: empty offspring list");
  std::size_t best = 0;
  std::uint64_t ties = 1;
  for (std::size_t i = 1; i < fitness.size(); ++i) {
    if (fitness[i].total > fitness[best].total) {
      best = i;
      ties = 1;
    } else if (fitness[i].total == fitness[best].total) {
      // Reservoir sampling over the tied maxima seen so far.
      ++ties;
      if (uniform_below(rng, ties) == 0) best = i;
    }
  }
  return best;
}

namespace {

void breed(const Individual& parent, const FrozenLandscape& landscape, const EAConfig& config,
           Rng& rng, Generation& g) {
  const BitMutation mutation(config.rate());
  g.offspring.resize(config.lambda);
  g.fitness.resize(config.lambda);
  g.flips.resize(config.lambda);
  for (std::size_t i = 0; i < config.lambda; ++i) {
    const auto out = mutation.apply(parent.point, g.offspring[i], rng);
    g.flips[i] = out.flips;
    if (out.flips == 0) {
      // A clone; the landscape is frozen, so its value is the parent's.
      g.fitness[i] = parent.fitness;
    } else {
      const auto om = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(parent.fitness.om) +
                                               out.om_delta);
      g.fitness[i] = landscape.evaluate_with_om(g.offspring[i], om);
    }
  }
  g.chosen = select_best(g.fitness, rng);
}

}  // namespace

StepOutcome step_plus(Individual& parent, const FrozenLandscape& landscape, const EAConfig& config,
                      Rng& rng, Generation& scratch) {
  breed(parent, landscape, config, rng, scratch);
  const std::size_t i = scratch.chosen;
  StepOutcome out;
  if (scratch.fitness[i].total >= parent.fitness.total) {
    out.accepted = true;
    out.moved = scratch.flips[i] > 0;
    if (out.moved) {
      parent.point = scratch.offspring[i];
      parent.fitness = scratch.fitness[i];
    }
  }
  return out;
}

StepOutcome step_comma(Individual& parent, const FrozenLandscape& landscape,
                       const EAConfig& config, Rng& rng, Generation& scratch) {
  breed(parent, landscape, config, rng, scratch);
  const std::size_t i = scratch.chosen;
  StepOutcome out;
  out.accepted = true;
  out.moved = scratch.flips[i] > 0;
  if (out.moved) {
    parent.point = scratch.offspring[i];
    parent.fitness = scratch.fitness[i];
  }
  return out;
}

RunResult run(const FrozenLandscape& landscape, const EAConfig& config) {
  config.validate();
  if (landscape.n() != config.n) {
    throw DimensionError("config n = " + std::to_string(config.n) +
                         " does not match landscape n = " + std::to_string(landscape.n()));
  }

  Rng rng(config.rng_seed);
  Individual parent{SearchPoint(config.n), {}};
  for (auto& w : parent.point.words()) w = rng();
  parent.point.clear_padding();
  parent.fitness = landscape.evaluate(parent.point);

  RunResult result;
  auto record = [&](std::uint64_t gen, bool accepted) {
    result.trace.push_back({gen, parent.fitness.om, parent.fitness.distortion,
                            parent.fitness.total, accepted});
  };
  record(0, false);

  const double target = config.target();
  const auto step = config.variant == Variant::Plus ? &step_plus : &step_comma;
  Generation scratch;
  std::uint64_t gen = 0;
  while (parent.fitness.total < target && gen < config.cutoff_generations) {
    const StepOutcome out = step(parent, landscape, config, rng, scratch);
    ++gen;
    for (auto f : scratch.flips) result.max_flips = std::max(result.max_flips, f);
    if (config.dense_trace || out.moved) record(gen, out.moved);
  }
  if (result.trace.back().generation != gen) record(gen, false);

  result.success = parent.fitness.total >= target;
  result.om_target_reached = static_cast<double>(parent.fitness.om) >= target;
  result.generations = gen;
  result.evaluations = 1 + static_cast<std::uint64_t>(config.lambda) * gen;
  result.final = parent.fitness;
  result.final_point = std::move(parent.point);
  return result;
}

std::string trace_csv(const RunResult& result, unsigned lambda) {
  std::ostringstream out;
  out << "generation,evaluations,om,distortion,total,accepted\n";
  for (const auto& e : result.trace) {
    out << e.generation << ',' << (1 + static_cast<std::uint64_t>(lambda) * e.generation) << ','
        << e.om << ',' << format_real(e.distortion) << ',' << format_real(e.total) << ','
        << (e.accepted ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace disom
