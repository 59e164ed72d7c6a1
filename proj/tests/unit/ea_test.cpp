#include "disom/ea.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "disom/errors.hpp"
#include "stat_helpers.hpp"

namespace disom {
namespace {

using testing::three_sigma;

FitnessValue plain(double total) { return {0, false, 0.0, total}; }

EAConfig config(Variant v, unsigned lambda, std::size_t n, double kstar = 0.0) {
  EAConfig c;
  c.variant = v;
  c.lambda = lambda;
  c.n = n;
  c.kstar = kstar;
  return c;
}

Individual individual(const FrozenLandscape& L, SearchPoint x) {
  auto f = L.evaluate(x);
  return {std::move(x), f};
}

TEST(Mutation, RateOneFlipsEverything) {
  Rng rng(1);
  const auto x = SearchPoint::from_string("0");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(mutate(x, 1.0, rng).to_string(), "1");
  const auto y = SearchPoint::from_string("0110");
  EXPECT_EQ(mutate(y, 1.0, rng).to_string(), "1001");
  EXPECT_EQ(y.to_string(), "0110");
}

TEST(Mutation, CloneProbability) {
  Rng rng(2);
  const SearchPoint x(100);
  const BitMutation m(0.01);
  SearchPoint child;
  const int trials = 1'000'000;
  int clones = 0;
  double flips = 0;
  for (int i = 0; i < trials; ++i) {
    const auto out = m.apply(x, child, rng);
    clones += out.flips == 0;
    flips += static_cast<double>(out.flips);
  }
  const double expected = std::pow(0.99, 100);
  EXPECT_NEAR(expected, 0.36603, 1e-5);
  EXPECT_NEAR(clones / double(trials), expected, three_sigma(expected, trials));
  // Binomial(100, 0.01): mean 1, variance 0.99.
  EXPECT_NEAR(flips / trials, 1.0, 3.0 * std::sqrt(0.99 / trials));
}

TEST(Mutation, FlipsAreIndependentPerPosition) {
  Rng rng(3);
  const std::size_t n = 20;
  const double rate = 0.15;
  const SearchPoint x(n);
  const BitMutation m(rate);
  SearchPoint child;
  std::vector<int> count(n, 0);
  const int trials = 200'000;
  int both01 = 0;
  for (int t = 0; t < trials; ++t) {
    const auto out = m.apply(x, child, rng);
    EXPECT_EQ(static_cast<std::size_t>(out.om_delta), onemax(child));
    for (std::size_t i = 0; i < n; ++i) count[i] += child.get(i);
    both01 += child.get(0) && child.get(1);
  }
  for (std::size_t i = 0; i < n; ++i)
    EXPECT_NEAR(count[i] / double(trials), rate, three_sigma(rate, trials) * 1.5) << i;
  EXPECT_NEAR(both01 / double(trials), rate * rate, three_sigma(rate * rate, trials) * 1.5);
}

TEST(Mutation, OmDeltaTracksDirection) {
  Rng rng(4);
  const auto x = SearchPoint::from_string("1100110011");
  const BitMutation m(0.3);
  SearchPoint child;
  for (int t = 0; t < 1000; ++t) {
    const auto out = m.apply(x, child, rng);
    EXPECT_EQ(static_cast<std::ptrdiff_t>(onemax(child)) - 6, out.om_delta);
    EXPECT_EQ(hamming_distance(x, child), out.flips);
  }
}

TEST(Mutation, RejectsBadRate) {
  EXPECT_THROW(BitMutation(0.0), ParameterError);
  EXPECT_THROW(BitMutation(1.5), ParameterError);
}

TEST(SelectBest, Examples) {
  Rng rng(5);
  const std::vector<FitnessValue> one{plain(3.0)};
  EXPECT_EQ(select_best(one, rng), 0U);
  const std::vector<FitnessValue> three{plain(2.0), plain(5.0), plain(1.0)};
  EXPECT_EQ(select_best(three, rng), 1U);
  EXPECT_THROW(select_best(std::span<const FitnessValue>{}, rng), UsageError);
}

TEST(SelectBest, TiesAreUniform) {
  Rng rng(6);
  const std::vector<FitnessValue> pair{plain(4.0), plain(4.0)};
  int first = 0;
  for (int i = 0; i < 10'000; ++i) first += select_best(pair, rng) == 0;
  EXPECT_NEAR(first / 10'000.0, 0.5, 0.05);

  const std::vector<FitnessValue> mixed{plain(1), plain(7), plain(3), plain(7), plain(7), plain(0)};
  std::vector<int> hits(mixed.size(), 0);
  const int trials = 90'000;
  for (int i = 0; i < trials; ++i) ++hits[select_best(mixed, rng)];
  EXPECT_EQ(hits[0] + hits[2] + hits[5], 0);
  for (std::size_t i : {1U, 3U, 4U})
    EXPECT_NEAR(hits[i] / double(trials), 1.0 / 3.0, three_sigma(1.0 / 3.0, trials));
}

TEST(StepPlus, WorseOffspringAreRejected) {
  const FrozenLandscape L(6, 0.0, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Plus, 4, 6);
  cfg.mutation_rate = 1.0;  // every offspring is the complement
  Rng rng(7);
  auto parent = individual(L, SearchPoint::from_string("111110"));
  const auto before = parent.point;
  Generation g;
  const auto out = step_plus(parent, L, cfg, rng, g);
  EXPECT_FALSE(out.accepted);
  EXPECT_FALSE(out.moved);
  EXPECT_EQ(parent.point, before);
}

TEST(StepPlus, EqualTotalIsAccepted) {
  const FrozenLandscape L(2, 0.0, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Plus, 1, 2);
  cfg.mutation_rate = 1.0;
  Rng rng(8);
  auto parent = individual(L, SearchPoint::from_string("10"));
  Generation g;
  const auto out = step_plus(parent, L, cfg, rng, g);
  EXPECT_TRUE(out.accepted);
  EXPECT_TRUE(out.moved);
  EXPECT_EQ(parent.point.to_string(), "01");
}

TEST(StepPlus, OptimumOnlyAcceptsClones) {
  const FrozenLandscape L(8, 0.0, DistortionSpec::exponential(1), 1);
  const auto cfg = config(Variant::Plus, 1, 8);
  Rng rng(9);
  auto parent = individual(L, SearchPoint::ones(8));
  Generation g;
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto out = step_plus(parent, L, cfg, rng, g);
    EXPECT_EQ(out.accepted, g.flips[0] == 0);
    EXPECT_FALSE(out.moved);
    accepted += out.accepted;
  }
  EXPECT_EQ(parent.point, SearchPoint::ones(8));
  EXPECT_GT(accepted, 0);
}

TEST(StepPlus, TotalNeverDecreases) {
  const FrozenLandscape L(30, 0.2, DistortionSpec::exponential(0.4), 3);
  const auto cfg = config(Variant::Plus, 3, 30);
  Rng rng(10);
  auto parent = individual(L, SearchPoint(30));
  Generation g;
  for (int i = 0; i < 3000; ++i) {
    const double before = parent.fitness.total;
    step_plus(parent, L, cfg, rng, g);
    ASSERT_GE(parent.fitness.total, before);
    ASSERT_EQ(parent.fitness, L.evaluate(parent.point));
  }
}

TEST(StepComma, WorseOffspringStillReplaceParent) {
  const FrozenLandscape L(5, 0.0, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Comma, 1, 5);
  cfg.mutation_rate = 1.0;
  Rng rng(11);
  auto parent = individual(L, SearchPoint::ones(5));
  Generation g;
  const auto out = step_comma(parent, L, cfg, rng, g);
  EXPECT_TRUE(out.accepted);
  EXPECT_TRUE(out.moved);
  EXPECT_EQ(onemax(parent.point), 0U);
  EXPECT_EQ(parent.fitness.total, 0.0);
}

TEST(StepComma, AllClonesKeepParent) {
  const FrozenLandscape L(10, 0.5, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Comma, 4, 10);
  cfg.mutation_rate = 1e-15;
  Rng rng(12);
  auto parent = individual(L, SearchPoint::from_string("1010101010"));
  const auto before = parent;
  Generation g;
  const auto out = step_comma(parent, L, cfg, rng, g);
  EXPECT_FALSE(out.moved);
  EXPECT_EQ(parent.point, before.point);
  EXPECT_EQ(parent.fitness, before.fitness);
}

TEST(StepComma, ExactLawAtTwoBits) {
  // Parent 11, rate 1/2, lambda 1: om 2, 1, 0 with probabilities 1/4, 1/2, 1/4.
  const FrozenLandscape L(2, 0.0, DistortionSpec::exponential(1), 1);
  const auto cfg = config(Variant::Comma, 1, 2);
  Rng rng(13);
  Generation g;
  const int trials = 200'000;
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < trials; ++i) {
    auto parent = individual(L, SearchPoint::ones(2));
    step_comma(parent, L, cfg, rng, g);
    ++counts[onemax(parent.point)];
  }
  EXPECT_NEAR(counts[2] / double(trials), 0.25, three_sigma(0.25, trials));
  EXPECT_NEAR(counts[1] / double(trials), 0.50, three_sigma(0.50, trials));
  EXPECT_NEAR(counts[0] / double(trials), 0.25, three_sigma(0.25, trials));
}

TEST(StepComma, ParentIsAMaximalOffspring) {
  const FrozenLandscape L(12, 0.3, DistortionSpec::exponential(0.4), 5);
  const auto cfg = config(Variant::Comma, 5, 12);
  Rng rng(14);
  auto parent = individual(L, SearchPoint(12));
  Generation g;
  for (int i = 0; i < 5000; ++i) {
    step_comma(parent, L, cfg, rng, g);
    const double best = std::max_element(g.fitness.begin(), g.fitness.end(),
                                         [](auto& a, auto& b) { return a.total < b.total; })->total;
    ASSERT_EQ(parent.point, g.offspring[g.chosen]);
    ASSERT_EQ(parent.fitness.total, best);
    ASSERT_EQ(parent.fitness, L.evaluate(parent.point));
  }
}

TEST(Run, ZeroCutoffEvaluatesOnlyTheStart) {
  const FrozenLandscape L(10, 0.0, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Comma, 4, 10, 0.0);
  cfg.cutoff_generations = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.rng_seed = seed;
    const auto r = run(L, cfg);
    EXPECT_EQ(r.generations, 0U);
    EXPECT_EQ(r.evaluations, 1U);
    EXPECT_EQ(r.success, r.final.total >= cfg.target());
    EXPECT_EQ(r.trace.size(), 1U);
  }
}

TEST(Run, PlainOneMaxCommaReachesTarget) {
  const FrozenLandscape L(20, 0.0, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Comma, 8, 20, 1.0);
  cfg.cutoff_generations = 100'000;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.rng_seed = seed;
    const auto r = run(L, cfg);
    EXPECT_TRUE(r.success);
    EXPECT_GE(r.final.total, 19.0);
    EXPECT_TRUE(r.om_target_reached);
  }
}

TEST(Run, PlainOneMaxPlusReachesOptimum) {
  const FrozenLandscape L(10, 0.0, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Plus, 1, 10, 0.0);
  cfg.cutoff_generations = 100'000;
  cfg.rng_seed = 3;
  const auto r = run(L, cfg);
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.final_point, SearchPoint::ones(10));
}

TEST(Run, InvariantsHoldAcrossConfigurations) {
  for (Variant v : {Variant::Plus, Variant::Comma}) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const FrozenLandscape L(40, 0.05, DistortionSpec::exponential(0.4), seed * 31 + 1);
      auto cfg = config(v, 5, 40, 1.5);
      cfg.cutoff_generations = 20'000;
      cfg.rng_seed = seed;
      const auto r = run(L, cfg);
      EXPECT_EQ(r.evaluations, 1 + 5 * r.generations);
      if (r.success) EXPECT_GE(r.final.total, cfg.target());
      else EXPECT_EQ(r.generations, cfg.cutoff_generations);
      EXPECT_EQ(r.final, L.evaluate(r.final_point));
      ASSERT_FALSE(r.trace.empty());
      EXPECT_EQ(r.trace.front().generation, 0U);
      EXPECT_EQ(r.trace.back().generation, r.generations);
      EXPECT_EQ(r.trace.back().total, r.final.total);
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        EXPECT_LT(r.trace[i - 1].generation, r.trace[i].generation);
        if (v == Variant::Plus) EXPECT_LE(r.trace[i - 1].total, r.trace[i].total);
      }
      for (std::size_t i = 1; i + 1 < r.trace.size(); ++i) EXPECT_TRUE(r.trace[i].accepted);
    }
  }
}

TEST(Run, DenseTraceRecordsEveryGeneration) {
  const FrozenLandscape L(30, 0.05, DistortionSpec::exponential(0.4), 4);
  auto cfg = config(Variant::Comma, 4, 30, 1.0);
  cfg.rng_seed = 5;
  cfg.dense_trace = true;
  const auto dense = run(L, cfg);
  ASSERT_EQ(dense.trace.size(), dense.generations + 1);
  cfg.dense_trace = false;
  const auto sparse = run(L, cfg);
  EXPECT_EQ(sparse.generations, dense.generations);
  EXPECT_EQ(sparse.final, dense.final);
  // The compact trace is exactly the dense trace's moves plus both end points.
  std::vector<TraceEvent> expected{dense.trace.front()};
  for (std::size_t i = 1; i < dense.trace.size(); ++i) {
    if (dense.trace[i].accepted) expected.push_back(dense.trace[i]);
  }
  if (expected.back().generation != dense.generations) expected.push_back(dense.trace.back());
  EXPECT_EQ(sparse.trace, expected);
}

TEST(Run, DeterministicInSeeds) {
  const FrozenLandscape L(60, 0.05, DistortionSpec::exponential(0.4), 99);
  auto cfg = config(Variant::Plus, 6, 60, 2.0);
  cfg.cutoff_generations = 5000;
  cfg.rng_seed = 1234;
  EXPECT_EQ(run(L, cfg), run(L, cfg));
  auto other = cfg;
  other.rng_seed = 1235;
  EXPECT_NE(run(L, cfg).trace, run(L, other).trace);
}

TEST(Run, ValidatesConfig) {
  const FrozenLandscape L(10, 0.0, DistortionSpec::exponential(1), 1);
  EXPECT_THROW(run(L, config(Variant::Plus, 1, 11)), DimensionError);
  EXPECT_THROW(run(L, config(Variant::Plus, 0, 10)), ParameterError);
  EXPECT_THROW(run(L, config(Variant::Plus, 1, 10, 10.0)), ParameterError);
  EXPECT_THROW(run(L, config(Variant::Plus, 1, 10, -1.0)), ParameterError);
  auto bad_rate = config(Variant::Plus, 1, 10);
  bad_rate.mutation_rate = 0.0;
  EXPECT_THROW(run(L, bad_rate), ParameterError);
}

TEST(Run, MaxFlipsStayLogarithmic) {
  // T generations of lambda mutations at n = 100, rate 1/n: the largest flip
  // count exceeds log2(lambda T) + ln(n)^2 in fewer than 1 in 1000 repetitions.
  const std::size_t n = 100;
  const unsigned lambda = 8;
  const std::uint64_t generations = 2000;
  const double bound = std::log2(double(lambda * generations)) + std::pow(std::log(double(n)), 2);
  const BitMutation m(1.0 / n);
  const SearchPoint x(n);
  SearchPoint child;
  int exceed = 0;
  std::size_t overall = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    Rng rng(10'000 + rep);
    std::size_t worst = 0;
    for (std::uint64_t i = 0; i < lambda * generations; ++i) worst = std::max(worst, m.apply(x, child, rng).flips);
    exceed += static_cast<double>(worst) > bound;
    overall = std::max(overall, worst);
  }
  EXPECT_EQ(exceed, 0) << "largest flip count " << overall << ", bound " << bound;
}

TEST(Run, MaxFlipsReported) {
  const FrozenLandscape L(50, 0.0, DistortionSpec::exponential(1), 1);
  auto cfg = config(Variant::Comma, 4, 50, 0.0);
  cfg.cutoff_generations = 50;
  cfg.mutation_rate = 1.0;
  const auto r = run(L, cfg);
  EXPECT_EQ(r.max_flips, 50U);
}

TEST(TraceCsv, HeaderAndRows) {
  RunResult r;
  r.trace = {{0, 3, 0.0, 3.0, false}, {4, 5, 0.25, 5.25, true}};
  EXPECT_EQ(trace_csv(r, 8),
            "generation,evaluations,om,distortion,total,accepted\n"
            "0,1,3,0,3,0\n"
            "4,33,5,0.25,5.25,1\n");
}

TEST(Variant, Names) {
  EXPECT_EQ(parse_variant("plus"), Variant::Plus);
  EXPECT_EQ(parse_variant("comma"), Variant::Comma);
  EXPECT_EQ(variant_name(Variant::Comma), "comma");
  EXPECT_THROW(parse_variant("mu"), ParseError);
}

TEST(UniformBelow, ExactRange) {
  Rng rng(15);
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 30'000; ++i) ++hits[uniform_below(rng, 3)];
  for (int h : hits) EXPECT_NEAR(h / 30'000.0, 1.0 / 3.0, three_sigma(1.0 / 3.0, 30'000));
  EXPECT_THROW(uniform_below(rng, 0), UsageError);
}

}  // namespace
}  // namespace disom
