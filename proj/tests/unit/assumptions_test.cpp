#include "disom/assumptions.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "disom/errors.hpp"

namespace disom {
namespace {

AssumptionQuery query(double n, double kstar, double lambda, double p, double eps = 0.05) {
  AssumptionQuery q;
  q.n = n;
  q.kstar = kstar;
  q.lambda = lambda;
  q.p = p;
  q.epsilon = eps;
  return q;
}

const auto kExp = DistortionSpec::exponential(0.4);

bool passes(const AssumptionReport& r, const char* name) {
  const auto* f = r.find(name);
  EXPECT_NE(f, nullptr) << name;
  return f != nullptr && f->pass;
}

TEST(Constants, EtaAndQ) {
  EXPECT_DOUBLE_EQ(eta(), std::exp(1.0) / (std::exp(1.0) - 1.0));
  EXPECT_NEAR(std::log(eta()), 0.45868, 1e-5);
  EXPECT_DOUBLE_EQ(clone_free_probability(8), std::pow(eta(), -8.0));
  EXPECT_NEAR(clone_free_probability(8), 0.0255, 5e-5);
  EXPECT_DOUBLE_EQ(log_eta(eta() * eta()), 2.0);
}

TEST(CheckAssumptions, FigureOneViolatesLowerBoundAndKstarRatio) {
  const auto r = check_assumptions(query(150, 2.12, 8, 0.0245), kExp);
  EXPECT_NEAR(r.lambda_lower, 1.05 * std::log(150 / 2.12) / std::log(eta()), 1e-12);
  EXPECT_NEAR(r.lambda_lower, 9.75, 0.005);
  EXPECT_FALSE(passes(r, "lambda_lower"));
  EXPECT_FALSE(passes(r, "p_below_kstar_over_n"));
  EXPECT_TRUE(r.find("p_below_kstar_over_n")->advisory);
  EXPECT_TRUE(passes(r, "tail_ratio"));
  EXPECT_NEAR(r.sigma_estimate, std::exp(0.4), 1e-12);
  EXPECT_FALSE(r.all_pass());
}

TEST(CheckAssumptions, CompliantConfigurationPassesEverything) {
  const auto r = check_assumptions(query(1e4, 1e2, 11, 1e-3), kExp);
  for (const auto& f : r.flags) EXPECT_TRUE(f.pass) << f.name << ": " << f.reason;
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.flags.size(), 7U);
}

TEST(CheckAssumptions, LowerBoundHoldsWithEqualityAtBoundary) {
  const double n = 200, kstar = 3;
  const double lambda = log_eta(n / kstar);
  const auto r = check_assumptions(query(n, kstar, lambda, 0.001, 0.0), kExp);
  EXPECT_TRUE(passes(r, "lambda_lower"));
  EXPECT_DOUBLE_EQ(r.lambda_lower, lambda);
  const auto below = check_assumptions(query(n, kstar, lambda * (1 - 1e-9), 0.001, 0.0), kExp);
  EXPECT_FALSE(passes(below, "lambda_lower"));
}

TEST(CheckAssumptions, ZeroDistortionProbabilityFailsSurrogate) {
  const auto r = check_assumptions(query(150, 2.12, 8, 0.0), kExp);
  EXPECT_FALSE(passes(r, "p_above_1_over_nlogn"));
  EXPECT_FALSE(passes(r, "p_above_n_pow"));
  EXPECT_TRUE(std::isinf(r.lambda_upper));
  EXPECT_TRUE(passes(r, "lambda_upper"));
}

TEST(CheckAssumptions, BoundedSupportFailsTailRatio) {
  const auto r = check_assumptions(query(100, 2, 8, 0.01), DistortionSpec::uniform(0, 4));
  EXPECT_FALSE(passes(r, "tail_ratio"));
  ASSERT_TRUE(r.sigma_violation_at);
  EXPECT_EQ(*r.sigma_violation_at, 3.0);
}

TEST(CheckAssumptions, SigmaBoundGivesDHat) {
  auto q = query(100, 2, 8, 0.01);
  q.sigma_bound = 20.0;
  const auto r = check_assumptions(q, DistortionSpec::half_gaussian(1.0));
  ASSERT_TRUE(r.d_hat);
  EXPECT_FALSE(passes(r, "tail_ratio"));
  EXPECT_LT(*r.d_hat, 20.0);
  q.sigma_bound = 2.0;
  EXPECT_TRUE(passes(check_assumptions(q, kExp), "tail_ratio"));
}

TEST(CheckAssumptions, LowerBoundMonotoneInLambda) {
  for (double n : {50.0, 150.0, 1000.0}) {
    for (double kstar : {1.0, 2.12, 10.0}) {
      bool seen_pass = false;
      for (double lambda = 1; lambda <= 40; lambda += 0.5) {
        const bool pass = passes(check_assumptions(query(n, kstar, lambda, 0.001), kExp), "lambda_lower");
        EXPECT_FALSE(seen_pass && !pass) << n << " " << kstar << " " << lambda;
        seen_pass = seen_pass || pass;
      }
      EXPECT_TRUE(seen_pass);
    }
  }
}

TEST(CheckAssumptions, PureFunction) {
  const auto q = query(300, 2.35, 9, 0.02);
  const auto a = check_assumptions(q, kExp);
  const auto b = check_assumptions(q, kExp);
  ASSERT_EQ(a.flags.size(), b.flags.size());
  for (std::size_t i = 0; i < a.flags.size(); ++i) {
    EXPECT_EQ(a.flags[i].pass, b.flags[i].pass);
    EXPECT_EQ(a.flags[i].reason, b.flags[i].reason);
  }
  EXPECT_EQ(to_text(a), to_text(b));
}

TEST(CheckAssumptions, ZeroKstarMakesLowerBoundInfinite) {
  const auto r = check_assumptions(query(100, 0, 8, 0.01), kExp);
  EXPECT_TRUE(std::isinf(r.lambda_lower));
  EXPECT_FALSE(passes(r, "lambda_lower"));
}

TEST(CheckAssumptions, RejectsMalformedInput) {
  EXPECT_THROW(check_assumptions(query(0, 0, 8, 0.1), kExp), ParameterError);
  EXPECT_THROW(check_assumptions(query(10, 10, 8, 0.1), kExp), ParameterError);
  EXPECT_THROW(check_assumptions(query(10, 1, 8, 1.1), kExp), ParameterError);
  EXPECT_THROW(check_assumptions(query(10, 1, 8, 0.1, 1.0), kExp), ParameterError);
  EXPECT_THROW(check_assumptions(query(10, 1, 0.5, 0.1), kExp), ParameterError);
}

TEST(ToText, OneLinePerFlag) {
  const auto text = to_text(check_assumptions(query(150, 2.12, 8, 0.0245), kExp));
  EXPECT_NE(text.find("FAIL lambda_lower:"), std::string::npos);
  EXPECT_NE(text.find("FAIL p_below_kstar_over_n (advisory):"), std::string::npos);
  EXPECT_NE(text.find("PASS tail_ratio:"), std::string::npos);
}

}  // namespace
}  // namespace disom
