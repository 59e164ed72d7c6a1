#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disom/distributions.hpp"

namespace disom {

/// eta = e / (e - 1); 1/eta approximates the chance that one offspring is
/// not a clone under standard bit mutation at rate 1/n.
double eta() noexcept;

/// q = eta^(-lambda): approximate chance that none of lambda offspring is a clone.
double clone_free_probability(double lambda) noexcept;

/// log base eta.
double log_eta(double x) noexcept;

struct AssumptionQuery {
  double n = 0;
  double kstar = 0;
  double lambda = 0;
  double p = 0;
  double epsilon = 0.05;  // slack in [0, 1)
  double d_min = 0.0;     // sigma-ratio scan range
  double d_max = 20.0;
  double d_step = 1.0;
  std::optional<double> sigma_bound;  // if set, d_hat is reported against it
};

struct AssumptionFlag {
  std::string name;
  bool pass = false;
  bool advisory = false;  // finite surrogate of an asymptotic condition
  std::string reason;
};

struct AssumptionReport {
  double eta = 0;
  double q = 0;
  double epsilon = 0;
  double lambda_lower = 0;  // (1 + eps) log_eta(n / kstar)
  double lambda_upper = 0;  // (1 - eps) log_eta(1 / p); +inf when p == 0
  double sigma_estimate = 1;
  std::optional<double> d_hat;
  std::optional<double> sigma_violation_at;
  std::vector<AssumptionFlag> flags;

  bool all_pass() const noexcept;
  const AssumptionFlag* find(std::string_view name) const noexcept;
};

/// Evaluates the parameter conditions numerically. Flags, in order:
///   tail_ratio             sigma ratio defined (finite) on the whole scan range,
///                          and <= sigma_bound if one was given
///   p_above_1_over_nlogn   advisory: p > 1 / (n ln n)
///   p_above_n_pow          advisory: p >= n^(-1 + eps)
///   lambda_lower           lambda >= (1 + eps) log_eta(n / kstar)
///   lambda_upper           lambda <= (1 - eps) log_eta(1 / p)
///   p_below_kstar_over_n   advisory: p < kstar / n
///   q_above_p_pow          q >= p^(1 - eps)
/// Violations are reported, never thrown. Throws ParameterError only for
/// malformed input (n < 1, kstar outside [0, n), p outside [0, 1], eps
/// outside [0, 1)).
AssumptionReport check_assumptions(const AssumptionQuery& query, const DistortionSpec& dist);

/// Human-readable multi-line summary.
std::string to_text(const AssumptionReport& report);

}  // namespace disom
