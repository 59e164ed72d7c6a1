#include "disom/assumptions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "disom/errors.hpp"
#include "disom/format.hpp"

namespace disom {

namespace {

// Relative slack for inequalities that are meant to hold with equality at
// the boundary (e.g. lambda == log_eta(n / kstar) computed in floating point).
constexpr double kRelTol = 1e-12;

bool at_least(double lhs, double rhs) { return lhs >= rhs - kRelTol * std::abs(rhs); }

}  // namespace

double eta() noexcept { return std::numbers::e / (std::numbers::e - 1.0); }

double clone_free_probability(double lambda) noexcept { return std::pow(eta(), -lambda); }

double log_eta(double x) noexcept { return std::log(x) / std::log(eta()); }

bool AssumptionReport::all_pass() const noexcept {
  for (const auto& f : flags) {
    if (!f.pass) return false;
  }
  return true;
}

const AssumptionFlag* AssumptionReport::find(std::string_view name) const noexcept {
  for (const auto& f : flags) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

AssumptionReport check_assumptions(const AssumptionQuery& q, const DistortionSpec& dist) {
  if (!(q.n >= 1.0)) throw ParameterError("assumption check needs n >= 1");
  if (!(q.kstar >= 0.0 && q.kstar < q.n)) throw ParameterError("assumption check needs 0 <= kstar < n");
  if (!(q.p >= 0.0 && q.p <= 1.0)) throw ParameterError("assumption check needs p in [0, 1]");
  if (!(q.epsilon >= 0.0 && q.epsilon < 1.0))
    throw ParameterError("assumption check needs epsilon in [0, 1)");
  if (!(q.lambda >= 1.0)) throw ParameterError("assumption check needs lambda >= 1");

  constexpr double inf = std::numeric_limits<double>::infinity();
  AssumptionReport r;
  r.eta = eta();
  r.q = clone_free_probability(q.lambda);
  r.epsilon = q.epsilon;
  r.lambda_lower = q.kstar > 0.0 ? (1.0 + q.epsilon) * log_eta(q.n / q.kstar) : inf;
  r.lambda_upper = q.p > 0.0 ? (1.0 - q.epsilon) * log_eta(1.0 / q.p) : inf;

  const SigmaScan scan = scan_sigma(dist, q.d_min, q.d_max, q.d_step, q.sigma_bound);
  r.sigma_estimate = scan.max_ratio;
  r.d_hat = scan.d_hat;
  r.sigma_violation_at = scan.first_violation;

  auto add = [&](std::string name, bool pass, bool advisory, std::string reason) {
    r.flags.push_back({std::move(name), pass, advisory, std::move(reason)});
  };

  {
    bool pass = !scan.first_violation;
    std::string reason;
    if (scan.first_violation) {
      reason = "Pr[D >= d + 1] = 0 at d = " + format_real(*scan.first_violation) +
               " (bounded support)";
    } else {
      reason = "max tail ratio " + format_real(scan.max_ratio) + " on [" + format_real(q.d_min) +
               ", " + format_real(q.d_max) + "]";
    }
    if (q.sigma_bound) {
      const bool within = scan.max_ratio <= *q.sigma_bound;
      pass = pass && within;
      reason += within ? " <= " : " > ";
      reason += "sigma bound " + format_real(*q.sigma_bound);
    }
    add("tail_ratio", pass, false, reason);
  }

  const double nlogn = q.n * std::log(q.n);
  add("p_above_1_over_nlogn", q.n > 1.0 && q.p > 1.0 / nlogn, true,
      "p = " + format_real(q.p) + " vs 1/(n ln n) = " + format_real(1.0 / nlogn));

  const double n_pow = std::pow(q.n, -1.0 + q.epsilon);
  add("p_above_n_pow", q.p >= n_pow, true,
      "p = " + format_real(q.p) + " vs n^(-1+eps) = " + format_real(n_pow));

  add("lambda_lower", at_least(q.lambda, r.lambda_lower), false,
      "lambda = " + format_real(q.lambda) + " vs (1+eps) log_eta(n/kstar) = " +
          format_real(r.lambda_lower));

  add("lambda_upper", at_least(r.lambda_upper, q.lambda), false,
      "lambda = " + format_real(q.lambda) + " vs (1-eps) log_eta(1/p) = " +
          format_real(r.lambda_upper));

  add("p_below_kstar_over_n", q.p < q.kstar / q.n, true,
      "p = " + format_real(q.p) + " vs kstar/n = " + format_real(q.kstar / q.n));

  const double p_pow = std::pow(q.p, 1.0 - q.epsilon);
  add("q_above_p_pow", at_least(r.q, p_pow), false,
      "q = " + format_real(r.q) + " vs p^(1-eps) = " + format_real(p_pow));

  return r;
}

std::string to_text(const AssumptionReport& r) {
  std::ostringstream out;
  out << "eta            " << format_real(r.eta) << '\n'
      << "q              " << format_real(r.q) << '\n'
      << "epsilon        " << format_real(r.epsilon) << '\n'
      << "lambda_lower   " << format_real(r.lambda_lower) << '\n'
      << "lambda_upper   " << format_real(r.lambda_upper) << '\n'
      << "sigma_estimate " << format_real(r.sigma_estimate) << '\n';
  if (r.d_hat) out << "d_hat          " << format_real(*r.d_hat) << '\n';
  for (const auto& f : r.flags) {
    out << (f.pass ? "PASS " : "FAIL ") << f.name << (f.advisory ? " (advisory)" : "") << ": "
        << f.reason << '\n';
  }
  return out.str();
}

}  // namespace disom
