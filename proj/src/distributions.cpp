#include "disom/distributions.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "disom/errors.hpp"

namespace disom {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

std::string format_shortest(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

// Solves erf(y) = u (u < 1/2) or erfc(y) = 1 - u (u >= 1/2) for y >= 0 with a
// bracketed Newton iteration. Working on whichever of erf/erfc is small keeps
// full relative precision at both ends of (0, 1).
double inverse_erf_unit(double u) {
  constexpr double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;
  const bool lower = u < 0.5;
  const double target = lower ? u : 1.0 - u;
  const double log_target = std::log(target);

  double lo = 0.0;
  double hi = 1.0;
  if (lower) {
    while (std::erf(hi) < u) hi *= 2.0;
  } else {
    while (std::erfc(hi) > target) hi *= 2.0;
  }

  double y = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    double next;
    if (lower) {
      const double f = std::erf(y) - u;
      if (f < 0.0) lo = y; else hi = y;
      next = y - f / (two_over_sqrt_pi * std::exp(-y * y));
    } else {
      const double e = std::erfc(y);
      if (e > target) lo = y; else hi = y;
      const double g = std::log(e) - log_target;
      next = y - g / (-two_over_sqrt_pi * std::exp(-y * y) / e);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool converged = std::abs(next - y) <= 1e-15 * std::max(1.0, y);
    y = next;
    if (converged || hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  return y;
}

double parse_number(std::string_view token, std::string_view full) {
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw ParseError("invalid number '" + std::string(token) + "' in distribution spec '" +
                     std::string(full) + "'");
  }
  return v;
}

}  // namespace

DistortionSpec DistortionSpec::exponential(double rate) {
  require(positive_finite(rate), "exponential rate must be positive and finite");
  return {DistortionKind::Exponential, rate, 0.0};
}

DistortionSpec DistortionSpec::half_gaussian(double scale) {
  require(positive_finite(scale), "half-gaussian scale must be positive and finite");
  return {DistortionKind::HalfGaussian, scale, 0.0};
}

DistortionSpec DistortionSpec::pareto(double x0, double tau) {
  require(positive_finite(x0), "pareto x0 must be positive and finite");
  require(std::isfinite(tau) && tau > 2.0, "pareto tau must be finite and > 2");
  return {DistortionKind::Pareto, x0, tau};
}

DistortionSpec DistortionSpec::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && b > a,
          "uniform bounds must satisfy 0 <= a < b");
  return {DistortionKind::Uniform, a, b};
}

DistortionSpec DistortionSpec::truncated_exponential(double rate, double cutoff) {
  require(positive_finite(rate), "truncated exponential rate must be positive and finite");
  require(positive_finite(cutoff), "truncated exponential cutoff must be positive and finite");
  return {DistortionKind::TruncatedExponential, rate, cutoff};
}

double DistortionSpec::rate() const {
  if (kind_ != DistortionKind::Exponential && kind_ != DistortionKind::TruncatedExponential)
    throw UsageError("rate() requires an exponential distribution");
  return first_;
}

double DistortionSpec::scale() const {
  if (kind_ != DistortionKind::HalfGaussian) throw UsageError("scale() requires gauss");
  return first_;
}

double DistortionSpec::x0() const {
  if (kind_ != DistortionKind::Pareto) throw UsageError("x0() requires pareto");
  return first_;
}

double DistortionSpec::tau() const {
  if (kind_ != DistortionKind::Pareto) throw UsageError("tau() requires pareto");
  return second_;
}

double DistortionSpec::lower() const {
  if (kind_ != DistortionKind::Uniform) throw UsageError("lower() requires uniform");
  return first_;
}

double DistortionSpec::upper() const {
  if (kind_ != DistortionKind::Uniform) throw UsageError("upper() requires uniform");
  return second_;
}

double DistortionSpec::cutoff() const {
  if (kind_ != DistortionKind::TruncatedExponential)
    throw UsageError("cutoff() requires truncexp");
  return second_;
}

double DistortionSpec::support_min() const noexcept {
  switch (kind_) {
    case DistortionKind::Pareto:
    case DistortionKind::Uniform:
      return first_;
    default:
      return 0.0;
  }
}

std::string_view kind_name(DistortionKind kind) noexcept {
  switch (kind) {
    case DistortionKind::Exponential: return "exp";
    case DistortionKind::HalfGaussian: return "gauss";
    case DistortionKind::Pareto: return "pareto";
    case DistortionKind::Uniform: return "uniform";
    case DistortionKind::TruncatedExponential: return "truncexp";
  }
  return "?";
}

std::string DistortionSpec::to_string() const {
  std::string out(kind_name(kind_));
  out += ':';
  switch (kind_) {
    case DistortionKind::Exponential:
      out += "rate=" + format_shortest(first_);
      break;
    case DistortionKind::HalfGaussian:
      out += "scale=" + format_shortest(first_);
      break;
    case DistortionKind::Pareto:
      out += "x0=" + format_shortest(first_) + ",tau=" + format_shortest(second_);
      break;
    case DistortionKind::Uniform:
      out += "a=" + format_shortest(first_) + ",b=" + format_shortest(second_);
      break;
    case DistortionKind::TruncatedExponential:
      out += "rate=" + format_shortest(first_) + ",cutoff=" + format_shortest(second_);
      break;
  }
  return out;
}

DistortionSpec DistortionSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("distribution spec '" + std::string(text) +
                     "' must have the form kind:key=value(,key=value)*");
  }
  const std::string_view kind = text.substr(0, colon);

  struct Slot {
    std::vector<std::string_view> names;
    std::optional<double> value;
  };
  std::vector<Slot> slots;
  if (kind == "exp") {
    slots = {{{"rate"}, {}}};
  } else if (kind == "gauss") {
    slots = {{{"scale", "s"}, {}}};
  } else if (kind == "pareto") {
    slots = {{{"x0"}, {}}, {{"tau"}, {}}};
  } else if (kind == "uniform") {
    slots = {{{"a"}, {}}, {{"b"}, {}}};
  } else if (kind == "truncexp") {
    slots = {{{"rate"}, {}}, {{"cutoff"}, {}}};
  } else {
    throw ParseError("unknown distribution kind '" + std::string(kind) +
                     "' (expected exp, gauss, pareto, uniform or truncexp)");
  }

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view pair = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (comma != std::string_view::npos && rest.empty()) {
      throw ParseError("trailing ',' in distribution spec '" + std::string(text) + "'");
    }

    const auto eq = pair.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key=value, got '" + std::string(pair) + "'");
    }
    const std::string_view key = pair.substr(0, eq);
    Slot* slot = nullptr;
    for (auto& s : slots) {
      for (auto name : s.names) {
        if (name == key) slot = &s;
      }
    }
    if (slot == nullptr) {
      throw ParseError("unknown key '" + std::string(key) + "' for distribution kind '" +
                       std::string(kind) + "'");
    }
    if (slot->value) throw ParseError("duplicate key '" + std::string(key) + "'");
    slot->value = parse_number(pair.substr(eq + 1), text);
  }

  for (const auto& s : slots) {
    if (!s.value) {
      throw ParseError("missing key '" + std::string(s.names.front()) + "' for distribution kind '" +
                       std::string(kind) + "'");
    }
  }

  if (kind == "exp") return exponential(*slots[0].value);
  if (kind == "gauss") return half_gaussian(*slots[0].value);
  if (kind == "pareto") return pareto(*slots[0].value, *slots[1].value);
  if (kind == "uniform") return uniform(*slots[0].value, *slots[1].value);
  return truncated_exponential(*slots[0].value, *slots[1].value);
}

double tail(const DistortionSpec& spec, double d) {
  if (std::isnan(d)) throw DomainError("tail: d is NaN");
  if (d <= spec.support_min()) return 1.0;
  switch (spec.kind()) {
    case DistortionKind::Exponential:
      return std::exp(-spec.rate() * d);
    case DistortionKind::HalfGaussian:
      return std::erfc(d / (spec.scale() * std::numbers::sqrt2));
    case DistortionKind::Pareto:
      return std::pow(d / spec.x0(), 1.0 - spec.tau());
    case DistortionKind::Uniform: {
      const double a = spec.lower();
      const double b = spec.upper();
      return d >= b ? 0.0 : (b - d) / (b - a);
    }
    case DistortionKind::TruncatedExponential:
      return d > spec.cutoff() ? 0.0 : std::exp(-spec.rate() * d);
  }
  return 0.0;
}

double sample(const DistortionSpec& spec, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample: u must lie in the open interval (0, 1)");
  switch (spec.kind()) {
    case DistortionKind::Exponential:
      return -std::log1p(-u) / spec.rate();
    case DistortionKind::HalfGaussian:
      return spec.scale() * std::numbers::sqrt2 * inverse_erf_unit(u);
    case DistortionKind::Pareto:
      return spec.x0() * std::pow(1.0 - u, -1.0 / (spec.tau() - 1.0));
    case DistortionKind::Uniform:
      return spec.lower() + u * (spec.upper() - spec.lower());
    case DistortionKind::TruncatedExponential:
      return std::min(-std::log1p(-u) / spec.rate(), spec.cutoff());
  }
  return 0.0;
}

double sigma_ratio(const DistortionSpec& spec, double d) {
  const double denom = tail(spec, d + 1.0);
  if (denom <= 0.0) {
    throw SupportExhausted(d, "tail ratio undefined at d = " + format_shortest(d) +
                                  ": Pr[D >= d + 1] = 0 (bounded support)");
  }
  return tail(spec, d) / denom;
}

SigmaScan scan_sigma(const DistortionSpec& spec, double d_min, double d_max, double step,
                     std::optional<double> bound) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("scan_sigma: step must be > 0");
  if (!std::isfinite(d_min) || !std::isfinite(d_max) || d_max < d_min)
    throw DomainError("scan_sigma: need finite d_min <= d_max");

  SigmaScan scan;
  bool bound_holds = true;
  const double slack = 1e-9 * step;
  for (std::size_t k = 0;; ++k) {
    const double d = d_min + static_cast<double>(k) * step;
    if (d > d_max + slack) break;
    ++scan.points;
    double ratio;
    try {
      ratio = sigma_ratio(spec, d);
    } catch (const SupportExhausted&) {
      if (!scan.first_violation) scan.first_violation = d;
      bound_holds = false;
      continue;
    }
    scan.max_ratio = std::max(scan.max_ratio, ratio);
    if (bound && bound_holds) {
      if (ratio <= *bound) {
        scan.d_hat = d;
      } else {
        bound_holds = false;
      }
    }
  }
  return scan;
}

}  // namespace disom
