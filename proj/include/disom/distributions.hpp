#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace disom {

enum class DistortionKind { Exponential, HalfGaussian, Pareto, Uniform, TruncatedExponential };

/// Tagged description of a distortion distribution over [0, inf).
///
/// Instances are only obtainable through the named constructors or parse(),
/// all of which validate parameters, so every DistortionSpec in circulation
/// is well formed.
///
///   Exponential(rate)            Pr[D >= d] = exp(-rate d)
///   HalfGaussian(scale)          |N(0, scale^2)|
///   Pareto(x0, tau)              Pr[D >= d] = (d / x0)^(1 - tau), d >= x0, tau > 2
///   Uniform(a, b)                U[a, b], 0 <= a < b
///   TruncatedExponential(rate, cutoff)
///                                min(Exp(rate), cutoff): an atom of mass
///                                exp(-rate cutoff) sits at the cutoff.
class DistortionSpec {
 public:
  static DistortionSpec exponential(double rate);
  static DistortionSpec half_gaussian(double scale);
  static DistortionSpec pareto(double x0, double tau);
  static DistortionSpec uniform(double a, double b);
  static DistortionSpec truncated_exponential(double rate, double cutoff);

  /// Parses `kind:key=value(,key=value)*`. Kinds and keys:
  ///   exp:rate   gauss:scale (alias s)   pareto:x0,tau   uniform:a,b
  ///   truncexp:rate,cutoff
  /// Throws ParseError naming the offending token, or ParameterError.
  static DistortionSpec parse(std::string_view text);

  DistortionKind kind() const noexcept { return kind_; }

  double rate() const;    // Exponential, TruncatedExponential
  double scale() const;   // HalfGaussian
  double x0() const;      // Pareto
  double tau() const;     // Pareto
  double lower() const;   // Uniform
  double upper() const;   // Uniform
  double cutoff() const;  // TruncatedExponential

  /// Smallest value in the support.
  double support_min() const noexcept;

  /// Canonical spec string; parse(to_string()) == *this.
  std::string to_string() const;

  friend bool operator==(const DistortionSpec&, const DistortionSpec&) = default;

 private:
  DistortionSpec(DistortionKind kind, double first, double second) noexcept
      : kind_(kind), first_(first), second_(second) {}

  DistortionKind kind_;
  double first_;
  double second_;
};

/// Pr[D >= d] in closed form. Returns 1 at or below the support minimum.
double tail(const DistortionSpec& spec, double d);

/// Inverse-CDF transform F^{-1}(u) for u in the open interval (0, 1).
/// Throws DomainError otherwise.
double sample(const DistortionSpec& spec, double u);

/// tail(d) / tail(d + 1). Throws SupportExhausted when tail(d + 1) == 0.
double sigma_ratio(const DistortionSpec& spec, double d);

struct SigmaScan {
  double max_ratio = 1.0;                 // over the d values where the ratio exists
  std::optional<double> first_violation;  // first d with tail(d + 1) == 0
  std::optional<double> d_hat;            // largest scanned d below which ratio <= bound held
  std::size_t points = 0;
};

/// Evaluates sigma_ratio on d_min, d_min + step, ..., <= d_max.
/// If `bound` is given, d_hat is the last grid point such that the ratio
/// stays <= bound at it and every earlier grid point.
SigmaScan scan_sigma(const DistortionSpec& spec, double d_min, double d_max, double step,
                     std::optional<double> bound = std::nullopt);

std::string_view kind_name(DistortionKind kind) noexcept;

}  // namespace disom
