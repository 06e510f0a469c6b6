#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "obm/estimate.hpp"
#include "obm/model.hpp"

namespace obm {

// ---------------------------------------------------------------------------
// Closed-form limit quantities.

/// Almost-sure limits of (Q₊/T, Q₋/T) in regime E.
std::pair<double, double> ergodic_occupation_limit(const ModelParams& p);

/// Standard deviation of the Gaussian limit of √T(β̂± − b±) in regime E:
/// σ±·√((|b₋| + |b₊|)/|b∓|).
double ergodic_limit_sd(const ModelParams& p, Side side);

/// Density of the fraction of time the driftless process spends positive,
/// ratio = σ₊/σ₋, for 0 < u < 1. Throws Error(DomainError) otherwise.
double arcsine_density(double ratio, double u);
/// (2/π)·arctan(ratio·√(u/(1−u))), clamped to [0, 1] outside (0, 1).
double arcsine_cdf(double ratio, double u);

/// Joint density of (ξ₁, L₁(ξ), Q₁⁺) for the driftless process started at 0.
double n0_joint_density(const ModelParams& p, double rho, double lam, double tau);

/// Joint density of (β₁⁺, β₁⁻) by quadrature over the occupation fraction.
double n0_beta_density(const ModelParams& p, double a, double b);

/// Marginal density / cdf of β₁⁺ (Side::Plus) or β₁⁻ (Side::Minus).
double n0_beta_marginal_density(const ModelParams& p, Side side, double x);
double n0_beta_marginal_cdf(const ModelParams& p, Side side, double x);
/// P(β₁⁺ ≤ a, β₁⁻ ≤ b).
double n0_beta_joint_cdf(const ModelParams& p, double a, double b);

/// Density of c·𝒩/√|𝒩'| (independent unit Gaussians).
double n1_minus_density(double c, double x);
double n1_minus_cdf(double c, double x);

/// Density of the non-consistent-side ratio law for b₊ > 0; zero for r ≤ 0.
/// Throws Error(UnsupportedRegime) if b₊ ≤ 0 (mirror the parameters first).
double transient_ratio_density(const ModelParams& p, double r);

/// Final local time and negative occupation time in regime T0 (b₊ > 0, b₋ ≥ 0).
class T0LastPassageLaws {
 public:
  /// Throws Error(UnsupportedRegime) unless b₊ > 0 and b₋ ≥ 0.
  explicit T0LastPassageLaws(const ModelParams& p);

  /// Exponential density of L_∞ with rate b₊/σ₊².
  double local_time_density(double t) const;
  /// Density of Q⁻_∞ at s given L_∞ = t.
  double occupation_given_local_time(double s, double t) const;
  /// Joint density of (Q⁻_∞, L_∞) at (s, t).
  double joint_density(double s, double t) const;

 private:
  ModelParams p_;
};

/// P(ξ_T → +∞) in regime T1: σ₋²b₊ / (σ₋²b₊ + σ₊²|b₋|).
double t1_divergence_probability(const ModelParams& p);

// ---------------------------------------------------------------------------
// Limit laws as objects.

struct NormalLaw {
  double mean = 0.0;
  double sd = 1.0;
};
struct HalfNormalLaw {
  double scale = 1.0;
};
struct ArcsineLaw {
  double ratio = 1.0;
};
struct RatioLaw {
  ModelParams params;  // b_plus > 0
};
struct N0BetaLaw {
  ModelParams params;
  Side side = Side::Plus;
  double time_scale = 1.0;  // law of β_T = β_1/√T for T = time_scale
};
struct N1MinusLaw {
  double c = 1.0;
};

using LawKind = std::variant<NormalLaw, HalfNormalLaw, ArcsineLaw, RatioLaw, N0BetaLaw, N1MinusLaw>;

class TabulatedCdf;

/// Immutable one-dimensional law with density, cdf and a seeded sampler.
class LimitLaw {
 public:
  explicit LimitLaw(LawKind kind);

  const LawKind& kind() const noexcept { return kind_; }
  std::string name() const;

  double density(double x) const;
  double cdf(double x) const;
  /// Support bounds (possibly infinite).
  std::pair<double, double> support() const;

 private:
  LawKind kind_;
  std::shared_ptr<const TabulatedCdf> table_;  // RatioLaw only
  friend std::vector<double> sample_limit_law(const LimitLaw&, std::size_t, std::uint64_t);
};

LimitLaw ergodic_limit_law(const ModelParams& p, Side side);

/// Law of β̂_T in regime N0 with ξ₀ = 0: √T·β̂_T has the law of β₁.
/// Throws Error(NotN0).
LimitLaw n0_scaling_check_law(const ModelParams& p, double T, Side side);

struct N1Laws {
  LimitLaw q_minus;     // Q⁻_T/√T      ⇒ (σ₊/b₋)|𝒩|
  LimitLaw beta_plus;   // √T(β̂₊ − b₊)  ⇒ σ₊𝒩⁺
  LimitLaw beta_minus;  // T^{1/4}(β̂₋ − b₋) ⇒ σ₋√(b₋/σ₊)·𝒩⁻/√|𝒩|
};
/// Throws Error(NotN1) unless b₊ = 0 < b₋.
N1Laws n1_limit_laws(const ModelParams& p);

/// Ratio law of the non-visited side (requires b₊ > 0).
LimitLaw transient_ratio_law(const ModelParams& p);

/// n i.i.d. draws; inverse cdf for tabulated laws, composition otherwise.
std::vector<double> sample_limit_law(const LimitLaw& law, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Distribution distances.

/// sup |F_n − F| over a sorted sample; ties are compared against the left
/// limit F(x⁻) ≈ F(nextafter(x, −∞)). Throws Error(EmptySample).
double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov–Smirnov statistic of sorted samples.
double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

}  // namespace obm
