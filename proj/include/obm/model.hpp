#pragma once

#include <string>
#include <string_view>

namespace obm {

/// Coefficients of the drifted oscillating Brownian motion
///   dξ = σ(ξ) dW + b(ξ) dt,  σ(x) = σ₊ 1{x≥0} + σ₋ 1{x<0},  b likewise.
/// The "+" branch owns x = 0 everywhere in this library.
struct ModelParams {
  double sigma_plus = 1.0;
  double sigma_minus = 1.0;
  double b_plus = 0.0;
  double b_minus = 0.0;
  double xi0 = 0.0;

  double sigma(double x) const noexcept { return x >= 0.0 ? sigma_plus : sigma_minus; }
  double drift(double x) const noexcept { return x >= 0.0 ? b_plus : b_minus; }

  /// Throws Error(InvalidParams) unless σ± > 0 and every field is finite.
  void validate() const;

  /// Parameters of −ξ: (b₊, b₋, σ₊, σ₋, ξ₀) → (−b₋, −b₊, σ₋, σ₊, −ξ₀).
  ModelParams mirrored() const noexcept;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Long-time regime from the signs of (b₊, b₋).
enum class Regime { E, N0, N1, N1_mirror, T0, T0_mirror, T1 };

std::string_view regime_tag(Regime r) noexcept;
/// Throws Error(ParseError) on an unknown tag.
Regime parse_regime(std::string_view tag);

Regime classify_regime(const ModelParams& p);

/// S(x) = ∫₀ˣ exp(−h(y)) dy with h(x) = ∫₀ˣ 2b/σ².
double scale_function(const ModelParams& p, double x);
/// m(x) = 2/σ(x)² · exp(h(x)).
double speed_density(const ModelParams& p, double x);
/// m(x) / M(ℝ); throws Error(NotErgodic) outside regime E.
double invariant_density(const ModelParams& p, double x);

/// Increasing (ψ_λ) and decreasing (φ_λ) solutions of L f = λ f with
/// ψ_λ(0) = φ_λ(0) = 1 and continuous first derivative at 0.
class FundamentalPair {
 public:
  /// Throws Error(InvalidLambda) if lambda <= 0 or is not finite.
  FundamentalPair(const ModelParams& p, double lambda);

  double lambda() const noexcept { return lambda_; }
  double kappa_plus() const noexcept { return kappa_plus_; }
  double delta_plus() const noexcept { return delta_plus_; }
  double kappa_minus() const noexcept { return kappa_minus_; }
  double delta_minus() const noexcept { return delta_minus_; }

  double psi(double x) const noexcept;
  double phi(double x) const noexcept;
  double psi_prime(double x) const noexcept;
  double phi_prime(double x) const noexcept;

  /// ψ̂(λ) = ψ'_λ(0) / 2.
  double psi_hat() const noexcept;
  /// φ̂(λ) = −φ'_λ(0) / 2.
  double phi_hat() const noexcept;
  /// W_λ = (ψ'φ − ψφ')(0) / S'(0).
  double wronskian() const noexcept;

 private:
  ModelParams p_;
  double lambda_;
  double root_plus_;   // √(b₊² + 2σ₊²λ)
  double root_minus_;  // √(b₋² + 2σ₋²λ)
  double kappa_plus_, delta_plus_, kappa_minus_, delta_minus_;
};

FundamentalPair fundamental_pair(const ModelParams& p, double lambda);

}  // namespace obm
