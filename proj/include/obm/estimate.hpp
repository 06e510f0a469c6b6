#pragma once

#include <array>
#include <optional>

#include "obm/model.hpp"
#include "obm/stats.hpp"

namespace obm {

enum class Side { Plus, Minus };

struct DriftEstimate {
  double beta_plus = 0.0;
  double beta_minus = 0.0;
  std::optional<Regime> regime_assumed;
  std::optional<double> se_plus;
  std::optional<double> se_minus;
  bool consistent_plus = false;
  bool consistent_minus = false;
};

struct WilkResult {
  double statistic = 0.0;
  double quantile = 0.0;
  double alpha = 0.0;
  bool reject = false;
};

struct Interval {
  double lower;
  double upper;
};

struct ConfidenceIntervals {
  std::optional<Interval> plus;
  std::optional<Interval> minus;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// R±/Q±, or nothing when that side was never occupied on the grid.
std::optional<double> beta_side(const PathStats& s, Side side);

/// β̂± = R±/Q±. Throws Error(NoOccupationPlus/NoOccupationMinus).
DriftEstimate beta_discrete(const PathStats& s);

/// β̂± through the local-time form ±((±ξ_T)⁺ − (±ξ₀)⁺ − L/2)/Q±.
DriftEstimate beta_continuous(double xi0, double xiT, double L, double Q_plus, double Q_minus);

/// Fills regime_assumed, the consistency flags and the standard errors
/// σ±/√Q± on the sides with a Gaussian limit. For T1 the side the path
/// escaped to (sign of ξ_T) is treated as the divergent one.
void apply_regime(DriftEstimate& est, const PathStats& s, const ModelParams& p, Regime regime);

/// Whether the (regime, side) pair admits a Gaussian limit for β̂.
bool has_gaussian_limit(Regime regime, Side side, double xiT);

/// log G with the 1/2 on the quadratic terms:
///   (b₊/σ₊²)R₊ + (b₋/σ₋²)R₋ − b₊²Q₊/(2σ₊²) − b₋²Q₋/(2σ₋²).
double log_likelihood(const PathStats& s, const ModelParams& p);

/// Λ = b₊R₊ + b₋R₋ − b₊²Q₊/2 − b₋²Q₋/2.
double quasi_log_likelihood(const PathStats& s, double b_plus, double b_minus);

/// Likelihood-ratio test of (b₊, b₋) = (b0_plus, b0_minus) against a χ²₂
/// quantile at level alpha. Meaningful in regimes E and N1.
WilkResult wilk_test(const PathStats& s, const ModelParams& p, double b0_plus, double b0_minus,
                     double alpha);

/// α-quantile of χ² with two degrees of freedom, −2 ln(1 − α).
double chi2_2dof_quantile(double alpha);

/// Standard normal quantile.
double normal_quantile(double probability);

/// Two-sided Gaussian intervals β̂± ± z σ±/√Q± on the sides with a Gaussian
/// limit in `regime`.
ConfidenceIntervals confidence_intervals(const DriftEstimate& est, const PathStats& s,
                                         const ModelParams& p, Regime regime, double level);

/// Asymptotic Fisher information: LAN matrix in regime E, LAMN matrix in
/// N1 with the random entry (σ₊/b₋)|𝒩| passed as q_minus_scaled.
/// Throws Error(UnsupportedRegime) otherwise.
Matrix2 fisher_information(const ModelParams& p, Regime regime,
                           std::optional<double> q_minus_scaled = std::nullopt);

}  // namespace obm
