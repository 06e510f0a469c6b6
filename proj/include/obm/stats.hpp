#pragma once

#include <optional>
#include <utility>

#include "obm/simulate.hpp"

namespace obm {

/// Discrete sufficient statistics of a uniformly observed path.
struct PathStats {
  double T = 0.0;
  std::size_t N = 0;
  double xi0 = 0.0;
  double xiT = 0.0;
  double Q_plus = 0.0;   // (T/N) Σ 1{ξ_i ≥ 0}
  double Q_minus = 0.0;  // (T/N) Σ 1{ξ_i < 0}
  double R_plus = 0.0;   // Σ 1{ξ_i ≥ 0} Δ_i ξ
  double R_minus = 0.0;  // Σ 1{ξ_i ≤ 0} Δ_i ξ
  double L_sign = 0.0;
  std::optional<double> L_dagger;
  std::optional<double> L_cross;

  friend bool operator==(const PathStats&, const PathStats&) = default;
};

struct SigmaPair {
  double plus;
  double minus;
};

/// (Q₊, Q₋). The sum of the indicators partitions the grid, so Q₊ + Q₋ = T.
std::pair<double, double> occupation_discrete(const PathGrid& path);

/// (R₊, R₋). A grid value exactly at 0 feeds both sums.
std::pair<double, double> signed_increments_discrete(const PathGrid& path);

/// 2 Σ 1{ξ_i ξ_{i+1} < 0} |ξ_{i+1}|; needs no knowledge of σ±.
double local_time_sign(const PathGrid& path);

/// Local time from products of positive- and negative-part increments.
double local_time_dagger(const PathGrid& path, double sigma_plus, double sigma_minus);

/// Local time from the number of sign changes, scaled by √T so that the
/// estimate is consistent for any horizon (the T = 1 case is the classical
/// crossing-count formula).
double local_time_cross(const PathGrid& path, double sigma_plus, double sigma_minus);

PathStats path_stats(const PathGrid& path, std::optional<SigmaPair> sigma = std::nullopt);

/// Largest grid time iT/N whose step (i−1, i) touches or crosses 0
/// (ξ_{i−1} ξ_i ≤ 0), or nothing when the path never does.
std::optional<double> last_zero_crossing(const PathGrid& path);

}  // namespace obm
