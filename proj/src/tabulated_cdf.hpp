#pragma once

#include <functional>
#include <vector>

namespace obm {

/// Cumulative distribution of a density known pointwise: masses between
/// consecutive nodes are precomputed by adaptive quadrature, the remainder
/// up to x is integrated on demand. Values are normalized by the total mass.
class TabulatedCdf {
 public:
  TabulatedCdf(std::function<double(double)> density, double lower, double upper,
               std::vector<double> nodes);

  double cdf(double x) const;
  /// Inverse cdf, bracketed from the table and refined by TOMS 748 to a
  /// relative tolerance below 1e−8.
  double quantile(double u) const;
  double total_mass() const noexcept { return total_; }

 private:
  double mass_between(double a, double b) const;

  std::function<double(double)> density_;
  double lower_;
  double upper_;
  std::vector<double> nodes_;
  std::vector<double> cum_;  // unnormalized ∫_{lower}^{nodes[k]}
  double total_ = 1.0;
};

}  // namespace obm
