#include "tabulated_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "obm/error.hpp"
#include "obm/quadrature.hpp"

namespace obm {

TabulatedCdf::TabulatedCdf(std::function<double(double)> density, double lower, double upper,
                           std::vector<double> nodes)
    : density_(std::move(density)), lower_(lower), upper_(upper), nodes_(std::move(nodes)) {
  if (nodes_.size() < 2 || !std::is_sorted(nodes_.begin(), nodes_.end())) {
    throw Error(Errc::DomainError, "tabulation needs at least two sorted nodes");
  }
  cum_.resize(nodes_.size());
  cum_[0] = mass_between(lower_, nodes_[0]);
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    cum_[k] = cum_[k - 1] + mass_between(nodes_[k - 1], nodes_[k]);
  }
  total_ = cum_.back() + mass_between(nodes_.back(), upper_);
}

double TabulatedCdf::mass_between(double a, double b) const {
  return quad::integrate(density_, a, b, 1e-11);
}

double TabulatedCdf::cdf(double x) const {
  if (x <= lower_) return 0.0;
  if (x >= upper_) return 1.0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  double mass = 0.0;
  if (it == nodes_.begin()) {
    mass = mass_between(lower_, x);
  } else {
    const auto k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    mass = cum_[k] + mass_between(nodes_[k], x);
  }
  return std::clamp(mass / total_, 0.0, 1.0);
}

double TabulatedCdf::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw Error(Errc::DomainError, "quantile level must be in (0, 1)");
  const double target = u * total_;
  double lo = 0.0;
  double hi = 0.0;
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  if (it == cum_.begin()) {
    hi = nodes_.front();
    double width = nodes_[1] - nodes_[0];
    lo = hi - width;
    if (std::isfinite(lower_)) {
      lo = lower_;
    } else {
      while (cdf(lo) > u) {
        width *= 2.0;
        lo = hi - width;
      }
    }
  } else if (it == cum_.end()) {
    lo = nodes_.back();
    double width = nodes_.back() - nodes_[nodes_.size() - 2];
    hi = lo + width;
    while (cdf(hi) < u) {
      width *= 2.0;
      hi = lo + width;
      if (!std::isfinite(hi)) throw Error(Errc::DomainError, "quantile out of range");
    }
  } else {
    const auto k = static_cast<std::size_t>(it - cum_.begin());
    lo = nodes_[k - 1];
    hi = nodes_[k];
  }
  auto f = [&](double x) { return cdf(x) - u; };
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo >= 0.0) return lo;
  if (fhi <= 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto root = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(28), max_iter);
  return 0.5 * (root.first + root.second);
}

}  // namespace obm
