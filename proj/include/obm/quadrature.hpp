#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace obm::quad {

/// Globally adaptive Gauss–Kronrod (15/31-point) integration on [a, b]:
/// the subinterval with the largest error estimate is bisected until the
/// summed error is below tolerance·max(|I|, 1e−300) or max_intervals is
/// reached. Either bound may be infinite.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tolerance = 1e-10, std::size_t max_intervals = 400,
                 double* error = nullptr);

/// Same scheme on a finite range pre-split at sorted breakpoints; the
/// tolerance applies to the whole integral.
double integrate_pieces(const std::function<double(double)>& f, std::span<const double> breaks,
                        double tolerance = 1e-10, std::size_t max_intervals = 400,
                        double* error = nullptr);

/// ∫₀¹ f over a density with inverse-square-root singularities at both
/// ends, after the substitution u = sin²θ.
double integrate_unit_arcsine(const std::function<double(double)>& f, double tolerance = 1e-10);

}  // namespace obm::quad
