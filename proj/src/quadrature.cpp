#include "obm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace obm::quad {

namespace {

struct Piece {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece rule(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, std::isfinite(err) ? err : std::numeric_limits<double>::max()};
}

double adaptive(const std::function<double(double)>& f, std::span<const double> breaks,
                double tolerance, std::size_t max_intervals, double* error) {
  std::priority_queue<Piece> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    const Piece piece = rule(f, breaks[i], breaks[i + 1]);
    total += piece.value;
    total_err += piece.error;
    heap.push(piece);
  }
  if (heap.empty()) {
    if (error) *error = 0.0;
    return 0.0;
  }
  max_intervals = std::max(max_intervals, heap.size());
  while (heap.size() < max_intervals && total_err > tolerance * std::max(std::abs(total), 1e-300)) {
    const Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Piece left = rule(f, worst.a, mid);
    const Piece right = rule(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  if (error) *error = total_err;
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tolerance,
                 std::size_t max_intervals, double* error) {
  if (a == b) {
    if (error) *error = 0.0;
    return 0.0;
  }
  if (a > b) return -integrate(f, b, a, tolerance, max_intervals, error);
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (lo_inf && hi_inf) {
    auto g = [&](double t) {
      const double d = 1.0 - t * t;
      return f(t / d) * (1.0 + t * t) / (d * d);
    };
    {
      const double ends[] = {-1.0, 1.0};
      return adaptive(g, ends, tolerance, max_intervals, error);
    }
  }
  if (hi_inf) {
    auto g = [&](double t) {
      const double d = 1.0 - t;
      return f(a + t / d) / (d * d);
    };
    {
      const double ends[] = {0.0, 1.0};
      return adaptive(g, ends, tolerance, max_intervals, error);
    }
  }
  if (lo_inf) {
    auto g = [&](double t) {
      const double d = 1.0 - t;
      return f(b - t / d) / (d * d);
    };
    {
      const double ends[] = {0.0, 1.0};
      return adaptive(g, ends, tolerance, max_intervals, error);
    }
  }
  const double ends[] = {a, b};
  return adaptive(f, ends, tolerance, max_intervals, error);
}

double integrate_pieces(const std::function<double(double)>& f, std::span<const double> breaks,
                        double tolerance, std::size_t max_intervals, double* error) {
  if (breaks.size() < 2) {
    if (error) *error = 0.0;
    return 0.0;
  }
  const bool lo_inf = std::isinf(breaks.front());
  const bool hi_inf = std::isinf(breaks.back());
  if (!lo_inf && !hi_inf) return adaptive(f, breaks, tolerance, max_intervals, error);
  // x = t/(1 − t²) on (−1, 1), x = a + t/(1 − t) or b − t/(1 − t) on [0, 1).
  std::function<double(double)> to_x, weight;
  std::function<double(double)> to_t;
  if (lo_inf && hi_inf) {
    to_x = [](double t) { return t / (1.0 - t * t); };
    weight = [](double t) { return (1.0 + t * t) / ((1.0 - t * t) * (1.0 - t * t)); };
    to_t = [](double x) { return x == 0.0 ? 0.0 : (std::sqrt(1.0 + 4.0 * x * x) - 1.0) / (2.0 * x); };
  } else if (hi_inf) {
    const double a = breaks.front();
    to_x = [a](double t) { return a + t / (1.0 - t); };
    weight = [](double t) { return 1.0 / ((1.0 - t) * (1.0 - t)); };
    to_t = [a](double x) { return (x - a) / (1.0 + x - a); };
  } else {
    const double b = breaks.back();
    to_x = [b](double t) { return b - t / (1.0 - t); };
    weight = [](double t) { return 1.0 / ((1.0 - t) * (1.0 - t)); };
    to_t = [b](double x) { return (b - x) / (1.0 + b - x); };
  }
  std::vector<double> mapped;
  mapped.reserve(breaks.size());
  for (double x : breaks) {
    if (std::isinf(x)) {
      mapped.push_back(x < 0.0 ? (hi_inf ? -1.0 : 1.0) : 1.0);
    } else {
      mapped.push_back(to_t(x));
    }
  }
  std::sort(mapped.begin(), mapped.end());
  auto g = [&](double t) { return f(to_x(t)) * weight(t); };
  return adaptive(g, mapped, tolerance, max_intervals, error);
}

double integrate_unit_arcsine(const std::function<double(double)>& f, double tolerance) {
  // du = 2 sinθ cosθ dθ, θ ∈ (0, π/2)
  auto g = [&](double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return f(s * s) * 2.0 * s * c;
  };
  return integrate(g, 0.0, std::numbers::pi / 2.0, tolerance);
}

}  // namespace obm::quad
