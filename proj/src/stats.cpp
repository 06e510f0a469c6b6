#include "obm/stats.hpp"

#include <cmath>
#include <tuple>
#include <numbers>

#include "obm/error.hpp"

namespace obm {

namespace {

void require_path(const PathGrid& path) {
  if (path.N < 1 || path.values.size() != path.N + 1) {
    throw Error(Errc::InvalidConfig, "path needs N >= 1 and N + 1 values");
  }
}

void require_sigma(double sp, double sm) {
  if (!(sp > 0.0) || !(sm > 0.0) || !std::isfinite(sp) || !std::isfinite(sm)) {
    throw Error(Errc::InvalidSigma, "sigma_plus and sigma_minus must be > 0");
  }
}

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace

std::pair<double, double> occupation_discrete(const PathGrid& path) {
  require_path(path);
  std::size_t above = 0;
  for (std::size_t i = 0; i < path.N; ++i) above += path.values[i] >= 0.0 ? 1 : 0;
  const double dt = path.dt();
  return {dt * static_cast<double>(above), dt * static_cast<double>(path.N - above)};
}

std::pair<double, double> signed_increments_discrete(const PathGrid& path) {
  require_path(path);
  double r_plus = 0.0;
  double r_minus = 0.0;
  const auto& v = path.values;
  for (std::size_t i = 0; i < path.N; ++i) {
    const double inc = v[i + 1] - v[i];
    if (v[i] >= 0.0) r_plus += inc;
    if (v[i] <= 0.0) r_minus += inc;
  }
  return {r_plus, r_minus};
}

double local_time_sign(const PathGrid& path) {
  require_path(path);
  double sum = 0.0;
  const auto& v = path.values;
  for (std::size_t i = 0; i < path.N; ++i) {
    if (v[i] * v[i + 1] < 0.0) sum += std::abs(v[i + 1]);
  }
  return 2.0 * sum;
}

double local_time_dagger(const PathGrid& path, double sigma_plus, double sigma_minus) {
  require_path(path);
  require_sigma(sigma_plus, sigma_minus);
  double sum = 0.0;
  const auto& v = path.values;
  for (std::size_t k = 1; k <= path.N; ++k) {
    sum += (pos(v[k]) - pos(v[k - 1])) * (neg(v[k]) - neg(v[k - 1]));
  }
  const double scale = -1.5 * std::sqrt(std::numbers::pi / (2.0 * path.dt())) *
                       (sigma_plus + sigma_minus) / (sigma_plus * sigma_minus);
  return scale * sum;
}

double local_time_cross(const PathGrid& path, double sigma_plus, double sigma_minus) {
  require_path(path);
  require_sigma(sigma_plus, sigma_minus);
  std::size_t crossings = 0;
  const auto& v = path.values;
  for (std::size_t k = 0; k < path.N; ++k) crossings += v[k] * v[k + 1] < 0.0 ? 1 : 0;
  const double n = static_cast<double>(path.N);
  return 4.0 / std::sqrt(2.0 * std::numbers::pi) / (sigma_plus + sigma_minus) *
         std::sqrt(path.T / n) * static_cast<double>(crossings);
}

PathStats path_stats(const PathGrid& path, std::optional<SigmaPair> sigma) {
  require_path(path);
  PathStats s;
  s.T = path.T;
  s.N = path.N;
  s.xi0 = path.front();
  s.xiT = path.back();
  std::tie(s.Q_plus, s.Q_minus) = occupation_discrete(path);
  std::tie(s.R_plus, s.R_minus) = signed_increments_discrete(path);
  s.L_sign = local_time_sign(path);
  if (sigma) {
    s.L_dagger = local_time_dagger(path, sigma->plus, sigma->minus);
    s.L_cross = local_time_cross(path, sigma->plus, sigma->minus);
  }
  return s;
}

std::optional<double> last_zero_crossing(const PathGrid& path) {
  require_path(path);
  const auto& v = path.values;
  for (std::size_t i = path.N; i >= 1; --i) {
    if (v[i - 1] * v[i] <= 0.0) return path.time(i);
  }
  return std::nullopt;
}

}  // namespace obm
