#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "obm/asymptotics.hpp"
#include "obm/model.hpp"

namespace obm {

enum class Scenario { E, N0_scaling, N1, T0, T1 };

std::string_view scenario_tag(Scenario s) noexcept;
/// Throws Error(InvalidConfig) on an unknown tag.
Scenario parse_scenario(std::string_view tag);

struct ExperimentConfig {
  ModelParams params;
  double T = 1.0;
  std::size_t N = 1;
  std::size_t substeps = 1;
  std::size_t replications = 2000;
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::E;
  std::optional<double> kde_bandwidth;

  /// Throws Error(InvalidConfig) on bad sizes and Error(ScenarioMismatch)
  /// when the scenario does not match classify_regime(params). Scenario N1
  /// also accepts N1_mirror and T0 accepts T0_mirror; N0_scaling needs
  /// xi0 = 0.
  void validate() const;
};

/// One empirical distribution and its reference law.
struct Series {
  std::string name;       // e.g. "beta_plus"
  std::string statistic;  // e.g. "sqrt(T)*(beta_plus - b_plus)"
  std::string condition;  // "all", "xi_T > 0" or "xi_T < 0"
  std::vector<double> sample;
  std::size_t undefined = 0;  // replications where the estimator was undefined
  std::optional<LimitLaw> law;
  std::optional<double> ks;
  std::vector<double> grid;
  std::vector<double> empirical;    // KDE on grid
  std::vector<double> theoretical;  // law density on grid
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<double> beta_plus;   // NaN when Q₊ = 0
  std::vector<double> beta_minus;  // NaN when Q₋ = 0
  std::vector<double> q_plus_fraction;
  std::vector<int> sign_xiT;
  std::vector<Series> series;
  double q_plus_fraction_mean = 0.0;
  std::optional<double> occupation_limit;        // E only
  std::optional<double> escape_fraction;         // T1 only: share of ξ_T > 0
  std::optional<double> divergence_probability;  // T1 only
  double elapsed_seconds = 0.0;
  unsigned threads = 1;

  const Series* find(std::string_view name) const noexcept;
};

/// Simulates, estimates and compares every replication with the limit laws
/// of the scenario. Output does not depend on `threads` (0 = default).
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

/// 0.9·min(sd, IQR/1.34)·n^{−1/5}; falls back to sd (or 1) when the spread
/// measure is 0. Throws Error(TooFewPoints) for fewer than two points.
double silverman_bandwidth(std::span<const double> sample);

/// Gaussian kernel density estimate on grid. Throws Error(TooFewPoints).
std::vector<double> kde(std::span<const double> sample, std::span<const double> grid,
                        std::optional<double> bandwidth = std::nullopt);

struct FigureExport {
  std::vector<ExperimentResult> runs;
  std::vector<std::filesystem::path> files;
};

/// Fixed parameters of figure 1..5 with `replications` per run; writes
/// `x,empirical,theoretical` CSVs into out_dir. N is divided by
/// n_divisor (≥ 1) for quick runs. Throws Error(InvalidConfig) on a bad id.
FigureExport figure_bundle(int fig, std::uint64_t seed, std::size_t replications,
                           const std::filesystem::path& out_dir, unsigned threads = 0,
                           std::size_t n_divisor = 1);

}  // namespace obm
