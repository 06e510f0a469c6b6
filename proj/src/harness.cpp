#include "obm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include "obm/error.hpp"
#include "obm/estimate.hpp"
#include "obm/parallel.hpp"
#include "obm/rng.hpp"
#include "obm/simulate.hpp"
#include "obm/stats.hpp"

namespace obm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kGridPoints = 256;

struct Replication {
  double beta_plus;
  double beta_minus;
  double q_plus_fraction;
  double q_minus;
  int sign;
};

Replication replicate(const ExperimentConfig& cfg, std::size_t i) {
  SimConfig sim{cfg.params, cfg.T, cfg.N, cfg.substeps, rng::split(cfg.seed, i)};
  const PathStats s = path_stats(simulate_path(sim));
  Replication r{};
  r.beta_plus = beta_side(s, Side::Plus).value_or(kNaN);
  r.beta_minus = beta_side(s, Side::Minus).value_or(kNaN);
  r.q_plus_fraction = s.Q_plus / s.T;
  r.q_minus = s.Q_minus;
  r.sign = s.xiT > 0.0 ? 1 : (s.xiT < 0.0 ? -1 : 0);
  return r;
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= v.size()) return v.back();
  const double w = pos - static_cast<double>(k);
  return v[k] * (1.0 - w) + v[k + 1] * w;
}

void finish_series(Series& s, std::optional<double> bandwidth) {
  std::sort(s.sample.begin(), s.sample.end());
  if (s.sample.size() < 2) return;
  if (s.law) {
    const LimitLaw& law = *s.law;
    s.ks = ks_distance(s.sample, [&](double x) { return law.cdf(x); });
  }
  const double h = bandwidth.value_or(silverman_bandwidth(s.sample));
  double lo = quantile_sorted(s.sample, 0.001) - 3.0 * h;
  double hi = quantile_sorted(s.sample, 0.999) + 3.0 * h;
  if (s.law) {
    const auto [a, b] = s.law->support();
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  s.grid.resize(kGridPoints);
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    s.grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kGridPoints - 1);
  }
  s.empirical = kde(s.sample, s.grid, h);
  if (s.law) {
    s.theoretical.resize(kGridPoints);
    for (std::size_t k = 0; k < kGridPoints; ++k) {
      const double x = s.grid[k];
      const auto [a, b] = s.law->support();
      s.theoretical[k] = (x > a && x < b) || (x == a && std::isinf(b)) ? s.law->density(x) : 0.0;
    }
  }
}

// Collects f(rep) over the replications selected by keep; NaN values are
// counted as undefined.
template <class Keep, class F>
Series make_series(const std::vector<Replication>& reps, std::string name, std::string statistic,
                   std::string condition, std::optional<LimitLaw> law, Keep keep, F f) {
  Series s;
  s.name = std::move(name);
  s.statistic = std::move(statistic);
  s.condition = std::move(condition);
  s.law = std::move(law);
  for (const auto& r : reps) {
    if (!keep(r)) continue;
    const double v = f(r);
    if (std::isnan(v)) {
      ++s.undefined;
    } else {
      s.sample.push_back(v);
    }
  }
  return s;
}

bool is_mirror(Regime r) { return r == Regime::N1_mirror || r == Regime::T0_mirror; }

}  // namespace

std::string_view scenario_tag(Scenario s) noexcept {
  switch (s) {
    case Scenario::E: return "E";
    case Scenario::N0_scaling: return "N0_scaling";
    case Scenario::N1: return "N1";
    case Scenario::T0: return "T0";
    case Scenario::T1: return "T1";
  }
  return "?";
}

Scenario parse_scenario(std::string_view tag) {
  for (Scenario s : {Scenario::E, Scenario::N0_scaling, Scenario::N1, Scenario::T0, Scenario::T1}) {
    if (scenario_tag(s) == tag) return s;
  }
  throw Error(Errc::InvalidConfig, "unknown scenario '" + std::string(tag) + "'");
}

void ExperimentConfig::validate() const {
  SimConfig{params, T, N, substeps, seed}.validate();
  if (replications < 2) throw Error(Errc::InvalidConfig, "replications must be >= 2");
  if (kde_bandwidth && !(*kde_bandwidth > 0.0)) {
    throw Error(Errc::InvalidConfig, "kde bandwidth must be > 0");
  }
  const Regime r = classify_regime(params);
  bool ok = false;
  switch (scenario) {
    case Scenario::E: ok = r == Regime::E; break;
    case Scenario::N0_scaling: ok = r == Regime::N0 && params.xi0 == 0.0; break;
    case Scenario::N1: ok = r == Regime::N1 || r == Regime::N1_mirror; break;
    case Scenario::T0: ok = r == Regime::T0 || r == Regime::T0_mirror; break;
    case Scenario::T1: ok = r == Regime::T1; break;
  }
  if (!ok) {
    throw Error(Errc::ScenarioMismatch, "scenario " + std::string(scenario_tag(scenario)) +
                                            " does not match regime " +
                                            std::string(regime_tag(r)) +
                                            (scenario == Scenario::N0_scaling ? " with xi0 = 0" : ""));
  }
}

const Series* ExperimentResult::find(std::string_view name) const noexcept {
  for (const auto& s : series) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const unsigned workers = threads == 0 ? default_thread_count() : threads;

  std::vector<Replication> reps(cfg.replications);
  parallel_for(
      cfg.replications, [&](std::size_t i) { reps[i] = replicate(cfg, i); }, workers);

  ExperimentResult res;
  res.config = cfg;
  res.threads = workers;
  for (const auto& r : reps) {
    res.beta_plus.push_back(r.beta_plus);
    res.beta_minus.push_back(r.beta_minus);
    res.q_plus_fraction.push_back(r.q_plus_fraction);
    res.sign_xiT.push_back(r.sign);
  }
  res.q_plus_fraction_mean =
      std::accumulate(res.q_plus_fraction.begin(), res.q_plus_fraction.end(), 0.0) /
      static_cast<double>(reps.size());

  const ModelParams& p = cfg.params;
  const double sqrtT = std::sqrt(cfg.T);
  const double quartT = std::sqrt(sqrtT);
  const Regime regime = classify_regime(p);
  auto all = [](const Replication&) { return true; };
  auto up = [](const Replication& r) { return r.sign > 0; };
  auto down = [](const Replication& r) { return r.sign < 0; };
  auto plus_clt = [&](const Replication& r) { return sqrtT * (r.beta_plus - p.b_plus); };
  auto minus_clt = [&](const Replication& r) { return sqrtT * (r.beta_minus - p.b_minus); };
  const std::string plus_clt_name = "sqrt(T)*(beta_plus - b_plus)";
  const std::string minus_clt_name = "sqrt(T)*(beta_minus - b_minus)";

  switch (cfg.scenario) {
    case Scenario::E: {
      res.occupation_limit = ergodic_occupation_limit(p).first;
      res.series.push_back(make_series(reps, "beta_plus", plus_clt_name, "all",
                                       ergodic_limit_law(p, Side::Plus), all, plus_clt));
      res.series.push_back(make_series(reps, "beta_minus", minus_clt_name, "all",
                                       ergodic_limit_law(p, Side::Minus), all, minus_clt));
      break;
    }
    case Scenario::N0_scaling: {
      res.series.push_back(make_series(
          reps, "q_plus", "Q_plus/T", "all", LimitLaw(ArcsineLaw{p.sigma_plus / p.sigma_minus}),
          all, [](const Replication& r) { return r.q_plus_fraction; }));
      res.series.push_back(make_series(reps, "beta_plus", "sqrt(T)*beta_plus", "all",
                                       n0_scaling_check_law(p, 1.0, Side::Plus), all,
                                       [&](const Replication& r) { return sqrtT * r.beta_plus; }));
      res.series.push_back(make_series(reps, "beta_minus", "sqrt(T)*beta_minus", "all",
                                       n0_scaling_check_law(p, 1.0, Side::Minus), all,
                                       [&](const Replication& r) { return sqrtT * r.beta_minus; }));
      break;
    }
    case Scenario::N1: {
      if (!is_mirror(regime)) {
        const N1Laws laws = n1_limit_laws(p);
        res.series.push_back(
            make_series(reps, "beta_plus", plus_clt_name, "all", laws.beta_plus, all, plus_clt));
        res.series.push_back(make_series(
            reps, "beta_minus", "T^(1/4)*(beta_minus - b_minus)", "all", laws.beta_minus, all,
            [&](const Replication& r) { return quartT * (r.beta_minus - p.b_minus); }));
        res.series.push_back(make_series(reps, "q_minus", "Q_minus/sqrt(T)", "all",
                                         laws.q_minus, all,
                                         [&](const Replication& r) { return r.q_minus / sqrtT; }));
      } else {
        const N1Laws laws = n1_limit_laws(p.mirrored());
        res.series.push_back(make_series(reps, "beta_minus", minus_clt_name, "all",
                                         laws.beta_plus, all, minus_clt));
        res.series.push_back(make_series(
            reps, "beta_plus", "-T^(1/4)*(beta_plus - b_plus)", "all", laws.beta_minus, all,
            [&](const Replication& r) { return -quartT * (r.beta_plus - p.b_plus); }));
        res.series.push_back(make_series(
            reps, "q_plus", "Q_plus/sqrt(T)", "all", laws.q_minus, all,
            [&](const Replication& r) { return r.q_plus_fraction * cfg.T / sqrtT; }));
      }
      break;
    }
    case Scenario::T0: {
      if (!is_mirror(regime)) {
        res.series.push_back(make_series(reps, "beta_plus", plus_clt_name, "all",
                                         LimitLaw(NormalLaw{0.0, p.sigma_plus}), all, plus_clt));
        res.series.push_back(make_series(reps, "beta_minus", "beta_minus", "all",
                                         transient_ratio_law(p), all,
                                         [](const Replication& r) { return r.beta_minus; }));
      } else {
        res.series.push_back(make_series(reps, "beta_minus", minus_clt_name, "all",
                                         LimitLaw(NormalLaw{0.0, p.sigma_minus}), all, minus_clt));
        res.series.push_back(make_series(reps, "beta_plus", "-beta_plus", "all",
                                         transient_ratio_law(p.mirrored()), all,
                                         [](const Replication& r) { return -r.beta_plus; }));
      }
      break;
    }
    case Scenario::T1: {
      const auto n = static_cast<double>(reps.size());
      res.escape_fraction =
          static_cast<double>(std::count_if(reps.begin(), reps.end(), up)) / n;
      res.divergence_probability = t1_divergence_probability(p);
      res.series.push_back(make_series(reps, "beta_plus", plus_clt_name, "xi_T > 0",
                                       LimitLaw(NormalLaw{0.0, p.sigma_plus}), up, plus_clt));
      res.series.push_back(make_series(reps, "beta_minus", minus_clt_name, "xi_T < 0",
                                       LimitLaw(NormalLaw{0.0, p.sigma_minus}), down, minus_clt));
      res.series.push_back(make_series(reps, "beta_minus_ratio", "beta_minus", "xi_T > 0",
                                       transient_ratio_law(p), up,
                                       [](const Replication& r) { return r.beta_minus; }));
      res.series.push_back(make_series(reps, "beta_plus_ratio", "-beta_plus", "xi_T < 0",
                                       transient_ratio_law(p.mirrored()), down,
                                       [](const Replication& r) { return -r.beta_plus; }));
      break;
    }
  }
  for (auto& s : res.series) finish_series(s, cfg.kde_bandwidth);
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

double silverman_bandwidth(std::span<const double> sample) {
  if (sample.size() < 2) throw Error(Errc::TooFewPoints, "bandwidth needs >= 2 points");
  std::vector<double> v(sample.begin(), sample.end());
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double iqr = quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd > 0.0 ? sd : 1.0;
  return 0.9 * spread * std::pow(n, -0.2);
}

std::vector<double> kde(std::span<const double> sample, std::span<const double> grid,
                        std::optional<double> bandwidth) {
  if (sample.size() < 2) throw Error(Errc::TooFewPoints, "kde needs >= 2 points");
  const double h = bandwidth.value_or(silverman_bandwidth(sample));
  if (!(h > 0.0)) throw Error(Errc::DomainError, "bandwidth must be > 0");
  const double norm = 1.0 / (static_cast<double>(sample.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double acc = 0.0;
    for (double x : sample) {
      const double z = (grid[k] - x) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out[k] = acc * norm;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void write_series_csv(const std::filesystem::path& file, const Series& s) {
  std::ofstream out(file);
  if (!out) throw Error(Errc::InvalidConfig, "cannot write " + file.string());
  out << "x,empirical,theoretical\n";
  char buf[96];
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    const double th = s.theoretical.empty() ? kNaN : s.theoretical[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.grid[k], s.empirical[k], th);
    out << buf;
  }
}

ModelParams figure_params(double b_plus, double b_minus) {
  return ModelParams{0.01, 0.01, b_plus, b_minus, 0.0};
}

struct Run {
  std::string label;  // file infix, may be empty
  ExperimentConfig cfg;
  std::vector<std::pair<std::string, std::string>> exports;  // series name, file side
};

}  // namespace

FigureExport figure_bundle(int fig, std::uint64_t seed, std::size_t replications,
                           const std::filesystem::path& out_dir, unsigned threads,
                           std::size_t n_divisor) {
  if (n_divisor < 1) throw Error(Errc::InvalidConfig, "n_divisor must be >= 1");
  auto config = [&](ModelParams p, double T, std::size_t N, Scenario sc) {
    ExperimentConfig c;
    c.params = p;
    c.T = T;
    c.N = std::max<std::size_t>(1, N / n_divisor);
    c.replications = replications;
    c.seed = seed;
    c.scenario = sc;
    return c;
  };
  std::vector<Run> runs;
  switch (fig) {
    case 1:
      runs.push_back({"", config(figure_params(-0.003, 0.004), 1e3, 100000, Scenario::E),
                      {{"beta_plus", "plus"}, {"beta_minus", "minus"}}});
      break;
    case 2:
      runs.push_back({"N1", config(figure_params(0.0, 0.004), 1e3, 1000, Scenario::N1),
                      {{"beta_plus", "plus"}}});
      runs.push_back({"T0", config(figure_params(0.006, 0.004), 1e3, 1000, Scenario::T0),
                      {{"beta_plus", "plus"}}});
      runs.push_back({"T1", config(figure_params(0.003, -0.004), 1e3, 1000, Scenario::T1),
                      {{"beta_plus", "plus"}, {"beta_minus", "minus"}}});
      break;
    case 3:
      runs.push_back({"", config(figure_params(0.0, 0.004), 1e3, 100000, Scenario::N1),
                      {{"beta_minus", "minus"}}});
      break;
    case 4:
      runs.push_back({"T0", config(figure_params(0.003, 0.004), 20.0, 10000, Scenario::T0),
                      {{"beta_minus", "minus"}}});
      runs.push_back({"T1", config(figure_params(0.01, -0.003), 20.0, 100000, Scenario::T1),
                      {{"beta_plus_ratio", "plus"}, {"beta_minus_ratio", "minus"}}});
      break;
    case 5:
      runs.push_back({"T10", config(figure_params(0.0, 0.0), 10.0, 1000, Scenario::N0_scaling),
                      {{"beta_plus", "plus"}, {"beta_minus", "minus"}}});
      runs.push_back({"T100", config(figure_params(0.0, 0.0), 100.0, 10000, Scenario::N0_scaling),
                      {{"beta_plus", "plus"}, {"beta_minus", "minus"}}});
      runs.push_back({"T1000",
                      config(figure_params(0.0, 0.0), 1000.0, 100000, Scenario::N0_scaling),
                      {{"beta_plus", "plus"}, {"beta_minus", "minus"}}});
      break;
    default:
      throw Error(Errc::InvalidConfig, "figure id must be in 1..5");
  }

  std::filesystem::create_directories(out_dir);
  FigureExport out;
  for (const auto& run : runs) {
    out.runs.push_back(run_experiment(run.cfg, threads));
    const ExperimentResult& res = out.runs.back();
    for (const auto& [name, side] : run.exports) {
      const Series* s = res.find(name);
      if (s == nullptr || s->grid.empty()) continue;
      std::string file = "fig" + std::to_string(fig) + "_";
      if (!run.label.empty()) file += run.label + "_";
      file += side + ".csv";
      write_series_csv(out_dir / file, *s);
      out.files.push_back(out_dir / file);
    }
  }
  return out;
}

}  // namespace obm
