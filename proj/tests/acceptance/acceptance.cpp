#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obm/asymptotics.hpp"
#include "obm/cli.hpp"
#include "obm/estimate.hpp"
#include "obm/harness.hpp"
#include "obm/model.hpp"
#include "obm/parallel.hpp"
#include "obm/quadrature.hpp"
#include "obm/rng.hpp"
#include "obm/serialize.hpp"
#include "obm/simulate.hpp"
#include "obm/stats.hpp"

using namespace obm;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr std::size_t kReplications = 2000;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [out of tolerance]");
  }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

ModelParams percent_vol(double b_plus, double b_minus) { return {0.01, 0.01, b_plus, b_minus, 0.0}; }

ExperimentConfig experiment(ModelParams p, double T, std::size_t N, Scenario s,
                            std::uint64_t seed, std::size_t substeps = 1) {
  ExperimentConfig c;
  c.params = p;
  c.T = T;
  c.N = N;
  c.substeps = substeps;
  c.replications = kReplications;
  c.seed = seed;
  c.scenario = s;
  return c;
}

double series_ks(const ExperimentResult& r, const char* name) { return r.find(name)->ks.value(); }

double pieces(const std::function<double(double)>& f, std::vector<double> cuts, double tol) {
  return quad::integrate_pieces(f, cuts, tol);
}

double whole_line(const std::function<double(double)>& f, double tol) {
  return quad::integrate(f, -inf, 0.0, tol) + quad::integrate(f, 0.0, inf, tol);
}

// --------------------------------------------------------------------------

Outcome estimator_identity() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  rng::Xoshiro256pp gen(rng::split(2024, 0));
  double worst = 0.0;
  std::size_t compared = 0;
  while (compared < 10000) {
    const double sp = 0.2 + 2.0 * rng::uniform(gen);
    const double sm = 0.2 + 2.0 * rng::uniform(gen);
    const double bp = 2.0 * rng::uniform(gen) - 1.0;
    const double bm = 2.0 * rng::uniform(gen) - 1.0;
    const double xi0 = rng::uniform(gen) - 0.5;
    const std::size_t N = 20 + static_cast<std::size_t>(480 * rng::uniform(gen));
    const double T = 0.5 + 20.0 * rng::uniform(gen);
    const PathGrid path = simulate_path(SimConfig{{sp, sm, bp, bm, xi0}, T, N, 1, gen()});
    const PathStats s = path_stats(path);
    if (s.Q_plus == 0.0 || s.Q_minus == 0.0) continue;
    const DriftEstimate ratio = beta_discrete(s);
    const DriftEstimate local = beta_continuous(s.xi0, s.xiT, s.L_sign, s.Q_plus, s.Q_minus);
    auto rel = [](double a, double b) {
      const double scale = std::max(std::abs(a), std::abs(b));
      return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
    };
    worst = std::max({worst, rel(ratio.beta_plus, local.beta_plus),
                      rel(ratio.beta_minus, local.beta_minus)});
    ++compared;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(true, fmt("%.0f two-sided paths", static_cast<double>(compared)));
  out.require(worst <= 1e-10, fmt("max relative gap %.2e (tol 1e-10)", worst));
  out.require(seconds < 5.0, fmt("%.2f s (limit 5 s)", seconds));
  return out;
}

struct ErgodicRun {
  ExperimentResult result;
  bool done = false;
};

ErgodicRun& fig1_run() {
  static ErgodicRun run;
  if (!run.done) {
    run.result = run_experiment(experiment(percent_vol(-0.003, 0.004), 1e3, 100000, Scenario::E, 1));
    run.done = true;
  }
  return run;
}

Outcome ergodic_clt() {
  Outcome out;
  const auto& r = fig1_run().result;
  const double kp = series_ks(r, "beta_plus");
  const double km = series_ks(r, "beta_minus");
  out.require(kp < 0.05, fmt("KS plus %.4f (tol 0.05)", kp));
  out.require(km < 0.05, fmt("KS minus %.4f (tol 0.05)", km));
  return out;
}

Outcome ergodic_occupation() {
  Outcome out;
  const auto& r = fig1_run().result;
  const double mean = r.q_plus_fraction_mean;
  out.require(std::abs(mean - 4.0 / 7.0) <= 0.01, fmt("mean Q+/T %.4f vs 4/7 = %.4f (tol 0.01)",
                                                       mean, 4.0 / 7.0));
  return out;
}

Outcome arcsine_law() {
  Outcome out;
  for (double ratio : {1.0, 2.0}) {
    const ModelParams p{0.01 * ratio, 0.01, 0.0, 0.0, 0.0};
    const auto r = run_experiment(experiment(p, 1.0, 10000, Scenario::N0_scaling, 2));
    const double ks = series_ks(r, "q_plus");
    out.require(ks < 0.05, fmt("ratio %.0f: KS %.4f (tol 0.05)", ratio, ks));
  }
  return out;
}

Outcome n0_scaling() {
  Outcome out;
  const std::vector<std::pair<double, std::size_t>> grid{{10.0, 1000}, {100.0, 10000},
                                                          {1000.0, 100000}};
  std::vector<ExperimentResult> runs;
  for (auto [T, N] : grid) {
    runs.push_back(run_experiment(experiment(percent_vol(0, 0), T, N, Scenario::N0_scaling, 3)));
  }
  for (const char* side : {"beta_plus", "beta_minus"}) {
    double worst = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (std::size_t j = i + 1; j < runs.size(); ++j) {
        worst = std::max(worst, ks_two_sample(runs[i].find(side)->sample, runs[j].find(side)->sample));
      }
    }
    out.require(worst < 0.08, std::string(side) + fmt(": max pairwise KS %.4f (tol 0.08)", worst));
  }
  return out;
}

Outcome n1_two_rates() {
  Outcome out;
  const ModelParams p = percent_vol(0.0, 0.004);
  const auto coarse = run_experiment(experiment(p, 1e3, 1000, Scenario::N1, 4));
  const double kp = series_ks(coarse, "beta_plus");
  out.require(kp < 0.05, fmt("plus N=1e3: KS %.4f (tol 0.05)", kp));
  const auto fine = run_experiment(experiment(p, 1e3, 100000, Scenario::N1, 4));
  const double km = series_ks(fine, "beta_minus");
  out.require(km < 0.08, fmt("minus N=1e5: KS %.4f (tol 0.08)", km));
  return out;
}

Outcome t0_ratio_law() {
  Outcome out;
  const ModelParams p = percent_vol(0.003, 0.004);
  const auto r = run_experiment(experiment(p, 20.0, 10000, Scenario::T0, 5));
  const double ks = series_ks(r, "beta_minus");
  out.require(ks < 0.08, fmt("KS beta_minus vs p_R %.4f (tol 0.08)", ks));
  const double mass = pieces([&](double x) { return transient_ratio_density(p, x); },
                             {0.0, 0.004, 0.04, 1.0, inf}, 1e-12);
  out.require(std::abs(mass - 1.0) <= 1e-6, fmt("mass of p_R %.10f (tol 1e-6)", mass));
  return out;
}

Outcome t1_divergence() {
  Outcome out;
  const ModelParams p = percent_vol(0.003, -0.004);
  const auto r = run_experiment(experiment(p, 1e3, 1000, Scenario::T1, 6, 100));
  const double frac = r.escape_fraction.value();
  const double target = t1_divergence_probability(p);
  out.require(std::abs(frac - target) <= 0.03,
              fmt("P[xi_T > 0] %.4f vs %.4f (tol 0.03)", frac, target));
  const double kp = series_ks(r, "beta_plus");
  const double km = series_ks(r, "beta_minus");
  out.require(kp < 0.08, fmt("KS plus | xi_T > 0 %.4f (tol 0.08)", kp));
  out.require(km < 0.08, fmt("KS minus | xi_T < 0 %.4f (tol 0.08)", km));
  return out;
}

Outcome wilk_calibration() {
  Outcome out;
  const ModelParams p = percent_vol(-0.003, 0.004);
  const std::size_t reps = 1000;
  const std::uint64_t seed = 7;
  std::vector<WilkResult> results(reps);
  parallel_for(reps, [&](std::size_t i) {
    const PathGrid path = simulate_path(SimConfig{p, 1e3, 100000, 1, rng::split(seed, i)});
    results[i] = wilk_test(path_stats(path), p, p.b_plus, p.b_minus, 0.95);
  });
  std::size_t rejected = 0;
  for (const auto& w : results) rejected += w.reject ? 1 : 0;
  const double rate = static_cast<double>(rejected) / static_cast<double>(reps);
  out.require(rate >= 0.03 && rate <= 0.08, fmt("rejection rate %.3f (range [0.03, 0.08])", rate));
  const double q = results.front().quantile;
  const double exact = -2.0 * std::log(0.05);
  out.require(std::abs(q - exact) <= 1e-15 * exact, fmt("quantile %.15f vs %.15f", q, exact));

  // The command-line test on the same paths gives the same statistics.
  const auto dir = std::filesystem::temp_directory_path() / "obm_acceptance_wilk";
  std::filesystem::create_directories(dir);
  bool same = true;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto file = dir / "path.csv";
    {
      std::ofstream f(file);
      write_path_csv(f, simulate_path(SimConfig{p, 1e3, 100000, 1, rng::split(seed, i)}));
    }
    std::ostringstream so, se;
    const int code = run_cli({"test", "--in", file.string(), "--b0-plus", "-0.003", "--b0-minus",
                              "0.004", "--alpha", "0.95", "--sigma-plus", "0.01",
                              "--sigma-minus", "0.01"},
                             so, se);
    const auto j = nlohmann::json::parse(so.str());
    const double stat = j.at("statistic").get<double>();
    same = same && code == 0 &&
           std::abs(stat - results[i].statistic) <= 1e-9 * std::max(1.0, std::abs(stat));
  }
  std::filesystem::remove_all(dir);
  out.require(same, "command-line test matches on 5 paths");
  return out;
}

Outcome density_engine() {
  Outcome out;
  auto check_mass = [&](const std::string& name, double mass, double tol) {
    out.require(std::abs(mass - 1.0) <= tol, name + fmt(" %.3g (tol %.0e)", mass - 1.0, tol));
  };

  const ModelParams erg{0.7, 1.3, -0.4, 0.9, 0.0};
  check_mass("invariant", whole_line([&](double x) { return invariant_density(erg, x); }, 1e-10),
             1e-8);
  const LimitLaw normal = ergodic_limit_law(erg, Side::Plus);
  check_mass("ergodic", whole_line([&](double x) { return normal.density(x); }, 1e-10), 1e-9);
  for (double r : {0.5, 2.0}) {
    check_mass(fmt("arcsine(%g)", r),
               quad::integrate_unit_arcsine([&](double u) { return arcsine_density(r, u); }, 1e-11),
               1e-9);
  }
  const LimitLaw half(HalfNormalLaw{2.5});
  check_mass("half-normal", quad::integrate([&](double x) { return half.density(x); }, 0, inf),
             1e-9);

  const ModelParams n0{2.0, 1.0, 0.0, 0.0, 0.0};
  for (Side side : {Side::Plus, Side::Minus}) {
    auto f = [&](double x) { return n0_beta_marginal_density(n0, side, x); };
    check_mass(side == Side::Plus ? "n0 beta+" : "n0 beta-",
               pieces(f, {-inf, -10, -1, 0, 1, 10, inf}, 1e-9), 1e-6);
  }
  {
    const std::vector<double> cuts{-inf, -5, -1, -0.1, -0.01, 0, 0.01, 0.1, 1, 5, inf};
    auto inner = [&](double a) {
      return pieces([&](double b) { return n0_beta_density(n0, a, b); }, cuts, 1e-6);
    };
    check_mass("n0 beta joint", pieces(inner, cuts, 1e-5), 1e-3);
  }
  {
    auto over_lambda = [&](double rho, double tau) {
      return quad::integrate([&](double l) { return n0_joint_density(n0, rho, l, tau); }, 0, inf,
                             1e-10);
    };
    auto tau_marginal = [&](double tau) {
      return pieces([&](double rho) { return over_lambda(rho, tau); }, {-inf, 0, inf}, 1e-10);
    };
    const double total = quad::integrate_unit_arcsine(tau_marginal, 1e-7);
    check_mass("n0 joint (rho, lambda, tau)", total, 1e-4);
    double worst = 0.0;
    for (double tau : {0.1, 0.5, 0.85}) {
      worst = std::max(worst, std::abs(tau_marginal(tau) - arcsine_density(2.0, tau)));
    }
    out.require(worst <= 1e-4, fmt("tau-marginal vs arcsine max gap %.2e (tol 1e-4)", worst));
  }

  const double c = 0.01 * std::sqrt(0.004 / 0.01);
  check_mass("n1 minus", whole_line([&](double x) { return n1_minus_density(c, x); }, 1e-10),
             1e-6);

  const ModelParams t0{0.01, 0.01, 0.003, 0.004, 0.0};
  check_mass("ratio", pieces([&](double r) { return transient_ratio_density(t0, r); },
                             {0, 0.004, 0.04, 1, inf}, 1e-12),
             1e-6);
  const T0LastPassageLaws lp(t0);
  check_mass("last-passage L",
             quad::integrate([&](double t) { return lp.local_time_density(t); }, 0, inf, 1e-12),
             1e-6);
  check_mass("Q- given L",
             quad::integrate([&](double s) { return lp.occupation_given_local_time(s, 0.02); }, 0,
                             inf, 1e-12),
             1e-6);
  check_mass("joint (Q-, L)",
             quad::integrate(
                 [&](double t) {
                   return quad::integrate([&](double s) { return lp.joint_density(s, t); }, 0, inf,
                                          1e-12);
                 },
                 0, inf, 1e-10),
             1e-6);
  double worst = 0.0;
  for (double r : {0.5 * t0.b_minus, t0.b_minus, 2.0 * t0.b_minus}) {
    const double via_joint = quad::integrate(
        [&](double s) { return 2.0 * s * lp.joint_density(s, 2.0 * r * s); }, 0, inf, 1e-12);
    worst = std::max(worst, std::abs(via_joint - transient_ratio_density(t0, r)) /
                                transient_ratio_density(t0, r));
  }
  out.require(worst <= 1e-6, fmt("change of variables max relative gap %.2e (tol 1e-6)", worst));
  return out;
}

struct Captured {
  int code;
  std::string out;
  std::string files;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Captured capture(const std::vector<std::string>& args, const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::vector<std::string> full = args;
  for (auto& a : full) {
    if (a.rfind("@DIR", 0) == 0) a = dir.string() + a.substr(4);
  }
  std::ostringstream so, se;
  Captured c{run_cli(full, so, se), so.str(), ""};
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) c.files += f.filename().string() + "\n" + slurp(f);
  return c;
}

Outcome determinism() {
  Outcome out;
  const auto base = std::filesystem::temp_directory_path() / "obm_acceptance_det";
  std::filesystem::create_directories(base);
  const auto path_file = base / "input.csv";
  {
    std::ofstream f(path_file);
    write_path_csv(f, simulate_path(SimConfig{percent_vol(-0.003, 0.004), 100, 5000, 1, 11}));
  }
  const std::string in = path_file.string();
  const std::vector<std::vector<std::string>> commands{
      {"simulate", "--sigma-plus", "0.01", "--sigma-minus", "0.01", "--b-plus", "-0.003",
       "--b-minus", "0.004", "--T", "100", "--N", "1000", "--seed", "42", "--out", "@DIR/p.csv"},
      {"estimate", "--in", in, "--regime", "E", "--sigma-plus", "0.01", "--sigma-minus", "0.01"},
      {"density", "--law", "ratio", "--sigma-plus", "0.01", "--sigma-minus", "0.01", "--b-plus",
       "0.003", "--b-minus", "0.004", "--from", "0", "--to", "0.05", "--points", "101"},
      {"test", "--in", in, "--b0-plus", "-0.003", "--b0-minus", "0.004", "--sigma-plus", "0.01",
       "--sigma-minus", "0.01"},
      {"figure", "--fig", "2", "--seed", "9", "--replications", "60", "--n-divisor", "10",
       "--out-dir", "@DIR"},
      {"figure", "--fig", "4", "--seed", "9", "--replications", "60", "--n-divisor", "100",
       "--out-dir", "@DIR"},
  };
  std::size_t identical = 0;
  for (const auto& args : commands) {
    const auto dir = base / "run";
    setenv("THRESHOLD_DIFFUSION_THREADS", "1", 1);
    const Captured a = capture(args, dir);
    const Captured b = capture(args, dir);
    setenv("THRESHOLD_DIFFUSION_THREADS", "3", 1);
    const Captured c = capture(args, dir);
    const bool same = a.code == 0 && a.code == b.code && a.code == c.code && a.out == b.out &&
                      a.out == c.out && a.files == b.files && a.files == c.files;
    if (same) {
      ++identical;
    } else {
      out.require(false, args.front() + " differs between runs");
    }
  }
  unsetenv("THRESHOLD_DIFFUSION_THREADS");
  out.require(identical == commands.size(),
              fmt("%.0f/%.0f commands byte-identical across runs and 1 vs 3 threads",
                  static_cast<double>(identical), static_cast<double>(commands.size())));

  auto cfg = experiment(percent_vol(0.003, -0.004), 100, 1000, Scenario::T1, 12);
  cfg.replications = 200;
  const bool same_result = to_json(run_experiment(cfg, 1)).dump() ==
                           to_json(run_experiment(cfg, 3)).dump();
  out.require(same_result, "experiment JSON identical for 1 vs 3 threads");
  std::filesystem::remove_all(base);
  return out;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "estimator identity", estimator_identity},
      {2, "ergodic CLT", ergodic_clt},
      {3, "ergodic occupation limit", ergodic_occupation},
      {4, "N0 arcsine law", arcsine_law},
      {5, "N0 scaling", n0_scaling},
      {6, "N1 two-rate CLT", n1_two_rates},
      {7, "T0 ratio law", t0_ratio_law},
      {8, "T1 divergence probability", t1_divergence},
      {9, "Wilk test calibration", wilk_calibration},
      {10, "density engine", density_engine},
      {11, "determinism", determinism},
  };
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  const std::set<int> selected(only.begin(), only.end());

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = expected.count(c.id) > 0;
    const char* tag = o.pass ? "PASS" : (known ? "FAIL (expected)" : "FAIL");
    std::printf("criterion %2d %-28s %s: %s (%.1f s)\n", c.id, c.title, tag, o.detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
  }
  std::printf("%s\n", unexpected == 0 ? "acceptance: OK" : "acceptance: FAILED");
  return unexpected == 0 ? 0 : 1;
}
