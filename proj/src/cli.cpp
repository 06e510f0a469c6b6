#include "obm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "obm/asymptotics.hpp"
#include "obm/error.hpp"
#include "obm/estimate.hpp"
#include "obm/harness.hpp"
#include "obm/serialize.hpp"
#include "obm/simulate.hpp"
#include "obm/stats.hpp"

namespace obm {

namespace {

using nlohmann::json;

struct ParamFlags {
  std::optional<double> sigma_plus;
  std::optional<double> sigma_minus;
  double b_plus = 0.0;
  double b_minus = 0.0;
  double xi0 = 0.0;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--sigma-plus", f.sigma_plus, "volatility for x >= 0");
  cmd->add_option("--sigma-minus", f.sigma_minus, "volatility for x < 0");
  cmd->add_option("--b-plus", f.b_plus, "drift for x >= 0");
  cmd->add_option("--b-minus", f.b_minus, "drift for x < 0");
  cmd->add_option("--xi0", f.xi0, "initial value");
}

ModelParams to_params(const ParamFlags& f) {
  ModelParams p{f.sigma_plus.value_or(1.0), f.sigma_minus.value_or(1.0), f.b_plus, f.b_minus, f.xi0};
  p.validate();
  return p;
}

// Fills options the user did not pass on the command line from a JSON file.
void apply_config_file(CLI::App* cmd, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read config " + file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(Errc::ParseError, "config must be a JSON object");
  if (j.contains("params")) {
    for (const auto& [k, v] : j["params"].items()) j[k] = v;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "params") continue;
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + flag);
    } catch (const CLI::OptionNotFound&) {
      throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    opt->clear();
    opt->add_result(text);
    opt->run_callback();
  }
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(Errc::InvalidConfig, "cannot write " + path);
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

PathGrid load_path(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read " + file);
  return read_path_csv(in);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  ParamFlags params;
  double T = 1.0;
  std::size_t N = 1000;
  std::size_t substeps = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
};

int cmd_simulate(SimulateArgs& a, std::ostream& out) {
  SimConfig cfg{to_params(a.params), a.T, a.N, a.substeps, a.seed};
  cfg.validate();
  const PathGrid path = simulate_path(cfg);
  Output o(a.out, out);
  write_path_csv(*o, path);
  return kExitOk;
}

struct EstimateArgs {
  std::string in;
  std::optional<double> sigma_plus;
  std::optional<double> sigma_minus;
  std::string regime;
  double level = 0.95;
  std::string out;
};

int cmd_estimate(EstimateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.sigma_plus.has_value() != a.sigma_minus.has_value()) {
    throw Error(Errc::InvalidConfig, "give both --sigma-plus and --sigma-minus or neither");
  }
  std::optional<Regime> regime;
  if (!a.regime.empty()) {
    regime = parse_regime(a.regime);
    if (!a.sigma_plus) throw Error(Errc::InvalidConfig, "--regime needs --sigma-plus and --sigma-minus");
  }
  if (!(a.level > 0.0 && a.level < 1.0)) throw Error(Errc::InvalidConfig, "--level must be in (0, 1)");
  const PathGrid path = load_path(a.in);
  std::optional<SigmaPair> sigma;
  if (a.sigma_plus) sigma = SigmaPair{*a.sigma_plus, *a.sigma_minus};
  const PathStats s = path_stats(path, sigma);

  const auto bp = beta_side(s, Side::Plus);
  const auto bm = beta_side(s, Side::Minus);
  json j = {{"schema_version", kSchemaVersion}, {"stats", to_json(s)}};
  int code = kExitOk;
  if (bp && bm) {
    DriftEstimate est = beta_discrete(s);
    if (regime) {
      const ModelParams p{*a.sigma_plus, *a.sigma_minus, est.beta_plus, est.beta_minus, s.xi0};
      apply_regime(est, s, p, *regime);
      j["intervals"] = to_json(confidence_intervals(est, s, p, *regime, a.level));
      j["level"] = a.level;
    }
    j["estimate"] = to_json(est);
  } else {
    j["estimate"] = {{"beta_plus", bp ? json(*bp) : json(nullptr)},
                     {"beta_minus", bm ? json(*bm) : json(nullptr)}};
    err << "warning: the path never visits the " << (bp ? "negative" : "positive")
        << " half-line; that drift is not estimable\n";
    code = kExitOneSided;
  }
  Output o(a.out, out);
  *o << dump(j) << "\n";
  return code;
}

struct DensityArgs {
  std::string law;
  ParamFlags params;
  double ratio = 1.0;
  std::string side = "plus";
  double T = 1.0;
  std::optional<double> from;
  std::optional<double> to;
  std::size_t points = 201;
  std::string out;
};

int cmd_density(DensityArgs& a, std::ostream& out) {
  if (a.points < 2) throw Error(Errc::InvalidConfig, "--points must be >= 2");
  if (a.side != "plus" && a.side != "minus") throw Error(Errc::InvalidConfig, "--side must be plus or minus");
  const Side side = a.side == "plus" ? Side::Plus : Side::Minus;
  static const std::vector<std::string> known = {"ergodic", "arcsine", "n0-beta", "n1-minus", "ratio"};
  if (std::find(known.begin(), known.end(), a.law) == known.end()) {
    throw Error(Errc::InvalidConfig, "unknown law '" + a.law + "'");
  }
  std::optional<LimitLaw> law;
  double lo = 0.0;
  double hi = 0.0;
  bool open_ends = false;
  if (a.law == "arcsine") {
    if (!(a.ratio > 0.0)) throw Error(Errc::InvalidConfig, "--ratio must be > 0");
    law.emplace(ArcsineLaw{a.ratio});
    lo = 0.0;
    hi = 1.0;
    open_ends = true;
  } else {
    const ModelParams p = to_params(a.params);
    if (!a.params.sigma_plus || !a.params.sigma_minus) {
      throw Error(Errc::InvalidConfig, "--law " + a.law + " needs --sigma-plus and --sigma-minus");
    }
    if (a.law == "ergodic") {
      law.emplace(ergodic_limit_law(p, side));
      const double sd = ergodic_limit_sd(p, side);
      lo = -5.0 * sd;
      hi = 5.0 * sd;
    } else if (a.law == "n0-beta") {
      if (classify_regime(p) != Regime::N0) throw Error(Errc::NotN0, "n0-beta needs b_plus = b_minus = 0");
      law.emplace(N0BetaLaw{p, side, a.T});
      const double s = std::max(p.sigma_plus, p.sigma_minus) / std::sqrt(a.T);
      lo = -10.0 * s;
      hi = 10.0 * s;
    } else if (a.law == "n1-minus") {
      law.emplace(n1_limit_laws(p).beta_minus);
      const double c = p.sigma_minus * std::sqrt(p.b_minus / p.sigma_plus);
      lo = -8.0 * c;
      hi = 8.0 * c;
    } else if (a.law == "ratio") {
      if (!(p.b_plus > 0.0)) {
        throw Error(Errc::UnsupportedRegime, "ratio law needs b_plus > 0");
      }
      law.emplace(transient_ratio_law(p));
      lo = 0.0;
      hi = 20.0 * std::max(std::abs(p.b_minus),
                           4.0 * p.b_plus * p.sigma_minus * p.sigma_minus / (p.sigma_plus * p.sigma_plus));
    } else {
      throw Error(Errc::InvalidConfig, "unknown law '" + a.law + "'");
    }
  }
  if (a.from) lo = *a.from;
  if (a.to) hi = *a.to;
  if (!(hi > lo)) throw Error(Errc::InvalidConfig, "--to must exceed --from");

  std::vector<double> xs(a.points);
  for (std::size_t k = 0; k < a.points; ++k) {
    xs[k] = open_ends && !a.from && !a.to
                ? lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(a.points + 1)
                : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(a.points - 1);
  }
  Output o(a.out, out);
  *o << "x,density\n";
  for (double x : xs) *o << fmt(x) << "," << fmt(law->density(x)) << "\n";
  const double mass = law->cdf(xs.back()) - law->cdf(xs.front());
  *o << "# captured_mass=" << fmt(mass) << "\n";
  return kExitOk;
}

struct TestArgs {
  std::string in;
  double b0_plus = 0.0;
  double b0_minus = 0.0;
  double alpha = 0.95;
  double sigma_plus = 1.0;
  double sigma_minus = 1.0;
  std::string out;
};

int cmd_test(TestArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw Error(Errc::InvalidConfig, "--alpha must be in (0, 1)");
  const ModelParams p{a.sigma_plus, a.sigma_minus, a.b0_plus, a.b0_minus, 0.0};
  p.validate();
  const PathGrid path = load_path(a.in);
  const PathStats s = path_stats(path);
  WilkResult w;
  try {
    w = wilk_test(s, p, a.b0_plus, a.b0_minus, a.alpha);
  } catch (const Error& e) {
    if (e.code() != Errc::NoOccupationPlus && e.code() != Errc::NoOccupationMinus) throw;
    err << "warning: " << e.what() << "\n";
    Output o(a.out, out);
    *o << dump({{"schema_version", kSchemaVersion}, {"statistic", nullptr},
                {"quantile", chi2_2dof_quantile(a.alpha)}, {"alpha", a.alpha}, {"reject", nullptr}})
       << "\n";
    return kExitOneSided;
  }
  json j = to_json(w);
  j["schema_version"] = kSchemaVersion;
  Output o(a.out, out);
  *o << dump(j) << "\n";
  return kExitOk;
}

struct FigureArgs {
  int fig = 0;
  std::uint64_t seed = 0;
  std::size_t replications = 2000;
  std::size_t n_divisor = 1;
  std::string out_dir = ".";
};

int cmd_figure(FigureArgs& a, std::ostream& out) {
  if (a.fig < 1 || a.fig > 5) throw Error(Errc::InvalidConfig, "--fig must be in 1..5");
  const FigureExport fx = figure_bundle(a.fig, a.seed, a.replications, a.out_dir, 0, a.n_divisor);
  json runs = json::array();
  for (const auto& r : fx.runs) runs.push_back(to_json(r));
  {
    const auto file = std::filesystem::path(a.out_dir) / ("fig" + std::to_string(a.fig) + ".json");
    std::ofstream js(file, std::ios::binary);
    js << dump({{"schema_version", kSchemaVersion}, {"figure", a.fig}, {"runs", runs}}) << "\n";
  }
  char buf[256];
  out << "scenario,T,N,series,condition,size,law,ks\n";
  for (const auto& r : fx.runs) {
    for (const auto& s : r.series) {
      std::snprintf(buf, sizeof buf, "%s,%g,%zu,%s,%s,%zu,%s,%s\n",
                    std::string(scenario_tag(r.config.scenario)).c_str(), r.config.T, r.config.N,
                    s.name.c_str(), s.condition.c_str(), s.sample.size(),
                    s.law ? s.law->name().c_str() : "", s.ks ? fmt(*s.ks).c_str() : "");
      out << buf;
    }
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::NonUniformGrid: return kExitNonUniform;
    case Errc::NoOccupationPlus:
    case Errc::NoOccupationMinus: return kExitOneSided;
    default: return kExitUsage;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oscillating Brownian motion with drift: simulation and drift estimation", "obm"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "simulate one path and write it as t,x CSV");
  add_param_flags(c_sim, sim.params);
  c_sim->add_option("--T", sim.T, "horizon");
  c_sim->add_option("--N", sim.N, "number of observation steps");
  c_sim->add_option("--substeps", sim.substeps, "Euler steps per observation step");
  c_sim->add_option("--seed", sim.seed, "random seed");
  c_sim->add_option("--out", sim.out, "output file (default: stdout)");
  c_sim->add_option("--config", sim.config, "JSON file with defaults for the flags above");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "estimate the drifts from a t,x CSV path");
  c_est->add_option("--in,input", est.in, "path CSV")->required();
  c_est->add_option("--sigma-plus", est.sigma_plus, "known volatility for x >= 0");
  c_est->add_option("--sigma-minus", est.sigma_minus, "known volatility for x < 0");
  c_est->add_option("--regime", est.regime, "assumed regime: E, N0, N1, N1_mirror, T0, T0_mirror, T1");
  c_est->add_option("--level", est.level, "confidence level");
  c_est->add_option("--out", est.out, "output file (default: stdout)");

  DensityArgs den;
  auto* c_den = app.add_subcommand("density", "tabulate a limit density as x,density CSV");
  c_den->add_option("--law", den.law, "ergodic, arcsine, n0-beta, n1-minus or ratio")->required();
  add_param_flags(c_den, den.params);
  c_den->add_option("--ratio", den.ratio, "sigma_plus/sigma_minus for the arcsine law");
  c_den->add_option("--side", den.side, "plus or minus");
  c_den->add_option("--T", den.T, "horizon for the n0-beta law");
  c_den->add_option("--from", den.from, "grid start");
  c_den->add_option("--to", den.to, "grid end");
  c_den->add_option("--points", den.points, "grid size");
  c_den->add_option("--out", den.out, "output file (default: stdout)");

  TestArgs tst;
  auto* c_tst = app.add_subcommand("test", "likelihood-ratio test of (b0_plus, b0_minus)");
  c_tst->add_option("--in,input", tst.in, "path CSV")->required();
  c_tst->add_option("--b0-plus", tst.b0_plus, "null drift for x >= 0")->required();
  c_tst->add_option("--b0-minus", tst.b0_minus, "null drift for x < 0")->required();
  c_tst->add_option("--alpha", tst.alpha, "confidence level of the chi-square quantile");
  c_tst->add_option("--sigma-plus", tst.sigma_plus, "volatility for x >= 0")->required();
  c_tst->add_option("--sigma-minus", tst.sigma_minus, "volatility for x < 0")->required();
  c_tst->add_option("--out", tst.out, "output file (default: stdout)");

  FigureArgs fig;
  auto* c_fig = app.add_subcommand("figure", "run a figure experiment and export CSV tables");
  c_fig->add_option("--fig", fig.fig, "figure id, 1..5")->required();
  c_fig->add_option("--seed", fig.seed, "random seed");
  c_fig->add_option("--replications", fig.replications, "replications per run");
  c_fig->add_option("--n-divisor", fig.n_divisor, "divide the figure N by this factor");
  c_fig->add_option("--out-dir", fig.out_dir, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (c_sim->parsed()) {
      if (!sim.config.empty()) apply_config_file(c_sim, sim.config);
      if (!sim.params.sigma_plus || !sim.params.sigma_minus) {
        throw Error(Errc::InvalidConfig, "--sigma-plus and --sigma-minus are required");
      }
      return cmd_simulate(sim, out);
    }
    if (c_est->parsed()) return cmd_estimate(est, out, err);
    if (c_den->parsed()) return cmd_density(den, out);
    if (c_tst->parsed()) return cmd_test(tst, out, err);
    if (c_fig->parsed()) return cmd_figure(fig, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace obm
