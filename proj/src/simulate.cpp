#include "obm/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "obm/error.hpp"
#include "obm/parallel.hpp"
#include "obm/rng.hpp"

namespace obm {

void SimConfig::validate() const {
  try {
    params.validate();
  } catch (const Error& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(Errc::InvalidConfig, "T must be > 0");
  if (N < 1) throw Error(Errc::InvalidConfig, "N must be >= 1");
  if (substeps < 1) throw Error(Errc::InvalidConfig, "substeps must be >= 1");
}

void PathGrid::validate() const {
  if (N < 1) throw Error(Errc::InvalidConfig, "path needs N >= 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(Errc::InvalidConfig, "path needs T > 0");
  if (values.size() != N + 1) throw Error(Errc::InvalidConfig, "path needs N + 1 values");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidConfig, "path values must be finite");
  }
}

PathGrid simulate_path(const SimConfig& cfg) {
  cfg.validate();
  const ModelParams& p = cfg.params;
  const double dt = cfg.T / static_cast<double>(cfg.N * cfg.substeps);
  const double sqrt_dt = std::sqrt(dt);
  const double drift_plus = p.b_plus * dt;
  const double drift_minus = p.b_minus * dt;
  const double vol_plus = p.sigma_plus * sqrt_dt;
  const double vol_minus = p.sigma_minus * sqrt_dt;

  PathGrid path{cfg.T, cfg.N, {}};
  path.values.resize(cfg.N + 1);
  rng::NormalSource normal(cfg.seed);

  double x = p.xi0;
  path.values[0] = x;
  for (std::size_t i = 1; i <= cfg.N; ++i) {
    for (std::size_t k = 0; k < cfg.substeps; ++k) {
      const double z = normal();
      x += x >= 0.0 ? drift_plus + vol_plus * z : drift_minus + vol_minus * z;
    }
    path.values[i] = x;
  }
  return path;
}

std::vector<PathGrid> simulate_batch(const SimConfig& cfg, std::size_t replications,
                                     unsigned threads) {
  cfg.validate();
  if (replications < 1) throw Error(Errc::InvalidConfig, "replications must be >= 1");
  std::vector<PathGrid> out(replications);
  parallel_for(
      replications,
      [&](std::size_t i) {
        SimConfig c = cfg;
        c.seed = rng::split(cfg.seed, i);
        out[i] = simulate_path(c);
      },
      threads);
  return out;
}

void write_path_csv(std::ostream& out, const PathGrid& path) {
  char buf[64];
  out << "t,x\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.time(i), path.values[i]);
    out << buf;
  }
}

namespace {

double parse_number(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(v)) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

PathGrid read_path_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "t,x") throw Error(Errc::ParseError, "expected header 't,x'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected two fields");
    }
    times.push_back(parse_number(trim(line.substr(0, comma)), line_no));
    values.push_back(parse_number(trim(line.substr(comma + 1)), line_no));
  }
  if (!header_seen) throw Error(Errc::ParseError, "empty input");
  if (values.size() < 2) throw Error(Errc::ParseError, "need at least two observations");

  const std::size_t n = values.size() - 1;
  const double t0 = times.front();
  const double span = times.back() - t0;
  if (!(span > 0.0)) throw Error(Errc::NonUniformGrid, "time must increase");
  const double step = span / static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double gap = times[i] - times[i - 1];
    if (std::abs(gap - step) > 1e-9 * step) {
      throw Error(Errc::NonUniformGrid, "step " + std::to_string(i) + " deviates from T/N");
    }
  }
  return PathGrid{span, n, std::move(values)};
}

}  // namespace obm
