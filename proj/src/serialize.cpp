#include "obm/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "obm/error.hpp"

namespace obm {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<T>();
}

}  // namespace

json to_json(const ModelParams& p) {
  return {{"sigma_plus", p.sigma_plus},
          {"sigma_minus", p.sigma_minus},
          {"b_plus", p.b_plus},
          {"b_minus", p.b_minus},
          {"xi0", p.xi0}};
}

ModelParams params_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(Errc::ParseError, "params must be an object");
    if (!j.contains("sigma_plus") || !j.contains("sigma_minus")) {
      throw Error(Errc::ParseError, "params need sigma_plus and sigma_minus");
    }
    ModelParams p;
    p.sigma_plus = j.at("sigma_plus").get<double>();
    p.sigma_minus = j.at("sigma_minus").get<double>();
    p.b_plus = get_or(j, "b_plus", 0.0);
    p.b_minus = get_or(j, "b_minus", 0.0);
    p.xi0 = get_or(j, "xi0", 0.0);
    return p;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

json to_json(const PathStats& s) {
  return {{"T", s.T},
          {"N", s.N},
          {"xi0", s.xi0},
          {"xiT", s.xiT},
          {"Q_plus", s.Q_plus},
          {"Q_minus", s.Q_minus},
          {"R_plus", s.R_plus},
          {"R_minus", s.R_minus},
          {"L_sign", s.L_sign},
          {"L_dagger", optional_json(s.L_dagger)},
          {"L_cross", optional_json(s.L_cross)}};
}

json to_json(const DriftEstimate& e) {
  json j = {{"beta_plus", number_or_null(e.beta_plus)},
            {"beta_minus", number_or_null(e.beta_minus)},
            {"regime_assumed", nullptr},
            {"se_plus", optional_json(e.se_plus)},
            {"se_minus", optional_json(e.se_minus)},
            {"consistent_plus", e.consistent_plus},
            {"consistent_minus", e.consistent_minus}};
  if (e.regime_assumed) j["regime_assumed"] = std::string(regime_tag(*e.regime_assumed));
  return j;
}

json to_json(const WilkResult& w) {
  return {{"statistic", w.statistic}, {"quantile", w.quantile}, {"alpha", w.alpha}, {"reject", w.reject}};
}

json to_json(const ConfidenceIntervals& ci) {
  auto one = [](const std::optional<Interval>& i) {
    return i ? json{{"lower", i->lower}, {"upper", i->upper}} : json(nullptr);
  };
  return {{"plus", one(ci.plus)}, {"minus", one(ci.minus)}};
}

json to_json(const ExperimentConfig& c) {
  return {{"params", to_json(c.params)},
          {"T", c.T},
          {"N", c.N},
          {"substeps", c.substeps},
          {"replications", c.replications},
          {"seed", c.seed},
          {"scenario", std::string(scenario_tag(c.scenario))},
          {"kde_bandwidth", optional_json(c.kde_bandwidth)}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  try {
    ExperimentConfig c;
    c.params = params_from_json(j.at("params"));
    c.T = j.at("T").get<double>();
    c.N = j.at("N").get<std::size_t>();
    c.substeps = get_or<std::size_t>(j, "substeps", 1);
    c.replications = get_or<std::size_t>(j, "replications", 2000);
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.scenario = parse_scenario(j.at("scenario").get<std::string>());
    if (j.contains("kde_bandwidth") && !j["kde_bandwidth"].is_null()) {
      c.kde_bandwidth = j["kde_bandwidth"].get<double>();
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

json to_json(const ExperimentResult& r, bool include_runtime) {
  json series = json::array();
  for (const auto& s : r.series) {
    json table = json::array();
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
      table.push_back({s.grid[k], s.empirical[k],
                       s.theoretical.empty() ? json(nullptr) : number_or_null(s.theoretical[k])});
    }
    series.push_back({{"name", s.name},
                      {"statistic", s.statistic},
                      {"condition", s.condition},
                      {"size", s.sample.size()},
                      {"undefined", s.undefined},
                      {"law", s.law ? json(s.law->name()) : json(nullptr)},
                      {"ks", optional_json(s.ks)},
                      {"kde", table}});
  }
  json reps = {{"beta_plus", json::array()},
               {"beta_minus", json::array()},
               {"q_plus_fraction", r.q_plus_fraction},
               {"sign_xiT", r.sign_xiT}};
  for (double v : r.beta_plus) reps["beta_plus"].push_back(number_or_null(v));
  for (double v : r.beta_minus) reps["beta_minus"].push_back(number_or_null(v));
  json j = {{"schema_version", kSchemaVersion},
            {"config", to_json(r.config)},
            {"summary",
             {{"q_plus_fraction_mean", r.q_plus_fraction_mean},
              {"occupation_limit", optional_json(r.occupation_limit)},
              {"escape_fraction", optional_json(r.escape_fraction)},
              {"divergence_probability", optional_json(r.divergence_probability)}}},
            {"series", series},
            {"replications", reps}};
  if (include_runtime) {
    j["runtime"] = {{"elapsed_seconds", r.elapsed_seconds}, {"threads", r.threads}};
  }
  return j;
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace obm
