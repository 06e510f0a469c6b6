#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "obm/error.hpp"
#include "obm/harness.hpp"
#include "obm/serialize.hpp"

using namespace obm;

namespace {

ExperimentConfig small(Scenario scenario, ModelParams p) {
  ExperimentConfig c;
  c.params = p;
  c.T = 50;
  c.N = 500;
  c.replications = 40;
  c.seed = 17;
  c.scenario = scenario;
  return c;
}

}  // namespace

TEST_CASE("scenario tags") {
  for (auto s : {Scenario::E, Scenario::N0_scaling, Scenario::N1, Scenario::T0, Scenario::T1}) {
    CHECK(parse_scenario(scenario_tag(s)) == s);
  }
  CHECK_THROWS_AS(parse_scenario("nope"), Error);
}

TEST_CASE("config validation") {
  auto c = small(Scenario::E, ModelParams{1, 1, -0.3, 0.4, 0});
  CHECK_NOTHROW(c.validate());
  c.replications = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = small(Scenario::E, ModelParams{1, 1, 0, 0, 0});
  try {
    c.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScenarioMismatch);
  }
  CHECK_NOTHROW(small(Scenario::N1, ModelParams{1, 1, -0.2, 0, 0}).validate());
  CHECK_NOTHROW(small(Scenario::T0, ModelParams{1, 1, -0.2, -0.1, 0}).validate());
  CHECK_THROWS_AS(small(Scenario::N0_scaling, ModelParams{1, 1, 0, 0, 1}).validate(), Error);
  c = small(Scenario::E, ModelParams{1, 1, -0.3, 0.4, 0});
  c.kde_bandwidth = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("ergodic run") {
  const auto r = run_experiment(small(Scenario::E, ModelParams{1, 1, -0.3, 0.4, 0}), 1);
  CHECK(r.beta_plus.size() == 40);
  CHECK(r.beta_minus.size() == 40);
  CHECK(r.q_plus_fraction.size() == 40);
  CHECK(r.sign_xiT.size() == 40);
  REQUIRE(r.occupation_limit.has_value());
  CHECK(*r.occupation_limit == doctest::Approx(4.0 / 7));
  const Series* s = r.find("beta_plus");
  REQUIRE(s != nullptr);
  REQUIRE(s->ks.has_value());
  CHECK(*s->ks >= 0.0);
  CHECK(*s->ks <= 1.0);
  CHECK(std::is_sorted(s->sample.begin(), s->sample.end()));
  CHECK(s->grid.size() == s->empirical.size());
  CHECK(s->grid.size() == s->theoretical.size());
  CHECK(r.find("missing") == nullptr);
}

TEST_CASE("runs do not depend on the thread count") {
  const auto cfg = small(Scenario::T1, ModelParams{1, 1, 0.3, -0.4, 0});
  const auto a = run_experiment(cfg, 1);
  const auto b = run_experiment(cfg, 3);
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("t1 conditioning splits the replications") {
  const auto r = run_experiment(small(Scenario::T1, ModelParams{1, 1, 0.3, -0.4, 0}), 0);
  const Series* up = r.find("beta_plus");
  const Series* down = r.find("beta_minus");
  REQUIRE(up);
  REQUIRE(down);
  CHECK(up->sample.size() + up->undefined + down->sample.size() + down->undefined == 40);
  REQUIRE(r.escape_fraction.has_value());
  CHECK(*r.divergence_probability == doctest::Approx(3.0 / 7));
}

TEST_CASE("other scenarios run") {
  CHECK(run_experiment(small(Scenario::N1, ModelParams{1, 1, 0, 0.4, 0}), 0).find("beta_minus"));
  CHECK(run_experiment(small(Scenario::N1, ModelParams{1, 1, -0.4, 0, 0}), 0).find("beta_minus"));
  CHECK(run_experiment(small(Scenario::T0, ModelParams{1, 1, 0.3, 0.4, 0}), 0).find("beta_minus"));
  auto c = small(Scenario::N0_scaling, ModelParams{1, 1, 0, 0, 0});
  CHECK(run_experiment(c, 0).find("q_plus"));
}

TEST_CASE("kde") {
  const std::vector<double> two{-1, 1};
  const std::vector<double> zero{0};
  const double phi1 = std::exp(-0.5) / std::sqrt(2 * std::numbers::pi);
  CHECK(kde(two, zero, 1.0)[0] == doctest::Approx(phi1));
  std::vector<double> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back(-10 + 0.01 * i);
  const std::vector<double> sample{-0.5, 0.1, 0.2, 1.3, 2.0};
  const auto d = kde(sample, grid);
  double mass = 0;
  for (double v : d) mass += v * 0.01;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  const std::vector<double> at{0.1};
  CHECK(kde(std::vector<double>{0.1, 5.0}, at, 1e-3)[0] ==
        doctest::Approx(1 / (2 * 1e-3 * std::sqrt(2 * std::numbers::pi))));
  CHECK_THROWS_AS(kde(std::vector<double>{1.0}, zero), Error);
  CHECK(silverman_bandwidth(sample) > 0);
}

TEST_CASE("figure bundle exports") {
  const auto dir = std::filesystem::temp_directory_path() / "obm_fig_test";
  std::filesystem::remove_all(dir);
  const auto bundle = figure_bundle(1, 5, 20, dir, 0, 1000);
  CHECK(bundle.runs.size() == 1);
  CHECK(bundle.runs[0].config.T == 1000);
  CHECK(bundle.runs[0].config.params.sigma_plus == 0.01);
  CHECK(std::filesystem::exists(dir / "fig1_plus.csv"));
  CHECK(std::filesystem::exists(dir / "fig1_minus.csv"));
  std::ifstream in(dir / "fig1_plus.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,empirical,theoretical");
  CHECK_THROWS_AS(figure_bundle(6, 5, 20, dir), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("json") {
  const auto r = run_experiment(small(Scenario::E, ModelParams{1, 1, -0.3, 0.4, 0}), 0);
  const auto j = to_json(r);
  CHECK(j.at("schema_version") == 1);
  CHECK_FALSE(j.contains("runtime"));
  CHECK(to_json(r, true).contains("runtime"));
  const ExperimentConfig back = experiment_config_from_json(j.at("config"));
  CHECK(back.params == r.config.params);
  CHECK(back.N == r.config.N);
  CHECK(back.seed == r.config.seed);
  CHECK(params_from_json(to_json(r.config.params)) == r.config.params);
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"sigma_plus", "x"}}), Error);
}
