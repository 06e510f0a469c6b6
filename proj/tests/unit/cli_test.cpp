#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "obm/cli.hpp"

using namespace obm;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "obm_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("simulate") {
  const std::vector<std::string> args{"simulate", "--sigma-plus", "1", "--sigma-minus", "2",
                                      "--b-plus", "-0.1", "--b-minus", "0.2", "--T", "1",
                                      "--N", "10", "--seed", "7"};
  const Run a = cli(args), b = cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("t,x\n", 0) == 0);
  CHECK(cli({"simulate", "--sigma-minus", "1", "--T", "1", "--N", "10"}).code == 2);
  CHECK(cli({"simulate", "--sigma-plus", "1", "--sigma-minus", "1", "--N", "0"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
}

TEST_CASE("estimate") {
  const auto micro = write_file("micro.csv", "t,x\n0,1\n1,-1\n2,2\n");
  const Run r = cli({"estimate", "--in", micro});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("estimate").at("beta_plus") == -2.0);
  CHECK(j.at("estimate").at("beta_minus") == 3.0);

  const auto pos = write_file("pos.csv", "t,x\n0,1\n1,2\n2,3\n");
  const Run one = cli({"estimate", "--in", pos});
  CHECK(one.code == 4);
  CHECK_FALSE(one.err.empty());
  CHECK(nlohmann::json::parse(one.out).at("estimate").at("beta_minus").is_null());

  const auto uneven = write_file("uneven.csv", "t,x\n0,1\n1,-1\n3,2\n");
  CHECK(cli({"estimate", "--in", uneven}).code == 3);
  const auto bad = write_file("bad.csv", "t,x\n0,1\n1,zz\n");
  CHECK(cli({"estimate", "--in", bad}).code == 2);

  const Run regime = cli({"estimate", "--in", micro, "--regime", "E", "--sigma-plus", "1",
                          "--sigma-minus", "1"});
  REQUIRE(regime.code == 0);
  CHECK(nlohmann::json::parse(regime.out).at("estimate").at("se_plus").is_number());
  CHECK(cli({"estimate", "--in", micro, "--regime", "E"}).code == 2);
}

TEST_CASE("simulate then estimate round trip") {
  const auto path = scratch("sim.csv").string();
  REQUIRE(cli({"simulate", "--sigma-plus", "1", "--sigma-minus", "1", "--b-plus", "-0.5",
               "--b-minus", "0.5", "--T", "50", "--N", "5000", "--seed", "3", "--out", path})
              .code == 0);
  const Run r = cli({"estimate", "--in", path});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("estimate").at("beta_plus").is_number());
}

TEST_CASE("density") {
  const Run a = cli({"density", "--law", "arcsine", "--ratio", "1", "--from", "0.01", "--to",
                     "0.99", "--points", "99"});
  REQUIRE(a.code == 0);
  std::istringstream in(a.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,density");
  std::vector<double> values;
  while (std::getline(in, line) && line[0] != '#') {
    values.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  REQUIRE(values.size() == 99);
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(values[i] == doctest::Approx(values[values.size() - 1 - i]).epsilon(1e-9));
  }
  CHECK(cli({"density", "--law", "ratio", "--sigma-plus", "1", "--sigma-minus", "1", "--b-plus",
             "-0.1", "--b-minus", "0.2"})
            .code == 2);
  CHECK(cli({"density", "--law", "nope"}).code == 2);
}

TEST_CASE("ratio density footer matches the trapezoid sum") {
  const Run r = cli({"density", "--law", "ratio", "--sigma-plus", "0.01", "--sigma-minus", "0.01",
                     "--b-plus", "0.003", "--b-minus", "0.004", "--from", "0", "--to", "0.05",
                     "--points", "5001"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> rows;
  double footer = -1;
  while (std::getline(in, line)) {
    if (line.rfind("# captured_mass=", 0) == 0) {
      footer = std::stod(line.substr(16));
      continue;
    }
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  double trap = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    trap += 0.5 * (rows[i].second + rows[i - 1].second) * (rows[i].first - rows[i - 1].first);
  }
  CHECK(footer > 0);
  CHECK(trap == doctest::Approx(footer).epsilon(1e-4));
}

TEST_CASE("test subcommand") {
  const auto micro = write_file("micro2.csv", "t,x\n0,1\n1,-1\n2,2\n");
  const Run r = cli({"test", "--in", micro, "--b0-plus", "-2", "--b0-minus", "3", "--alpha",
                     "0.95", "--sigma-plus", "1", "--sigma-minus", "1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("statistic") == doctest::Approx(0.0));
  CHECK(j.at("reject") == false);
  CHECK(j.at("quantile") == doctest::Approx(5.991464547));
  const Run rej = cli({"test", "--in", micro, "--b0-plus", "0", "--b0-minus", "0",
                       "--sigma-plus", "1", "--sigma-minus", "1"});
  CHECK(rej.code == 0);
  CHECK(nlohmann::json::parse(rej.out).at("statistic") == doctest::Approx(13.0));
}

TEST_CASE("figure subcommand") {
  const auto dir = scratch("fig");
  std::filesystem::remove_all(dir);
  const std::vector<std::string> args{"figure", "--fig", "1", "--seed", "4", "--replications",
                                      "20", "--n-divisor", "1000", "--out-dir", dir.string()};
  const Run a = cli(args);
  REQUIRE(a.code == 0);
  const std::string first = read_file(dir / "fig1_plus.csv");
  const std::string first_json = read_file(dir / "fig1.json");
  const Run b = cli(args);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(read_file(dir / "fig1_plus.csv") == first);
  CHECK(read_file(dir / "fig1.json") == first_json);
  CHECK(cli({"figure", "--fig", "9", "--out-dir", dir.string()}).code == 2);
  std::filesystem::remove_all(dir);
}
