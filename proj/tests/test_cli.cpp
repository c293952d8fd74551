#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "synthwalk/cli.hpp"

using namespace synthwalk;
using namespace synthwalk::cli;

namespace {
constexpr double kPi = std::numbers::pi;

int run_tool(const std::vector<std::string>& args, std::string& out, std::string& err) {
  std::ostringstream o, e;
  const int code = cli::main(args, o, e);
  out = o.str();
  err = e.str();
  return code;
}
}  // namespace

TEST_CASE("angle parsing") {
  CHECK(parse_angle("0.27pi") == doctest::Approx(0.27 * kPi));
  CHECK(parse_angle("-pi/2") == doctest::Approx(-kPi / 2));
  CHECK(parse_angle("3*pi") == doctest::Approx(3 * kPi));
  CHECK(parse_angle("pi") == doctest::Approx(kPi));
  CHECK(parse_angle("3pi/4") == doctest::Approx(3 * kPi / 4));
  CHECK(parse_angle("1.25") == 1.25);
  CHECK(parse_angle("-2e-3") == -2e-3);
  CHECK_THROWS_AS(parse_angle("pie"), CliError);
  CHECK_THROWS_AS(parse_angle("1.0x"), CliError);
  CHECK_THROWS_AS(parse_angle("pi/0"), CliError);
  CHECK_THROWS_AS(parse_angle(""), CliError);
}

TEST_CASE("JSON configuration") {
  const auto cfg = config_from_json(nlohmann::json{{"experiment", "band"}, {"gamma", "0.06pi"}, {"n_k", 64}});
  CHECK(cfg.gamma == doctest::Approx(0.06 * kPi));
  CHECK(cfg.theta == doctest::Approx(-kPi / 2));
  CHECK(cfg.phi_v == doctest::Approx(3 * kPi / 4));
  CHECK(cfg.format == Format::csv);

  auto code_of = [](const nlohmann::json& j) {
    try {
      config_from_json(j);
    } catch (const CliError& e) {
      return e.code();
    }
    return ExitCode::ok;
  };
  CHECK(code_of({{"experiment", "band"}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "band"}, {"gamma", 1}, {"colour", "red"}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "band"}, {"gamma", 1}, {"steps", 3}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "evolve"}, {"gamma", 1}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "gate"}, {"gate", "Q"}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "gate"}, {"gate", "X"}, {"format", "csv"}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "cnot"}, {"sequence", {"cnot", "swap"}}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "prepare"}, {"phi1", 1}}) == ExitCode::config_error);
  CHECK(code_of({{"experiment", "band"}, {"gamma", 1}, {"engine", "gpu"}}) == ExitCode::config_error);
  CHECK(code_of(nlohmann::json::array()) == ExitCode::config_error);
}

TEST_CASE("the config echo reproduces the run") {
  const std::vector<nlohmann::json> docs = {
      {{"experiment", "band"}, {"gamma", "pi"}},
      {{"experiment", "evolve"}, {"gamma", 2}, {"steps", 4}, {"delta", 5}, {"spin", "plus"}, {"engine", "direct"}},
      {{"experiment", "diffusion"}, {"steps", 10}, {"gammas", "pi,3pi"}},
      {{"experiment", "gate"}, {"gate", "Rz"}, {"rz_phi", "pi/3"}},
      {{"experiment", "prepare"}, {"phi1", "0.75pi"}, {"phi2", "0.25pi"}, {"delta", 30}},
      {{"experiment", "cnot"}, {"sequence", "cnot"}, {"half_width", 300}},
  };
  for (const auto& d : docs) {
    const auto cfg = config_from_json(d);
    const auto echo = cfg.to_json();
    CHECK(config_from_json(nlohmann::json::parse(echo.dump())).to_json() == echo);
  }
}

TEST_CASE("flags override the config file") {
  const auto path = std::filesystem::temp_directory_path() / "synthwalk_cli_test.json";
  {
    std::ofstream f(path);
    f << R"({"experiment": "band", "gamma": 1.0, "n_k": 32})";
  }
  const auto cfg = parse_config({"--config", path.string(), "--gamma", "0.5pi"});
  CHECK(cfg.gamma == doctest::Approx(kPi / 2));
  CHECK(cfg.n_k == 32);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(parse_config({"--config", "/nonexistent/file.json"}), CliError);
  CHECK_THROWS_AS(parse_config({"band", "--bogus", "1"}), CliError);
}

TEST_CASE("exit codes") {
  std::string out, err;
  CHECK(run_tool({"band", "--gamma", "1", "--n_k", "16"}, out, err) == 0);
  CHECK(run_tool({"evolve", "--gamma", "x"}, out, err) == 1);
  CHECK_FALSE(err.empty());
  CHECK(run_tool({"evolve", "--gamma", "pi", "--steps", "20", "--half_width", "10"}, out, err) == 2);
  CHECK(run_tool({"gate", "--gate", "X", "--gamma", "1"}, out, err) == 2);
  CHECK(run_tool({"--help"}, out, err) == 0);
}

TEST_CASE("CSV output is deterministic and complete") {
  std::string a, b, err;
  REQUIRE(run_tool({"band", "--gamma", "0.06pi", "--n_k", "32"}, a, err) == 0);
  REQUIRE(run_tool({"band", "--gamma", "0.06pi", "--n_k", "32"}, b, err) == 0);
  CHECK(a == b);
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# synthwalk", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("# config: ", 0) == 0);
  std::getline(in, line);
  CHECK(line == "q,eps_plus,eps_minus,nz_plus,nz_minus");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 32);
}

TEST_CASE("diffusion dataset lists every model") {
  RunConfig cfg = config_from_json({{"experiment", "diffusion"}, {"steps", 5}, {"gammas", {"0.06pi", "pi"}}});
  const auto ds = run(cfg);
  CHECK(ds.rows.size() == 4 * 6);
  std::ostringstream out;
  emit(ds, out, Format::csv);
  CHECK(out.str().find("synthetic:gamma=3.1415926535897931") != std::string::npos);
  CHECK(out.str().find("\n5,classical,2.2360679774997898\n") != std::string::npos);
}

TEST_CASE("JSON report output") {
  std::string out, err;
  REQUIRE(run_tool({"gate", "--gate", "H", "--delta", "30"}, out, err) == 0);
  const auto doc = nlohmann::json::parse(out);
  CHECK(doc["metadata"]["config"]["gate"] == "H");
  CHECK(doc["report"]["hs_distance"].get<double>() < 1e-10);
  CHECK(doc["report"]["reconstructed"]["re"][0][1].get<double>() == doctest::Approx(std::sqrt(0.5)));

  REQUIRE(run_tool({"band", "--gamma", "1", "--n_k", "16", "--format", "json"}, out, err) == 0);
  const auto band = nlohmann::json::parse(out);
  CHECK(band["rows"].size() == 16);
  CHECK(band["columns"][0] == "q");
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "synthwalk_cli_out.csv";
  std::string out, err;
  REQUIRE(run_tool({"diffusion", "--steps", "3", "--gammas", "1", "--out", path.string()}, out, err) == 0);
  CHECK(out.empty());
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);
  CHECK(run_tool({"diffusion", "--steps", "3", "--out", "/nonexistent/dir/x.csv"}, out, err) == 2);
}
