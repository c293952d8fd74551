#include "synthwalk/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "synthwalk/band.hpp"
#include "synthwalk/baselines.hpp"
#include "synthwalk/errors.hpp"
#include "synthwalk/gates.hpp"
#include "synthwalk/two_qubit.hpp"

namespace synthwalk::cli {
namespace {

using ojson = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

[[noreturn]] void config_error(const std::string& msg) { throw CliError(ExitCode::config_error, msg); }

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::band: return "band";
    case Experiment::evolve: return "evolve";
    case Experiment::diffusion: return "diffusion";
    case Experiment::gate: return "gate";
    case Experiment::prepare: return "prepare";
    case Experiment::cnot: return "cnot";
  }
  return "?";
}

Experiment parse_experiment(const std::string& s) {
  for (auto e : {Experiment::band, Experiment::evolve, Experiment::diffusion, Experiment::gate, Experiment::prepare,
                 Experiment::cnot}) {
    if (s == experiment_name(e)) return e;
  }
  config_error("unknown experiment '" + s + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_report(Experiment e) { return e == Experiment::gate || e == Experiment::prepare || e == Experiment::cnot; }

// Reader over a JSON object that tracks which keys were consumed.
class Fields {
 public:
  explicit Fields(const nlohmann::json& doc) : doc_(doc) {
    if (!doc.is_object()) config_error("configuration must be a JSON object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key) && !doc_.at(key).is_null();
  }

  const nlohmann::json& at(const std::string& key) { return doc_.at(key); }

  void require(const std::string& key, const std::string& experiment) {
    if (!has(key)) config_error("missing required field '" + key + "' for experiment '" + experiment + "'");
  }

  double angle(const std::string& key, double fallback) { return has(key) ? angle_value(at(key), key) : fallback; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    double d;
    if (v.is_number()) {
      d = v.get<double>();
    } else if (v.is_string()) {
      d = parse_number(v.get<std::string>(), key);
    } else {
      config_error("field '" + key + "' must be a number");
    }
    if (!std::isfinite(d)) config_error("field '" + key + "' must be finite");
    return d;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const double d = number(key, 0.0);
    if (d != std::floor(d) || std::abs(d) > 1e9) config_error("field '" + key + "' must be an integer");
    return static_cast<int>(d);
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    if (!at(key).is_string()) config_error("field '" + key + "' must be a string");
    return at(key).get<std::string>();
  }

  std::vector<std::string> list(const std::string& key) {
    std::vector<std::string> out;
    const auto& v = at(key);
    if (v.is_array()) {
      for (const auto& e : v) {
        if (e.is_string()) {
          out.push_back(e.get<std::string>());
        } else if (e.is_number()) {
          out.push_back(format_double(e.get<double>()));
        } else {
          config_error("field '" + key + "' has a non-scalar entry");
        }
      }
    } else if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) out.push_back(item);
      }
    } else {
      config_error("field '" + key + "' must be a list");
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, _] : doc_.items()) {
      if (!seen_.count(key)) config_error("unknown or unused field '" + key + "'");
    }
  }

  static double parse_number(const std::string& s, const std::string& key) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
      config_error("field '" + key + "': cannot parse '" + s + "' as a number");
    }
    if (used != s.size()) config_error("field '" + key + "': cannot parse '" + s + "' as a number");
    return d;
  }

  static double angle_value(const nlohmann::json& v, const std::string& key) {
    double d;
    if (v.is_number()) {
      d = v.get<double>();
    } else if (v.is_string()) {
      try {
        d = parse_angle(v.get<std::string>());
      } catch (const CliError& e) {
        config_error("field '" + key + "': " + e.what());
      }
    } else {
      config_error("field '" + key + "' must be an angle");
    }
    if (!std::isfinite(d)) config_error("field '" + key + "' must be finite");
    return d;
  }

 private:
  const nlohmann::json& doc_;
  std::set<std::string> seen_;
};

ojson matrix_json(const Eigen::MatrixXcd& m) {
  ojson re = ojson::array();
  ojson im = ojson::array();
  for (int r = 0; r < m.rows(); ++r) {
    ojson rr = ojson::array();
    ojson ii = ojson::array();
    for (int c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return ojson{{"re", re}, {"im", im}};
}

ojson vector_json(const Eigen::VectorXcd& v) {
  ojson re = ojson::array();
  ojson im = ojson::array();
  for (int i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return ojson{{"re", re}, {"im", im}};
}

ojson params_json(const ModulationParams& p) {
  return ojson{{"gamma", p.gamma}, {"theta", p.theta}, {"phi_h", p.phi_h}, {"phi_v", p.phi_v}};
}

const char* engine_name(Engine e) { return e == Engine::direct ? "direct" : "spectral"; }

// Half-width that keeps a walk of `steps` roundtrips away from the edge; the
// band slope is bounded by sqrt(2) gamma.
int walk_half_width(double gamma, int steps, double delta) {
  const double reach = steps * (1.5 * gamma + 1.0) + 64.0;
  return static_cast<int>(std::ceil(reach + (delta > 0.0 ? 5.0 * delta : 0.0)));
}

ModulationParams walk_params(const RunConfig& cfg, double gamma) {
  return ModulationParams::make(gamma, cfg.theta, cfg.phi_h, cfg.phi_v);
}

Dataset run_band(const RunConfig& cfg) {
  Dataset ds;
  ds.columns = {"q", "eps_plus", "eps_minus", "nz_plus", "nz_minus"};
  const auto grid = band_grid(walk_params(cfg, cfg.gamma), cfg.n_k);
  for (const auto& pt : grid.points) ds.rows.push_back({pt.q, pt.eps_plus, pt.eps_minus, pt.nz_plus, pt.nz_minus});
  return ds;
}

Dataset run_evolve(const RunConfig& cfg) {
  const auto p = walk_params(cfg, cfg.gamma);
  const LatticeConfig lattice{cfg.half_width.value_or(walk_half_width(cfg.gamma, cfg.steps, cfg.delta)),
                              cfg.engine == Engine::spectral ? Boundary::periodic : Boundary::truncated};
  LatticeState initial = LatticeState::zeros(lattice);
  if (cfg.delta > 0.0) {
    Spinor spin;
    if (cfg.spin == "H") {
      spin = Spinor(1.0, 0.0);
    } else if (cfg.spin == "V") {
      spin = Spinor(0.0, 1.0);
    } else {
      spin = eigen_spinor(p, cfg.q, cfg.spin == "plus" ? Branch::plus : Branch::minus);
    }
    initial = make_gaussian(WavepacketSpec{cfg.delta, cfg.q, spin}, lattice);
  } else {
    initial = make_single_site(0, cfg.spin == "V" ? Polarization::V : Polarization::H, lattice);
  }

  EvolveOptions opts;
  opts.engine = cfg.engine;
  opts.record = RecordSet{true, false, false, false, false};
  const auto traj = evolve(initial, p, static_cast<std::size_t>(cfg.steps), opts);

  Dataset ds;
  ds.columns = {"step", "m", "prob"};
  for (const auto& snap : traj.snapshots) {
    for (std::size_t i = 0; i < snap.distribution.size(); ++i) {
      ds.rows.push_back({static_cast<std::int64_t>(snap.step), static_cast<std::int64_t>(lattice.site(i)),
                         snap.distribution[i]});
    }
  }
  return ds;
}

std::vector<double> synthetic_diffusion(const RunConfig& cfg, double gamma) {
  const LatticeConfig lattice{cfg.half_width.value_or(walk_half_width(gamma, cfg.steps, 0.0)),
                              cfg.engine == Engine::spectral ? Boundary::periodic : Boundary::truncated};
  EvolveOptions opts;
  opts.engine = cfg.engine;
  opts.record = RecordSet{false, true, false, false, false};
  const auto traj = evolve(make_single_site(0, Polarization::H, lattice), walk_params(cfg, gamma),
                           static_cast<std::size_t>(cfg.steps), opts);
  std::vector<double> out;
  for (const auto& s : traj.snapshots) out.push_back(s.diffusion_distance);
  return out;
}

Dataset run_diffusion(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::vector<double>>> models;

  std::vector<double> classical;
  for (int n = 0; n <= cfg.steps; ++n) classical.push_back(diffusion_distance(classical_walk_distribution(n)));
  models.emplace_back("classical", std::move(classical));

  std::vector<double> dtqw{0.0};
  for (double m : dtqw_diffusion(cfg.steps)) dtqw.push_back(m);
  models.emplace_back("dtqw", std::move(dtqw));

  // Independent trajectories; results are collected in model order.
  std::vector<std::future<std::vector<double>>> pending;
  for (double g : cfg.gammas) {
    pending.push_back(std::async(std::launch::async, [&cfg, g] { return synthetic_diffusion(cfg, g); }));
  }
  for (std::size_t i = 0; i < pending.size(); ++i) {
    models.emplace_back("synthetic:gamma=" + format_double(cfg.gammas[i]), pending[i].get());
  }

  Dataset ds;
  ds.columns = {"step", "model", "M"};
  for (const auto& [name, series] : models) {
    for (std::size_t n = 0; n < series.size(); ++n) {
      ds.rows.push_back({static_cast<std::int64_t>(n), name, series[n]});
    }
  }
  return ds;
}

Dataset run_gate(const RunConfig& cfg) {
  const auto spec = table_gate(std::string_view(cfg.gate), cfg.rz_phi);
  const auto sp = solve_modulation(spec, cfg.q, cfg.gamma);
  const auto report = reconstruct_matrix(sp, spec.target, cfg.delta, cfg.engine);

  ojson r;
  r["gate"] = std::string(gate_label(spec.name));
  if (spec.name == GateName::Rz) r["rz_phi"] = spec.rz_phi;
  r["q_star"] = sp.q_star;
  r["delta"] = cfg.delta;
  r["engine"] = engine_name(cfg.engine);
  r["params"] = params_json(sp.params);
  r["target"] = matrix_json(spec.target);
  r["analytic"] = matrix_json(gate_matrix_analytic(sp));
  r["reconstructed"] = matrix_json(report.reconstructed);
  r["hs_distance"] = report.hs_distance;
  r["gate_fidelity"] = report.gate_fidelity;
  r["avg_gate_fidelity"] = report.avg_gate_fidelity;
  r["column_fidelities"] = {report.column_fidelities[0], report.column_fidelities[1]};
  r["packet_hs_distance"] = report.packet_hs_distance;
  Dataset ds;
  ds.report = std::move(r);
  return ds;
}

Dataset run_prepare(const RunConfig& cfg) {
  const auto schedule = prepare_state_sequence(cfg.phi1, cfg.phi2, cfg.q);
  const auto result = run_preparation(cfg.phi1, cfg.phi2, cfg.delta, cfg.q, cfg.engine);
  const Spinor matrix_out = (schedule_matrix(schedule, cfg.q) * Spinor(1.0, 0.0)).normalized();

  ojson r;
  r["phi1"] = cfg.phi1;
  r["phi2"] = cfg.phi2;
  r["q_star"] = cfg.q;
  r["delta"] = cfg.delta;
  r["engine"] = engine_name(cfg.engine);
  ojson sched = ojson::array();
  const char* names[] = {"H", "Rz(phi1)", "H", "Rz(phi2+pi/2)"};
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    auto entry = params_json(schedule[i]);
    entry["gate"] = names[i];
    sched.push_back(entry);
  }
  r["schedule"] = sched;
  r["output"] = vector_json(result.output.amplitudes);
  r["target"] = vector_json(result.target.amplitudes);
  r["fidelity"] = result.fidelity;
  r["matrix_fidelity"] = state_fidelity(matrix_out, result.target.amplitudes);
  Dataset ds;
  ds.report = std::move(r);
  return ds;
}

Dataset run_cnot(const RunConfig& cfg) {
  std::vector<TwoQubitGate> seq;
  for (const auto& tag : cfg.sequence) seq.push_back(parse_two_qubit_gate(tag));
  TwoQubitOptions opts;
  opts.delta = cfg.delta;
  opts.q_star = cfg.q;
  opts.engine = cfg.engine;
  const auto report = reconstruct_4x4(seq, opts);

  ojson r;
  ojson tags = ojson::array();
  for (auto g : seq) tags.push_back(std::string(two_qubit_gate_label(g)));
  r["sequence"] = tags;
  r["q_star"] = cfg.q;
  r["delta"] = cfg.delta;
  r["engine"] = engine_name(cfg.engine);
  r["expected"] = matrix_json(report.expected);
  r["reconstructed"] = matrix_json(report.reconstructed);
  r["max_entry_error"] = report.max_entry_error;
  r["hs_distance"] = report.hs_distance;
  r["gate_fidelity"] = report.gate_fidelity;
  Dataset ds;
  ds.report = std::move(r);
  return ds;
}

void write_cell(std::ostream& out, const Cell& c) {
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          out << format_double(v);
        } else {
          out << v;
        }
      },
      c);
}

ojson cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return ojson(v); }, c);
}

}  // namespace

double parse_angle(std::string_view text) {
  static const std::regex pi_form(R"(^\s*([+-])?\s*(\d*\.?\d*(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    double coeff = 1.0;
    if (m[2].matched && m[2].length() > 0) {
      const std::string c = m[2].str();
      if (c == ".") throw CliError(ExitCode::config_error, "cannot parse angle '" + s + "'");
      coeff = std::stod(c);
    }
    if (m[1].matched && m[1].str() == "-") coeff = -coeff;
    double value = coeff * kPi;
    if (m[3].matched) {
      const double den = std::stod(m[3].str());
      if (den == 0.0) throw CliError(ExitCode::config_error, "angle '" + s + "' divides by zero");
      value /= den;
    }
    return value;
  }
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(s, &used);
  } catch (const std::exception&) {
    throw CliError(ExitCode::config_error, "cannot parse angle '" + s + "'");
  }
  if (used != s.size()) throw CliError(ExitCode::config_error, "cannot parse angle '" + s + "'");
  return d;
}

RunConfig config_from_json(const nlohmann::json& doc) {
  Fields f(doc);
  RunConfig cfg;
  if (!f.has("experiment")) config_error("missing required field 'experiment'");
  cfg.experiment = parse_experiment(f.string("experiment", ""));
  const std::string name = experiment_name(cfg.experiment);

  const std::string engine = f.string("engine", "spectral");
  if (engine == "spectral") {
    cfg.engine = Engine::spectral;
  } else if (engine == "direct") {
    cfg.engine = Engine::direct;
  } else {
    config_error("field 'engine' must be 'direct' or 'spectral'");
  }

  const std::string format = f.string("format", is_report(cfg.experiment) ? "json" : "csv");
  if (format == "csv") {
    cfg.format = Format::csv;
  } else if (format == "json") {
    cfg.format = Format::json;
  } else {
    config_error("field 'format' must be 'csv' or 'json'");
  }
  if (is_report(cfg.experiment) && cfg.format == Format::csv) {
    config_error("experiment '" + name + "' produces a JSON report; csv is not available");
  }
  cfg.output = f.string("output", "");

  if (f.has("half_width")) {
    cfg.half_width = f.integer("half_width", 0);
    if (*cfg.half_width < 1) config_error("field 'half_width' must be >= 1");
  }

  auto walk_angles = [&] {
    cfg.theta = f.angle("theta", -kPi / 2);
    cfg.phi_h = f.angle("phi_h", 0.0);
    cfg.phi_v = f.angle("phi_v", 3.0 * kPi / 4);
  };
  auto positive_steps = [&] {
    f.require("steps", name);
    cfg.steps = f.integer("steps", 0);
    if (cfg.steps < 0) config_error("field 'steps' must be >= 0");
  };
  auto packet_width = [&](double fallback) {
    cfg.delta = f.number("delta", fallback);
    if (!(cfg.delta > 0.0)) config_error("field 'delta' must be positive");
  };

  switch (cfg.experiment) {
    case Experiment::band:
      f.require("gamma", name);
      cfg.gamma = f.angle("gamma", 0.0);
      walk_angles();
      cfg.n_k = f.integer("n_k", 1024);
      if (cfg.n_k < 16) config_error("field 'n_k' must be >= 16");
      break;
    case Experiment::evolve:
      f.require("gamma", name);
      cfg.gamma = f.angle("gamma", 0.0);
      walk_angles();
      positive_steps();
      cfg.delta = f.number("delta", 0.0);
      if (cfg.delta < 0.0) config_error("field 'delta' must be >= 0");
      cfg.q = f.angle("q", 0.27 * kPi);
      cfg.spin = f.string("spin", "H");
      if (cfg.spin != "H" && cfg.spin != "V" && cfg.spin != "plus" && cfg.spin != "minus") {
        config_error("field 'spin' must be one of H, V, plus, minus");
      }
      if (cfg.delta == 0.0 && (cfg.spin == "plus" || cfg.spin == "minus")) {
        config_error("field 'spin' = plus/minus needs a Gaussian packet (delta > 0)");
      }
      break;
    case Experiment::diffusion:
      walk_angles();
      positive_steps();
      if (f.has("gammas")) {
        for (const auto& g : f.list("gammas")) cfg.gammas.push_back(Fields::angle_value(g, "gammas"));
      } else {
        cfg.gammas = {0.06 * kPi, kPi, 3.0 * kPi};
      }
      break;
    case Experiment::gate: {
      f.require("gate", name);
      cfg.gate = f.string("gate", "");
      if (f.has("rz_phi")) cfg.rz_phi = f.angle("rz_phi", 0.0);
      GateSpec spec;
      try {
        spec = table_gate(std::string_view(cfg.gate), cfg.rz_phi);
      } catch (const ConfigError& e) {
        config_error(std::string("field 'gate': ") + e.what());
      }
      cfg.gamma = f.angle("gamma", std::max({kPi, std::abs(spec.a), std::abs(spec.b)}));
      packet_width(200.0);
      cfg.q = f.angle("q", kDefaultWorkingPoint);
      break;
    }
    case Experiment::prepare:
      f.require("phi1", name);
      f.require("phi2", name);
      cfg.phi1 = f.angle("phi1", 0.0);
      cfg.phi2 = f.angle("phi2", 0.0);
      packet_width(200.0);
      cfg.q = f.angle("q", kDefaultWorkingPoint);
      break;
    case Experiment::cnot:
      if (f.has("sequence")) {
        cfg.sequence = f.list("sequence");
        for (const auto& tag : cfg.sequence) {
          try {
            parse_two_qubit_gate(tag);
          } catch (const ConfigError& e) {
            config_error(std::string("field 'sequence': ") + e.what());
          }
        }
      } else {
        cfg.sequence = {"path_x", "cnot", "path_x"};
      }
      packet_width(200.0);
      cfg.q = f.angle("q", kDefaultWorkingPoint);
      break;
  }
  f.reject_unknown();
  return cfg;
}

nlohmann::ordered_json RunConfig::to_json() const {
  ojson j;
  j["experiment"] = experiment_name(experiment);
  switch (experiment) {
    case Experiment::band:
      j["gamma"] = gamma, j["theta"] = theta, j["phi_h"] = phi_h, j["phi_v"] = phi_v, j["n_k"] = n_k;
      break;
    case Experiment::evolve:
      j["gamma"] = gamma, j["theta"] = theta, j["phi_h"] = phi_h, j["phi_v"] = phi_v;
      j["steps"] = steps, j["delta"] = delta, j["q"] = q, j["spin"] = spin;
      break;
    case Experiment::diffusion:
      j["gammas"] = gammas, j["theta"] = theta, j["phi_h"] = phi_h, j["phi_v"] = phi_v, j["steps"] = steps;
      break;
    case Experiment::gate:
      j["gate"] = gate;
      if (rz_phi) j["rz_phi"] = *rz_phi;
      j["gamma"] = gamma, j["delta"] = delta, j["q"] = q;
      break;
    case Experiment::prepare:
      j["phi1"] = phi1, j["phi2"] = phi2, j["delta"] = delta, j["q"] = q;
      break;
    case Experiment::cnot:
      j["sequence"] = sequence, j["delta"] = delta, j["q"] = q;
      break;
  }
  if (half_width) j["half_width"] = *half_width;
  j["engine"] = engine_name(engine);
  j["format"] = format == Format::csv ? "csv" : "json";
  return j;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Discrete-time quantum walks on a synthetic frequency lattice", std::string(kToolName)};
  std::string experiment;
  std::string config_path;
  app.add_option("experiment", experiment, "band | evolve | diffusion | gate | prepare | cnot");
  app.add_option("--config", config_path, "JSON configuration file");

  // Every field flag is kept as text and parsed with the same rules as the file.
  const std::vector<std::pair<std::string, std::string>> field_flags = {
      {"gamma", "modulation strength (radians, '3pi' accepted)"},
      {"gammas", "comma-separated modulation strengths (diffusion)"},
      {"theta", "polarization rotation angle"},
      {"phi_h", "H modulation phase"},
      {"phi_v", "V modulation phase"},
      {"steps", "number of roundtrips"},
      {"half_width", "lattice half-width M"},
      {"delta", "Gaussian packet width"},
      {"q", "quasimomentum / gate working point"},
      {"engine", "direct | spectral"},
      {"n_k", "band grid size"},
      {"gate", "X | Y | Z | H | Rz"},
      {"rz_phi", "Rz phase"},
      {"phi1", "state preparation polar angle"},
      {"phi2", "state preparation azimuth"},
      {"sequence", "comma-separated two-qubit sequence (path_x, cnot, identity)"},
      {"spin", "evolve initial spinor: H | V | plus | minus"},
      {"format", "csv | json"},
  };
  std::vector<std::string> values(field_flags.size());
  for (std::size_t i = 0; i < field_flags.size(); ++i) {
    app.add_option("--" + field_flags[i].first, values[i], field_flags[i].second);
  }
  std::string out_path;
  app.add_option("--out", out_path, "output path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw CliError(ExitCode::ok, app.help());
  } catch (const CLI::ParseError& e) {
    config_error(e.what());
  }

  nlohmann::json doc = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) config_error("cannot open config file '" + config_path + "'");
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      config_error("malformed JSON in '" + config_path + "': " + e.what());
    }
    if (!doc.is_object()) config_error("config file must hold a JSON object");
  }
  if (!experiment.empty()) doc["experiment"] = experiment;
  for (std::size_t i = 0; i < field_flags.size(); ++i) {
    if (app.count("--" + field_flags[i].first) > 0) doc[field_flags[i].first] = values[i];
  }
  if (app.count("--out") > 0) doc["output"] = out_path;
  return config_from_json(doc);
}

Dataset run(const RunConfig& cfg) {
  Dataset ds;
  try {
    switch (cfg.experiment) {
      case Experiment::band: ds = run_band(cfg); break;
      case Experiment::evolve: ds = run_evolve(cfg); break;
      case Experiment::diffusion: ds = run_diffusion(cfg); break;
      case Experiment::gate: ds = run_gate(cfg); break;
      case Experiment::prepare: ds = run_prepare(cfg); break;
      case Experiment::cnot: ds = run_cnot(cfg); break;
    }
  } catch (const ConfigError& e) {
    throw CliError(ExitCode::config_error, e.what());
  } catch (const NumericalError& e) {
    throw CliError(ExitCode::numerical_error, e.what());
  }
  ds.metadata = ojson{{"tool", std::string(kToolName)}, {"version", std::string(kToolVersion)}, {"config", cfg.to_json()}};
  return ds;
}

void emit(const Dataset& ds, std::ostream& out, Format format) {
  if (format == Format::json || ds.report) {
    ojson doc;
    doc["metadata"] = ds.metadata;
    if (ds.report) {
      doc["report"] = *ds.report;
    } else {
      doc["columns"] = ds.columns;
      ojson rows = ojson::array();
      for (const auto& row : ds.rows) {
        ojson r = ojson::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
      }
      doc["rows"] = std::move(rows);
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# " << kToolName << ' ' << kToolVersion << '\n';
  out << "# config: " << ds.metadata.at("config").dump() << '\n';
  for (std::size_t i = 0; i < ds.columns.size(); ++i) out << (i ? "," : "") << ds.columns[i];
  out << '\n';
  for (const auto& row : ds.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      write_cell(out, row[i]);
    }
    out << '\n';
  }
}

void emit(const Dataset& ds, const std::string& path, Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError(ExitCode::numerical_error, "cannot open output '" + path + "'");
  emit(ds, out, format);
  out.flush();
  if (!out) throw CliError(ExitCode::numerical_error, "failed writing '" + path + "'");
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_config(args);
    const Dataset ds = run(cfg);
    if (cfg.output.empty()) {
      emit(ds, out, cfg.format);
    } else {
      emit(ds, cfg.output, cfg.format);
    }
    return static_cast<int>(ExitCode::ok);
  } catch (const CliError& e) {
    (e.code() == ExitCode::ok ? out : err) << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical_error);
  }
}

}  // namespace synthwalk::cli
