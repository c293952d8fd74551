#pragma once

// Command-line front end: configuration parsing, experiment dispatch and
// deterministic CSV / JSON output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "synthwalk/step.hpp"

namespace synthwalk::cli {

inline constexpr std::string_view kToolName = "synthwalk";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ExitCode : int { ok = 0, config_error = 1, numerical_error = 2 };

// Carries the exit code the tool should terminate with.
class CliError : public std::runtime_error {
 public:
  CliError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

enum class Experiment { band, evolve, diffusion, gate, prepare, cnot };
enum class Format { csv, json };

struct RunConfig {
  Experiment experiment = Experiment::band;
  double gamma = 0.0;
  double theta = 0.0;
  double phi_h = 0.0;
  double phi_v = 0.0;
  std::vector<double> gammas;
  int steps = 0;
  std::optional<int> half_width;  // derived from the experiment when absent
  double delta = 0.0;
  double q = 0.0;
  Engine engine = Engine::spectral;
  int n_k = 1024;
  std::string gate;
  std::optional<double> rz_phi;
  double phi1 = 0.0;
  double phi2 = 0.0;
  std::vector<std::string> sequence;
  std::string spin = "H";  // evolve: H, V, plus, minus
  std::string output;      // empty: stdout
  Format format = Format::csv;

  // Fully resolved echo; parsing it back reproduces the run.
  nlohmann::ordered_json to_json() const;
};

// "0.27pi", "-pi/2", "3*pi", "1.5708" -> radians. Throws CliError(config_error).
double parse_angle(std::string_view text);

// Builds a config from a JSON document; throws CliError(config_error) naming
// the offending field.
RunConfig config_from_json(const nlohmann::json& doc);

// Parses argv-style arguments (without the program name): optional positional
// experiment, --config <file>, per-field flags. Flags override file values.
RunConfig parse_config(const std::vector<std::string>& args);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Dataset {
  nlohmann::ordered_json metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::optional<nlohmann::ordered_json> report;  // set for gate / prepare / cnot
};

Dataset run(const RunConfig& cfg);

// Writes the dataset; CSV uses 17 significant digits and '\n' endings.
void emit(const Dataset& ds, std::ostream& out, Format format);
// Throws CliError(numerical_error) on I/O failure.
void emit(const Dataset& ds, const std::string& path, Format format);

// Whole tool: parse, run, emit. Returns the process exit code.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace synthwalk::cli
