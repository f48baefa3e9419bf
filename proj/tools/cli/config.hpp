#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homodyne/estimation.hpp"
#include "homodyne/protocol.hpp"

namespace homodyne::cli {

enum class OutputFormat { Csv, Json };

struct Grid {
  double start = 0.0;
  double stop = 1.0;
  int steps = 11;
  bool log_scale = false;

  std::vector<double> values() const;
};

/// Every knob of every subcommand. Populated from a flat key = value file,
/// then command-line overrides, then validated.
struct RunConfig {
  std::string state = "coherent";
  double alpha2 = 10.0;
  double alpha_phase = 1.5707963267948966;  // alpha = |alpha| e^{i alpha_phase}
  double r = 0.5;
  double theta = 0.0;
  double n_thermal = 0.5;
  std::string ds_split = "manual";  // manual | optimal (uses n_total)
  double phi = 0.0;
  double transmissivity = 1.0;
  std::string lo = "ideal";
  double beta2 = 1e6;
  std::string convention = "real";

  Grid t_grid{0.0, 1.0, 11, false};
  Grid xi_grid{0.0, 2.0, 11, false};
  double n_total = 10.0;
  int alpha2_steps = 101;
  Grid n_grid{1.0, 1000.0, 31, true};

  int samples = 10'000;
  int trials = 200;
  std::uint64_t seed = 42;
  std::optional<double> true_phi;
  double band_lo = 0.85;
  double band_hi = 1.15;
  unsigned threads = 0;

  int cutoff = 60;
  bool verify = false;
  bool inject_fault = false;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
  bool format_set = false;
};

/// Recognised keys, in a stable order.
const std::vector<std::string>& config_keys();

/// Parses "key = value" lines; '#' starts a comment. Unknown keys and
/// duplicate keys are rejected with ErrorKind::Parameter.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Applies raw values (file first, then overrides) and validates.
RunConfig build_config(const std::map<std::string, std::string>& file_values,
                       const std::map<std::string, std::string>& overrides);

/// Input state implied by the config.
StateSpec state_spec(const RunConfig& cfg);
ProtocolConfig protocol_config(const RunConfig& cfg);
estimation::McRun mc_run(const RunConfig& cfg);

}  // namespace homodyne::cli
