#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "homodyne/error.hpp"
#include "homodyne/metrology.hpp"

namespace homodyne::cli {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorKind::Parameter, "config key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) bad(key, "expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key, "expected an unsigned integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, "expected a boolean, got '" + v + "'");
}

std::string one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (v == a) return v;
  }
  bad(key, "unsupported value '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"state",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.state = one_of(k, v, {"coherent", "thermal", "squeezed-vacuum", "squeezed-thermal", "displaced-thermal",
                                 "displaced-squeezed"});
       }},
      {"alpha2", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha2 = to_double(k, v); }},
      {"alpha_phase", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha_phase = to_double(k, v); }},
      {"r", [](RunConfig& c, const std::string& k, const std::string& v) { c.r = to_double(k, v); }},
      {"theta", [](RunConfig& c, const std::string& k, const std::string& v) { c.theta = to_double(k, v); }},
      {"n_thermal", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_thermal = to_double(k, v); }},
      {"ds_split",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.ds_split = one_of(k, v, {"manual", "optimal"}); }},
      {"phi", [](RunConfig& c, const std::string& k, const std::string& v) { c.phi = to_double(k, v); }},
      {"T", [](RunConfig& c, const std::string& k, const std::string& v) { c.transmissivity = to_double(k, v); }},
      {"lo", [](RunConfig& c, const std::string& k, const std::string& v) { c.lo = one_of(k, v, {"ideal", "finite"}); }},
      {"beta2", [](RunConfig& c, const std::string& k, const std::string& v) { c.beta2 = to_double(k, v); }},
      {"convention",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.convention = one_of(k, v, {"real", "symmetric"}); }},
      {"t_start", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_grid.start = to_double(k, v); }},
      {"t_stop", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_grid.stop = to_double(k, v); }},
      {"t_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_grid.steps = static_cast<int>(to_int(k, v)); }},
      {"xi_start", [](RunConfig& c, const std::string& k, const std::string& v) { c.xi_grid.start = to_double(k, v); }},
      {"xi_stop", [](RunConfig& c, const std::string& k, const std::string& v) { c.xi_grid.stop = to_double(k, v); }},
      {"xi_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.xi_grid.steps = static_cast<int>(to_int(k, v)); }},
      {"n_total", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_total = to_double(k, v); }},
      {"alpha2_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha2_steps = static_cast<int>(to_int(k, v)); }},
      {"n_start", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_grid.start = to_double(k, v); }},
      {"n_stop", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_grid.stop = to_double(k, v); }},
      {"n_steps", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_grid.steps = static_cast<int>(to_int(k, v)); }},
      {"n_scale",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.n_grid.log_scale = one_of(k, v, {"linear", "log"}) == "log"; }},
      {"M", [](RunConfig& c, const std::string& k, const std::string& v) { c.samples = static_cast<int>(to_int(k, v)); }},
      {"K", [](RunConfig& c, const std::string& k, const std::string& v) { c.trials = static_cast<int>(to_int(k, v)); }},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_u64(k, v); }},
      {"true_phi", [](RunConfig& c, const std::string& k, const std::string& v) { c.true_phi = to_double(k, v); }},
      {"band_lo", [](RunConfig& c, const std::string& k, const std::string& v) { c.band_lo = to_double(k, v); }},
      {"band_hi", [](RunConfig& c, const std::string& k, const std::string& v) { c.band_hi = to_double(k, v); }},
      {"threads", [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = static_cast<unsigned>(to_u64(k, v)); }},
      {"cutoff", [](RunConfig& c, const std::string& k, const std::string& v) { c.cutoff = static_cast<int>(to_int(k, v)); }},
      {"verify", [](RunConfig& c, const std::string& k, const std::string& v) { c.verify = to_bool(k, v); }},
      {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; }},
      {"format",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.format = one_of(k, v, {"csv", "json"}) == "csv" ? OutputFormat::Csv : OutputFormat::Json;
         c.format_set = true;
       }},
  };
  return table;
}

const Setter* find_setter(const std::string& key) {
  for (const auto& [name, fn] : setters()) {
    if (name == key) return &fn;
  }
  return nullptr;
}

void check_grid(const std::string& name, const Grid& g) {
  if (g.steps < 1) bad(name + "_steps", "grid is empty");
  if (g.start > g.stop) bad(name + "_start", "start exceeds stop");
  if (g.steps == 1 && g.start != g.stop) bad(name + "_steps", "a single-point grid needs start == stop");
  if (g.log_scale && g.start <= 0.0) bad(name + "_start", "log grid needs a positive start");
}

void validate(const RunConfig& c) {
  if (c.alpha2 < 0.0) bad("alpha2", "must be >= 0");
  if (c.r < 0.0) bad("r", "must be >= 0");
  if (c.n_thermal < 0.0) bad("n_thermal", "must be >= 0");
  if (c.transmissivity < 0.0 || c.transmissivity > 1.0) bad("T", "must lie in [0, 1]");
  if (c.lo == "finite" && !(c.beta2 > 0.0)) bad("beta2", "finite local oscillator needs beta2 > 0");
  check_grid("t", c.t_grid);
  if (c.t_grid.start < 0.0 || c.t_grid.stop > 1.0) bad("t_start", "T grid must lie in [0, 1]");
  check_grid("xi", c.xi_grid);
  if (c.xi_grid.start < 0.0) bad("xi_start", "xi grid must be >= 0");
  check_grid("n", c.n_grid);
  if (c.n_grid.start <= 0.0) bad("n_start", "photon-number grid must be positive");
  if (!(c.n_total > 0.0)) bad("n_total", "must be positive");
  if (c.alpha2_steps < 2) bad("alpha2_steps", "need at least 2 points");
  if (c.samples <= 0) bad("M", "must be positive");
  if (c.trials <= 0) bad("K", "must be positive");
  if (!(c.band_lo < c.band_hi)) bad("band_lo", "must be below band_hi");
  if (c.cutoff < 2) bad("cutoff", "must be >= 2");
}

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i) {
    const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    out[i] = log_scale ? std::pow(10.0, std::log10(start) + f * (std::log10(stop) - std::log10(start)))
                       : start + (stop - start) * f;
  }
  if (steps > 1) out.back() = stop;
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, fn] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::Parameter, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (find_setter(key) == nullptr) fail(ErrorKind::Parameter, "unknown config key '" + key + "'");
    if (!out.emplace(key, value).second) fail(ErrorKind::Parameter, "duplicate config key '" + key + "'");
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunConfig build_config(const std::map<std::string, std::string>& file_values,
                       const std::map<std::string, std::string>& overrides) {
  RunConfig cfg;
  for (const auto* source : {&file_values, &overrides}) {
    for (const auto& [key, value] : *source) {
      const Setter* set = find_setter(key);
      if (set == nullptr) fail(ErrorKind::Parameter, "unknown config key '" + key + "'");
      (*set)(cfg, key, value);
    }
  }
  validate(cfg);
  return cfg;
}

StateSpec state_spec(const RunConfig& c) {
  double alpha2 = c.alpha2;
  double r = c.r;
  if (c.state == "displaced-squeezed" && c.ds_split == "optimal") {
    alpha2 = optimal_alpha2(c.n_total);
    r = std::asinh(std::sqrt(std::max(0.0, c.n_total - alpha2)));
  }
  const Complex alpha = std::polar(std::sqrt(alpha2), c.alpha_phase);
  if (c.state == "coherent") return Coherent{alpha};
  if (c.state == "thermal") return Thermal{c.n_thermal};
  if (c.state == "squeezed-vacuum") return SqueezedVacuum{r, c.theta};
  if (c.state == "squeezed-thermal") return SqueezedThermal{r, c.theta, c.n_thermal};
  if (c.state == "displaced-thermal") return DisplacedThermal{alpha, c.n_thermal};
  return DisplacedSqueezed{alpha, r, c.theta};
}

ProtocolConfig protocol_config(const RunConfig& c) {
  ProtocolConfig p;
  p.input = state_spec(c);
  p.phi = c.phi;
  p.transmissivity = c.transmissivity;
  if (c.lo == "finite") p.lo = FiniteLO{Complex{std::sqrt(c.beta2), 0.0}};
  p.convention = c.convention == "real" ? BeamSplitterConvention::Real : BeamSplitterConvention::Symmetric;
  validate(p);
  return p;
}

estimation::McRun mc_run(const RunConfig& c) {
  estimation::McRun run;
  run.config = protocol_config(c);
  run.true_phi = c.true_phi.value_or(c.phi);
  run.samples_per_trial = c.samples;
  run.trials = c.trials;
  run.seed = c.seed;
  run.threads = c.threads;
  estimation::validate(run);
  return run;
}

}  // namespace homodyne::cli
