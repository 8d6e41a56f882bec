#include "pacrb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pacrb/rng.hpp"

namespace pacrb {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) {
  return 10.0 * std::log10(watts) + 30.0;
}
double deg_to_rad(double deg) { return deg * M_PI / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / M_PI; }

double RunConfig::wavelength() const {
  return kSpeedOfLight / (frequency_ghz * 1e9);
}

double RunConfig::guided_wavelength() const { return wavelength() / n_eff; }

double RunConfig::bandwidth_hz() const { return time_bandwidth / pulse_time_s; }

double RunConfig::noise_psd() const {
  return dbm_to_watts(noise_dbm) / bandwidth_hz();
}

TxParams RunConfig::tx_params() const {
  TxParams p;
  p.wavelength = wavelength();
  p.guided_wavelength = guided_wavelength();
  p.feed_y = feed_y_auto ? -waveguide_length_m / 2.0 : feed_y_m;
  p.waveguide_length = waveguide_length_m;
  const double lam = wavelength();
  p.ref_gain = tx_ref_gain_auto ? (lam / (4.0 * M_PI)) * (lam / (4.0 * M_PI))
                                : tx_ref_gain;
  p.waveguide_phase_enabled = (tx_mode == "pas");
  return p;
}

SensingBudget RunConfig::budget() const {
  const double phase = deg_to_rad(kappa_phase_deg);
  return SensingBudget(dbm_to_watts(power_dbm),
                       std::polar(kappa_abs, phase), pulse_time_s,
                       bandwidth_hz(), noise_psd());
}

ReceiverLayout RunConfig::receiver(int n_override) const {
  const double lam = wavelength();
  const double spacing = rx_spacing_auto ? lam / 2.0 : rx_spacing_m;
  const double gain =
      rx_ref_gain_auto ? (lam / (4.0 * M_PI)) * (lam / (4.0 * M_PI))
                       : rx_ref_gain;
  const RxMode mode =
      rx_mode == "plane-wave" ? RxMode::PlaneWave : RxMode::Exact;
  return ReceiverLayout(n_override > 0 ? n_override : rx_n, spacing,
                        baseline_m, gain, lam, mode);
}

Target RunConfig::target() const {
  return Target(target_range_m, deg_to_rad(target_direction_deg));
}

TransmitterLayout RunConfig::transmitter(ExecutionPolicy policy) const {
  const TxParams p = tx_params();
  if (!tx_positions.empty()) {
    return p.make_layout(tx_positions);
  }
  if (tx_mode == "ula") {
    return ula_baseline(tx_m, p);
  }
  const PlacementResult placed = optimize_placement(
      placement_problem(), derive_seed(seed, fnv1a("config-transmitter"), 0),
      policy);
  return p.make_layout(placed.positions);
}

PlacementProblem RunConfig::placement_problem() const {
  PlacementObjective obj = PlacementObjective::MeanSqrtCrbRange;
  if (placement_objective == "mean-sqrt-crb-angle") {
    obj = PlacementObjective::MeanSqrtCrbAngle;
  } else if (placement_objective == "weighted-sum") {
    obj = PlacementObjective::WeightedSum;
  }
  const EnsembleSpec ens{deg_to_rad(theta_min_deg), deg_to_rad(theta_max_deg),
                         r_min_m, r_max_m};
  return PlacementProblem{tx_m,
                          tx_params(),
                          obj,
                          weight_r,
                          weight_theta,
                          ensemble_grid(ens, ensemble_grid_per_axis),
                          budget(),
                          receiver(placement_reference_n),
                          placement_restarts};
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec spec{sweep_n_values,
                 {},
                 EnsembleSpec{deg_to_rad(theta_min_deg),
                              deg_to_rad(theta_max_deg), r_min_m, r_max_m},
                 sweep_samples,
                 seed,
                 budget(),
                 receiver(),
                 tx_params(),
                 placement_restarts};

  const TxParams p = spec.tx;
  TxParams ula_params = p;
  ula_params.waveguide_phase_enabled = false;
  if (!tx_positions.empty()) {
    spec.transmitters.push_back(
        {"PAS_" + std::to_string(tx_positions.size()),
         p.make_layout(tx_positions), 0});
  } else if (tx_mode == "ula") {
    spec.transmitters.push_back(
        {"ULA_" + std::to_string(tx_m), ula_baseline(tx_m, ula_params), 0});
  } else {
    // Default comparison set: optimized placements against the conventional
    // centered grid, at M and 2M elements.
    spec.transmitters.push_back(
        {"PAS_" + std::to_string(tx_m), std::nullopt, tx_m});
    spec.transmitters.push_back(
        {"ULA_" + std::to_string(tx_m), ula_baseline(tx_m, ula_params), 0});
    spec.transmitters.push_back(
        {"PAS_" + std::to_string(2 * tx_m), std::nullopt, 2 * tx_m});
    spec.transmitters.push_back({"ULA_" + std::to_string(2 * tx_m),
                                 ula_baseline(2 * tx_m, ula_params), 0});
  }
  return spec;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
  };
  if (frequency_ghz <= 0.0) fail("system.frequency_ghz", "must be > 0");
  if (n_eff < 1.0) fail("system.n_eff", "must be >= 1");
  if (tx_m < 1) fail("transmitter.m", "must be >= 1");
  if (tx_mode != "pas" && tx_mode != "ula") {
    fail("transmitter.mode", "must be 'pas' or 'ula'");
  }
  if (waveguide_length_m <= 0.0) {
    fail("transmitter.waveguide_length_m", "must be > 0");
  }
  if (!tx_ref_gain_auto && tx_ref_gain <= 0.0) {
    fail("transmitter.ref_gain", "must be > 0");
  }
  if (rx_n < 2) fail("receiver.n", "must be >= 2");
  if (!rx_spacing_auto && rx_spacing_m <= 0.0) {
    fail("receiver.spacing_m", "must be > 0");
  }
  if (baseline_m <= 0.0) fail("receiver.baseline_m", "must be > 0");
  if (!rx_ref_gain_auto && rx_ref_gain <= 0.0) {
    fail("receiver.ref_gain", "must be > 0");
  }
  if (rx_mode != "exact" && rx_mode != "plane-wave") {
    fail("receiver.mode", "must be 'exact' or 'plane-wave'");
  }
  if (kappa_abs <= 0.0) fail("budget.kappa_abs", "must be > 0");
  if (time_bandwidth <= 0.0) fail("budget.time_bandwidth", "must be > 0");
  if (pulse_time_s <= 0.0) fail("budget.pulse_time_s", "must be > 0");
  if (target_range_m <= 0.0) fail("target.range_m", "must be > 0");
  if (std::abs(target_direction_deg) >= 90.0) {
    fail("target.direction_deg", "must lie in (-90, 90)");
  }
  if (sweep_n_values.empty()) fail("sweep.n_values", "must be non-empty");
  if (!std::is_sorted(sweep_n_values.begin(), sweep_n_values.end()) ||
      sweep_n_values.front() < 2) {
    fail("sweep.n_values", "must be ascending integers >= 2");
  }
  if (sweep_samples < 1) fail("sweep.samples", "must be >= 1");
  if (theta_min_deg >= theta_max_deg || theta_min_deg <= -90.0 ||
      theta_max_deg >= 90.0) {
    fail("sweep.theta_min_deg/theta_max_deg",
         "need -90 < min < max < 90");
  }
  if (r_min_m <= 0.0 || r_min_m >= r_max_m) {
    fail("sweep.r_min_m/r_max_m", "need 0 < min < max");
  }
  if (placement_restarts < 1) fail("placement.restarts", "must be >= 1");
  if (placement_objective != "mean-sqrt-crb-range" &&
      placement_objective != "mean-sqrt-crb-angle" &&
      placement_objective != "weighted-sum") {
    fail("placement.objective",
         "must be 'mean-sqrt-crb-range', 'mean-sqrt-crb-angle' or "
         "'weighted-sum'");
  }
  if (placement_objective == "weighted-sum" &&
      (weight_r < 0.0 || weight_theta < 0.0 ||
       weight_r + weight_theta <= 0.0)) {
    fail("placement.weight_r/weight_theta",
         "must be non-negative and not both zero");
  }
  if (ensemble_grid_per_axis < 1) {
    fail("placement.grid_per_axis", "must be >= 1");
  }
  if (placement_reference_n < 2) {
    fail("placement.reference_n", "must be >= 2");
  }
  if (fd_configs < 1) fail("validate.fd_configs", "must be >= 1");
  if (fim_configs < 1) fail("validate.fim_configs", "must be >= 1");
}

namespace {

struct FieldSetter {
  std::function<void(RunConfig&, const std::string&, int, const std::string&)>
      apply;
};

[[noreturn]] void parse_fail(const std::string& source, int line,
                             const std::string& why) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + why);
}

double parse_double(const std::string& source, int line,
                    const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    parse_fail(source, line, "expected a number, got '" + value + "'");
  }
  if (pos != value.size()) {
    parse_fail(source, line, "trailing characters after number: '" + value +
                                 "'");
  }
  return v;
}

int parse_int(const std::string& source, int line, const std::string& value) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(value, &pos);
  } catch (const std::exception&) {
    parse_fail(source, line, "expected an integer, got '" + value + "'");
  }
  if (pos != value.size()) {
    parse_fail(source, line,
               "trailing characters after integer: '" + value + "'");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& source, int line,
                        const std::string& value) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    parse_fail(source, line,
               "expected an unsigned integer, got '" + value + "'");
  }
  if (pos != value.size()) {
    parse_fail(source, line,
               "trailing characters after integer: '" + value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    parts.push_back(item.substr(b, e - b + 1));
  }
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

using Table = std::map<std::string, FieldSetter>;

Table build_field_table() {
  Table t;
  auto num = [&t](const std::string& key, double RunConfig::* field) {
    t[key] = {[field](RunConfig& c, const std::string& src, int line,
                      const std::string& v) {
      c.*field = parse_double(src, line, v);
    }};
  };
  auto integer = [&t](const std::string& key, int RunConfig::* field) {
    t[key] = {[field](RunConfig& c, const std::string& src, int line,
                      const std::string& v) {
      c.*field = parse_int(src, line, v);
    }};
  };
  auto word = [&t](const std::string& key, std::string RunConfig::* field) {
    t[key] = {[field](RunConfig& c, const std::string&, int,
                      const std::string& v) { c.*field = v; }};
  };
  // A numeric field with an "auto" escape hatch.
  auto num_auto = [&t](const std::string& key, double RunConfig::* field,
                       bool RunConfig::* flag) {
    t[key] = {[field, flag](RunConfig& c, const std::string& src, int line,
                            const std::string& v) {
      if (v == "auto") {
        c.*flag = true;
      } else {
        c.*flag = false;
        c.*field = parse_double(src, line, v);
      }
    }};
  };

  num("system.frequency_ghz", &RunConfig::frequency_ghz);
  num("system.n_eff", &RunConfig::n_eff);

  integer("transmitter.m", &RunConfig::tx_m);
  word("transmitter.mode", &RunConfig::tx_mode);
  t["transmitter.positions"] = {[](RunConfig& c, const std::string& src,
                                   int line, const std::string& v) {
    c.tx_positions.clear();
    for (const std::string& item : split_list(v)) {
      c.tx_positions.push_back(parse_double(src, line, item));
    }
  }};
  num_auto("transmitter.feed_y_m", &RunConfig::feed_y_m,
           &RunConfig::feed_y_auto);
  num("transmitter.waveguide_length_m", &RunConfig::waveguide_length_m);
  num_auto("transmitter.ref_gain", &RunConfig::tx_ref_gain,
           &RunConfig::tx_ref_gain_auto);

  integer("receiver.n", &RunConfig::rx_n);
  num_auto("receiver.spacing_m", &RunConfig::rx_spacing_m,
           &RunConfig::rx_spacing_auto);
  num("receiver.baseline_m", &RunConfig::baseline_m);
  num_auto("receiver.ref_gain", &RunConfig::rx_ref_gain,
           &RunConfig::rx_ref_gain_auto);
  word("receiver.mode", &RunConfig::rx_mode);

  num("budget.power_dbm", &RunConfig::power_dbm);
  num("budget.noise_dbm", &RunConfig::noise_dbm);
  num("budget.kappa_abs", &RunConfig::kappa_abs);
  num("budget.kappa_phase_deg", &RunConfig::kappa_phase_deg);
  num("budget.time_bandwidth", &RunConfig::time_bandwidth);
  num("budget.pulse_time_s", &RunConfig::pulse_time_s);

  num("target.range_m", &RunConfig::target_range_m);
  num("target.direction_deg", &RunConfig::target_direction_deg);

  t["sweep.n_values"] = {[](RunConfig& c, const std::string& src, int line,
                            const std::string& v) {
    c.sweep_n_values.clear();
    for (const std::string& item : split_list(v)) {
      c.sweep_n_values.push_back(parse_int(src, line, item));
    }
  }};
  integer("sweep.samples", &RunConfig::sweep_samples);
  t["sweep.seed"] = {[](RunConfig& c, const std::string& src, int line,
                        const std::string& v) {
    c.seed = parse_u64(src, line, v);
  }};
  num("sweep.theta_min_deg", &RunConfig::theta_min_deg);
  num("sweep.theta_max_deg", &RunConfig::theta_max_deg);
  num("sweep.r_min_m", &RunConfig::r_min_m);
  num("sweep.r_max_m", &RunConfig::r_max_m);

  integer("placement.restarts", &RunConfig::placement_restarts);
  word("placement.objective", &RunConfig::placement_objective);
  num("placement.weight_r", &RunConfig::weight_r);
  num("placement.weight_theta", &RunConfig::weight_theta);
  integer("placement.grid_per_axis", &RunConfig::ensemble_grid_per_axis);
  integer("placement.reference_n", &RunConfig::placement_reference_n);

  integer("validate.fd_configs", &RunConfig::fd_configs);
  integer("validate.fim_configs", &RunConfig::fim_configs);

  return t;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source_name) {
  static const Table table = build_field_table();
  static const std::vector<std::string> sections = {
      "system",  "transmitter", "receiver", "budget",
      "target", "sweep",       "placement", "validate"};

  RunConfig cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        parse_fail(source_name, line_no, "unterminated section header");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) ==
          sections.end()) {
        parse_fail(source_name, line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      parse_fail(source_name, line_no, "expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (section.empty()) {
      parse_fail(source_name, line_no,
                 "key '" + key + "' appears before any [section]");
    }
    if (key.empty()) parse_fail(source_name, line_no, "empty key");
    if (value.empty()) {
      parse_fail(source_name, line_no, "empty value for key '" + key + "'");
    }
    const std::string qualified = section + "." + key;
    const auto it = table.find(qualified);
    if (it == table.end()) {
      parse_fail(source_name, line_no,
                 "unknown key '" + key + "' in section [" + section + "]");
    }
    it->second.apply(cfg, source_name, line_no, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open config file: " + path);
  }
  return parse_config(in, path);
}

}  // namespace pacrb
