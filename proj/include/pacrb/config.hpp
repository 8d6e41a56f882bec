#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pacrb/crb.hpp"
#include "pacrb/experiments.hpp"
#include "pacrb/placement.hpp"
#include "pacrb/scene.hpp"

namespace pacrb {

/// Thrown on malformed or out-of-range configuration input; the message is
/// anchored to the offending line/field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// dBm -> watts: 10^((x - 30) / 10).
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double deg_to_rad(double deg);
double rad_to_deg(double rad);

/// Run configuration in human units; converted to SI on access. Defaults
/// follow the reference scenario: f = 27 GHz, R = 30 m, D_T = 10 m,
/// P = 0 dBm, sigma^2 = -90 dBm, n_eff = 1.4, theta in [-30, 30] deg,
/// r in [5, 25] m.
struct RunConfig {
  // [system]
  double frequency_ghz = 27.0;
  double n_eff = 1.4;

  // [transmitter]
  int tx_m = 4;
  std::string tx_mode = "pas";            ///< "pas" | "ula"
  std::vector<double> tx_positions;       ///< explicit y-coordinates (m); optional
  double feed_y_m = 0.0;                  ///< used when feed_y_auto is false
  bool feed_y_auto = true;                ///< auto = -D_T/2
  double waveguide_length_m = 10.0;
  double tx_ref_gain = 0.0;               ///< used when tx_ref_gain_auto is false
  bool tx_ref_gain_auto = true;           ///< auto = (lambda / 4 pi)^2

  // [receiver]
  int rx_n = 32;
  double rx_spacing_m = 0.0;
  bool rx_spacing_auto = true;            ///< auto = lambda / 2
  double baseline_m = 30.0;
  double rx_ref_gain = 0.0;
  bool rx_ref_gain_auto = true;
  std::string rx_mode = "exact";          ///< "exact" | "plane-wave"

  // [budget]
  double power_dbm = 0.0;
  double noise_dbm = -90.0;               ///< total noise power sigma^2
  double kappa_abs = 1.0;
  double kappa_phase_deg = 0.0;
  double time_bandwidth = 1.0;            ///< L
  double pulse_time_s = 1.0;

  // [target]
  double target_range_m = 15.0;
  double target_direction_deg = 0.0;

  // [sweep]
  std::vector<int> sweep_n_values = {2, 4, 8, 16, 32, 64};
  int sweep_samples = 2048;
  std::uint64_t seed = 1;
  double theta_min_deg = -30.0;
  double theta_max_deg = 30.0;
  double r_min_m = 5.0;
  double r_max_m = 25.0;

  // [placement]
  int placement_restarts = 32;
  std::string placement_objective = "mean-sqrt-crb-range";
  double weight_r = 1.0;
  double weight_theta = 0.0;
  int ensemble_grid_per_axis = 16;
  int placement_reference_n = 2;

  // [validate]
  int fd_configs = 1000;
  int fim_configs = 500;

  // Derived quantities (SI).
  double wavelength() const;
  double guided_wavelength() const;
  double bandwidth_hz() const;  ///< L / T_p
  double noise_psd() const;     ///< sigma^2 / B

  TxParams tx_params() const;
  SensingBudget budget() const;
  ReceiverLayout receiver(int n_override = 0) const;
  Target target() const;

  /// Transmitter per [transmitter]: explicit positions, a ULA grid, or a
  /// seeded placement optimization for mode "pas" without positions.
  TransmitterLayout transmitter(ExecutionPolicy policy) const;

  PlacementProblem placement_problem() const;
  SweepSpec sweep_spec() const;

  /// Range checks beyond per-type constructor validation; throws ConfigError
  /// naming the offending field.
  void validate() const;
};

/// Parses the key-value config format ([section] headers, key = value lines,
/// '#' comments). Unknown sections/keys are rejected with the line number.
RunConfig parse_config(std::istream& in, const std::string& source_name);
RunConfig load_config(const std::string& path);

}  // namespace pacrb
