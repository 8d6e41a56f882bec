#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacrb/crb.hpp"
#include "pacrb/placement.hpp"
#include "pacrb/scene.hpp"

namespace pacrb {

/// One transmitter entry of a sweep: either a fixed layout or a directive to
/// optimize an M-element placement before the sweep runs.
struct TransmitterEntry {
  std::string label;
  std::optional<TransmitterLayout> layout;  ///< fixed layout when set
  int optimize_m = 0;                       ///< PAs to place when layout unset
};

struct EnsembleSpec {
  double theta_min;  ///< rad
  double theta_max;
  double r_min;  ///< m
  double r_max;
};

struct SweepSpec {
  std::vector<int> n_values;
  std::vector<TransmitterEntry> transmitters;
  EnsembleSpec ensemble{-M_PI / 6.0, M_PI / 6.0, 5.0, 25.0};
  int samples = 2048;
  std::uint64_t seed = 1;
  SensingBudget budget;
  /// Receiver template; size is replaced by each swept N.
  ReceiverLayout rx;
  /// TxParams for placement directives (and feed/gain context).
  TxParams tx;
  int placement_restarts = 32;
};

/// Centered (r, theta) grid over the ensemble box, per_axis points per axis.
std::vector<Target> ensemble_grid(const EnsembleSpec& e, int per_axis);

struct SweepRow {
  std::string label;
  int n = 0;
  double mean_sqrt_crb_r = 0.0;          ///< m (+inf when all samples diverge)
  double mean_sqrt_crb_theta_deg = 0.0;  ///< degrees
  double divergent_fraction = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

enum class SweepMetric { Range, Angle };

/// Monte Carlo sweep over (transmitter, N) cells. Placement directives are
/// optimized once per entry (at the smallest swept N) and reused across N.
/// Deterministic given the seed: every cell derives its own RNG stream from
/// (seed, label, N), so results are independent of evaluation order.
SweepResult run_sweep(const SweepSpec& spec,
                      ExecutionPolicy policy = ExecutionPolicy::Parallel);

struct DegeneracyRow {
  double l = 0.0;  ///< receiver-center distance (m)
  RxMode mode = RxMode::Exact;
  double schur_det = 0.0;
  double crb_theta = 0.0;
  double crb_r = 0.0;
  bool divergent = false;
};

/// Places an on-axis target at range R + l for each requested l and reports
/// CRBs in both receiver modes.
std::vector<DegeneracyRow> degeneracy_study(
    const std::vector<double>& rx_center_distances,
    const TransmitterLayout& tx, const ReceiverLayout& rx,
    const SensingBudget& budget);

/// Least-squares slope of log(mean sqrt CRB) against log(N) for one label.
/// Requires at least three finite rows.
double estimate_slope(const SweepResult& result, const std::string& label,
                      SweepMetric metric);

}  // namespace pacrb
