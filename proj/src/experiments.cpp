#include "pacrb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pacrb/rng.hpp"

namespace pacrb {

namespace {

struct Cell {
  std::size_t tx_index;
  int n;
};

SweepRow run_cell(const SweepSpec& spec, const TransmitterLayout& layout,
                  const std::string& label, int n) {
  const ReceiverLayout rx(n, spec.rx.spacing(), spec.rx.baseline(),
                          spec.rx.ref_gain(), spec.rx.wavelength(),
                          spec.rx.mode());
  SplitMix64 rng(derive_seed(spec.seed, fnv1a(label),
                             static_cast<std::uint64_t>(n)));
  double sum_r = 0.0;
  double sum_theta = 0.0;
  int divergent = 0;
  for (int s = 0; s < spec.samples; ++s) {
    const double r = rng.uniform(spec.ensemble.r_min, spec.ensemble.r_max);
    const double theta =
        rng.uniform(spec.ensemble.theta_min, spec.ensemble.theta_max);
    const CrbReport rep =
        closed_form_crb(layout, rx, Target(r, theta), spec.budget);
    if (rep.divergent) {
      ++divergent;
      continue;
    }
    sum_r += std::sqrt(rep.crb_r);
    sum_theta += std::sqrt(rep.crb_theta);
  }
  SweepRow row;
  row.label = label;
  row.n = n;
  row.divergent_fraction =
      static_cast<double>(divergent) / static_cast<double>(spec.samples);
  const int kept = spec.samples - divergent;
  if (kept == 0) {
    row.mean_sqrt_crb_r = std::numeric_limits<double>::infinity();
    row.mean_sqrt_crb_theta_deg = std::numeric_limits<double>::infinity();
  } else {
    row.mean_sqrt_crb_r = sum_r / kept;
    row.mean_sqrt_crb_theta_deg = sum_theta / kept * 180.0 / M_PI;
  }
  return row;
}

}  // namespace

std::vector<Target> ensemble_grid(const EnsembleSpec& e, int per_axis) {
  std::vector<Target> out;
  out.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  for (int i = 0; i < per_axis; ++i) {
    const double r =
        e.r_min + (e.r_max - e.r_min) * (i + 0.5) / per_axis;
    for (int j = 0; j < per_axis; ++j) {
      const double theta =
          e.theta_min + (e.theta_max - e.theta_min) * (j + 0.5) / per_axis;
      out.emplace_back(r, theta);
    }
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, ExecutionPolicy policy) {
  if (spec.n_values.empty() || spec.transmitters.empty()) {
    throw std::invalid_argument("run_sweep: empty sweep specification");
  }
  if (spec.samples < 1) {
    throw std::invalid_argument("run_sweep: samples must be >= 1");
  }
  if (!std::is_sorted(spec.n_values.begin(), spec.n_values.end())) {
    throw std::invalid_argument("run_sweep: n_values must be ascending");
  }

  // Resolve placement directives once per entry, at the smallest swept N
  // (the cell where receive-side degeneracy bites hardest).
  std::vector<TransmitterLayout> layouts;
  layouts.reserve(spec.transmitters.size());
  for (const TransmitterEntry& entry : spec.transmitters) {
    if (entry.layout) {
      layouts.push_back(*entry.layout);
    } else {
      PlacementProblem problem{
          entry.optimize_m,
          spec.tx,
          PlacementObjective::MeanSqrtCrbRange,
          1.0,
          0.0,
          ensemble_grid(spec.ensemble, 16),
          spec.budget,
          ReceiverLayout(spec.n_values.front(), spec.rx.spacing(),
                         spec.rx.baseline(), spec.rx.ref_gain(),
                         spec.rx.wavelength(), spec.rx.mode()),
          spec.placement_restarts};
      const PlacementResult placed = optimize_placement(
          problem, derive_seed(spec.seed, fnv1a(entry.label), 0), policy);
      layouts.push_back(spec.tx.make_layout(placed.positions));
    }
  }

  std::vector<Cell> cells;
  for (std::size_t t = 0; t < spec.transmitters.size(); ++t) {
    for (int n : spec.n_values) cells.push_back({t, n});
  }

  SweepResult result;
  result.rows.resize(cells.size());
  if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < cells.size(); ++c) {
      result.rows[c] = run_cell(spec, layouts[cells[c].tx_index],
                                spec.transmitters[cells[c].tx_index].label,
                                cells[c].n);
    }
  } else {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      result.rows[c] = run_cell(spec, layouts[cells[c].tx_index],
                                spec.transmitters[cells[c].tx_index].label,
                                cells[c].n);
    }
  }
  return result;
}

std::vector<DegeneracyRow> degeneracy_study(
    const std::vector<double>& rx_center_distances,
    const TransmitterLayout& tx, const ReceiverLayout& rx,
    const SensingBudget& budget) {
  std::vector<DegeneracyRow> rows;
  rows.reserve(2 * rx_center_distances.size());
  for (double l : rx_center_distances) {
    const Target target(rx.baseline() + l, 0.0);
    for (RxMode mode : {RxMode::Exact, RxMode::PlaneWave}) {
      const CrbReport rep =
          closed_form_crb(tx, rx.with_mode(mode), target, budget);
      rows.push_back(
          {l, mode, rep.schur_det, rep.crb_theta, rep.crb_r, rep.divergent});
    }
  }
  return rows;
}

double estimate_slope(const SweepResult& result, const std::string& label,
                      SweepMetric metric) {
  std::vector<double> log_n;
  std::vector<double> log_v;
  for (const SweepRow& row : result.rows) {
    if (row.label != label) continue;
    const double v = metric == SweepMetric::Range ? row.mean_sqrt_crb_r
                                                  : row.mean_sqrt_crb_theta_deg;
    if (!std::isfinite(v) || !(v > 0.0)) continue;
    log_n.push_back(std::log(static_cast<double>(row.n)));
    log_v.push_back(std::log(v));
  }
  if (log_n.size() < 3) {
    throw std::invalid_argument(
        "estimate_slope: need at least three finite rows for " + label);
  }
  const double n = static_cast<double>(log_n.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t p = 0; p < log_n.size(); ++p) {
    mx += log_n[p];
    my += log_v[p];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t p = 0; p < log_n.size(); ++p) {
    sxx += (log_n[p] - mx) * (log_n[p] - mx);
    sxy += (log_n[p] - mx) * (log_v[p] - my);
  }
  return sxy / sxx;
}

}  // namespace pacrb
