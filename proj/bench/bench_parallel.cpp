// Compares the serial reference path against the OpenMP path for the two
// parallel kernels (the Monte Carlo sweep and the placement optimizer) and
// verifies they produce identical results.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "pacrb/config.hpp"
#include "pacrb/experiments.hpp"
#include "pacrb/placement.hpp"
#include "pacrb/rng.hpp"

using namespace pacrb;

namespace {

template <typename F>
double time_seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  RunConfig cfg;
  cfg.sweep_samples = 512;
  cfg.sweep_n_values = {2, 4, 8, 16, 32};
  cfg.placement_restarts = 16;

  SweepSpec spec = cfg.sweep_spec();
  // Fixed layouts only: keep the sweep benchmark about the sweep itself.
  spec.transmitters = {{"ULA_4", ula_baseline(4, spec.tx), 0},
                       {"ULA_8", ula_baseline(8, spec.tx), 0}};

  SweepResult serial_rows, parallel_rows;
  const double t_sweep_serial = time_seconds(
      [&] { serial_rows = run_sweep(spec, ExecutionPolicy::Serial); });
  const double t_sweep_parallel = time_seconds(
      [&] { parallel_rows = run_sweep(spec, ExecutionPolicy::Parallel); });

  bool sweep_match = serial_rows.rows.size() == parallel_rows.rows.size();
  for (std::size_t i = 0; sweep_match && i < serial_rows.rows.size(); ++i) {
    sweep_match = serial_rows.rows[i].mean_sqrt_crb_r ==
                      parallel_rows.rows[i].mean_sqrt_crb_r &&
                  serial_rows.rows[i].mean_sqrt_crb_theta_deg ==
                      parallel_rows.rows[i].mean_sqrt_crb_theta_deg;
  }

  PlacementProblem problem = cfg.placement_problem();
  PlacementResult serial_placed, parallel_placed;
  const double t_place_serial = time_seconds([&] {
    serial_placed = optimize_placement(problem, 7, ExecutionPolicy::Serial);
  });
  const double t_place_parallel = time_seconds([&] {
    parallel_placed = optimize_placement(problem, 7, ExecutionPolicy::Parallel);
  });
  const bool place_match =
      serial_placed.positions == parallel_placed.positions &&
      serial_placed.objective_value == parallel_placed.objective_value;

  std::printf("kernel                 serial (s)  parallel (s)  speedup  "
              "identical\n");
  std::printf("run_sweep              %9.3f  %11.3f  %6.2fx  %s\n",
              t_sweep_serial, t_sweep_parallel,
              t_sweep_serial / t_sweep_parallel, sweep_match ? "yes" : "NO");
  std::printf("optimize_placement     %9.3f  %11.3f  %6.2fx  %s\n",
              t_place_serial, t_place_parallel,
              t_place_serial / t_place_parallel, place_match ? "yes" : "NO");
  return (sweep_match && place_match) ? 0 : 1;
}
