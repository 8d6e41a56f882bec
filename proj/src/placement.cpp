#include "pacrb/placement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pacrb/rng.hpp"

namespace pacrb {

TransmitterLayout TxParams::make_layout(std::vector<double> positions) const {
  return TransmitterLayout(std::move(positions), feed_y, waveguide_length,
                           wavelength, guided_wavelength, ref_gain,
                           waveguide_phase_enabled);
}

bool PlacementProblem::feasible() const {
  return m_antennas >= 1 && !target_ensemble.empty() &&
         m_antennas * min_spacing() <= tx.waveguide_length;
}

TransmitterLayout ula_baseline(int m, const TxParams& tx) {
  if (m < 1) throw std::invalid_argument("ula_baseline: M must be >= 1");
  std::vector<double> positions(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    positions[static_cast<std::size_t>(i)] =
        (i - (m - 1) / 2.0) * tx.wavelength / 2.0;
  }
  TxParams params = tx;
  params.waveguide_phase_enabled = false;
  return params.make_layout(std::move(positions));
}

double evaluate_objective(const TransmitterLayout& layout,
                          const PlacementProblem& problem) {
  double acc = 0.0;
  for (const Target& target : problem.target_ensemble) {
    const CrbReport rep =
        closed_form_crb(layout, problem.rx, target, problem.budget);
    double value;
    if (rep.divergent) {
      value = kDivergentPenalty;
    } else {
      switch (problem.objective) {
        case PlacementObjective::MeanSqrtCrbRange:
          value = std::sqrt(rep.crb_r);
          break;
        case PlacementObjective::MeanSqrtCrbAngle:
          value = std::sqrt(rep.crb_theta);
          break;
        case PlacementObjective::WeightedSum:
          value = problem.weight_r * std::sqrt(rep.crb_r) +
                  problem.weight_theta * std::sqrt(rep.crb_theta);
          break;
        default:
          value = kDivergentPenalty;
      }
    }
    acc += value;
  }
  return acc / static_cast<double>(problem.target_ensemble.size());
}

std::vector<double> project_feasible(std::vector<double> positions,
                                     double waveguide_length,
                                     double min_spacing) {
  const double half = waveguide_length / 2.0;
  const std::size_t m = positions.size();
  // Alternating clamp/re-space/re-center passes converge geometrically to a
  // zero-mean feasible point (which exists whenever M * spacing <= D_T); the
  // loop exits early once the iterate is feasible to 1e-12.
  for (int pass = 0; pass < 128; ++pass) {
    std::sort(positions.begin(), positions.end());
    for (double& y : positions) y = std::clamp(y, -half, half);
    for (std::size_t i = 1; i < m; ++i) {
      if (positions[i] - positions[i - 1] < min_spacing) {
        positions[i] = positions[i - 1] + min_spacing;
      }
    }
    for (std::size_t i = m; i-- > 1;) {
      if (positions[i] > half) positions[i] = half;
      if (positions[i] - positions[i - 1] < min_spacing) {
        positions[i - 1] = positions[i] - min_spacing;
      }
    }
    double mean = 0.0;
    for (double y : positions) mean += y;
    mean /= static_cast<double>(m);
    for (double& y : positions) y -= mean;
    const bool in_bounds =
        positions.front() >= -half - 1e-12 && positions.back() <= half + 1e-12;
    bool spaced = true;
    for (std::size_t i = 1; i < m; ++i) {
      spaced = spaced && positions[i] - positions[i - 1] >= min_spacing - 1e-12;
    }
    if (in_bounds && spaced) break;
  }
  return positions;
}

namespace {

struct RestartOutcome {
  std::vector<double> positions;
  double objective = 0.0;
  long evaluations = 0;
};

RestartOutcome run_restart(const PlacementProblem& problem,
                           std::uint64_t restart_seed) {
  SplitMix64 rng(restart_seed);
  const double half = problem.tx.waveguide_length / 2.0;
  const double spacing = problem.min_spacing();

  std::vector<double> current(static_cast<std::size_t>(problem.m_antennas));
  for (double& y : current) y = rng.uniform(-half, half);
  current = project_feasible(std::move(current), problem.tx.waveguide_length,
                             spacing);

  RestartOutcome out;
  double best = evaluate_objective(problem.tx.make_layout(current), problem);
  out.evaluations = 1;

  const double stop_step = problem.tx.wavelength / 100.0;
  double step = problem.tx.waveguide_length / 10.0;
  while (step > stop_step) {
    bool improved = false;
    for (int m = 0; m < problem.m_antennas; ++m) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> trial = current;
        trial[static_cast<std::size_t>(m)] += sign * step;
        trial = project_feasible(std::move(trial),
                                 problem.tx.waveguide_length, spacing);
        const double value =
            evaluate_objective(problem.tx.make_layout(trial), problem);
        ++out.evaluations;
        if (value < best) {
          best = value;
          current = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  out.positions = std::move(current);
  out.objective = best;
  return out;
}

}  // namespace

PlacementResult optimize_placement(const PlacementProblem& problem,
                                   std::uint64_t seed,
                                   ExecutionPolicy policy) {
  if (!problem.feasible()) {
    throw std::invalid_argument(
        "optimize_placement: infeasible problem (check M * lambda/2 <= D_T "
        "and a non-empty ensemble)");
  }
  const int restarts = std::max(problem.restarts, 1);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));

  if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) {
      outcomes[static_cast<std::size_t>(r)] = run_restart(
          problem, derive_seed(seed, fnv1a("placement-restart"),
                               static_cast<std::uint64_t>(r)));
    }
  } else {
    for (int r = 0; r < restarts; ++r) {
      outcomes[static_cast<std::size_t>(r)] = run_restart(
          problem, derive_seed(seed, fnv1a("placement-restart"),
                               static_cast<std::uint64_t>(r)));
    }
  }

  PlacementResult result;
  result.restarts_used = restarts;
  int best_index = 0;
  for (int r = 0; r < restarts; ++r) {
    result.iterations += outcomes[static_cast<std::size_t>(r)].evaluations;
    if (outcomes[static_cast<std::size_t>(r)].objective <
        outcomes[static_cast<std::size_t>(best_index)].objective) {
      best_index = r;
    }
  }
  result.positions = outcomes[static_cast<std::size_t>(best_index)].positions;
  result.objective_value =
      outcomes[static_cast<std::size_t>(best_index)].objective;
  return result;
}

}  // namespace pacrb
