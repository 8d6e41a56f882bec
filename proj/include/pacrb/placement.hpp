#pragma once

#include <cstdint>
#include <vector>

#include "pacrb/crb.hpp"
#include "pacrb/scene.hpp"

namespace pacrb {

enum class PlacementObjective {
  MeanSqrtCrbRange,
  MeanSqrtCrbAngle,
  WeightedSum,
};

enum class ExecutionPolicy { Serial, Parallel };

/// Transmit-side parameters shared by every candidate layout.
struct TxParams {
  double wavelength;
  double guided_wavelength;
  double feed_y;
  double waveguide_length;
  double ref_gain;
  bool waveguide_phase_enabled = true;

  TransmitterLayout make_layout(std::vector<double> positions) const;
};

struct PlacementProblem {
  int m_antennas;
  TxParams tx;  ///< tx.waveguide_length is D_T, tx.wavelength sets lambda/2
  PlacementObjective objective = PlacementObjective::MeanSqrtCrbRange;
  double weight_r = 1.0;      ///< WeightedSum only
  double weight_theta = 0.0;  ///< WeightedSum only
  std::vector<Target> target_ensemble;
  SensingBudget budget;
  ReceiverLayout rx;
  int restarts = 32;

  double min_spacing() const { return tx.wavelength / 2.0; }
  bool feasible() const;
};

struct PlacementResult {
  std::vector<double> positions;
  double objective_value = 0.0;
  long iterations = 0;      ///< objective evaluations across all restarts
  int restarts_used = 0;
};

/// Divergent ensemble samples contribute this finite penalty to the mean.
inline constexpr double kDivergentPenalty = 1e6;

/// Centered lambda/2-spaced transmit grid with the in-waveguide phase
/// disabled: the conventional baseline.
TransmitterLayout ula_baseline(int m, const TxParams& tx);

/// Mean of sqrt(CRB) over the ensemble per the problem objective
/// (radians for the angle term; divergent samples add kDivergentPenalty).
double evaluate_objective(const TransmitterLayout& layout,
                          const PlacementProblem& problem);

/// Multi-start projected pattern search. Each restart draws a sorted uniform
/// feasible start, then runs coordinate moves with a shrinking step (D_T/10
/// down to lambda/100, halving), projecting onto the constraint set after
/// every move. Deterministic given the seed; ties break on the lowest
/// restart index.
PlacementResult optimize_placement(const PlacementProblem& problem,
                                   std::uint64_t seed,
                                   ExecutionPolicy policy =
                                       ExecutionPolicy::Parallel);

/// Projection used by the optimizer: sort, clamp to [-D_T/2, D_T/2], restore
/// min-spacing gaps, re-center. Exposed for the constraint-audit tests.
std::vector<double> project_feasible(std::vector<double> positions,
                                     double waveguide_length,
                                     double min_spacing);

}  // namespace pacrb
