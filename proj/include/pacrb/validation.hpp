#pragma once

#include <cstdint>

namespace pacrb {

struct FdCheckResult {
  double max_rel_error = 0.0;
  int configs = 0;
};

struct FimCheckResult {
  double max_rel_error = 0.0;
  int configs = 0;      ///< non-divergent configs compared
  int divergent = 0;    ///< skipped as degenerate by both routes
};

/// Compares the analytic observation Jacobian against central finite
/// differences over `configs` seeded random scenes (reference parameter
/// ranges: r in [5, 25] m, theta in [-30, 30] deg, M in {1..8},
/// N in {2..64}). Entrywise relative error with an absolute floor of 1e-12.
/// `fault_scale` perturbs the analytic g_theta multiplicatively; non-zero
/// values exist only so the failure path can be exercised.
FdCheckResult fd_jacobian_check(int configs, std::uint64_t seed,
                                double fault_scale = 0.0);

/// Compares the closed-form CRBs against the quad-precision Fisher
/// information oracle over seeded random scenes. Relative error is taken on
/// both CRB_theta and CRB_r.
FimCheckResult fim_agreement_check(int configs, std::uint64_t seed);

inline constexpr double kFdTolerance = 1e-6;
inline constexpr double kFimTolerance = 1e-8;

}  // namespace pacrb
