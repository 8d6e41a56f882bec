#pragma once

#include <complex>

#include "pacrb/response.hpp"
#include "pacrb/scene.hpp"
#include "pacrb/sensitivity.hpp"

namespace pacrb {

/// Waveform/link budget for one coherent processing interval.
struct SensingBudget {
  double power;       ///< P (W)
  cdouble kappa;      ///< complex reflection coefficient
  double pulse_time;  ///< T_p (s)
  double bandwidth;   ///< B (Hz)
  double noise_psd;   ///< N_0 (W/Hz)

  SensingBudget(double p, cdouble k, double tp, double b, double n0);

  double time_bandwidth() const { return bandwidth * pulse_time; }       // L
  double noise_variance() const { return noise_psd * bandwidth; }       // sigma^2
  double rho_squared() const { return pulse_time * power * std::norm(kappa); }
};

struct IskTerms {
  double i;
  double s;
  double k;
  /// i*s - k^2, evaluated as a Gram determinant (sum of squared 2x2 minors of
  /// the projected Jacobian), which is exact-algebra equal but does not
  /// cancel catastrophically when k^2 is close to i*s.
  double schur_det;
};

/// Projection residuals of the observation Jacobian against g:
///   i = ||g_theta||^2 - |g_theta^H g|^2 / ||g||^2
///   s = ||g_r||^2     - |g_r^H g|^2     / ||g||^2
///   k = Re{x^H y} for the projected vectors x, y.
/// Throws std::domain_error when ||g|| = 0.
IskTerms isk_terms(const SteeringVector& g, const SteeringVector& g_theta,
                   const SteeringVector& g_r);

struct CrbReport {
  double i = 0.0;
  double s = 0.0;
  double k = 0.0;
  double schur_det = 0.0;
  double crb_theta = 0.0;  ///< rad^2 (+inf when divergent)
  double crb_r = 0.0;      ///< m^2 (+inf when divergent)
  bool divergent = false;
};

/// Closed-form bounds: CRB_theta = sigma^2/(2 L |rho|^2) * s / (i s - k^2),
/// CRB_r likewise with i in the numerator. Divergence is a relative test on
/// the Schur determinant (see kDegeneracyDelta).
CrbReport closed_form_crb(const TransmitterLayout& tx,
                          const ReceiverLayout& rx, const Target& target,
                          const SensingBudget& budget);

/// Independent oracle: assembles the full 4x4 Fisher information over
/// (theta, r, kappa_re, kappa_im) in quad precision, eliminates the nuisance
/// block by Schur complement, and inverts the remaining 2x2.
CrbReport numerical_fim_crb(const TransmitterLayout& tx,
                            const ReceiverLayout& rx, const Target& target,
                            const SensingBudget& budget);

/// Relative degeneracy threshold on i*s - k^2.
inline constexpr double kDegeneracyDelta = 1e-10;

}  // namespace pacrb
