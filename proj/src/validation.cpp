#include "pacrb/validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pacrb/crb.hpp"
#include "pacrb/response.hpp"
#include "pacrb/rng.hpp"
#include "pacrb/scene.hpp"
#include "pacrb/placement.hpp"
#include "pacrb/sensitivity.hpp"

namespace pacrb {

namespace {

struct Scene {
  TransmitterLayout tx;
  ReceiverLayout rx;
  Target target;
};

// Reference-scenario carrier and geometry; only the scene itself is random.
Scene draw_scene(SplitMix64& rng) {
  const double lambda = kSpeedOfLight / 27e9;
  const double lambda_g = lambda / 1.4;
  const double d_t = 10.0;
  const double gain = (lambda / (4.0 * M_PI)) * (lambda / (4.0 * M_PI));

  const int m = 1 + static_cast<int>(rng.next_u64() % 8);
  std::vector<double> positions(m);
  for (double& y : positions) y = rng.uniform(-d_t / 2.0, d_t / 2.0);
  positions = project_feasible(std::move(positions), d_t, lambda / 2.0);
  const bool phase_on = (rng.next_u64() & 1u) != 0u;
  TransmitterLayout tx(positions, -d_t / 2.0, d_t, lambda, lambda_g, gain,
                       phase_on);

  const int n = 2 + static_cast<int>(rng.next_u64() % 63);  // 2..64
  const RxMode mode =
      (rng.next_u64() & 1u) != 0u ? RxMode::Exact : RxMode::PlaneWave;
  ReceiverLayout rx(n, lambda / 2.0, 30.0, gain, lambda, mode);

  Target target(rng.uniform(5.0, 25.0),
                rng.uniform(-M_PI / 6.0, M_PI / 6.0));
  return Scene{tx, rx, target};
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-12);
}

using cldouble = std::complex<long double>;

/// Extended-precision mirror of the observation model for the FD oracle.
/// The propagation phases are ~1e4 rad, so a double-precision evaluation
/// carries ~1e-12 rad of phase jitter; divided by the ~1e-7 FD step that
/// alone would exceed the 1e-6 budget wherever the transmit- and
/// receive-path phase rates nearly cancel. 80-bit evaluation pushes the
/// subtractive roundoff floor below 1e-8.
std::vector<cldouble> observation_ld(const TransmitterLayout& tx,
                                     const ReceiverLayout& rx,
                                     long double r, long double theta) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double sin_t = std::sin(theta);
  const long double cos_t = std::cos(theta);

  cldouble s{0.0L, 0.0L};
  for (int m = 0; m < tx.size(); ++m) {
    const long double y = tx.position(m);
    const long double rm = std::sqrt(r * r - 2.0L * r * y * sin_t + y * y);
    long double phase = 2.0L * pi * rm / (long double)tx.wavelength();
    if (tx.waveguide_phase_enabled()) {
      phase += 2.0L * pi * (y - (long double)tx.feed_y()) /
               (long double)tx.guided_wavelength();
    }
    s += std::sqrt((long double)tx.ref_gain()) / rm *
         cldouble{std::cos(-phase), std::sin(-phase)};
  }

  const long double big_r = rx.baseline();
  const long double d_r = rx.spacing();
  std::vector<cldouble> g;
  g.reserve(static_cast<std::size_t>(rx.size()));
  const long double l_center =
      std::sqrt(big_r * big_r + r * r - 2.0L * big_r * r * cos_t);
  for (int slot = 0; slot < rx.size(); ++slot) {
    const long double n = rx.element_index(slot);
    const long double ln =
        rx.mode() == RxMode::PlaneWave
            ? l_center
            : std::sqrt(big_r * big_r + r * r - 2.0L * big_r * r * cos_t -
                        2.0L * n * d_r * r * sin_t + n * n * d_r * d_r);
    const long double phase = 2.0L * pi * ln / (long double)rx.wavelength();
    const cldouble bn = std::sqrt((long double)rx.ref_gain()) / ln *
                        cldouble{std::cos(-phase), std::sin(-phase)};
    g.push_back(s * bn);
  }
  return g;
}

// Entrywise error relative to the complex magnitude: the real/imag parts of
// a rotating phasor pass through zero, where a component-wise ratio is
// meaningless.
double entry_err(cdouble got, cdouble want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-12);
}

}  // namespace

FdCheckResult fd_jacobian_check(int configs, std::uint64_t seed,
                                double fault_scale) {
  if (configs < 1) {
    throw std::invalid_argument("fd_jacobian_check: configs must be >= 1");
  }
  FdCheckResult result;
  result.configs = configs;
  for (int c = 0; c < configs; ++c) {
    SplitMix64 rng(derive_seed(seed, fnv1a("fd-check"), c));
    const Scene scene = draw_scene(rng);
    ObservationJacobian jac =
        observation_jacobian(scene.tx, scene.rx, scene.target);
    if (fault_scale != 0.0) {
      for (cdouble& v : jac.g_theta) v *= (1.0 + fault_scale);
    }

    // Truncation error of the central difference scales with the squared
    // phase rate (up to ~2e4 rad/rad in theta), so the steps must stay at or
    // below 1e-8 relative; the extended-precision evaluation keeps the
    // subtractive roundoff floor out of the way at that size.
    const long double h_theta = 1e-8L;
    const long double h_r = 1e-8L * std::max(1.0, scene.target.range);
    const long double r0 = scene.target.range;
    const long double t0 = scene.target.direction;
    const auto g_tp = observation_ld(scene.tx, scene.rx, r0, t0 + h_theta);
    const auto g_tm = observation_ld(scene.tx, scene.rx, r0, t0 - h_theta);
    const auto g_rp = observation_ld(scene.tx, scene.rx, r0 + h_r, t0);
    const auto g_rm = observation_ld(scene.tx, scene.rx, r0 - h_r, t0);
    for (std::size_t i = 0; i < jac.g_theta.size(); ++i) {
      const cldouble fdt = (g_tp[i] - g_tm[i]) / (2.0L * h_theta);
      const cldouble fdr = (g_rp[i] - g_rm[i]) / (2.0L * h_r);
      const cdouble fd_theta{(double)fdt.real(), (double)fdt.imag()};
      const cdouble fd_r{(double)fdr.real(), (double)fdr.imag()};
      result.max_rel_error =
          std::max({result.max_rel_error, entry_err(jac.g_theta[i], fd_theta),
                    entry_err(jac.g_r[i], fd_r)});
    }
  }
  return result;
}

FimCheckResult fim_agreement_check(int configs, std::uint64_t seed) {
  if (configs < 1) {
    throw std::invalid_argument("fim_agreement_check: configs must be >= 1");
  }
  const SensingBudget budget(1e-3, cdouble(1.0, 0.0), 1.0, 1.0, 1e-12);
  FimCheckResult result;
  for (int c = 0; c < configs; ++c) {
    SplitMix64 rng(derive_seed(seed, fnv1a("fim-check"), c));
    Scene scene = draw_scene(rng);
    // The plane-wave model is singular by design; the agreement check is
    // about the exact model.
    scene.rx = scene.rx.with_mode(RxMode::Exact);
    const CrbReport closed =
        closed_form_crb(scene.tx, scene.rx, scene.target, budget);
    const CrbReport fim =
        numerical_fim_crb(scene.tx, scene.rx, scene.target, budget);
    if (closed.divergent || fim.divergent) {
      ++result.divergent;
      continue;
    }
    ++result.configs;
    result.max_rel_error =
        std::max({result.max_rel_error,
                  rel_err(closed.crb_theta, fim.crb_theta),
                  rel_err(closed.crb_r, fim.crb_r)});
  }
  return result;
}

}  // namespace pacrb
