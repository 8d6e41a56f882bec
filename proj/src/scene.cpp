#include "pacrb/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pacrb {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

}  // namespace

Target::Target(double r, double theta) : range(r), direction(theta) {
  if (!(r > 0.0)) fail("Target: range must be > 0");
  if (!(std::abs(theta) < M_PI / 2.0)) {
    fail("Target: direction must lie in (-pi/2, pi/2)");
  }
}

TransmitterLayout::TransmitterLayout(std::vector<double> pa_positions,
                                     double feed_y, double waveguide_length,
                                     double wavelength,
                                     double guided_wavelength, double ref_gain,
                                     bool waveguide_phase_enabled)
    : positions_(std::move(pa_positions)),
      feed_y_(feed_y),
      waveguide_length_(waveguide_length),
      wavelength_(wavelength),
      guided_wavelength_(guided_wavelength),
      ref_gain_(ref_gain),
      waveguide_phase_enabled_(waveguide_phase_enabled) {
  if (positions_.empty()) fail("TransmitterLayout: at least one PA required");
  if (!(wavelength_ > 0.0)) fail("TransmitterLayout: wavelength must be > 0");
  if (!(guided_wavelength_ > 0.0)) {
    fail("TransmitterLayout: guided wavelength must be > 0");
  }
  if (!(ref_gain_ > 0.0)) fail("TransmitterLayout: ref_gain must be > 0");
  if (!(waveguide_length_ > 0.0)) {
    fail("TransmitterLayout: waveguide length must be > 0");
  }

  std::sort(positions_.begin(), positions_.end());
  const double mean =
      std::accumulate(positions_.begin(), positions_.end(), 0.0) /
      static_cast<double>(positions_.size());
  for (double& y : positions_) y -= mean;

  const double min_gap = wavelength_ / 2.0;
  // Small slack so exact lambda/2 grids survive the re-centering roundoff.
  const double gap_tol = min_gap * (1.0 - 1e-9);
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (positions_[i] - positions_[i - 1] < gap_tol) {
      fail("TransmitterLayout: adjacent PA spacing below lambda/2");
    }
  }
  const double half = waveguide_length_ / 2.0 * (1.0 + 1e-12);
  for (double y : positions_) {
    if (std::abs(y) > half) {
      fail("TransmitterLayout: PA position outside [-D_T/2, D_T/2]");
    }
  }
}

double TransmitterLayout::position(int m) const {
  if (m < 0 || m >= size()) {
    throw std::out_of_range("TransmitterLayout: PA index out of range");
  }
  return positions_[static_cast<std::size_t>(m)];
}

TransmitterLayout TransmitterLayout::mirrored() const {
  std::vector<double> neg(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    neg[i] = -positions_[i];
  }
  return TransmitterLayout(std::move(neg), -feed_y_, waveguide_length_,
                           wavelength_, guided_wavelength_, ref_gain_,
                           waveguide_phase_enabled_);
}

ReceiverLayout::ReceiverLayout(int n_elements, double spacing, double baseline,
                               double ref_gain, double wavelength, RxMode mode)
    : n_elements_(n_elements),
      spacing_(spacing),
      baseline_(baseline),
      ref_gain_(ref_gain),
      wavelength_(wavelength),
      mode_(mode) {
  if (n_elements_ < 1) fail("ReceiverLayout: N must be >= 1");
  if (!(spacing_ > 0.0)) fail("ReceiverLayout: spacing must be > 0");
  if (!(baseline_ > 0.0)) fail("ReceiverLayout: baseline must be > 0");
  if (!(ref_gain_ > 0.0)) fail("ReceiverLayout: ref_gain must be > 0");
  if (!(wavelength_ > 0.0)) fail("ReceiverLayout: wavelength must be > 0");
}

int ReceiverLayout::element_index(int slot) const {
  if (slot < 0 || slot >= n_elements_) {
    throw std::out_of_range("ReceiverLayout: slot out of range");
  }
  if (n_elements_ % 2 == 1) {
    return slot - (n_elements_ - 1) / 2;
  }
  // Even N: indices -N/2..-1, 1..N/2.
  const int idx = slot - n_elements_ / 2;
  return idx < 0 ? idx : idx + 1;
}

std::vector<int> ReceiverLayout::element_indices() const {
  std::vector<int> out(static_cast<std::size_t>(n_elements_));
  for (int i = 0; i < n_elements_; ++i) {
    out[static_cast<std::size_t>(i)] = element_index(i);
  }
  return out;
}

bool ReceiverLayout::valid_index(int n) const {
  if (n_elements_ % 2 == 1) return std::abs(n) <= (n_elements_ - 1) / 2;
  return n != 0 && std::abs(n) <= n_elements_ / 2;
}

ReceiverLayout ReceiverLayout::with_mode(RxMode mode) const {
  return ReceiverLayout(n_elements_, spacing_, baseline_, ref_gain_,
                        wavelength_, mode);
}

double tx_distance(const TransmitterLayout& tx, const Target& target, int m) {
  const double y = tx.position(m);
  const double r = target.range;
  return std::sqrt(r * r - 2.0 * r * y * std::sin(target.direction) + y * y);
}

double rx_distance(const ReceiverLayout& rx, const Target& target, int n) {
  if (!rx.valid_index(n)) {
    throw std::out_of_range("rx_distance: invalid element index");
  }
  const double R = rx.baseline();
  const double r = target.range;
  const double nd = n * rx.spacing();
  return std::sqrt(R * R + r * r - 2.0 * R * r * std::cos(target.direction) -
                   2.0 * nd * r * std::sin(target.direction) + nd * nd);
}

CenterRangeAngle rx_center_range_angle(const ReceiverLayout& rx,
                                       const Target& target) {
  const double R = rx.baseline();
  const double r = target.range;
  const double l =
      std::sqrt(R * R + r * r - 2.0 * R * r * std::cos(target.direction));
  if (!(l > 0.0)) {
    throw std::domain_error(
        "rx_center_range_angle: target coincides with the array center");
  }
  double sin_phi = r * std::sin(target.direction) / l;
  sin_phi = std::clamp(sin_phi, -1.0, 1.0);
  return {l, std::asin(sin_phi)};
}

bool delay_condition_holds(const TransmitterLayout& tx,
                           const ReceiverLayout& rx, double bandwidth_hz) {
  return delay_condition_holds(tx.waveguide_length(), rx.aperture(),
                               bandwidth_hz);
}

bool delay_condition_holds(double tx_aperture, double rx_aperture,
                           double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("delay_condition_holds: bandwidth must be > 0");
  }
  return tx_aperture + rx_aperture <= kSpeedOfLight / bandwidth_hz;
}

}  // namespace pacrb
