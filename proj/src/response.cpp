#include "pacrb/response.hpp"

#include <cmath>

namespace pacrb {

namespace {

cdouble polar_unit(double phase) {
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

cdouble tx_element(const TransmitterLayout& tx, const Target& target, int m) {
  const double rm = tx_distance(tx, target, m);
  double phase = 2.0 * M_PI * rm / tx.wavelength();
  if (tx.waveguide_phase_enabled()) {
    phase += 2.0 * M_PI * (tx.position(m) - tx.feed_y()) /
             tx.guided_wavelength();
  }
  return std::sqrt(tx.ref_gain()) / rm * polar_unit(-phase);
}

cdouble rx_element(const ReceiverLayout& rx, const Target& target, int n) {
  if (!rx.valid_index(n)) {
    throw std::out_of_range("rx_element: invalid element index");
  }
  const double ln = rx.mode() == RxMode::PlaneWave
                        ? rx_center_range_angle(rx, target).range
                        : rx_distance(rx, target, n);
  return std::sqrt(rx.ref_gain()) / ln *
         polar_unit(-2.0 * M_PI * ln / rx.wavelength());
}

cdouble aggregate_tx(const TransmitterLayout& tx, const Target& target) {
  cdouble sum{0.0, 0.0};
  for (int m = 0; m < tx.size(); ++m) {
    sum += tx_element(tx, target, m);
  }
  return sum;
}

ObservationModel observation(const TransmitterLayout& tx,
                             const ReceiverLayout& rx, const Target& target) {
  ObservationModel out;
  out.S = aggregate_tx(tx, target);
  out.b.reserve(static_cast<std::size_t>(rx.size()));
  for (int slot = 0; slot < rx.size(); ++slot) {
    out.b.push_back(rx_element(rx, target, rx.element_index(slot)));
  }
  out.g.reserve(out.b.size());
  for (const cdouble& bn : out.b) out.g.push_back(out.S * bn);
  return out;
}

}  // namespace pacrb
