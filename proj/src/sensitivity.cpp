#include "pacrb/sensitivity.hpp"

#include <cmath>

namespace pacrb {

RealDerivs d_tx_distance(const TransmitterLayout& tx, const Target& target,
                         int m) {
  const double y = tx.position(m);
  const double r = target.range;
  const double theta = target.direction;
  const double rm = tx_distance(tx, target, m);
  return {-r * y * std::cos(theta) / rm, (r - y * std::sin(theta)) / rm};
}

RealDerivs d_rx_distance(const ReceiverLayout& rx, const Target& target,
                         int n) {
  const double R = rx.baseline();
  const double r = target.range;
  const double theta = target.direction;
  const double nd = n * rx.spacing();
  const double ln = rx_distance(rx, target, n);
  return {(R * r * std::sin(theta) - nd * r * std::cos(theta)) / ln,
          (r - R * std::cos(theta) - nd * std::sin(theta)) / ln};
}

ComplexDerivs d_tx_element(const TransmitterLayout& tx, const Target& target,
                           int m) {
  const cdouble am = tx_element(tx, target, m);
  const double rm = tx_distance(tx, target, m);
  const RealDerivs drm = d_tx_distance(tx, target, m);
  const cdouble coeff_theta =
      cdouble(-drm.dtheta / rm, -2.0 * M_PI / tx.wavelength() * drm.dtheta);
  const cdouble coeff_r =
      cdouble(-drm.dr / rm, -2.0 * M_PI / tx.wavelength() * drm.dr);
  return {am * coeff_theta, am * coeff_r};
}

ComplexDerivs d_rx_element(const ReceiverLayout& rx, const Target& target,
                           int n) {
  const cdouble bn = rx_element(rx, target, n);
  double ln;
  RealDerivs dln{};
  if (rx.mode() == RxMode::PlaneWave) {
    // Center-element distance and derivatives stand in for every element; the
    // scalar coefficient is then shared, keeping b_theta, b_r colinear with b.
    ln = rx_center_range_angle(rx, target).range;
    const double R = rx.baseline();
    const double r = target.range;
    const double theta = target.direction;
    dln = {R * r * std::sin(theta) / ln, (r - R * std::cos(theta)) / ln};
  } else {
    ln = rx_distance(rx, target, n);
    dln = d_rx_distance(rx, target, n);
  }
  const cdouble coeff_theta =
      cdouble(-dln.dtheta / ln, -2.0 * M_PI / rx.wavelength() * dln.dtheta);
  const cdouble coeff_r =
      cdouble(-dln.dr / ln, -2.0 * M_PI / rx.wavelength() * dln.dr);
  return {bn * coeff_theta, bn * coeff_r};
}

ComplexDerivs d_aggregate_tx(const TransmitterLayout& tx,
                             const Target& target) {
  ComplexDerivs sum{{0.0, 0.0}, {0.0, 0.0}};
  for (int m = 0; m < tx.size(); ++m) {
    const ComplexDerivs d = d_tx_element(tx, target, m);
    sum.dtheta += d.dtheta;
    sum.dr += d.dr;
  }
  return sum;
}

ObservationJacobian observation_jacobian(const TransmitterLayout& tx,
                                         const ReceiverLayout& rx,
                                         const Target& target) {
  const cdouble S = aggregate_tx(tx, target);
  const ComplexDerivs dS = d_aggregate_tx(tx, target);
  ObservationJacobian jac;
  jac.g_theta.reserve(static_cast<std::size_t>(rx.size()));
  jac.g_r.reserve(static_cast<std::size_t>(rx.size()));
  for (int slot = 0; slot < rx.size(); ++slot) {
    const int n = rx.element_index(slot);
    const cdouble bn = rx_element(rx, target, n);
    const ComplexDerivs db = d_rx_element(rx, target, n);
    jac.g_theta.push_back(dS.dtheta * bn + S * db.dtheta);
    jac.g_r.push_back(dS.dr * bn + S * db.dr);
  }
  return jac;
}

}  // namespace pacrb
