#pragma once

#include "pacrb/response.hpp"
#include "pacrb/scene.hpp"

namespace pacrb {

/// Pair of partial derivatives of a real scalar with respect to (theta, r).
struct RealDerivs {
  double dtheta;
  double dr;
};

/// Pair of partial derivatives of a complex scalar with respect to (theta, r).
struct ComplexDerivs {
  cdouble dtheta;
  cdouble dr;
};

/// Entrywise parameter derivatives of the observation g.
struct ObservationJacobian {
  SteeringVector g_theta;
  SteeringVector g_r;
};

/// d r_m / d theta = -r y_m cos(theta) / r_m; d r_m / d r = (r - y_m
/// sin(theta)) / r_m.
RealDerivs d_tx_distance(const TransmitterLayout& tx, const Target& target,
                         int m);

/// d l_n / d theta = (R r sin(theta) - n d_R r cos(theta)) / l_n;
/// d l_n / d r = (r - R cos(theta) - n d_R sin(theta)) / l_n.
/// Pure geometry, independent of the receiver mode.
RealDerivs d_rx_distance(const ReceiverLayout& rx, const Target& target,
                         int n);

/// Chain rule on a_m; the in-waveguide phase is position-only and contributes
/// no derivative.
ComplexDerivs d_tx_element(const TransmitterLayout& tx, const Target& target,
                           int m);

ComplexDerivs d_rx_element(const ReceiverLayout& rx, const Target& target,
                           int n);

/// (S_theta, S_r): element-wise sums of d_tx_element.
ComplexDerivs d_aggregate_tx(const TransmitterLayout& tx,
                             const Target& target);

/// g_theta = S_theta b + S b_theta; g_r = S_r b + S b_r.
ObservationJacobian observation_jacobian(const TransmitterLayout& tx,
                                         const ReceiverLayout& rx,
                                         const Target& target);

}  // namespace pacrb
