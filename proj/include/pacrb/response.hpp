#pragma once

#include <complex>
#include <vector>

#include "pacrb/scene.hpp"

namespace pacrb {

using cdouble = std::complex<double>;
using SteeringVector = std::vector<cdouble>;

/// Noiseless matched-filter observation direction g = S * b.
struct ObservationModel {
  SteeringVector g;  ///< length N
  cdouble S;         ///< aggregate transmit factor, sum of a_m
  SteeringVector b;  ///< receive steering vector, length N
};

/// Transmit element response a_m = (sqrt(alpha0)/r_m) *
/// exp(-j(2*pi*r_m/lambda + 2*pi*(y_m - y_f)/lambda_g)). The in-waveguide
/// term is dropped when the layout has waveguide phase disabled.
cdouble tx_element(const TransmitterLayout& tx, const Target& target, int m);

/// Receive element response for signed index n. Exact mode uses the
/// per-element distance l_n; PlaneWave mode substitutes the center distance
/// l for every element.
cdouble rx_element(const ReceiverLayout& rx, const Target& target, int n);

/// S(r, theta) = sum over elements of a_m.
cdouble aggregate_tx(const TransmitterLayout& tx, const Target& target);

ObservationModel observation(const TransmitterLayout& tx,
                             const ReceiverLayout& rx, const Target& target);

}  // namespace pacrb
