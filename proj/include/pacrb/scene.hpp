#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pacrb {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Receiver element response model.
enum class RxMode { Exact, PlaneWave };

/// Point target in the transmitter-centered polar frame.
struct Target {
  double range;      ///< r (m), > 0
  double direction;  ///< theta (rad), |theta| < pi/2

  Target(double r, double theta);
};

/// Pinching-antenna transmitter: activated element y-coordinates along a
/// dielectric waveguide on the y-axis at x = 0. Positions are re-centered on
/// construction so they sum to zero and kept sorted ascending.
class TransmitterLayout {
 public:
  TransmitterLayout(std::vector<double> pa_positions, double feed_y,
                    double waveguide_length, double wavelength,
                    double guided_wavelength, double ref_gain,
                    bool waveguide_phase_enabled);

  const std::vector<double>& positions() const { return positions_; }
  int size() const { return static_cast<int>(positions_.size()); }
  double position(int m) const;
  double feed_y() const { return feed_y_; }
  double waveguide_length() const { return waveguide_length_; }
  double wavelength() const { return wavelength_; }
  double guided_wavelength() const { return guided_wavelength_; }
  double ref_gain() const { return ref_gain_; }
  bool waveguide_phase_enabled() const { return waveguide_phase_enabled_; }

  /// Same geometry reflected through the x-axis (positions and feed negated).
  TransmitterLayout mirrored() const;

 private:
  std::vector<double> positions_;
  double feed_y_;
  double waveguide_length_;
  double wavelength_;
  double guided_wavelength_;
  double ref_gain_;
  bool waveguide_phase_enabled_;
};

/// Uniform linear receive array on the y-axis at x = R. Element indices form
/// the symmetric set {0, +/-1, ..., +/-(N-1)/2} for odd N; for even N the
/// index 0 is omitted, giving {+/-1, ..., +/-N/2}.
class ReceiverLayout {
 public:
  ReceiverLayout(int n_elements, double spacing, double baseline,
                 double ref_gain, double wavelength, RxMode mode);

  int size() const { return n_elements_; }
  double spacing() const { return spacing_; }
  double baseline() const { return baseline_; }
  double ref_gain() const { return ref_gain_; }
  double wavelength() const { return wavelength_; }
  RxMode mode() const { return mode_; }
  double aperture() const { return n_elements_ * spacing_; }

  /// Signed element index of slot i in [0, N), ascending.
  int element_index(int slot) const;
  std::vector<int> element_indices() const;
  bool valid_index(int n) const;

  ReceiverLayout with_mode(RxMode mode) const;

 private:
  int n_elements_;
  double spacing_;
  double baseline_;
  double ref_gain_;
  double wavelength_;
  RxMode mode_;
};

/// Distance from the m-th PA (slot index into positions()) to the target.
double tx_distance(const TransmitterLayout& tx, const Target& target, int m);

/// Distance from receive element with signed index n to the target.
double rx_distance(const ReceiverLayout& rx, const Target& target, int n);

struct CenterRangeAngle {
  double range;  ///< l: target to receive-array center (m)
  double angle;  ///< phi: bearing from the array normal (rad)
};

/// Range/bearing of the target seen from the receive-array center. Throws if
/// the target coincides with the center.
CenterRangeAngle rx_center_range_angle(const ReceiverLayout& rx,
                                       const Target& target);

/// True when propagation delays across both apertures can be treated as
/// equal: D_T + D_R <= c / B.
bool delay_condition_holds(const TransmitterLayout& tx,
                           const ReceiverLayout& rx, double bandwidth_hz);
bool delay_condition_holds(double tx_aperture, double rx_aperture,
                           double bandwidth_hz);

}  // namespace pacrb
