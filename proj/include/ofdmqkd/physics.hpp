#pragma once

namespace ofdmqkd {

// CODATA 2018 exact values.
inline constexpr double kPlanck = 6.62607015e-34;        // J s
inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kSpeedOfLight = 2.99792458e8;    // m/s
inline constexpr double kPascalPerTorr = 101325.0 / 760.0;

/// A strictly positive frequency in hertz.
class Frequency {
 public:
  static Frequency hertz(double value);
  static Frequency gigahertz(double value) { return hertz(value * 1e9); }
  /// From a spectroscopic wavenumber in cm^-1.
  static Frequency from_wavenumber(double per_cm);

  double hz() const { return hz_; }
  double ghz() const { return hz_ * 1e-9; }
  double thz() const { return hz_ * 1e-12; }
  double wavenumber() const;  // cm^-1
  double wavelength() const { return kSpeedOfLight / hz_; }  // m

  friend auto operator<=>(const Frequency&, const Frequency&) = default;

 private:
  explicit Frequency(double hz) : hz_(hz) {}
  double hz_;
};

/// Ambient temperature of a channel or source. Zero kelvin is the vacuum limit.
class ThermalEnvironment {
 public:
  explicit ThermalEnvironment(double kelvin);
  double kelvin() const { return kelvin_; }

  friend bool operator==(const ThermalEnvironment&,
                         const ThermalEnvironment&) = default;

 private:
  double kelvin_;
};

/// Bose-Einstein mean photon number 1/(exp(hf/kT) - 1); zero at T = 0.
double thermal_occupation(Frequency f, const ThermalEnvironment& env);

/// Thermal-state quadrature variance 2n + 1 in shot-noise units.
double vacuum_variance(Frequency f, const ThermalEnvironment& env);

}  // namespace ofdmqkd
