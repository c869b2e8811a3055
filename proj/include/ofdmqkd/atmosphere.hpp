#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmqkd/physics.hpp"

namespace ofdmqkd {

/// One HITRAN transition. Units follow the HITRAN .par conventions.
struct SpectralLine {
  int molecule_id = 0;
  int isotopologue_id = 0;
  double center = 0.0;              // cm^-1
  double intensity = 0.0;           // cm^-1/(molecule cm^-2) at 296 K
  double air_halfwidth = 0.0;       // cm^-1/atm
  double self_halfwidth = 0.0;      // cm^-1/atm
  double lower_state_energy = 0.0;  // cm^-1
  double temp_exponent = 0.0;
  double pressure_shift = 0.0;      // cm^-1/atm

  friend bool operator==(const SpectralLine&, const SpectralLine&) = default;
};

inline constexpr int kWaterMoleculeId = 1;
inline constexpr double kHitranReferenceTemperature = 296.0;
inline constexpr double kRoomTemperature = 296.0;
inline constexpr double kStandardPressureTorr = 760.0;

/// Reads HITRAN 2004+ 160-column records and keeps the H2O transitions.
/// Blank lines are skipped; a malformed record throws ParseError naming the
/// record number and column range.
std::vector<SpectralLine> parse_hitran_records(std::istream& in);
std::vector<SpectralLine> parse_hitran_records(std::string_view text);
std::vector<SpectralLine> load_hitran_file(const std::string& path);

/// The bundled 83-line water list (HITRAN 2020 based, 0.02-1.75 THz).
const std::vector<SpectralLine>& default_water_lines();
/// The bundled list as HITRAN .par text.
std::string_view default_water_line_data();

/// Partial pressures of a water / dry-air mixture, in Torr.
struct MoistAir {
  double water_pressure = 0.0;
  double air_pressure = kStandardPressureTorr;
  double temperature = kRoomTemperature;  // K

  void validate() const;
  friend bool operator==(const MoistAir&, const MoistAir&) = default;
};

/// Water partial pressure in Torr from relative humidity in percent, using
/// the Buck saturation curve over liquid water.
double rh_to_water_pressure(double rh_percent, double kelvin);

/// Humid air at the given RH with the dry-air share filling up
/// `total_torr` (760 Torr by default).
MoistAir humid_air(double rh_percent, double kelvin,
                   double total_torr = kStandardPressureTorr);

enum class LineProfile { van_vleck_weisskopf, lorentz };

struct LineModelOptions {
  LineProfile profile = LineProfile::van_vleck_weisskopf;
  double wing_cutoff = 25.0;  // cm^-1 from line centre
  double band_margin = 50.0;  // cm^-1 beyond the evaluated band
};

/// Normalized line shape in cm (per cm^-1) at wavenumber nu for a line at
/// nu0 with Lorentz half-width gamma, all in cm^-1.
double line_profile(LineProfile profile, double nu, double nu0, double gamma);

/// Resonant water absorption, Napierian, per metre.
double line_absorption(Frequency f, std::span<const SpectralLine> lines,
                       const MoistAir& air, const LineModelOptions& opts = {});

/// Empirical continuum (C_s p_w + C_f p_air) p_w f^2 with pressures in Torr
/// and f in THz, giving m^-1.
struct ContinuumCoefficients {
  double self = 2.78e-5;
  double foreign = 1.10e-6;

  friend bool operator==(const ContinuumCoefficients&,
                         const ContinuumCoefficients&) = default;
};

double continuum_absorption(Frequency f, const MoistAir& air,
                            const ContinuumCoefficients& coeffs = {});

enum class SpectrumProvenance { computed, loaded };

/// Absorption coefficient (m^-1) sampled on a strictly ascending grid (Hz).
class AbsorptionSpectrum {
 public:
  AbsorptionSpectrum(std::vector<double> grid_hz, std::vector<double> alpha,
                     SpectrumProvenance provenance);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> alpha() const { return alpha_; }
  SpectrumProvenance provenance() const { return provenance_; }
  std::size_t size() const { return grid_.size(); }
  bool covers(Frequency f) const;

 private:
  std::vector<double> grid_;
  std::vector<double> alpha_;
  SpectrumProvenance provenance_;
};

/// alpha_l + alpha_c on every grid point. Evaluation is spread over
/// `threads` workers (0 = hardware concurrency); output does not depend on it.
AbsorptionSpectrum total_absorption_spectrum(
    std::span<const double> grid_hz, std::span<const SpectralLine> lines,
    const MoistAir& air, const ContinuumCoefficients& coeffs = {},
    const LineModelOptions& opts = {}, unsigned threads = 0);

/// Uniform grid start, start + step, ... up to and including stop (within
/// half a step).
std::vector<double> uniform_grid(double start_hz, double stop_hz,
                                 double step_hz);

/// Linear interpolation inside the grid; RangeError outside it.
double absorption_at(const AbsorptionSpectrum& spectrum, Frequency f);

/// CSV with header `frequency_hz,alpha_per_m`.
AbsorptionSpectrum load_spectrum_table(std::istream& in);
AbsorptionSpectrum load_spectrum_file(const std::string& path);
void save_spectrum_table(const AbsorptionSpectrum& spectrum, std::ostream& out);

}  // namespace ofdmqkd
