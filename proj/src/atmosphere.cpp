#include "ofdmqkd/atmosphere.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/parallel.hpp"
#include "ofdmqkd/text.hpp"

namespace ofdmqkd {

namespace {

// Second radiation constant hc/k in cm K.
constexpr double kSecondRadiation = kPlanck * kSpeedOfLight * 100.0 / kBoltzmann;

// 1-based inclusive HITRAN column ranges.
struct Columns {
  int first;
  int last;
  const char* name;
};
constexpr Columns kMolecule{1, 2, "molecule id"};
constexpr Columns kIsotopologue{3, 3, "isotopologue id"};
constexpr Columns kWavenumber{4, 15, "line position"};
constexpr Columns kIntensity{16, 25, "intensity"};
constexpr Columns kAirWidth{36, 40, "air-broadened half-width"};
constexpr Columns kSelfWidth{41, 45, "self-broadened half-width"};
constexpr Columns kLowerEnergy{46, 55, "lower-state energy"};
constexpr Columns kTempExponent{56, 59, "temperature exponent"};
constexpr Columns kPressureShift{60, 67, "pressure shift"};

[[noreturn]] void record_error(std::size_t record, const Columns& cols,
                               const std::string& what) {
  throw ParseError("HITRAN record " + std::to_string(record) + ", columns " +
                   std::to_string(cols.first) + "-" + std::to_string(cols.last) +
                   " (" + cols.name + "): " + what);
}

std::string_view field(std::string_view line, const Columns& cols) {
  return line.substr(cols.first - 1, cols.last - cols.first + 1);
}

double number(std::string_view line, std::size_t record, const Columns& cols) {
  const auto text = field(line, cols);
  const auto value = parse_double(text);
  if (!value) record_error(record, cols, "not a number: '" + std::string(text) + "'");
  return *value;
}

int integer(std::string_view line, std::size_t record, const Columns& cols) {
  const auto text = field(line, cols);
  const auto value = parse_integer(text);
  if (!value) record_error(record, cols, "not an integer: '" + std::string(text) + "'");
  return static_cast<int>(*value);
}

double torr_to_atm(double torr) { return torr / kStandardPressureTorr; }

}  // namespace

std::vector<SpectralLine> parse_hitran_records(std::istream& in) {
  std::vector<SpectralLine> lines;
  std::string raw;
  std::size_t record = 0;
  while (std::getline(in, raw)) {
    ++record;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (line.size() < static_cast<std::size_t>(kPressureShift.last)) {
      throw ParseError("HITRAN record " + std::to_string(record) + ": only " +
                       std::to_string(line.size()) + " columns, need at least " +
                       std::to_string(kPressureShift.last));
    }
    SpectralLine l;
    l.molecule_id = integer(line, record, kMolecule);
    if (l.molecule_id != kWaterMoleculeId) continue;
    // Isotopologues past 9 use letters (A = 10, ...); H2O only needs digits
    // but keep letters legal.
    const char iso = line[kIsotopologue.first - 1];
    if (iso >= '0' && iso <= '9') {
      l.isotopologue_id = iso == '0' ? 10 : iso - '0';
    } else if (iso >= 'A' && iso <= 'Z') {
      l.isotopologue_id = 11 + (iso - 'A');
    } else {
      record_error(record, kIsotopologue, "invalid code");
    }
    l.center = number(line, record, kWavenumber);
    l.intensity = number(line, record, kIntensity);
    l.air_halfwidth = number(line, record, kAirWidth);
    l.self_halfwidth = number(line, record, kSelfWidth);
    l.lower_state_energy = number(line, record, kLowerEnergy);
    l.temp_exponent = number(line, record, kTempExponent);
    l.pressure_shift = number(line, record, kPressureShift);
    if (!(l.center > 0.0)) record_error(record, kWavenumber, "must be > 0");
    if (!(l.intensity >= 0.0)) record_error(record, kIntensity, "must be >= 0");
    if (!(l.air_halfwidth > 0.0)) record_error(record, kAirWidth, "must be > 0");
    lines.push_back(l);
  }
  return lines;
}

std::vector<SpectralLine> parse_hitran_records(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_hitran_records(in);
}

std::vector<SpectralLine> load_hitran_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open line list '" + path + "'");
  return parse_hitran_records(in);
}

void MoistAir::validate() const {
  if (!(water_pressure >= 0.0) || !(air_pressure >= 0.0)) {
    throw DomainError("moist air: partial pressures must be >= 0 Torr");
  }
  if (!(water_pressure + air_pressure > 0.0)) {
    throw DomainError("moist air: total pressure must be > 0");
  }
  if (!(temperature > 0.0)) {
    throw DomainError("moist air: temperature must be > 0 K");
  }
}

double rh_to_water_pressure(double rh_percent, double kelvin) {
  if (!(rh_percent >= 0.0 && rh_percent <= 100.0)) {
    throw RangeError("relative humidity must lie in [0, 100] %, got " +
                     format_double(rh_percent));
  }
  if (!(kelvin > 0.0)) throw DomainError("temperature must be > 0 K");
  // Buck (1996), saturation over water, hPa.
  const double t = kelvin - 273.15;
  const double saturation_hpa =
      6.1121 * std::exp((18.678 - t / 234.5) * (t / (257.14 + t)));
  const double saturation_torr = saturation_hpa * 100.0 / kPascalPerTorr;
  return rh_percent / 100.0 * saturation_torr;
}

MoistAir humid_air(double rh_percent, double kelvin, double total_torr) {
  const double water = rh_to_water_pressure(rh_percent, kelvin);
  if (!(total_torr >= water)) {
    throw DomainError("total pressure below the water partial pressure");
  }
  MoistAir air{water, total_torr - water, kelvin};
  air.validate();
  return air;
}

double line_profile(LineProfile profile, double nu, double nu0, double gamma) {
  const double g2 = gamma * gamma;
  const double below = gamma / ((nu - nu0) * (nu - nu0) + g2);
  switch (profile) {
    case LineProfile::lorentz:
      return below / std::numbers::pi;
    case LineProfile::van_vleck_weisskopf: {
      const double above = gamma / ((nu + nu0) * (nu + nu0) + g2);
      const double ratio = nu / nu0;
      return ratio * ratio * (below + above) / std::numbers::pi;
    }
  }
  return 0.0;
}

namespace {

// Water number density in molecules/cm^3.
double water_density(const MoistAir& air) {
  return air.water_pressure * kPascalPerTorr / (kBoltzmann * air.temperature) * 1e-6;
}

double line_contribution(const SpectralLine& line, double nu, double density,
                         const MoistAir& air, const LineModelOptions& opts) {
  if (std::abs(nu - line.center) > opts.wing_cutoff) return 0.0;
  const double t = air.temperature;
  const double t_ref = kHitranReferenceTemperature;
  const double c2 = kSecondRadiation;
  // Rotational partition function of an asymmetric top scales as T^1.5.
  const double strength =
      line.intensity * std::pow(t_ref / t, 1.5) *
      std::exp(-c2 * line.lower_state_energy * (1.0 / t - 1.0 / t_ref)) *
      (-std::expm1(-c2 * line.center / t)) / (-std::expm1(-c2 * line.center / t_ref));
  const double gamma = (line.air_halfwidth * torr_to_atm(air.air_pressure) +
                        line.self_halfwidth * torr_to_atm(air.water_pressure)) *
                       std::pow(t_ref / t, line.temp_exponent);
  return density * strength * line_profile(opts.profile, nu, line.center, gamma);
}

}  // namespace

double line_absorption(Frequency f, std::span<const SpectralLine> lines,
                       const MoistAir& air, const LineModelOptions& opts) {
  air.validate();
  const double density = water_density(air);
  if (density == 0.0) return 0.0;
  const double nu = f.wavenumber();
  double per_cm = 0.0;
  for (const SpectralLine& line : lines) {
    per_cm += line_contribution(line, nu, density, air, opts);
  }
  return per_cm * 100.0;
}

double continuum_absorption(Frequency f, const MoistAir& air,
                            const ContinuumCoefficients& coeffs) {
  air.validate();
  const double f_thz = f.thz();
  return (coeffs.self * air.water_pressure + coeffs.foreign * air.air_pressure) *
         air.water_pressure * f_thz * f_thz;
}

AbsorptionSpectrum::AbsorptionSpectrum(std::vector<double> grid_hz,
                                       std::vector<double> alpha,
                                       SpectrumProvenance provenance)
    : grid_(std::move(grid_hz)), alpha_(std::move(alpha)), provenance_(provenance) {
  if (grid_.size() != alpha_.size()) {
    throw DomainError("spectrum: grid and alpha lengths differ");
  }
  if (grid_.empty()) throw DomainError("spectrum: empty grid");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!(grid_[i] > 0.0) || !std::isfinite(grid_[i])) {
      throw DomainError("spectrum: grid point " + std::to_string(i) + " not positive");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw DomainError("spectrum: grid not strictly ascending at index " +
                        std::to_string(i));
    }
    if (!(alpha_[i] >= 0.0) || !std::isfinite(alpha_[i])) {
      throw DomainError("spectrum: negative or non-finite alpha at index " +
                        std::to_string(i));
    }
  }
}

bool AbsorptionSpectrum::covers(Frequency f) const {
  return f.hz() >= grid_.front() && f.hz() <= grid_.back();
}

std::vector<double> uniform_grid(double start_hz, double stop_hz, double step_hz) {
  if (!(start_hz > 0.0) || !(stop_hz >= start_hz) || !(step_hz > 0.0)) {
    throw DomainError("grid: need 0 < start <= stop and step > 0");
  }
  const auto count =
      static_cast<std::size_t>(std::floor((stop_hz - start_hz) / step_hz + 0.5)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start_hz + i * step_hz;
  return grid;
}

AbsorptionSpectrum total_absorption_spectrum(
    std::span<const double> grid_hz, std::span<const SpectralLine> lines,
    const MoistAir& air, const ContinuumCoefficients& coeffs,
    const LineModelOptions& opts, unsigned threads) {
  air.validate();
  if (grid_hz.empty()) throw DomainError("spectrum: empty grid");
  const double nu_lo = Frequency::hertz(grid_hz.front()).wavenumber() - opts.band_margin;
  const double nu_hi = Frequency::hertz(grid_hz.back()).wavenumber() + opts.band_margin;
  std::vector<SpectralLine> active;
  for (const SpectralLine& line : lines) {
    if (line.center >= nu_lo && line.center <= nu_hi) active.push_back(line);
  }
  std::vector<double> alpha(grid_hz.size());
  parallel_for(grid_hz.size(), threads, [&](std::size_t i) {
    const Frequency f = Frequency::hertz(grid_hz[i]);
    alpha[i] = line_absorption(f, active, air, opts) +
               continuum_absorption(f, air, coeffs);
  });
  return AbsorptionSpectrum({grid_hz.begin(), grid_hz.end()}, std::move(alpha),
                            SpectrumProvenance::computed);
}

double absorption_at(const AbsorptionSpectrum& spectrum, Frequency f) {
  const auto grid = spectrum.grid();
  const auto alpha = spectrum.alpha();
  const double x = f.hz();
  if (x < grid.front() || x > grid.back()) {
    throw RangeError("frequency " + format_double(x) + " Hz outside spectrum [" +
                     format_double(grid.front()) + ", " +
                     format_double(grid.back()) + "] Hz");
  }
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  const auto i = static_cast<std::size_t>(it - grid.begin());
  if (*it == x) return alpha[i];
  const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return alpha[i - 1] + t * (alpha[i] - alpha[i - 1]);
}

namespace {
constexpr std::string_view kSpectrumHeader = "frequency_hz,alpha_per_m";
}

AbsorptionSpectrum load_spectrum_table(std::istream& in) {
  std::string raw;
  std::size_t row = 1;
  if (!std::getline(in, raw) || trim(raw) != kSpectrumHeader) {
    throw ParseError("spectrum table row 1: expected header '" +
                     std::string(kSpectrumHeader) + "'");
  }
  std::vector<double> grid;
  std::vector<double> alpha;
  while (std::getline(in, raw)) {
    ++row;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("spectrum table row " + std::to_string(row) +
                       ": expected two comma-separated columns");
    }
    const auto f = parse_double(line.substr(0, comma));
    const auto a = parse_double(line.substr(comma + 1));
    if (!f || !a) {
      throw ParseError("spectrum table row " + std::to_string(row) +
                       ": non-numeric value");
    }
    if (!grid.empty() && !(*f > grid.back())) {
      throw ParseError("spectrum table row " + std::to_string(row) +
                       ": frequencies must be strictly ascending");
    }
    if (!(*f > 0.0) || !(*a >= 0.0)) {
      throw ParseError("spectrum table row " + std::to_string(row) +
                       ": need frequency > 0 and alpha >= 0");
    }
    grid.push_back(*f);
    alpha.push_back(*a);
  }
  if (grid.empty()) throw ParseError("spectrum table has no data rows");
  return AbsorptionSpectrum(std::move(grid), std::move(alpha),
                            SpectrumProvenance::loaded);
}

AbsorptionSpectrum load_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spectrum table '" + path + "'");
  return load_spectrum_table(in);
}

void save_spectrum_table(const AbsorptionSpectrum& spectrum, std::ostream& out) {
  out << kSpectrumHeader << '\n';
  const auto grid = spectrum.grid();
  const auto alpha = spectrum.alpha();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid[i]) << ',' << format_double(alpha[i]) << '\n';
  }
  if (!out) throw IoError("failed writing spectrum table");
}

}  // namespace ofdmqkd
