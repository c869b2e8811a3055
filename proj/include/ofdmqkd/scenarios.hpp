#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmqkd/atmosphere.hpp"
#include "ofdmqkd/channel.hpp"
#include "ofdmqkd/modnoise.hpp"
#include "ofdmqkd/skr.hpp"

namespace ofdmqkd {

enum class SweepSpacing { linear, log };

struct SweepSpec {
  double start_m = 0.0;
  double stop_m = 1.0;
  int points = 500;
  SweepSpacing spacing = SweepSpacing::linear;

  void validate() const;
  /// Ascending distances; both end points are included exactly.
  std::vector<double> distances() const;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Humid-air description from which an open-air spectrum is generated.
/// Exactly one of water_pressure_torr and relative_humidity_pct is set.
struct AtmosphereConfig {
  std::optional<double> water_pressure_torr;
  std::optional<double> relative_humidity_pct;
  double temperature_k = kRoomTemperature;
  double total_pressure_torr = kStandardPressureTorr;
  std::optional<std::string> lines_file;  // bundled list when absent
  ContinuumCoefficients continuum;
  LineProfile profile = LineProfile::van_vleck_weisskopf;
  double band_start_hz = 300e9;
  double band_stop_hz = 2.1e12;
  double band_step_hz = 1e9;

  void validate() const;
  MoistAir moist_air() const;
  friend bool operator==(const AtmosphereConfig&, const AtmosphereConfig&) = default;
};

enum class ChannelKind { open_air, diffraction, fixed };

struct ChannelConfig {
  ChannelKind type = ChannelKind::fixed;
  std::optional<std::string> spectrum_file;   // open_air
  std::optional<AtmosphereConfig> atmosphere;  // open_air
  std::optional<double> beam_waist_m;          // diffraction
  std::optional<double> aperture_m;            // diffraction
  std::optional<double> transmissivity;        // fixed

  void validate() const;
  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

struct ModelOptions {
  ThermalNoisePolicy channel_noise = ThermalNoisePolicy::vacuum;
  double fixed_w = 1.0;
  ThermalReference thermal_reference = ThermalReference::per_subcarrier;

  KeyRateOptions key_rate_options() const;
  friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

struct Scenario {
  std::string name;
  CarrierPlan plan;
  ModulatorParams modulator;
  ChannelConfig channel;
  double temperature_k = 0.0;
  DetectionParams detection;
  SweepSpec sweep;
  NoiseMode noise_mode = NoiseMode::worst_case;
  double skr_floor = 1e-5;
  ModelOptions model;

  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Strict JSON: unknown fields are rejected and every error names the JSON
/// path of the offending value, e.g. `$.sweep.points`.
Scenario parse_scenario(std::istream& in);
Scenario parse_scenario(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& s);

/// Spectra keyed by a hash of the atmosphere parameters and line data. With a
/// directory, spectra are also persisted there as CSV and reloaded on later
/// runs. Safe for concurrent use; each entry is written once.
class SpectrumCache {
 public:
  explicit SpectrumCache(std::optional<std::filesystem::path> directory = {},
                         unsigned threads = 0);

  std::shared_ptr<const AbsorptionSpectrum> generate(const AtmosphereConfig& atm,
                                                     const std::filesystem::path& base_dir = {});
  std::shared_ptr<const AbsorptionSpectrum> load(const std::filesystem::path& path);

  /// 64-bit FNV-1a over a canonical description of the inputs.
  static std::uint64_t key(const AtmosphereConfig& atm, std::string_view line_data);

 private:
  std::optional<std::filesystem::path> directory_;
  unsigned threads_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const AbsorptionSpectrum>> entries_;
};

/// Relative file paths in the scenario resolve against base_dir.
ChannelSpec resolve_channel(const Scenario& s, SpectrumCache& cache,
                            const std::filesystem::path& base_dir = {});

struct SweepRow {
  double distance_m = 0.0;
  double r_ofdm = 0.0;
  std::vector<double> r_k;  // unclamped, k = 1..N
};

struct SweepResult {
  std::string name;
  std::vector<SweepRow> rows;
  /// Last swept distance with r_ofdm >= skr_floor.
  std::optional<double> max_secure_distance_m;
};

SweepResult run_sweep(const Scenario& s, const ChannelSpec& channel,
                      unsigned threads = 0);
SweepResult run_sweep(const Scenario& s, SpectrumCache& cache,
                      unsigned threads = 0,
                      const std::filesystem::path& base_dir = {});

/// Largest swept distance with r_ofdm >= floor.
std::optional<double> max_secure_distance(const std::vector<SweepRow>& rows,
                                          double floor);

void emit_csv(const SweepResult& result, std::ostream& out, bool wide = false);

/// eps_mod for every subcarrier followed by the worst-case summary.
void emit_modnoise_csv(const CarrierPlan& plan, const ModulatorParams& p,
                       std::ostream& out);

enum class PresetKind { key_rate, modulation_noise };

struct Preset {
  std::string name;
  PresetKind kind = PresetKind::key_rate;
  std::string description;
  std::vector<Scenario> curves;
};

const std::vector<Preset>& builtin_presets();
/// RangeError listing the known names when `name` is unknown.
const Preset& find_preset(std::string_view name);

}  // namespace ofdmqkd
