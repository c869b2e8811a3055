#include "ofdmqkd/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/parallel.hpp"
#include "ofdmqkd/text.hpp"

namespace ofdmqkd {

void SweepSpec::validate() const {
  if (!(start_m >= 0.0) || !std::isfinite(start_m)) throw DomainError("sweep: start must be >= 0");
  if (!(stop_m > start_m) || !std::isfinite(stop_m)) throw DomainError("sweep: stop must exceed start");
  if (points < 2) throw DomainError("sweep: need at least 2 points");
  if (spacing == SweepSpacing::log && !(start_m > 0.0)) {
    throw DomainError("sweep: log spacing needs start > 0");
  }
}

std::vector<double> SweepSpec::distances() const {
  validate();
  std::vector<double> d(points);
  const double last = points - 1;
  if (spacing == SweepSpacing::linear) {
    for (int i = 0; i < points; ++i) d[i] = start_m + (stop_m - start_m) * (i / last);
  } else {
    const double lo = std::log10(start_m);
    const double hi = std::log10(stop_m);
    for (int i = 0; i < points; ++i) d[i] = std::pow(10.0, lo + (hi - lo) * (i / last));
  }
  d.front() = start_m;
  d.back() = stop_m;
  return d;
}

void AtmosphereConfig::validate() const {
  if (water_pressure_torr.has_value() == relative_humidity_pct.has_value()) {
    throw DomainError("atmosphere: give exactly one of water pressure and relative humidity");
  }
  if (!(band_start_hz > 0.0) || !(band_stop_hz >= band_start_hz) || !(band_step_hz > 0.0)) {
    throw DomainError("atmosphere: invalid band");
  }
  moist_air();
}

MoistAir AtmosphereConfig::moist_air() const {
  if (relative_humidity_pct) {
    return humid_air(*relative_humidity_pct, temperature_k, total_pressure_torr);
  }
  const double water = water_pressure_torr.value_or(0.0);
  if (!(water <= total_pressure_torr)) {
    throw DomainError("atmosphere: water pressure exceeds total pressure");
  }
  MoistAir air{water, total_pressure_torr - water, temperature_k};
  air.validate();
  return air;
}

void ChannelConfig::validate() const {
  switch (type) {
    case ChannelKind::open_air:
      if (spectrum_file.has_value() == atmosphere.has_value()) {
        throw DomainError("open_air channel needs exactly one of spectrum_file and atmosphere");
      }
      if (atmosphere) atmosphere->validate();
      break;
    case ChannelKind::diffraction:
      validate_channel(DiffractionChannel{beam_waist_m.value_or(0.0), aperture_m.value_or(0.0)});
      break;
    case ChannelKind::fixed:
      validate_channel(FixedChannel{transmissivity.value_or(0.0)});
      break;
  }
}

KeyRateOptions ModelOptions::key_rate_options() const {
  KeyRateOptions opts;
  opts.noise_policy = channel_noise;
  opts.fixed_w = fixed_w;
  opts.channel.reference = thermal_reference;
  return opts;
}

void Scenario::validate() const {
  if (name.empty()) throw DomainError("scenario: name must not be empty");
  plan.validate();
  modulator.validate();
  channel.validate();
  (void)ThermalEnvironment(temperature_k);
  detection.validate();
  sweep.validate();
  if (!(skr_floor > 0.0)) throw DomainError("scenario: skr_floor must be > 0");
  if (!(model.fixed_w >= 1.0)) throw DomainError("scenario: fixed W must be >= 1");
}

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + what + " '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path resolve_path(const std::filesystem::path& base,
                                   const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = kDigits[v & 0xf];
  return out;
}

}  // namespace

SpectrumCache::SpectrumCache(std::optional<std::filesystem::path> directory,
                             unsigned threads)
    : directory_(std::move(directory)), threads_(threads) {}

std::uint64_t SpectrumCache::key(const AtmosphereConfig& atm,
                                 std::string_view line_data) {
  std::ostringstream canon;
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : "-"; };
  canon << "atmosphere-v1|pw=" << opt(atm.water_pressure_torr)
        << "|rh=" << opt(atm.relative_humidity_pct)
        << "|t=" << format_double(atm.temperature_k)
        << "|p=" << format_double(atm.total_pressure_torr)
        << "|cs=" << format_double(atm.continuum.self)
        << "|cf=" << format_double(atm.continuum.foreign)
        << "|profile=" << static_cast<int>(atm.profile)
        << "|band=" << format_double(atm.band_start_hz) << ','
        << format_double(atm.band_stop_hz) << ',' << format_double(atm.band_step_hz)
        << "|lines=" << line_data;
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : canon.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::shared_ptr<const AbsorptionSpectrum> SpectrumCache::generate(
    const AtmosphereConfig& atm, const std::filesystem::path& base_dir) {
  atm.validate();
  std::string custom_lines;
  if (atm.lines_file) custom_lines = read_file(resolve_path(base_dir, *atm.lines_file), "line list");
  const std::string_view line_data = atm.lines_file ? custom_lines : default_water_line_data();
  const std::string id = "spectrum_" + hex64(key(atm, line_data));

  std::lock_guard lock(mutex_);
  if (auto it = entries_.find(id); it != entries_.end()) return it->second;

  std::shared_ptr<const AbsorptionSpectrum> spectrum;
  const auto file = directory_ ? std::optional(*directory_ / (id + ".csv")) : std::nullopt;
  if (file && std::filesystem::exists(*file)) {
    spectrum = std::make_shared<const AbsorptionSpectrum>(load_spectrum_file(file->string()));
  } else {
    const auto lines = atm.lines_file ? parse_hitran_records(line_data) : default_water_lines();
    const auto grid = uniform_grid(atm.band_start_hz, atm.band_stop_hz, atm.band_step_hz);
    spectrum = std::make_shared<const AbsorptionSpectrum>(total_absorption_spectrum(
        grid, lines, atm.moist_air(), atm.continuum, LineModelOptions{atm.profile}, threads_));
    if (file) {
      std::filesystem::create_directories(*directory_);
      const auto partial = std::filesystem::path(file->string() + ".partial");
      {
        std::ofstream out(partial, std::ios::binary);
        if (!out) throw IoError("cannot write spectrum cache '" + partial.string() + "'");
        save_spectrum_table(*spectrum, out);
      }
      std::filesystem::rename(partial, *file);
    }
  }
  entries_.emplace(id, spectrum);
  return spectrum;
}

std::shared_ptr<const AbsorptionSpectrum> SpectrumCache::load(
    const std::filesystem::path& path) {
  const std::string id = "file:" + std::filesystem::absolute(path).lexically_normal().string();
  std::lock_guard lock(mutex_);
  if (auto it = entries_.find(id); it != entries_.end()) return it->second;
  auto spectrum = std::make_shared<const AbsorptionSpectrum>(load_spectrum_file(path.string()));
  entries_.emplace(id, spectrum);
  return spectrum;
}

ChannelSpec resolve_channel(const Scenario& s, SpectrumCache& cache,
                            const std::filesystem::path& base_dir) {
  s.channel.validate();
  switch (s.channel.type) {
    case ChannelKind::open_air:
      if (s.channel.spectrum_file) {
        return OpenAirChannel{cache.load(resolve_path(base_dir, *s.channel.spectrum_file))};
      }
      return OpenAirChannel{cache.generate(*s.channel.atmosphere, base_dir)};
    case ChannelKind::diffraction:
      return DiffractionChannel{*s.channel.beam_waist_m, *s.channel.aperture_m};
    case ChannelKind::fixed:
      return FixedChannel{*s.channel.transmissivity};
  }
  throw DomainError("unknown channel type");
}

namespace {

[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const PhysicalityError& e) {
    throw PhysicalityError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  }
}

}  // namespace

std::optional<double> max_secure_distance(const std::vector<SweepRow>& rows,
                                          double floor) {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->r_ofdm >= floor) return it->distance_m;
  }
  return std::nullopt;
}

SweepResult run_sweep(const Scenario& s, const ChannelSpec& channel,
                      unsigned threads) {
  s.validate();
  validate_channel(channel);
  const std::vector<double> distances = s.sweep.distances();
  const ThermalEnvironment env(s.temperature_k);
  const KeyRateOptions opts = s.model.key_rate_options();

  SweepResult result;
  result.name = s.name;
  result.rows.resize(distances.size());
  parallel_for(distances.size(), threads, [&](std::size_t i) {
    try {
      const KeyRateBreakdown b = ofdm_key_rate(s.plan, s.modulator, channel, env, s.detection,
                                               distances[i], s.noise_mode, opts);
      SweepRow& row = result.rows[i];
      row.distance_m = distances[i];
      row.r_ofdm = b.r_ofdm;
      row.r_k.reserve(b.per_subcarrier.size());
      for (const SubcarrierKeyRate& k : b.per_subcarrier) row.r_k.push_back(k.r_k);
    } catch (const Error&) {
      rethrow_with_context("scenario '" + s.name + "' at d = " + format_double(distances[i]) +
                           " m");
    }
  });
  result.max_secure_distance_m = max_secure_distance(result.rows, s.skr_floor);
  return result;
}

SweepResult run_sweep(const Scenario& s, SpectrumCache& cache, unsigned threads,
                      const std::filesystem::path& base_dir) {
  ChannelSpec channel;
  try {
    channel = resolve_channel(s, cache, base_dir);
  } catch (const Error&) {
    rethrow_with_context("scenario '" + s.name + "'");
  }
  return run_sweep(s, channel, threads);
}

void emit_csv(const SweepResult& result, std::ostream& out, bool wide) {
  const std::size_t n = result.rows.empty() ? 0 : result.rows.front().r_k.size();
  out << "distance_m,r_ofdm_bits";
  if (wide) {
    for (std::size_t k = 1; k <= n; ++k) out << ",r_k_" << k;
  }
  out << '\n';
  for (const SweepRow& row : result.rows) {
    out << format_double(row.distance_m) << ',' << format_double(row.r_ofdm);
    if (wide) {
      for (const double r : row.r_k) out << ',' << format_double(r);
    }
    out << '\n';
  }
  out << "# max_secure_distance_m="
      << (result.max_secure_distance_m ? format_double(*result.max_secure_distance_m) : "none")
      << '\n';
  if (!out) throw IoError("failed writing CSV for '" + result.name + "'");
}

void emit_modnoise_csv(const CarrierPlan& plan, const ModulatorParams& p,
                       std::ostream& out) {
  plan.validate();
  p.validate();
  out << "N,k,eps_mod_snu\n";
  for (int k = 1; k <= plan.subcarriers; ++k) {
    out << plan.subcarriers << ',' << k << ',' << format_double(modulation_noise(plan, p, k))
        << '\n';
  }
  const WorstModulationNoise worst = worst_modulation_noise(plan, p);
  out << "\nN,k_worst,eps_worst_snu\n"
      << plan.subcarriers << ',' << worst.k << ',' << format_double(worst.value) << '\n';
  if (!out) throw IoError("failed writing modulation-noise CSV");
}

}  // namespace ofdmqkd
