#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/scenarios.hpp"

namespace ofdmqkd {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) fail(path, what);
}

// Reads one JSON object; finish() rejects any member that was not consumed.
class ObjectReader {
 public:
  ObjectReader(const Json& node, std::string path)
      : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  const std::string& where() const { return path_; }
  std::string path(const char* key) const { return path_ + "." + key; }
  bool has(const char* key) const { return node_.contains(key); }

  const Json& get(const char* key) {
    seen_.insert(key);
    if (!node_.contains(key)) fail(path(key), "missing required field");
    return node_.at(key);
  }

  double number(const char* key) {
    const Json& v = get(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path(key), "must be finite");
    return d;
  }

  std::optional<double> optional_number(const char* key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  double number_or(const char* key, double fallback) {
    return optional_number(key).value_or(fallback);
  }

  long long integer(const char* key) {
    const Json& v = get(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    return v.get<long long>();
  }

  std::string string(const char* key) {
    const Json& v = get(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_string(const char* key) {
    if (!has(key)) return std::nullopt;
    return string(key);
  }

  ObjectReader object(const char* key) { return ObjectReader(get(key), path(key)); }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.contains(item.key())) fail(path_ + "." + item.key(), "unknown field");
    }
  }

 private:
  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<SweepSpacing> kSpacings[] = {
    {SweepSpacing::linear, "linear"}, {SweepSpacing::log, "log"}};
constexpr EnumName<NoiseMode> kNoiseModes[] = {
    {NoiseMode::worst_case, "worst_case"}, {NoiseMode::per_k, "per_k"}, {NoiseMode::none, "none"}};
constexpr EnumName<ChannelKind> kChannelKinds[] = {
    {ChannelKind::open_air, "open_air"},
    {ChannelKind::diffraction, "diffraction"},
    {ChannelKind::fixed, "fixed"}};
constexpr EnumName<LineProfile> kProfiles[] = {
    {LineProfile::van_vleck_weisskopf, "van_vleck_weisskopf"}, {LineProfile::lorentz, "lorentz"}};
constexpr EnumName<ThermalNoisePolicy> kNoisePolicies[] = {
    {ThermalNoisePolicy::vacuum, "vacuum"},
    {ThermalNoisePolicy::ambient, "ambient"},
    {ThermalNoisePolicy::fixed, "fixed"}};
constexpr EnumName<ThermalReference> kReferences[] = {
    {ThermalReference::per_subcarrier, "per_subcarrier"},
    {ThermalReference::band_centre, "band_centre"}};

template <typename Enum, std::size_t N>
Enum parse_enum(const EnumName<Enum> (&table)[N], const std::string& text,
                const std::string& path) {
  std::string options;
  for (const auto& entry : table) {
    if (text == entry.name) return entry.value;
    options += options.empty() ? "" : ", ";
    options += entry.name;
  }
  fail(path, "unknown value '" + text + "' (expected one of: " + options + ")");
}

template <typename Enum, std::size_t N>
const char* enum_name(const EnumName<Enum> (&table)[N], Enum value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "";
}

void check_probability(double v, const std::string& path) {
  require(v > 0.0 && v <= 1.0, path, "must lie in (0, 1]");
}

AtmosphereConfig read_atmosphere(ObjectReader r) {
  AtmosphereConfig a;
  a.water_pressure_torr = r.optional_number("water_pressure_torr");
  a.relative_humidity_pct = r.optional_number("relative_humidity_pct");
  require(a.water_pressure_torr.has_value() != a.relative_humidity_pct.has_value(),
          r.path("water_pressure_torr"),
          "give exactly one of water_pressure_torr and relative_humidity_pct");
  if (a.water_pressure_torr) {
    require(*a.water_pressure_torr >= 0.0, r.path("water_pressure_torr"), "must be >= 0");
  }
  if (a.relative_humidity_pct) {
    require(*a.relative_humidity_pct >= 0.0 && *a.relative_humidity_pct <= 100.0,
            r.path("relative_humidity_pct"), "must lie in [0, 100]");
  }
  a.temperature_k = r.number_or("temperature_k", a.temperature_k);
  require(a.temperature_k > 0.0, r.path("temperature_k"), "must be > 0");
  a.total_pressure_torr = r.number_or("total_pressure_torr", a.total_pressure_torr);
  require(a.total_pressure_torr > 0.0, r.path("total_pressure_torr"), "must be > 0");
  a.lines_file = r.optional_string("lines_file");
  if (r.has("continuum")) {
    ObjectReader c = r.object("continuum");
    a.continuum.self = c.number_or("self", a.continuum.self);
    a.continuum.foreign = c.number_or("foreign", a.continuum.foreign);
    require(a.continuum.self >= 0.0, c.path("self"), "must be >= 0");
    require(a.continuum.foreign >= 0.0, c.path("foreign"), "must be >= 0");
    c.finish();
  }
  if (r.has("profile")) {
    a.profile = parse_enum(kProfiles, r.string("profile"), r.path("profile"));
  }
  if (r.has("band")) {
    ObjectReader b = r.object("band");
    a.band_start_hz = b.number("start_hz");
    a.band_stop_hz = b.number("stop_hz");
    a.band_step_hz = b.number("step_hz");
    require(a.band_start_hz > 0.0, b.path("start_hz"), "must be > 0");
    require(a.band_stop_hz >= a.band_start_hz, b.path("stop_hz"), "must be >= start_hz");
    require(a.band_step_hz > 0.0, b.path("step_hz"), "must be > 0");
    b.finish();
  }
  r.finish();
  try {
    a.validate();
  } catch (const ValidationError& e) {
    fail(r.where(), e.what());
  }
  return a;
}

ChannelConfig read_channel(ObjectReader r) {
  ChannelConfig c;
  c.type = parse_enum(kChannelKinds, r.string("type"), r.path("type"));
  c.spectrum_file = r.optional_string("spectrum_file");
  if (r.has("atmosphere")) c.atmosphere = read_atmosphere(r.object("atmosphere"));
  c.beam_waist_m = r.optional_number("beam_waist_m");
  c.aperture_m = r.optional_number("aperture_m");
  c.transmissivity = r.optional_number("transmissivity");
  r.finish();

  auto forbid = [&](bool present, const char* key) {
    require(!present, r.path(key), std::string("not allowed for channel type '") +
                                       enum_name(kChannelKinds, c.type) + "'");
  };
  switch (c.type) {
    case ChannelKind::open_air:
      require(c.spectrum_file.has_value() != c.atmosphere.has_value(), r.path("spectrum_file"),
              "open_air needs exactly one of spectrum_file and atmosphere");
      forbid(c.beam_waist_m.has_value(), "beam_waist_m");
      forbid(c.aperture_m.has_value(), "aperture_m");
      forbid(c.transmissivity.has_value(), "transmissivity");
      break;
    case ChannelKind::diffraction:
      require(c.beam_waist_m.has_value(), r.path("beam_waist_m"), "missing required field");
      require(c.aperture_m.has_value(), r.path("aperture_m"), "missing required field");
      require(*c.beam_waist_m > 0.0, r.path("beam_waist_m"), "must be > 0");
      require(*c.aperture_m > 0.0, r.path("aperture_m"), "must be > 0");
      forbid(c.spectrum_file.has_value(), "spectrum_file");
      forbid(c.atmosphere.has_value(), "atmosphere");
      forbid(c.transmissivity.has_value(), "transmissivity");
      break;
    case ChannelKind::fixed:
      require(c.transmissivity.has_value(), r.path("transmissivity"), "missing required field");
      check_probability(*c.transmissivity, r.path("transmissivity"));
      forbid(c.spectrum_file.has_value(), "spectrum_file");
      forbid(c.atmosphere.has_value(), "atmosphere");
      forbid(c.beam_waist_m.has_value(), "beam_waist_m");
      forbid(c.aperture_m.has_value(), "aperture_m");
      break;
  }
  return c;
}

Scenario read_scenario(const Json& doc) {
  ObjectReader root(doc, "$");
  Scenario s;
  s.name = root.string("name");
  require(!s.name.empty(), root.path("name"), "must not be empty");
  for (char ch : s.name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
                    ch == '-' || ch == '.';
    require(ok, root.path("name"), "may contain only letters, digits, '_', '-' and '.'");
  }

  {
    ObjectReader r = root.object("plan");
    s.plan.base_hz = r.number("f_i_hz");
    s.plan.spacing_hz = r.number("delta_f_hz");
    const long long n = r.integer("n");
    require(s.plan.base_hz > 0.0, r.path("f_i_hz"), "must be > 0");
    require(s.plan.spacing_hz > 0.0, r.path("delta_f_hz"), "must be > 0");
    require(n >= 1 && n <= 100000, r.path("n"), "must lie in [1, 100000]");
    s.plan.subcarriers = static_cast<int>(n);
    r.finish();
  }
  {
    ObjectReader r = root.object("modulator");
    ModulatorParams& m = s.modulator;
    m.mu = r.number("mu");
    m.a_sig = r.number_or("a_sig", m.a_sig);
    m.kappa = r.number("kappa");
    m.theta = r.number("theta_rad");
    m.v_mod = r.number("v_mod");
    require(m.mu > 0.0, r.path("mu"), "must be > 0");
    require(m.a_sig > 0.0, r.path("a_sig"), "must be > 0");
    require(m.kappa >= 0.0 && m.kappa <= 1.0, r.path("kappa"), "must lie in [0, 1]");
    require(m.theta >= 0.0 && m.theta <= std::numbers::pi / 2, r.path("theta_rad"),
            "must lie in [0, pi/2]");
    require(m.v_mod >= 0.0, r.path("v_mod"), "must be >= 0");
    r.finish();
  }
  s.channel = read_channel(root.object("channel"));
  {
    ObjectReader r = root.object("environment");
    s.temperature_k = r.number("temperature_k");
    require(s.temperature_k >= 0.0, r.path("temperature_k"), "must be >= 0");
    r.finish();
  }
  if (root.has("detection")) {
    ObjectReader r = root.object("detection");
    s.detection.eta = r.number_or("eta", s.detection.eta);
    s.detection.s_trusted = r.number_or("s", s.detection.s_trusted);
    s.detection.beta = r.number_or("beta", s.detection.beta);
    check_probability(s.detection.eta, r.path("eta"));
    require(s.detection.s_trusted >= 1.0, r.path("s"), "must be >= 1");
    check_probability(s.detection.beta, r.path("beta"));
    r.finish();
  }
  {
    ObjectReader r = root.object("sweep");
    s.sweep.start_m = r.number("start_m");
    s.sweep.stop_m = r.number("stop_m");
    const long long points = r.integer("points");
    if (r.has("spacing")) {
      s.sweep.spacing = parse_enum(kSpacings, r.string("spacing"), r.path("spacing"));
    }
    require(s.sweep.start_m >= 0.0, r.path("start_m"), "must be >= 0");
    require(s.sweep.stop_m > s.sweep.start_m, r.path("stop_m"), "must exceed start_m");
    require(points >= 2 && points <= 10'000'000, r.path("points"), "must be >= 2");
    s.sweep.points = static_cast<int>(points);
    if (s.sweep.spacing == SweepSpacing::log) {
      require(s.sweep.start_m > 0.0, r.path("start_m"), "must be > 0 for log spacing");
    }
    r.finish();
  }
  if (root.has("noise_mode")) {
    s.noise_mode = parse_enum(kNoiseModes, root.string("noise_mode"), root.path("noise_mode"));
  }
  s.skr_floor = root.number_or("skr_floor", s.skr_floor);
  require(s.skr_floor > 0.0, root.path("skr_floor"), "must be > 0");
  if (root.has("model")) {
    ObjectReader r = root.object("model");
    if (r.has("channel_noise")) {
      s.model.channel_noise =
          parse_enum(kNoisePolicies, r.string("channel_noise"), r.path("channel_noise"));
    }
    s.model.fixed_w = r.number_or("fixed_w", s.model.fixed_w);
    require(s.model.fixed_w >= 1.0, r.path("fixed_w"), "must be >= 1");
    if (r.has("thermal_reference")) {
      s.model.thermal_reference = parse_enum(kReferences, r.string("thermal_reference"),
                                             r.path("thermal_reference"));
    }
    r.finish();
  }
  root.finish();
  return s;
}

Json write_atmosphere(const AtmosphereConfig& a) {
  Json j;
  if (a.water_pressure_torr) j["water_pressure_torr"] = *a.water_pressure_torr;
  if (a.relative_humidity_pct) j["relative_humidity_pct"] = *a.relative_humidity_pct;
  j["temperature_k"] = a.temperature_k;
  j["total_pressure_torr"] = a.total_pressure_torr;
  if (a.lines_file) j["lines_file"] = *a.lines_file;
  j["continuum"] = {{"self", a.continuum.self}, {"foreign", a.continuum.foreign}};
  j["profile"] = enum_name(kProfiles, a.profile);
  j["band"] = {{"start_hz", a.band_start_hz},
               {"stop_hz", a.band_stop_hz},
               {"step_hz", a.band_step_hz}};
  return j;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("$: invalid JSON: ") + e.what());
  }
  return read_scenario(doc);
}

Scenario parse_scenario(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_scenario(in);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path.string() + "'");
  return parse_scenario(in);
}

std::string serialize_scenario(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["plan"] = {{"f_i_hz", s.plan.base_hz},
               {"delta_f_hz", s.plan.spacing_hz},
               {"n", s.plan.subcarriers}};
  j["modulator"] = {{"mu", s.modulator.mu},
                    {"a_sig", s.modulator.a_sig},
                    {"kappa", s.modulator.kappa},
                    {"theta_rad", s.modulator.theta},
                    {"v_mod", s.modulator.v_mod}};
  Json ch;
  ch["type"] = enum_name(kChannelKinds, s.channel.type);
  if (s.channel.spectrum_file) ch["spectrum_file"] = *s.channel.spectrum_file;
  if (s.channel.atmosphere) ch["atmosphere"] = write_atmosphere(*s.channel.atmosphere);
  if (s.channel.beam_waist_m) ch["beam_waist_m"] = *s.channel.beam_waist_m;
  if (s.channel.aperture_m) ch["aperture_m"] = *s.channel.aperture_m;
  if (s.channel.transmissivity) ch["transmissivity"] = *s.channel.transmissivity;
  j["channel"] = ch;
  j["environment"] = {{"temperature_k", s.temperature_k}};
  j["detection"] = {{"eta", s.detection.eta},
                    {"s", s.detection.s_trusted},
                    {"beta", s.detection.beta}};
  j["sweep"] = {{"start_m", s.sweep.start_m},
                {"stop_m", s.sweep.stop_m},
                {"points", s.sweep.points},
                {"spacing", enum_name(kSpacings, s.sweep.spacing)}};
  j["noise_mode"] = enum_name(kNoiseModes, s.noise_mode);
  j["skr_floor"] = s.skr_floor;
  j["model"] = {{"channel_noise", enum_name(kNoisePolicies, s.model.channel_noise)},
                {"fixed_w", s.model.fixed_w},
                {"thermal_reference", enum_name(kReferences, s.model.thermal_reference)}};
  return j.dump(2) + "\n";
}

}  // namespace ofdmqkd
