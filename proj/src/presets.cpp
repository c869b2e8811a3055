#include <numbers>
#include <string>

#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/scenarios.hpp"

namespace ofdmqkd {

namespace {

// Published water-vapour partial pressures (Torr) for the four humidities;
// dry air fills the rest of 760 Torr.
struct Humidity {
  const char* label;  // relative humidity, percent
  double water_torr;
};
constexpr Humidity kHumidities[] = {
    {"17.89", 3.60}, {"36.79", 8.04}, {"48.03", 10.05}, {"70.84", 15.23}};
constexpr Humidity kWet = kHumidities[3];

constexpr double kOpenAirKelvin = 300.0;
constexpr double kGHz = 1e9;

ModulatorParams modulator(double v_mod) {
  return ModulatorParams{0.01, 1.0, 0.98, std::numbers::pi / 50.0, v_mod};
}

Scenario base(std::string name, double f_i, double delta_f, int n, double v_mod) {
  Scenario s;
  s.name = std::move(name);
  s.plan = CarrierPlan{f_i, delta_f, n};
  s.modulator = modulator(v_mod);
  return s;
}

Scenario open_air(std::string name, double f_i, double delta_f, int n, double v_mod,
                  const Humidity& h, double stop_m) {
  Scenario s = base(std::move(name), f_i, delta_f, n, v_mod);
  AtmosphereConfig atm;
  atm.water_pressure_torr = h.water_torr;
  s.channel.type = ChannelKind::open_air;
  s.channel.atmosphere = atm;
  s.temperature_k = kOpenAirKelvin;
  s.sweep = SweepSpec{0.0, stop_m, 500, SweepSpacing::linear};
  return s;
}

Scenario vacuum(std::string name, double f_i, double delta_f, int n, double v_mod,
                double kelvin) {
  Scenario s = base(std::move(name), f_i, delta_f, n, v_mod);
  s.channel.type = ChannelKind::diffraction;
  s.channel.beam_waist_m = 0.1;
  s.channel.aperture_m = 0.1;
  s.temperature_k = kelvin;
  s.sweep = SweepSpec{1.0, 1e6, 500, SweepSpacing::log};
  return s;
}

std::string n_suffix(int n) { return "_n" + std::to_string(n); }

constexpr int kFullNSet[] = {1, 4, 8, 16, 32, 64, 128};
constexpr int kTwelveNSet[] = {1, 4, 8, 12};

Preset fig2() {
  Preset p{"fig2", PresetKind::modulation_noise,
           "Modulation noise per subcarrier, N = 10..120, V_mod = 100", {}};
  for (int n = 10; n <= 120; n += 10) {
    Scenario s = base("fig2" + n_suffix(n), 300 * kGHz, 5 * kGHz, n, 100.0);
    s.channel.type = ChannelKind::fixed;
    s.channel.transmissivity = 1.0;
    s.sweep = SweepSpec{0.0, 1.0, 2, SweepSpacing::linear};
    p.curves.push_back(s);
  }
  return p;
}

Preset fig4(const char* panel, double f_i, double v_mod, double stop_m) {
  Preset p{std::string("fig4") + panel, PresetKind::key_rate,
           "Open air at " + std::to_string(static_cast<int>(f_i / kGHz)) +
               " GHz, delta_f = 5 GHz, V_mod = " + std::to_string(static_cast<int>(v_mod)) +
               ", 70.84% RH, 300 K",
           {}};
  for (int n : kFullNSet) {
    p.curves.push_back(open_air(p.name + n_suffix(n), f_i, 5 * kGHz, n, v_mod, kWet, stop_m));
  }
  return p;
}

Preset fig5() {
  Preset p{"fig5", PresetKind::key_rate,
           "Open air at 580 GHz, V_mod = 1000, N = 1 and 32, four humidities", {}};
  for (const Humidity& h : kHumidities) {
    for (int n : {1, 32}) {
      p.curves.push_back(open_air("fig5_rh" + std::string(h.label) + n_suffix(n), 580 * kGHz,
                                  5 * kGHz, n, 1000.0, h, 15.0));
    }
  }
  return p;
}

Preset fig6(const char* panel, double v_mod) {
  Preset p{std::string("fig6") + panel, PresetKind::key_rate,
           "Vacuum at 30 K, 780 GHz, delta_f = 5 GHz, V_mod = " +
               std::to_string(static_cast<int>(v_mod)) + ", w0 = r_a = 0.1 m",
           {}};
  for (int n : kFullNSet) {
    p.curves.push_back(vacuum(p.name + n_suffix(n), 780 * kGHz, 5 * kGHz, n, v_mod, 30.0));
  }
  return p;
}

Preset fig7() {
  Preset p{"fig7", PresetKind::key_rate,
           "Vacuum at 30 K, N = 32, V_mod = 100, four base frequencies", {}};
  for (double f_ghz : {600.0, 900.0, 2700.0, 8100.0}) {
    p.curves.push_back(vacuum("fig7_f" + std::to_string(static_cast<int>(f_ghz)) + "ghz",
                              f_ghz * kGHz, 5 * kGHz, 32, 100.0, 30.0));
  }
  return p;
}

Preset fig8a() {
  Preset p{"fig8a", PresetKind::key_rate,
           "Open air at 840 GHz, delta_f = 3 GHz, 70.84% RH, V_mod = 1000 and 100", {}};
  for (double v_mod : {1000.0, 100.0}) {
    for (int n : kTwelveNSet) {
      p.curves.push_back(open_air("fig8a_v" + std::to_string(static_cast<int>(v_mod)) +
                                      n_suffix(n),
                                  840 * kGHz, 3 * kGHz, n, v_mod, kWet, 5.0));
    }
  }
  return p;
}

Preset fig8b() {
  Preset p{"fig8b", PresetKind::key_rate,
           "Open air at 840 GHz, delta_f = 3 GHz, N = 12, V_mod = 1000, four humidities", {}};
  for (const Humidity& h : kHumidities) {
    p.curves.push_back(open_air("fig8b_rh" + std::string(h.label), 840 * kGHz, 3 * kGHz, 12,
                                1000.0, h, 15.0));
  }
  return p;
}

Preset fig9() {
  Preset p{"fig9", PresetKind::key_rate,
           "Vacuum at 25 K, 840 GHz, delta_f = 3 GHz, V_mod = 1000", {}};
  for (int n : kTwelveNSet) {
    p.curves.push_back(vacuum("fig9" + n_suffix(n), 840 * kGHz, 3 * kGHz, n, 1000.0, 25.0));
  }
  return p;
}

std::vector<Preset> make_presets() {
  return {fig2(),
          fig4("a", 300 * kGHz, 1000.0, 10.0),
          fig4("b", 300 * kGHz, 100.0, 10.0),
          fig4("c", 580 * kGHz, 1000.0, 10.0),
          fig4("d", 580 * kGHz, 100.0, 10.0),
          fig4("e", 780 * kGHz, 1000.0, 10.0),
          fig4("f", 780 * kGHz, 100.0, 10.0),
          fig5(),
          fig6("a", 100.0),
          fig6("b", 1000.0),
          fig7(),
          fig8a(),
          fig8b(),
          fig9()};
}

}  // namespace

const std::vector<Preset>& builtin_presets() {
  static const std::vector<Preset> presets = make_presets();
  return presets;
}

const Preset& find_preset(std::string_view name) {
  std::string known;
  for (const Preset& p : builtin_presets()) {
    if (p.name == name) return p;
    known += known.empty() ? "" : ", ";
    known += p.name;
  }
  throw RangeError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace ofdmqkd
