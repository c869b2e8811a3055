// Command-line front end: simulate, preset, absorption, modnoise.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ofdmqkd/atmosphere.hpp"
#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/modnoise.hpp"
#include "ofdmqkd/scenarios.hpp"
#include "ofdmqkd/text.hpp"

namespace fs = std::filesystem;
using namespace ofdmqkd;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kPhysicality = 3 };

// Writes through `write` to `path`, or to stdout when path is empty.
template <typename Fn>
void write_output(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write(out);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_sweep(const Scenario& s, SpectrumCache& cache, const fs::path& out_dir,
                 bool wide, unsigned threads, const fs::path& base_dir) {
  const SweepResult result = run_sweep(s, cache, threads, base_dir);
  const fs::path file = out_dir / (s.name + ".csv");
  write_output(file.string(), [&](std::ostream& os) { emit_csv(result, os, wide); });
  std::cerr << s.name << ": max_secure_distance_m="
            << (result.max_secure_distance_m ? std::to_string(*result.max_secure_distance_m)
                                             : "none")
            << '\n';
}

struct SimulateArgs {
  std::string scenario;
  std::string out = ".";
  bool wide = false;
  unsigned threads = 0;
};

struct PresetArgs {
  std::string name;
  bool list = false;
  bool json = false;
  std::string out = ".";
  bool wide = false;
  unsigned threads = 0;
};

struct AbsorptionArgs {
  double start = 0, stop = 0, step = 0;
  std::optional<double> rh, pw;
  double temp = kRoomTemperature;
  double total = kStandardPressureTorr;
  std::string lines;
  std::optional<double> cs, cf;
  std::string profile = "van_vleck_weisskopf";
  std::string out;
  unsigned threads = 0;
};

struct ModnoiseArgs {
  int n = 1;
  ModulatorParams p;
  double fi = 0, df = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const fs::path path(a.scenario);
  const Scenario s = load_scenario_file(path);
  SpectrumCache cache(fs::path(a.out), a.threads);
  write_sweep(s, cache, a.out, a.wide, a.threads, path.parent_path());
  return kOk;
}

int run_preset(const PresetArgs& a) {
  if (a.list) {
    for (const Preset& p : builtin_presets()) {
      std::cout << p.name << '\t' << p.curves.size() << " curves\t" << p.description << '\n';
    }
    return kOk;
  }
  if (a.name.empty()) throw ValidationError("preset: give a preset name or --list");
  const Preset& preset = find_preset(a.name);
  const fs::path out_dir(a.out);
  if (a.json) {
    for (const Scenario& s : preset.curves) {
      write_output((out_dir / (s.name + ".json")).string(),
                   [&](std::ostream& os) { os << serialize_scenario(s); });
    }
    return kOk;
  }
  if (preset.kind == PresetKind::modulation_noise) {
    for (const Scenario& s : preset.curves) {
      write_output((out_dir / (s.name + ".csv")).string(),
                   [&](std::ostream& os) { emit_modnoise_csv(s.plan, s.modulator, os); });
    }
    write_output((out_dir / (preset.name + "_worst.csv")).string(), [&](std::ostream& os) {
      os << "N,k_worst,eps_worst_snu\n";
      for (const Scenario& s : preset.curves) {
        const WorstModulationNoise w = worst_modulation_noise(s.plan, s.modulator);
        os << s.plan.subcarriers << ',' << w.k << ',' << format_double(w.value) << '\n';
      }
    });
    return kOk;
  }
  SpectrumCache cache(out_dir, a.threads);
  for (const Scenario& s : preset.curves) write_sweep(s, cache, out_dir, a.wide, a.threads, {});
  return kOk;
}

int run_absorption(const AbsorptionArgs& a) {
  AtmosphereConfig atm;
  atm.water_pressure_torr = a.pw;
  atm.relative_humidity_pct = a.rh;
  atm.temperature_k = a.temp;
  atm.total_pressure_torr = a.total;
  if (a.cs) atm.continuum.self = *a.cs;
  if (a.cf) atm.continuum.foreign = *a.cf;
  atm.profile = a.profile == "lorentz" ? LineProfile::lorentz : LineProfile::van_vleck_weisskopf;
  atm.band_start_hz = a.start;
  atm.band_stop_hz = a.stop;
  atm.band_step_hz = a.step;
  atm.validate();
  const std::vector<SpectralLine> lines =
      a.lines.empty() ? default_water_lines() : load_hitran_file(a.lines);
  const auto grid = uniform_grid(a.start, a.stop, a.step);
  const AbsorptionSpectrum spectrum = total_absorption_spectrum(
      grid, lines, atm.moist_air(), atm.continuum, LineModelOptions{atm.profile}, a.threads);
  write_output(a.out, [&](std::ostream& os) { save_spectrum_table(spectrum, os); });
  return kOk;
}

int run_modnoise(const ModnoiseArgs& a) {
  const CarrierPlan plan{a.fi, a.df, a.n};
  write_output(a.out, [&](std::ostream& os) { emit_modnoise_csv(plan, a.p, os); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"THz OFDM CV-QKD key-rate simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario JSON file and write its CSV");
  simulate->add_option("scenario", sim.scenario, "Scenario JSON")->required();
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_flag("--wide", sim.wide, "Add per-subcarrier r_k columns");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

  PresetArgs pre;
  auto* preset = app.add_subcommand("preset", "Run a built-in figure preset");
  preset->add_option("name", pre.name, "Preset name");
  preset->add_flag("--list", pre.list, "List presets");
  preset->add_flag("--json", pre.json, "Write the preset scenarios as JSON instead of running");
  preset->add_option("--out", pre.out, "Output directory");
  preset->add_flag("--wide", pre.wide, "Add per-subcarrier r_k columns");
  preset->add_option("--threads", pre.threads, "Worker threads (0 = all cores)");

  AbsorptionArgs ab;
  auto* absorption = app.add_subcommand("absorption", "Compute a water-vapour absorption spectrum");
  absorption->add_option("--start", ab.start, "First frequency, Hz")->required();
  absorption->add_option("--stop", ab.stop, "Last frequency, Hz")->required();
  absorption->add_option("--step", ab.step, "Frequency step, Hz")->required();
  auto* rh = absorption->add_option("--rh", ab.rh, "Relative humidity, percent");
  auto* pw = absorption->add_option("--pw", ab.pw, "Water partial pressure, Torr");
  rh->excludes(pw);
  pw->excludes(rh);
  absorption->add_option("--temp", ab.temp, "Gas temperature, K");
  absorption->add_option("--total", ab.total, "Total pressure, Torr");
  absorption->add_option("--lines", ab.lines, "HITRAN .par file (bundled list if omitted)");
  absorption->add_option("--cs", ab.cs, "Self continuum coefficient");
  absorption->add_option("--cf", ab.cf, "Foreign continuum coefficient");
  absorption->add_option("--profile", ab.profile, "Line shape")
      ->check(CLI::IsMember({"van_vleck_weisskopf", "lorentz"}));
  absorption->add_option("--out", ab.out, "Output CSV (stdout if omitted)");
  absorption->add_option("--threads", ab.threads, "Worker threads (0 = all cores)");

  ModnoiseArgs mn;
  auto* modnoise = app.add_subcommand("modnoise", "Tabulate modulation noise per subcarrier");
  modnoise->add_option("--n", mn.n, "Number of subcarriers")->required();
  modnoise->add_option("--mu", mn.p.mu, "Modulation index")->required();
  modnoise->add_option("--a-sig", mn.p.a_sig, "Signal amplitude");
  modnoise->add_option("--kappa", mn.p.kappa, "Gain imbalance")->required();
  modnoise->add_option("--theta", mn.p.theta, "Quadrature skew, rad")->required();
  modnoise->add_option("--vmod", mn.p.v_mod, "Modulation variance, SNU")->required();
  modnoise->add_option("--fi", mn.fi, "Base frequency f_I, Hz")->required();
  modnoise->add_option("--df", mn.df, "Subcarrier spacing, Hz")->required();
  modnoise->add_option("--out", mn.out, "Output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*preset) return run_preset(pre);
    if (*absorption) {
      if (!ab.rh && !ab.pw) throw ValidationError("absorption: give --rh or --pw");
      return run_absorption(ab);
    }
    if (*modnoise) return run_modnoise(mn);
  } catch (const PhysicalityError& e) {
    std::cerr << "physicality error: " << e.what() << '\n';
    return kPhysicality;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
