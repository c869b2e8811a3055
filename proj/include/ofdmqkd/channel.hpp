#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "ofdmqkd/atmosphere.hpp"
#include "ofdmqkd/modnoise.hpp"
#include "ofdmqkd/physics.hpp"

namespace ofdmqkd {

/// Beer-Lambert loss through humid air described by a sampled spectrum.
struct OpenAirChannel {
  std::shared_ptr<const AbsorptionSpectrum> spectrum;
};

/// Gaussian beam of waist omega0 caught by a circular aperture of radius r_a.
struct DiffractionChannel {
  double beam_waist = 0.0;  // m
  double aperture = 0.0;    // m
  friend bool operator==(const DiffractionChannel&,
                         const DiffractionChannel&) = default;
};

/// Frequency- and distance-independent transmissivity.
struct FixedChannel {
  double transmissivity = 1.0;
  friend bool operator==(const FixedChannel&, const FixedChannel&) = default;
};

using ChannelSpec = std::variant<OpenAirChannel, DiffractionChannel, FixedChannel>;

void validate_channel(const ChannelSpec& spec);

/// exp(-alpha d).
double open_air_transmissivity(double alpha_per_m, double distance_m);

/// omega0 sqrt(1 + (lambda d / (pi omega0^2))^2).
double beam_radius(double distance_m, double omega0, double wavelength);

/// Power fraction of the beam inside the aperture, 1 - exp(-2 r_a^2 / omega^2).
double diffraction_transmissivity(double distance_m, double omega0,
                                  double aperture, double wavelength);

/// (1 - T) / T in SNU.
double loss_vacuum_noise(double transmissivity);

/// Unclamped transmissivity of the channel at one frequency.
double channel_transmissivity(const ChannelSpec& spec, Frequency f,
                              double distance_m);

enum class NoiseMode {
  worst_case,  // eps_mod(k_worst) applied to every subcarrier
  per_k,
  none,        // eps_mod forced to zero
};

/// Where V_0 and the channel noise are evaluated.
enum class ThermalReference { per_subcarrier, band_centre };

struct ChannelOptions {
  double transmissivity_floor = 1e-300;
  double dark_cutoff = 1e-12;
  ThermalReference reference = ThermalReference::per_subcarrier;
};

struct SubcarrierChannelState {
  int k = 1;
  double f_hz = 0.0;
  double reference_hz = 0.0;  // frequency used for v0 and channel noise
  double t_ch = 1.0;
  double eps_single = 0.0;
  double eps_mod = 0.0;
  double eps_multi = 0.0;
  double v0 = 1.0;
  bool dark = false;  // t_ch below the dark cutoff
};

/// One state per subcarrier, ordered k = 1..N.
std::vector<SubcarrierChannelState> per_subcarrier_channel(
    const CarrierPlan& plan, const ModulatorParams& p, const ChannelSpec& spec,
    const ThermalEnvironment& env, double distance_m,
    NoiseMode noise_mode = NoiseMode::worst_case,
    const ChannelOptions& opts = {});

}  // namespace ofdmqkd
