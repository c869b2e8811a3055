#include "ofdmqkd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/text.hpp"

namespace ofdmqkd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_distance(double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw DomainError("distance must be >= 0 m, got " + format_double(d));
  }
}

}  // namespace

void validate_channel(const ChannelSpec& spec) {
  std::visit(Overloaded{
                 [](const OpenAirChannel& c) {
                   if (!c.spectrum) throw DomainError("open-air channel has no spectrum");
                 },
                 [](const DiffractionChannel& c) {
                   if (!(c.beam_waist > 0.0)) throw DomainError("beam waist must be > 0");
                   if (!(c.aperture > 0.0)) throw DomainError("aperture radius must be > 0");
                 },
                 [](const FixedChannel& c) {
                   if (!(c.transmissivity > 0.0 && c.transmissivity <= 1.0)) {
                     throw DomainError("fixed transmissivity must lie in (0, 1]");
                   }
                 },
             },
             spec);
}

double open_air_transmissivity(double alpha_per_m, double distance_m) {
  if (!(alpha_per_m >= 0.0)) throw DomainError("absorption coefficient must be >= 0");
  require_distance(distance_m);
  return std::exp(-alpha_per_m * distance_m);
}

double beam_radius(double distance_m, double omega0, double wavelength) {
  if (!(omega0 > 0.0)) throw DomainError("beam waist must be > 0");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  require_distance(distance_m);
  const double spread = wavelength * distance_m / (std::numbers::pi * omega0 * omega0);
  return omega0 * std::hypot(1.0, spread);
}

double diffraction_transmissivity(double distance_m, double omega0,
                                  double aperture, double wavelength) {
  if (!(aperture > 0.0)) throw DomainError("aperture radius must be > 0");
  const double omega = beam_radius(distance_m, omega0, wavelength);
  return -std::expm1(-2.0 * aperture * aperture / (omega * omega));
}

double loss_vacuum_noise(double transmissivity) {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0)) {
    throw DomainError("transmissivity must lie in (0, 1], got " +
                      format_double(transmissivity));
  }
  return (1.0 - transmissivity) / transmissivity;
}

double channel_transmissivity(const ChannelSpec& spec, Frequency f,
                              double distance_m) {
  return std::visit(
      Overloaded{
          [&](const OpenAirChannel& c) {
            return open_air_transmissivity(absorption_at(*c.spectrum, f), distance_m);
          },
          [&](const DiffractionChannel& c) {
            return diffraction_transmissivity(distance_m, c.beam_waist, c.aperture,
                                              f.wavelength());
          },
          [&](const FixedChannel& c) {
            require_distance(distance_m);
            return c.transmissivity;
          },
      },
      spec);
}

std::vector<SubcarrierChannelState> per_subcarrier_channel(
    const CarrierPlan& plan, const ModulatorParams& p, const ChannelSpec& spec,
    const ThermalEnvironment& env, double distance_m, NoiseMode noise_mode,
    const ChannelOptions& opts) {
  plan.validate();
  p.validate();
  validate_channel(spec);
  require_distance(distance_m);

  double uniform_eps = 0.0;
  if (noise_mode == NoiseMode::worst_case) {
    uniform_eps = worst_modulation_noise(plan, p).value;
  }
  const Frequency centre = plan.band_centre();

  std::vector<SubcarrierChannelState> states(plan.subcarriers);
  for (int k = 1; k <= plan.subcarriers; ++k) {
    SubcarrierChannelState& s = states[k - 1];
    const Frequency f = plan.frequency(k);
    const Frequency ref =
        opts.reference == ThermalReference::band_centre ? centre : f;
    double t = 0.0;
    try {
      t = channel_transmissivity(spec, f, distance_m);
    } catch (const RangeError& e) {
      throw RangeError("subcarrier " + std::to_string(k) + " at " +
                       format_double(f.hz()) + " Hz: " + e.what());
    }
    s.k = k;
    s.f_hz = f.hz();
    s.reference_hz = ref.hz();
    s.dark = t < opts.dark_cutoff;
    s.t_ch = std::max(t, opts.transmissivity_floor);
    s.eps_single = loss_vacuum_noise(s.t_ch);
    switch (noise_mode) {
      case NoiseMode::worst_case: s.eps_mod = uniform_eps; break;
      case NoiseMode::per_k: s.eps_mod = modulation_noise(plan, p, k); break;
      case NoiseMode::none: s.eps_mod = 0.0; break;
    }
    s.eps_multi = s.eps_single + s.eps_mod;
    s.v0 = vacuum_variance(ref, env);
  }
  return states;
}

}  // namespace ofdmqkd
