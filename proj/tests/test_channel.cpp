#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "ofdmqkd/channel.hpp"
#include "ofdmqkd/errors.hpp"

namespace ofdmqkd {
namespace {

const ModulatorParams kModulator{0.01, 1.0, 0.98, std::numbers::pi / 50, 1000.0};

std::shared_ptr<const AbsorptionSpectrum> flat_spectrum(double alpha, double lo_hz,
                                                        double hi_hz) {
  return std::make_shared<AbsorptionSpectrum>(
      std::vector<double>{lo_hz, hi_hz}, std::vector<double>{alpha, alpha},
      SpectrumProvenance::loaded);
}

std::shared_ptr<const AbsorptionSpectrum> wet_spectrum() {
  static const auto spectrum = std::make_shared<AbsorptionSpectrum>(total_absorption_spectrum(
      uniform_grid(300e9, 2100e9, 1e9), default_water_lines(), {15.23, 744.77, 296.0}));
  return spectrum;
}

TEST(OpenAir, BeerLambert) {
  EXPECT_DOUBLE_EQ(open_air_transmissivity(0.2, 5.0), std::exp(-1.0));
  EXPECT_EQ(open_air_transmissivity(3.0, 0.0), 1.0);
  EXPECT_EQ(open_air_transmissivity(0.0, 1e6), 1.0);
  EXPECT_THROW(open_air_transmissivity(-0.1, 1.0), DomainError);
  EXPECT_THROW(open_air_transmissivity(0.1, -1.0), DomainError);
}

TEST(Diffraction, BeamRadiusReference) {
  const double lambda = Frequency::gigahertz(780).wavelength();
  EXPECT_NEAR(beam_radius(1000.0, 0.1, lambda), 1.22750192996667559, 1e-14);
  EXPECT_EQ(beam_radius(0.0, 0.1, lambda), 0.1);
}

TEST(Diffraction, WaistSizedApertureAtZeroDistance) {
  const double lambda = Frequency::gigahertz(780).wavelength();
  EXPECT_NEAR(diffraction_transmissivity(0.0, 0.1, 0.1, lambda), 0.864664716763387308, 1e-15);
}

TEST(Diffraction, DecreasesWithDistance) {
  const double lambda = Frequency::gigahertz(780).wavelength();
  double previous = 1.0;
  for (double d = 1.0; d <= 1e6; d *= 3.0) {
    const double t = diffraction_transmissivity(d, 0.1, 0.1, lambda);
    EXPECT_LT(t, previous);
    EXPECT_GT(t, 0.0);
    previous = t;
  }
}

TEST(Diffraction, FarFieldFollowsInverseSquare) {
  // T -> 2 r_a^2 / omega^2 once the beam is much wider than the aperture.
  const double lambda = Frequency::gigahertz(780).wavelength();
  const double d = 1e6;
  const double omega = beam_radius(d, 0.1, lambda);
  EXPECT_NEAR(diffraction_transmissivity(d, 0.1, 0.1, lambda), 2 * 0.01 / (omega * omega),
              1e-6 * 2 * 0.01 / (omega * omega));
}

TEST(LossNoise, Values) {
  EXPECT_EQ(loss_vacuum_noise(1.0), 0.0);
  EXPECT_EQ(loss_vacuum_noise(0.5), 1.0);
  EXPECT_NEAR(loss_vacuum_noise(0.1), 9.0, 1e-14);
  EXPECT_THROW(loss_vacuum_noise(0.0), DomainError);
  EXPECT_THROW(loss_vacuum_noise(1.5), DomainError);
}

TEST(ChannelSpecValidation, RejectsBadParameters) {
  EXPECT_THROW(validate_channel(OpenAirChannel{}), DomainError);
  EXPECT_THROW(validate_channel(DiffractionChannel{0.0, 0.1}), DomainError);
  EXPECT_THROW(validate_channel(DiffractionChannel{0.1, -1.0}), DomainError);
  EXPECT_THROW(validate_channel(FixedChannel{0.0}), DomainError);
  EXPECT_THROW(validate_channel(FixedChannel{1.01}), DomainError);
  EXPECT_NO_THROW(validate_channel(FixedChannel{1.0}));
}

TEST(PerSubcarrier, DryAirEqualsLossless) {
  const CarrierPlan plan{300e9, 5e9, 16};
  const ThermalEnvironment env(300.0);
  const auto open = per_subcarrier_channel(plan, kModulator,
                                           OpenAirChannel{flat_spectrum(0.0, 300e9, 500e9)},
                                           env, 7.0);
  const auto fixed = per_subcarrier_channel(plan, kModulator, FixedChannel{1.0}, env, 7.0);
  ASSERT_EQ(open.size(), 16u);
  for (std::size_t i = 0; i < open.size(); ++i) {
    EXPECT_EQ(open[i].t_ch, fixed[i].t_ch);
    EXPECT_EQ(open[i].eps_multi, fixed[i].eps_multi);
    EXPECT_EQ(open[i].v0, fixed[i].v0);
  }
}

TEST(PerSubcarrier, SingleLosslessCarrierSeesOnlyIqNoise) {
  const CarrierPlan plan{300e9, 5e9, 1};
  const auto states =
      per_subcarrier_channel(plan, kModulator, FixedChannel{1.0}, ThermalEnvironment(300), 0.0);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(states[0].eps_single, 0.0);
  EXPECT_NEAR(states[0].eps_multi, 4.2676122805877386e-4, 1e-17);
  EXPECT_EQ(states[0].eps_multi, iq_imbalance_variance(kModulator));
}

TEST(PerSubcarrier, NoiseModes) {
  const CarrierPlan plan{300e9, 5e9, 12};
  const ThermalEnvironment env(300.0);
  const FixedChannel channel{0.5};
  const auto worst = per_subcarrier_channel(plan, kModulator, channel, env, 1.0,
                                            NoiseMode::worst_case);
  const auto per_k = per_subcarrier_channel(plan, kModulator, channel, env, 1.0,
                                            NoiseMode::per_k);
  const auto none = per_subcarrier_channel(plan, kModulator, channel, env, 1.0,
                                           NoiseMode::none);
  const double top = worst_modulation_noise(plan, kModulator).value;
  for (int k = 1; k <= 12; ++k) {
    EXPECT_EQ(worst[k - 1].eps_mod, top);
    EXPECT_EQ(per_k[k - 1].eps_mod, modulation_noise(plan, kModulator, k));
    EXPECT_LE(per_k[k - 1].eps_mod, top);
    EXPECT_EQ(none[k - 1].eps_mod, 0.0);
    EXPECT_EQ(none[k - 1].eps_multi, 1.0);
  }
}

TEST(PerSubcarrier, ThermalReference) {
  const CarrierPlan plan{300e9, 5e9, 9};
  const ThermalEnvironment env(300.0);
  ChannelOptions centre;
  centre.reference = ThermalReference::band_centre;
  const auto own = per_subcarrier_channel(plan, kModulator, FixedChannel{1.0}, env, 0.0);
  const auto shared = per_subcarrier_channel(plan, kModulator, FixedChannel{1.0}, env, 0.0,
                                             NoiseMode::worst_case, centre);
  for (int k = 1; k <= 9; ++k) {
    EXPECT_EQ(own[k - 1].reference_hz, plan.frequency(k).hz());
    EXPECT_EQ(own[k - 1].v0, vacuum_variance(plan.frequency(k), env));
    EXPECT_EQ(shared[k - 1].reference_hz, 325e9);
    EXPECT_EQ(shared[k - 1].v0, vacuum_variance(Frequency::gigahertz(325), env));
  }
}

TEST(PerSubcarrier, OutOfSpectrumNamesSubcarrier) {
  const CarrierPlan plan{300e9, 5e9, 8};
  const OpenAirChannel channel{flat_spectrum(0.1, 300e9, 330e9)};
  try {
    per_subcarrier_channel(plan, kModulator, channel, ThermalEnvironment(300), 1.0);
    FAIL() << "expected RangeError";
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("subcarrier 7"), std::string::npos) << e.what();
  }
}

TEST(PerSubcarrier, DiffractionNearlyFlatAcrossNarrowBand) {
  const CarrierPlan plan{780e9, 1e9, 64};
  const auto states = per_subcarrier_channel(plan, kModulator, DiffractionChannel{0.1, 0.1},
                                             ThermalEnvironment(30), 1e4);
  // Far field: T scales as 1 / omega^2, i.e. as f^2.
  for (const auto& s : states) {
    const double f_ratio = s.f_hz / states.front().f_hz;
    EXPECT_NEAR(s.t_ch / states.front().t_ch, f_ratio * f_ratio, 1e-3);
  }
}

TEST(PerSubcarrier, OpenAirVariesAcrossBand) {
  const CarrierPlan plan{540e9, 1e9, 32};
  const auto states = per_subcarrier_channel(plan, kModulator, OpenAirChannel{wet_spectrum()},
                                             ThermalEnvironment(300), 2.0);
  double lo = 1.0, hi = 0.0;
  for (const auto& s : states) {
    lo = std::min(lo, s.t_ch);
    hi = std::max(hi, s.t_ch);
    EXPECT_EQ(s.t_ch, open_air_transmissivity(
                          absorption_at(*wet_spectrum(), Frequency::hertz(s.f_hz)), 2.0));
  }
  // The 557 GHz line sits inside this band.
  EXPECT_GT(hi / lo, 10.0);
}

TEST(PerSubcarrier, FloorAndDarkFlag) {
  const CarrierPlan plan{300e9, 5e9, 2};
  const OpenAirChannel channel{flat_spectrum(10.0, 300e9, 400e9)};
  ChannelOptions opts;
  opts.transmissivity_floor = 1e-200;
  const auto deep = per_subcarrier_channel(plan, kModulator, channel, ThermalEnvironment(300),
                                           100.0, NoiseMode::worst_case, opts);
  for (const auto& s : deep) {
    EXPECT_TRUE(s.dark);
    EXPECT_EQ(s.t_ch, 1e-200);
    EXPECT_TRUE(std::isfinite(s.eps_single));
  }
  const auto shallow = per_subcarrier_channel(plan, kModulator, channel,
                                              ThermalEnvironment(300), 1.0);
  for (const auto& s : shallow) {
    EXPECT_FALSE(s.dark);
    EXPECT_DOUBLE_EQ(s.t_ch, std::exp(-10.0));
  }
}

TEST(PerSubcarrier, RejectsNegativeDistance) {
  const CarrierPlan plan{300e9, 5e9, 2};
  EXPECT_THROW(per_subcarrier_channel(plan, kModulator, FixedChannel{1.0},
                                      ThermalEnvironment(300), -1.0),
               DomainError);
}

}  // namespace
}  // namespace ofdmqkd
