#include "ofdmqkd/physics.hpp"

#include <cmath>
#include <string>

#include "ofdmqkd/errors.hpp"

namespace ofdmqkd {

namespace {
constexpr double kCentimetresPerMetre = 100.0;
}

Frequency Frequency::hertz(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("frequency must be positive and finite, got " +
                      std::to_string(value) + " Hz");
  }
  return Frequency(value);
}

Frequency Frequency::from_wavenumber(double per_cm) {
  return hertz(per_cm * kSpeedOfLight * kCentimetresPerMetre);
}

double Frequency::wavenumber() const {
  return hz_ / (kSpeedOfLight * kCentimetresPerMetre);
}

ThermalEnvironment::ThermalEnvironment(double kelvin) : kelvin_(kelvin) {
  if (!(kelvin >= 0.0) || !std::isfinite(kelvin)) {
    throw DomainError("temperature must be >= 0 K, got " +
                      std::to_string(kelvin));
  }
}

double thermal_occupation(Frequency f, const ThermalEnvironment& env) {
  if (env.kelvin() == 0.0) return 0.0;
  const double x = kPlanck * f.hz() / (kBoltzmann * env.kelvin());
  return 1.0 / std::expm1(x);
}

double vacuum_variance(Frequency f, const ThermalEnvironment& env) {
  return 2.0 * thermal_occupation(f, env) + 1.0;
}

}  // namespace ofdmqkd
