#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ofdmqkd/physics.hpp"

namespace ofdmqkd {

/// Equally spaced subcarriers f_k = f_I + k * delta_f, k = 1..N.
struct CarrierPlan {
  double base_hz = 0.0;
  double spacing_hz = 0.0;
  int subcarriers = 1;

  /// Throws DomainError unless base > 0, spacing > 0 and N >= 1.
  void validate() const;
  Frequency frequency(int k) const;
  /// Centre of the occupied band, (f_1 + f_N) / 2.
  Frequency band_centre() const;
  /// 2 f_I / delta_f when it is an integer (relative tolerance 1e-9).
  std::optional<std::int64_t> sum_frequency_offset() const;

  friend bool operator==(const CarrierPlan&, const CarrierPlan&) = default;
};

/// I/Q modulator imperfections shared by every subcarrier.
struct ModulatorParams {
  double mu = 0.01;       // modulation index
  double a_sig = 1.0;     // signal amplitude
  double kappa = 1.0;     // gain imbalance, [0, 1]
  double theta = 0.0;     // quadrature skew in radians, [0, pi/2]
  double v_mod = 0.0;     // Gaussian modulation variance, SNU

  void validate() const;

  friend bool operator==(const ModulatorParams&,
                         const ModulatorParams&) = default;
};

/// Number of third-order products landing on one subcarrier.
///   m1: 2f_m - f_n        m2: 2f_m + f_n
///   w1: f_m + f_n + f_l   w2: f_m + f_n - f_l   w3: f_m - f_n - f_l
/// Every distinct product is counted once and all input tones are distinct.
struct ImdCounts {
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;
  std::int64_t w1 = 0;
  std::int64_t w2 = 0;
  std::int64_t w3 = 0;

  bool all_zero() const { return m1 == 0 && m2 == 0 && w1 == 0 && w2 == 0 && w3 == 0; }
  friend bool operator==(const ImdCounts&, const ImdCounts&) = default;
};

/// Counts for subcarrier k of the plan. Results are memoized per (N, r) and
/// the cache is safe for concurrent use.
ImdCounts imd_counts(const CarrierPlan& plan, int k);

/// Counts for every subcarrier, index 0 holding k = 1.
const std::vector<ImdCounts>& imd_count_table(const CarrierPlan& plan);

/// <dX_k1^2>: I/Q gain and phase imbalance.
double iq_imbalance_variance(const ModulatorParams& p);
/// <dX_k2^2>: two-tone third-order products (2f_m -/+ f_n).
double imd_two_tone_variance(const ModulatorParams& p, const ImdCounts& c);
/// <dX_k3^2>: three-tone third-order products.
double imd_three_tone_variance(const ModulatorParams& p, const ImdCounts& c);

/// Total modulation noise eps_mod(k) in SNU.
double modulation_noise(const CarrierPlan& plan, const ModulatorParams& p,
                        int k);

struct WorstModulationNoise {
  int k = 1;
  double value = 0.0;
};

/// Largest eps_mod over the band; ties go to the smallest k.
WorstModulationNoise worst_modulation_noise(const CarrierPlan& plan,
                                            const ModulatorParams& p);

}  // namespace ofdmqkd
