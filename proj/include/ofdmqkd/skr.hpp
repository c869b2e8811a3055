#pragma once

#include <vector>

#include "ofdmqkd/channel.hpp"

namespace ofdmqkd {

/// Bob's homodyne receiver and reconciliation.
struct DetectionParams {
  double eta = 0.1;        // detection efficiency, (0, 1]
  double s_trusted = 1.0;  // trusted detector noise S >= 1, SNU
  double beta = 1.0;       // reconciliation efficiency, (0, 1]

  void validate() const;
  friend bool operator==(const DetectionParams&,
                         const DetectionParams&) = default;
};

/// Variance W of the thermal state Eve injects through the cloner.
enum class ThermalNoisePolicy {
  vacuum,   // W = 1
  ambient,  // W = 2 n(f, T) + 1 at the channel temperature
  fixed,    // W given explicitly
};

struct KeyRateOptions {
  ThermalNoisePolicy noise_policy = ThermalNoisePolicy::vacuum;
  double fixed_w = 1.0;
  ChannelOptions channel;
};

/// Eve's two-mode output: a = W, b = (1 - T) V_A + T W, c = sqrt(T (W^2 - 1)).
struct EveChannelBlocks {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;
};

EveChannelBlocks eve_channel_blocks(double v_a, double t_ch, double w);

/// Ambient black-body variance 2 n(f, T) + 1.
double channel_thermal_noise(Frequency f, const ThermalEnvironment& env);

/// W for the given policy at frequency f.
double injected_noise(const KeyRateOptions& opts, Frequency f,
                      const ThermalEnvironment& env);

/// eta T (V + eps) + eta (1 - T) W + (1 - eta) S. Pass V_A for V_b and
/// V_0 for V_b|a.
double bob_variance(double v, double t_ch, double eps_multi, double w,
                    const DetectionParams& det);

/// 0.5 log2(V_b / V_b|a).
double mutual_information_ab(double v_b, double v_b_given_a);

/// Entropy in bits of a single mode with symplectic eigenvalue x.
double von_neumann_h(double x);

/// Sorted descending, both >= 1.
struct SymplecticPair {
  double first = 1.0;
  double second = 1.0;
};

SymplecticPair eve_symplectic_eigenvalues(const EveChannelBlocks& blocks);

/// Eve's state conditioned on Bob's homodyne outcome x_B with variance v_b.
SymplecticPair conditional_symplectic_eigenvalues(const EveChannelBlocks& blocks,
                                                  double v_a, double v_b,
                                                  double t_ch,
                                                  const DetectionParams& det);

/// h(v1) + h(v2) - h(v3) - h(v4), floored at zero.
double holevo_bound(double v1, double v2, double v3, double v4);

struct SubcarrierKeyRate {
  int k = 1;
  double f_hz = 0.0;
  double t_ch = 1.0;
  double eps_multi = 0.0;
  double w = 1.0;
  double v_b = 1.0;
  double v_b_given_a = 1.0;
  double i_ab = 0.0;  // bits
  double i_be = 0.0;  // bits
  double r_k = 0.0;   // unclamped, bits per channel use; 0 when dark
  bool dark = false;
};

/// beta I_AB - I_BE for one subcarrier, with V_A = V_mod + V_0.
SubcarrierKeyRate subcarrier_key_rate(const SubcarrierChannelState& state,
                                      const ModulatorParams& p,
                                      const ThermalEnvironment& env,
                                      const DetectionParams& det,
                                      const KeyRateOptions& opts = {});

struct KeyRateBreakdown {
  std::vector<SubcarrierKeyRate> per_subcarrier;
  double r_ofdm = 0.0;  // sum of max(r_k, 0)
};

KeyRateBreakdown ofdm_key_rate(const CarrierPlan& plan, const ModulatorParams& p,
                               const ChannelSpec& spec,
                               const ThermalEnvironment& env,
                               const DetectionParams& det, double distance_m,
                               NoiseMode noise_mode = NoiseMode::worst_case,
                               const KeyRateOptions& opts = {});

}  // namespace ofdmqkd
