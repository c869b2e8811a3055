#include "ofdmqkd/skr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "ofdmqkd/errors.hpp"
#include "ofdmqkd/text.hpp"

namespace ofdmqkd {

namespace {

constexpr double kEigenTolerance = 1e-9;

double sq(double x) { return x * x; }

// Symplectic eigenvalues must be >= 1; values within tolerance snap to 1.
double clamp_eigenvalue(double v, const char* which) {
  if (v >= 1.0) return v;
  if (v >= 1.0 - kEigenTolerance) return 1.0;
  throw PhysicalityError(std::string(which) + " symplectic eigenvalue " +
                         format_double(v) + " below 1");
}

SymplecticPair sorted(double x, double y) {
  if (x < y) std::swap(x, y);
  return {x, y};
}

}  // namespace

void DetectionParams::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("detection: eta must lie in (0, 1]");
  if (!(s_trusted >= 1.0) || !std::isfinite(s_trusted)) {
    throw DomainError("detection: trusted noise S must be >= 1");
  }
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("detection: beta must lie in (0, 1]");
}

EveChannelBlocks eve_channel_blocks(double v_a, double t_ch, double w) {
  if (!(v_a >= 1.0)) throw DomainError("V_A must be >= 1");
  if (!(t_ch > 0.0 && t_ch <= 1.0)) throw DomainError("transmissivity must lie in (0, 1]");
  if (!(w >= 1.0) || !std::isfinite(w)) throw DomainError("W must be >= 1");
  return {w, (1.0 - t_ch) * v_a + t_ch * w, std::sqrt(t_ch * (w * w - 1.0))};
}

double channel_thermal_noise(Frequency f, const ThermalEnvironment& env) {
  return vacuum_variance(f, env);
}

double injected_noise(const KeyRateOptions& opts, Frequency f,
                      const ThermalEnvironment& env) {
  switch (opts.noise_policy) {
    case ThermalNoisePolicy::vacuum: return 1.0;
    case ThermalNoisePolicy::ambient: return channel_thermal_noise(f, env);
    case ThermalNoisePolicy::fixed:
      if (!(opts.fixed_w >= 1.0) || !std::isfinite(opts.fixed_w)) {
        throw DomainError("fixed W must be >= 1");
      }
      return opts.fixed_w;
  }
  return 1.0;
}

double bob_variance(double v, double t_ch, double eps_multi, double w,
                    const DetectionParams& det) {
  det.validate();
  if (!(v >= 0.0) || !(eps_multi >= 0.0) || !(w >= 0.0)) {
    throw DomainError("bob_variance: variances must be >= 0");
  }
  if (!(t_ch > 0.0 && t_ch <= 1.0)) throw DomainError("transmissivity must lie in (0, 1]");
  // eta T eps_single = eta (1 - T) exactly; split to stay finite as T -> 0.
  return det.eta * t_ch * v + det.eta * t_ch * eps_multi +
         det.eta * (1.0 - t_ch) * w + (1.0 - det.eta) * det.s_trusted;
}

double mutual_information_ab(double v_b, double v_b_given_a) {
  if (!(v_b_given_a > 0.0)) throw DomainError("V_b|a must be > 0");
  if (v_b < v_b_given_a) {
    throw DomainError("V_b " + format_double(v_b) + " below V_b|a " +
                      format_double(v_b_given_a));
  }
  return 0.5 * std::log2(v_b / v_b_given_a);
}

double von_neumann_h(double x) {
  if (x < 1.0 - kEigenTolerance || std::isnan(x)) {
    throw DomainError("von Neumann h needs x >= 1, got " + format_double(x));
  }
  if (x <= 1.0) return 0.0;
  // Equal to p log2 p - m log2 m with p = (x+1)/2, m = (x-1)/2, rearranged
  // so that large x does not cancel two terms of size x log2 x.
  const double plus = 0.5 * (x + 1.0);
  const double minus = 0.5 * (x - 1.0);
  return std::log2(plus) + minus * std::log1p(1.0 / minus) / std::numbers::ln2;
}

SymplecticPair eve_symplectic_eigenvalues(const EveChannelBlocks& blocks) {
  const auto [a, b, c] = blocks;
  const double disc = sq(a + b) - 4.0 * c * c;
  if (disc < 0.0) {
    throw PhysicalityError("Eve's covariance is unphysical: (a+b)^2 < 4c^2");
  }
  const double z = std::sqrt(disc);
  const double large = 0.5 * (z + std::abs(a - b));
  // v1 v2 = ab - c^2 avoids cancellation in the smaller root.
  const double small = large > 0.0 ? (a * b - c * c) / large : 0.0;
  const auto pair = sorted(large, small);
  return {clamp_eigenvalue(pair.first, "Eve"), clamp_eigenvalue(pair.second, "Eve")};
}

SymplecticPair conditional_symplectic_eigenvalues(const EveChannelBlocks& blocks,
                                                  double v_a, double v_b,
                                                  double t_ch,
                                                  const DetectionParams& det) {
  if (!(v_b > 0.0)) throw DomainError("V_b must be > 0");
  const auto [a, b, c] = blocks;
  const double x = std::sqrt(det.eta * t_ch * (1.0 - t_ch)) * (a - v_a);
  const double y = std::sqrt(det.eta * (1.0 - t_ch) * (a * a - 1.0));

  // Blocks are diagonal: x quadratures are conditioned, p quadratures are not.
  const double a00 = b - x * x / v_b, a11 = b;
  const double b00 = a - y * y / v_b, b11 = a;
  const double c00 = c - x * y / v_b, c11 = -c;

  const double delta = a00 * a11 + b00 * b11 + 2.0 * c00 * c11;
  // The 4x4 determinant factorizes into x and p parts; in the x part the
  // 1/V_b^2 terms cancel exactly.
  const double det_x = (a * b - c * c) - (a * x * x + b * y * y - 2.0 * c * x * y) / v_b;
  const double det_p = a11 * b11 - c11 * c11;
  const double d = det_x * det_p;

  double disc = delta * delta - 4.0 * d;
  if (disc < 0.0) {
    if (disc < -kEigenTolerance * delta * delta) {
      throw PhysicalityError("conditional covariance is unphysical: Delta^2 < 4 det");
    }
    disc = 0.0;
  }
  const double large_sq = 0.5 * (delta + std::sqrt(disc));
  if (!(large_sq > 0.0) || d < 0.0) {
    throw PhysicalityError("conditional covariance is not positive definite");
  }
  const double v3 = std::sqrt(large_sq);
  const double v4 = std::sqrt(d / large_sq);
  return {clamp_eigenvalue(v3, "conditional"), clamp_eigenvalue(v4, "conditional")};
}

double holevo_bound(double v1, double v2, double v3, double v4) {
  const double value =
      von_neumann_h(v1) + von_neumann_h(v2) - von_neumann_h(v3) - von_neumann_h(v4);
  if (value < -kEigenTolerance) {
    throw PhysicalityError("negative Holevo bound " + format_double(value));
  }
  return std::max(value, 0.0);
}

SubcarrierKeyRate subcarrier_key_rate(const SubcarrierChannelState& state,
                                      const ModulatorParams& p,
                                      const ThermalEnvironment& env,
                                      const DetectionParams& det,
                                      const KeyRateOptions& opts) {
  det.validate();
  const double w = injected_noise(opts, Frequency::hertz(state.reference_hz), env);
  const double v_a = p.v_mod + state.v0;

  SubcarrierKeyRate out;
  out.k = state.k;
  out.f_hz = state.f_hz;
  out.t_ch = state.t_ch;
  out.eps_multi = state.eps_multi;
  out.w = w;
  out.dark = state.dark;
  out.v_b = bob_variance(v_a, state.t_ch, state.eps_multi, w, det);
  out.v_b_given_a = bob_variance(state.v0, state.t_ch, state.eps_multi, w, det);
  out.i_ab = mutual_information_ab(out.v_b, out.v_b_given_a);

  const EveChannelBlocks blocks = eve_channel_blocks(v_a, state.t_ch, w);
  const SymplecticPair eve = eve_symplectic_eigenvalues(blocks);
  const SymplecticPair cond =
      conditional_symplectic_eigenvalues(blocks, v_a, out.v_b, state.t_ch, det);
  out.i_be = holevo_bound(eve.first, eve.second, cond.first, cond.second);
  // Below the dark cutoff I_AB and I_BE cancel to rounding noise; a dark
  // subcarrier carries no key.
  out.r_k = state.dark ? 0.0 : det.beta * out.i_ab - out.i_be;
  return out;
}

KeyRateBreakdown ofdm_key_rate(const CarrierPlan& plan, const ModulatorParams& p,
                               const ChannelSpec& spec,
                               const ThermalEnvironment& env,
                               const DetectionParams& det, double distance_m,
                               NoiseMode noise_mode, const KeyRateOptions& opts) {
  const auto states =
      per_subcarrier_channel(plan, p, spec, env, distance_m, noise_mode, opts.channel);
  KeyRateBreakdown result;
  result.per_subcarrier.reserve(states.size());
  for (const SubcarrierChannelState& s : states) {
    try {
      result.per_subcarrier.push_back(subcarrier_key_rate(s, p, env, det, opts));
    } catch (const PhysicalityError& e) {
      throw PhysicalityError("subcarrier " + std::to_string(s.k) + ": " + e.what());
    }
    result.r_ofdm += std::max(result.per_subcarrier.back().r_k, 0.0);
  }
  return result;
}

}  // namespace ofdmqkd
