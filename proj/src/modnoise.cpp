#include "ofdmqkd/modnoise.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "ofdmqkd/errors.hpp"

namespace ofdmqkd {

void CarrierPlan::validate() const {
  if (!(base_hz > 0.0) || !std::isfinite(base_hz)) {
    throw DomainError("carrier plan: base frequency must be > 0");
  }
  if (!(spacing_hz > 0.0) || !std::isfinite(spacing_hz)) {
    throw DomainError("carrier plan: subcarrier spacing must be > 0");
  }
  if (subcarriers < 1) {
    throw DomainError("carrier plan: need at least one subcarrier");
  }
}

Frequency CarrierPlan::frequency(int k) const {
  if (k < 1 || k > subcarriers) {
    throw RangeError("subcarrier index " + std::to_string(k) +
                     " outside [1, " + std::to_string(subcarriers) + "]");
  }
  return Frequency::hertz(base_hz + k * spacing_hz);
}

Frequency CarrierPlan::band_centre() const {
  return Frequency::hertz(base_hz + 0.5 * (1 + subcarriers) * spacing_hz);
}

std::optional<std::int64_t> CarrierPlan::sum_frequency_offset() const {
  const double r = 2.0 * base_hz / spacing_hz;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, std::abs(r))) {
    return static_cast<std::int64_t>(nearest);
  }
  return std::nullopt;
}

void ModulatorParams::validate() const {
  if (!(mu > 0.0)) throw DomainError("modulator: mu must be > 0");
  if (!(a_sig > 0.0)) throw DomainError("modulator: a_sig must be > 0");
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw DomainError("modulator: kappa must lie in [0, 1]");
  }
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
    throw DomainError("modulator: theta must lie in [0, pi/2]");
  }
  if (!(v_mod >= 0.0) || !std::isfinite(v_mod)) {
    throw DomainError("modulator: v_mod must be >= 0");
  }
}

namespace {

// A product contributes only when its input tones are pairwise distinct;
// otherwise it collapses onto a first-order tone (e.g. f_m + f_n - f_m).
bool distinct(int a, int b) { return a != b; }
bool distinct(int a, int b, int c) { return a != b && a != c && b != c; }

bool in_band(std::int64_t i, int n) { return i >= 1 && i <= n; }

std::vector<ImdCounts> enumerate_counts(int n, std::optional<std::int64_t> r) {
  std::vector<ImdCounts> table(n);
  for (int k = 1; k <= n; ++k) {
    ImdCounts& c = table[k - 1];
    // k = 2m - n: roles differ, so (m, n) is ordered.
    for (int m = 1; m <= n; ++m) {
      const std::int64_t j = 2 * m - k;
      if (in_band(j, n) && distinct(m, static_cast<int>(j))) ++c.m1;
    }
    // k = m + n - l: {m, n} unordered.
    for (int m = 1; m <= n; ++m) {
      for (int j = m + 1; j <= n; ++j) {
        const std::int64_t l = m + j - k;
        if (in_band(l, n) && distinct(m, j, static_cast<int>(l))) ++c.w2;
      }
    }
    if (!r) continue;
    // k = 2m + n + r.
    for (int m = 1; m <= n; ++m) {
      const std::int64_t j = k - 2 * m - *r;
      if (in_band(j, n) && distinct(m, static_cast<int>(j))) ++c.m2;
    }
    // k = m + n + l + r: {m, n, l} unordered.
    for (int m = 1; m <= n; ++m) {
      for (int j = m + 1; j <= n; ++j) {
        const std::int64_t l = k - *r - m - j;
        if (l > j && in_band(l, n)) ++c.w1;
      }
    }
    // k = m - n - l - r: {n, l} unordered.
    for (int j = 1; j <= n; ++j) {
      for (int l = j + 1; l <= n; ++l) {
        const std::int64_t m = k + j + l + *r;
        if (in_band(m, n) && distinct(static_cast<int>(m), j, l)) ++c.w3;
      }
    }
  }
  return table;
}

using CountKey = std::pair<int, std::optional<std::int64_t>>;

struct CountCache {
  std::mutex mutex;
  std::map<CountKey, std::shared_ptr<const std::vector<ImdCounts>>> tables;
};

CountCache& count_cache() {
  static CountCache cache;
  return cache;
}

double sq(double x) { return x * x; }

}  // namespace

const std::vector<ImdCounts>& imd_count_table(const CarrierPlan& plan) {
  plan.validate();
  const CountKey key{plan.subcarriers, plan.sum_frequency_offset()};
  CountCache& cache = count_cache();
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.tables.find(key); it != cache.tables.end()) {
      return *it->second;
    }
  }
  auto table = std::make_shared<const std::vector<ImdCounts>>(
      enumerate_counts(key.first, key.second));
  std::lock_guard lock(cache.mutex);
  // Entries are never erased, so the reference stays valid.
  auto [it, inserted] = cache.tables.emplace(key, std::move(table));
  return *it->second;
}

ImdCounts imd_counts(const CarrierPlan& plan, int k) {
  plan.validate();
  if (k < 1 || k > plan.subcarriers) {
    throw RangeError("subcarrier index " + std::to_string(k) +
                     " outside [1, " + std::to_string(plan.subcarriers) + "]");
  }
  return imd_count_table(plan)[k - 1];
}

double iq_imbalance_variance(const ModulatorParams& p) {
  return sq(p.a_sig * p.mu) * p.v_mod *
         (sq(p.kappa) + 1.0 - 2.0 * p.kappa * std::cos(p.theta));
}

namespace {
// (1 + 2 kappa cos(theta) + kappa^2), common to both IMD terms.
double imd_gain(const ModulatorParams& p) {
  return 1.0 + 2.0 * p.kappa * std::cos(p.theta) + sq(p.kappa);
}
}  // namespace

double imd_two_tone_variance(const ModulatorParams& p, const ImdCounts& c) {
  const double s1 = p.v_mod;            // <I^2>
  const double s2 = 2.0 * s1 * s1;      // <I^4> as used by the noise model
  const double sum = static_cast<double>(c.m1 + c.m2);
  const double diff = static_cast<double>(c.m1 - c.m2);
  return sq(p.a_sig) * std::pow(p.mu, 6) / 8.0 * imd_gain(p) *
         (sq(sum) * s2 * s1 + 2.0 * sq(diff) * s1 * s1 * s1);
}

double imd_three_tone_variance(const ModulatorParams& p, const ImdCounts& c) {
  const double s1 = p.v_mod;
  const double w = sq(static_cast<double>(c.w1)) +
                   sq(static_cast<double>(c.w2)) +
                   sq(static_cast<double>(c.w3));
  return sq(p.a_sig) * std::pow(p.mu, 6) / 4.0 * imd_gain(p) * w * s1 * s1 * s1;
}

double modulation_noise(const CarrierPlan& plan, const ModulatorParams& p,
                        int k) {
  const ImdCounts c = imd_counts(plan, k);
  return iq_imbalance_variance(p) + imd_two_tone_variance(p, c) +
         imd_three_tone_variance(p, c);
}

WorstModulationNoise worst_modulation_noise(const CarrierPlan& plan,
                                            const ModulatorParams& p) {
  const auto& table = imd_count_table(plan);
  const double iq = iq_imbalance_variance(p);
  WorstModulationNoise worst{1, -1.0};
  for (int k = 1; k <= plan.subcarriers; ++k) {
    const ImdCounts& c = table[k - 1];
    const double eps =
        iq + imd_two_tone_variance(p, c) + imd_three_tone_variance(p, c);
    if (eps > worst.value) worst = {k, eps};
  }
  return worst;
}

}  // namespace ofdmqkd
