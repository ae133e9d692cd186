#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "shycobra/random.hpp"

namespace shycobra {

template <class V>
struct Particle {
  V value{};
  double weight = 0.0;
};

/// A weighted sample set approximating one variable's belief or one message.
/// Weights are kept non-negative; `normalize()` makes them sum to one.
template <class V>
class ParticleSet {
 public:
  using value_type = Particle<V>;

  ParticleSet() = default;
  explicit ParticleSet(std::vector<Particle<V>> particles) : particles_(std::move(particles)) {}

  /// Uniformly weighted set over `values`.
  static ParticleSet uniform(std::vector<V> values) {
    ParticleSet s;
    const double w = values.empty() ? 0.0 : 1.0 / static_cast<double>(values.size());
    s.particles_.reserve(values.size());
    for (auto& v : values) s.particles_.push_back({std::move(v), w});
    return s;
  }

  std::size_t size() const { return particles_.size(); }
  bool empty() const { return particles_.empty(); }
  const Particle<V>& operator[](std::size_t i) const { return particles_[i]; }
  Particle<V>& operator[](std::size_t i) { return particles_[i]; }
  auto begin() const { return particles_.begin(); }
  auto end() const { return particles_.end(); }
  auto begin() { return particles_.begin(); }
  auto end() { return particles_.end(); }
  void push_back(Particle<V> p) { particles_.push_back(std::move(p)); }
  void reserve(std::size_t n) { particles_.reserve(n); }
  const std::vector<Particle<V>>& particles() const { return particles_; }

  double total_weight() const {
    double t = 0.0;
    for (const auto& p : particles_) t += p.weight;
    return t;
  }

  /// Normalises weights to sum to one. Non-finite or negative weights count as zero; if the
  /// total mass is zero the set falls back to uniform weights.
  void normalize() {
    double total = 0.0;
    for (auto& p : particles_) {
      if (!std::isfinite(p.weight) || p.weight < 0.0) p.weight = 0.0;
      total += p.weight;
    }
    if (particles_.empty()) return;
    if (!(total > 0.0) || !std::isfinite(total)) {
      const double w = 1.0 / static_cast<double>(particles_.size());
      for (auto& p : particles_) p.weight = w;
      return;
    }
    for (auto& p : particles_) p.weight /= total;
  }

  /// Index of the highest-weighted particle; ties go to the lowest index.
  std::size_t argmax() const {
    if (particles_.empty()) throw std::out_of_range("argmax of empty particle set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < particles_.size(); ++i)
      if (particles_[i].weight > particles_[best].weight) best = i;
    return best;
  }

  const V& best() const { return particles_[argmax()].value; }

  std::vector<V> values() const {
    std::vector<V> out;
    out.reserve(particles_.size());
    for (const auto& p : particles_) out.push_back(p.value);
    return out;
  }

 private:
  std::vector<Particle<V>> particles_;
};

/// Systematic (low-variance) resampling: returns `m` source indices chosen with probability
/// proportional to weight. Weights need not be normalised; zero total mass selects uniformly.
inline std::vector<std::size_t> systematic_indices(std::span<const double> weights, std::size_t m, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(m);
  if (weights.empty() || m == 0) return out;
  double total = 0.0;
  for (double w : weights) total += (std::isfinite(w) && w > 0.0) ? w : 0.0;
  const std::size_t n = weights.size();
  if (!(total > 0.0)) {
    for (std::size_t i = 0; i < m; ++i) out.push_back((i * n) / m);
    return out;
  }
  const double step = total / static_cast<double>(m);
  double u = uniform01(rng) * step;
  double cumulative = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double target = u + static_cast<double>(i) * step;
    while (j + 1 < n) {
      const double w = (std::isfinite(weights[j]) && weights[j] > 0.0) ? weights[j] : 0.0;
      if (cumulative + w > target) break;
      cumulative += w;
      ++j;
    }
    out.push_back(j);
  }
  return out;
}

/// Pools several weighted sets (weights taken as given), renormalises the pooled weights and
/// resamples `m` particles. Each resampled particle keeps its pooled weight (renormalised
/// afterwards), so the highest-weighted sample stays identifiable after resampling.
/// `jitter(value, rng)` perturbs each copy; pass an identity for no jitter.
template <class V, class Jitter>
ParticleSet<V> pool_and_resample(std::span<const ParticleSet<V>* const> sets, std::size_t m, Rng& rng,
                                 Jitter&& jitter) {
  std::vector<const Particle<V>*> pooled;
  std::vector<double> weights;
  for (const auto* s : sets) {
    for (const auto& p : *s) {
      pooled.push_back(&p);
      weights.push_back(p.weight);
    }
  }
  ParticleSet<V> out;
  if (pooled.empty()) return out;
  out.reserve(m);
  for (std::size_t idx : systematic_indices(weights, m, rng)) {
    const auto& src = *pooled[idx];
    out.push_back({jitter(src.value, rng), src.weight});
  }
  out.normalize();
  return out;
}

template <class V>
ParticleSet<V> pool_and_resample(std::span<const ParticleSet<V>* const> sets, std::size_t m, Rng& rng) {
  return pool_and_resample(sets, m, rng, [](const V& v, Rng&) { return v; });
}

}  // namespace shycobra
