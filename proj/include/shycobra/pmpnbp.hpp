#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "shycobra/particles.hpp"
#include "shycobra/random.hpp"

namespace shycobra {

/// Bipartite factor graph whose variable beliefs are particle sets of V.
template <class V>
struct FactorGraph {
  struct Variable {
    std::string name;
    int kind = 0;           // model-defined tag
    bool anchored = false;  // evidence: belief never resampled
    ParticleSet<V> belief;
    std::vector<std::size_t> factors;  // ρ(x), in insertion order
    std::optional<V> estimate;         // current max-product point estimate, maintained by the engine
  };
  struct Factor {
    std::string name;
    int kind = 0;
    std::vector<std::size_t> scope;  // S_f, ordered
  };

  std::vector<Variable> variables;
  std::vector<Factor> factors;

  std::size_t add_variable(std::string name, int kind = 0, bool anchored = false) {
    variables.push_back({std::move(name), kind, anchored, {}, {}, std::nullopt});
    return variables.size() - 1;
  }

  std::size_t add_factor(std::string name, int kind, std::vector<std::size_t> scope) {
    if (scope.empty()) throw std::invalid_argument("factor '" + name + "' has an empty scope");
    for (auto v : scope)
      if (v >= variables.size()) throw std::out_of_range("factor '" + name + "' refers to a missing variable");
    factors.push_back({std::move(name), kind, std::move(scope)});
    const std::size_t f = factors.size() - 1;
    for (auto v : factors[f].scope) variables[v].factors.push_back(f);
    return f;
  }

  /// Position of variable x in the scope of factor f.
  std::size_t position(std::size_t f, std::size_t x) const {
    const auto& s = factors[f].scope;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] == x) return i;
    throw std::out_of_range("variable is not in the factor scope");
  }
};

enum class Pooling {
  kUnion,    // pooled union of particle sets, resampled to M
  kProduct,  // pointwise product over a fixed shared support (no resampling)
};

enum class TraceKind { kVariableToFactor, kFactorToVariable, kBelief };

template <class V>
struct TraceRecord {
  TraceKind kind;
  std::size_t iteration;
  std::string source;
  std::string target;
  const ParticleSet<V>* particles;
};

template <class V>
struct InferenceOptions {
  std::size_t iterations = 10;
  std::uint64_t seed = 0;
  Pooling pooling = Pooling::kUnion;
  bool pairwise_max = false;   // exact max over the neighbour's particles for arity-2 factors
  bool stop_on_convergence = true;
  std::size_t patience = 2;    // consecutive stable iterations required to declare convergence
  std::function<void(const TraceRecord<V>&)> trace;
};

struct InferenceResult {
  std::size_t iterations = 0;
  bool converged = false;
};

/// Max-product Pull Message Passing NBP.
///
/// The model supplies the potentials and per-kind behaviour:
///   double weigh(const FactorGraph<V>&, std::size_t f, std::size_t pos, std::span<const V* const> values, Rng&) const;
///     σ_f at `values` (scope-ordered; values[pos] is the candidate for the target variable).
///   V jitter(const FactorGraph<V>&, std::size_t x, const V&, Rng&) const;
///   bool same(const FactorGraph<V>&, std::size_t x, const V& a, const V& b) const;  // within ε
template <class V, class Model>
class Pmpnbp {
 public:
  Pmpnbp(FactorGraph<V>& g, const Model& model, InferenceOptions<V> opt = {})
      : g_(g), model_(model), opt_(std::move(opt)) {
    for (const auto& v : g_.variables)
      if (v.belief.size() == 0) throw std::invalid_argument("variable '" + v.name + "' has no particles");
    for (auto& v : g_.variables) v.estimate = v.belief.best();
    f2v_.resize(g_.factors.size());
    v2f_.resize(g_.factors.size());
    for (std::size_t f = 0; f < g_.factors.size(); ++f) {
      f2v_[f].resize(g_.factors[f].scope.size());
      v2f_[f].resize(g_.factors[f].scope.size());
    }
  }

  InferenceResult run() {
    InferenceResult r;
    std::vector<V> best = assignment();
    std::size_t stable = 0;
    for (std::size_t m = 1; m <= opt_.iterations; ++m) {
      step(m);
      r.iterations = m;
      std::vector<V> now = assignment();
      bool same = true;
      for (std::size_t x = 0; x < now.size() && same; ++x) same = model_.same(g_, x, best[x], now[x]);
      stable = same ? stable + 1 : 0;
      best = std::move(now);
      if (stable >= opt_.patience) {
        r.converged = true;
        if (opt_.stop_on_convergence) break;
      }
    }
    return r;
  }

  /// One synchronous iteration: variable→factor, factor→variable, then belief updates.
  void step(std::size_t m) {
    const auto previous_f2v = f2v_;
    for (std::size_t f = 0; f < g_.factors.size(); ++f)
      for (std::size_t pos = 0; pos < g_.factors[f].scope.size(); ++pos) {
        v2f_[f][pos] = variable_to_factor(g_.factors[f].scope[pos], f, previous_f2v, m);
        emit(TraceKind::kVariableToFactor, m, g_.variables[g_.factors[f].scope[pos]].name, g_.factors[f].name,
             v2f_[f][pos]);
      }
    for (std::size_t f = 0; f < g_.factors.size(); ++f)
      for (std::size_t pos = 0; pos < g_.factors[f].scope.size(); ++pos) {
        f2v_[f][pos] = factor_to_variable(f, pos, m);
        emit(TraceKind::kFactorToVariable, m, g_.factors[f].name, g_.variables[g_.factors[f].scope[pos]].name,
             *f2v_[f][pos]);
      }
    std::vector<ParticleSet<V>> beliefs(g_.variables.size());
    for (std::size_t x = 0; x < g_.variables.size(); ++x) beliefs[x] = update_belief(x, m);
    for (std::size_t x = 0; x < g_.variables.size(); ++x) g_.variables[x].estimate = estimate(x, beliefs[x]);
    for (std::size_t x = 0; x < g_.variables.size(); ++x) {
      g_.variables[x].belief = std::move(beliefs[x]);
      emit(TraceKind::kBelief, m, g_.variables[x].name, g_.variables[x].name, g_.variables[x].belief);
    }
  }

  /// Highest-weight belief sample per variable (lowest index on ties).
  std::vector<V> assignment() const {
    std::vector<V> out;
    out.reserve(g_.variables.size());
    for (const auto& v : g_.variables) out.push_back(v.belief.best());
    return out;
  }

  const ParticleSet<V>& factor_message(std::size_t f, std::size_t pos) const { return *f2v_[f][pos]; }
  const ParticleSet<V>& variable_message(std::size_t f, std::size_t pos) const { return v2f_[f][pos]; }

 private:
  using Slot = std::optional<ParticleSet<V>>;

  Rng stream(std::uint64_t phase, std::size_t a, std::size_t b, std::size_t m) const {
    return make_stream(opt_.seed, {phase, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b),
                                   static_cast<std::uint64_t>(m)});
  }

  void emit(TraceKind k, std::size_t m, const std::string& s, const std::string& t, const ParticleSet<V>& p) const {
    if (opt_.trace) opt_.trace(TraceRecord<V>{k, m, s, t, &p});
  }

  /// Incoming factor messages to x, skipping factor `except` (pass npos for none).
  std::vector<const ParticleSet<V>*> incoming(std::size_t x, std::size_t except,
                                             const std::vector<std::vector<Slot>>& msgs) const {
    std::vector<const ParticleSet<V>*> out;
    for (std::size_t f : g_.variables[x].factors) {
      if (f == except) continue;
      const auto& slot = msgs[f][g_.position(f, x)];
      if (slot) out.push_back(&*slot);
    }
    return out;
  }

  ParticleSet<V> product(std::size_t x, const std::vector<const ParticleSet<V>*>& sets) const {
    ParticleSet<V> out = g_.variables[x].belief;
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out[i].weight = 1.0;
    for (const auto* s : sets) {
      if (s->size() != n) throw std::logic_error("product pooling needs a shared particle support");
      for (std::size_t i = 0; i < n; ++i) out[i].weight *= (*s)[i].weight;
    }
    out.normalize();
    return out;
  }

  /// Pooled union resampled to the variable's particle count. With `jitter`, every copy except the
  /// first copy of the best pooled particle is perturbed by the model. When the sets share one
  /// support (messages evaluated at the same belief samples), each drawn copy is weighted by the
  /// product of all sets' weights at its source sample; otherwise by its pooled weight.
  ParticleSet<V> resample(std::size_t x, const std::vector<const ParticleSet<V>*>& sets, Rng& rng, bool jitter) const {
    std::vector<const Particle<V>*> pooled;
    std::vector<double> w;
    std::vector<std::size_t> source;
    bool aligned = true;
    for (const auto* s : sets) {
      const double total = s->total_weight();
      aligned = aligned && s->size() == sets.front()->size();
      for (std::size_t i = 0; i < s->size(); ++i) {
        pooled.push_back(&(*s)[i]);
        source.push_back(i);
        w.push_back(total > 0.0 ? (*s)[i].weight / total : 1.0 / static_cast<double>(s->size()));
      }
    }
    std::vector<double> joint;
    if (aligned) {
      joint.assign(sets.front()->size(), 1.0);
      for (const auto* s : sets) {
        const double total = s->total_weight();
        for (std::size_t i = 0; i < s->size(); ++i)
          joint[i] *= total > 0.0 ? (*s)[i].weight / total : 1.0 / static_cast<double>(s->size());
      }
    }
    auto weight_of = [&](std::size_t idx) { return aligned ? joint[source[idx]] : w[idx]; };
    std::size_t elite = 0;
    for (std::size_t i = 1; i < w.size(); ++i)
      if (weight_of(i) > weight_of(elite)) elite = i;
    ParticleSet<V> out;
    bool elite_kept = false;
    auto drawn = systematic_indices(w, g_.variables[x].belief.size(), rng);
    if (!drawn.empty() && std::find(drawn.begin(), drawn.end(), elite) == drawn.end()) drawn.front() = elite;
    for (std::size_t idx : drawn) {
      const auto& src = *pooled[idx];
      if (jitter && !(idx == elite && !elite_kept))
        out.push_back({model_.jitter(g_, x, src.value, rng), weight_of(idx)});
      else
        out.push_back({src.value, weight_of(idx)});
      if (idx == elite) elite_kept = true;
    }
    out.normalize();
    return out;
  }

  ParticleSet<V> variable_to_factor(std::size_t x, std::size_t f, const std::vector<std::vector<Slot>>& prev,
                                    std::size_t m) const {
    const auto sets = incoming(x, f, prev);
    if (sets.empty()) return g_.variables[x].belief;
    if (opt_.pooling == Pooling::kProduct) return product(x, sets);
    Rng rng = stream(1, x, f, m);
    return resample(x, sets, rng, false);
  }

  ParticleSet<V> factor_to_variable(std::size_t f, std::size_t pos, std::size_t m) const {
    const auto& factor = g_.factors[f];
    const std::size_t x = factor.scope[pos];
    const auto& bel = g_.variables[x].belief;
    Rng rng = stream(2, f, pos, m);
    std::vector<const V*> values(factor.scope.size(), nullptr);
    for (std::size_t k = 0; k < factor.scope.size(); ++k)
      if (k != pos) values[k] = &v2f_[f][k].best();

    auto safe = [&](std::span<const V* const> vals) {
      double w;
      try {
        w = model_.weigh(g_, f, pos, vals, rng);
      } catch (const std::exception&) {
        w = 0.0;
      }
      return std::isfinite(w) && w > 0.0 ? w : 0.0;
    };

    ParticleSet<V> out;
    out.reserve(bel.size());
    const bool pairwise = opt_.pairwise_max && factor.scope.size() == 2;
    for (std::size_t i = 0; i < bel.size(); ++i) {
      values[pos] = &bel[i].value;
      double w = 0.0;
      if (pairwise) {
        const std::size_t other = 1 - pos;
        const auto& msg = v2f_[f][other];
        const double total = msg.total_weight();
        for (std::size_t j = 0; j < msg.size(); ++j) {
          values[other] = &msg[j].value;
          const double wj = total > 0.0 ? msg[j].weight / total : 1.0 / static_cast<double>(msg.size());
          w = std::max(w, safe(values) * wj);
        }
      } else {
        w = safe(values);
      }
      out.push_back({bel[i].value, w});
    }
    out.normalize();
    return out;
  }

  /// Best sample of the new belief; for anchored variables, the belief sample maximising the
  /// product of the incoming messages (their belief itself never changes).
  V estimate(std::size_t x, const ParticleSet<V>& updated) const {
    const auto& var = g_.variables[x];
    if (!var.anchored) return updated.best();
    const auto sets = incoming(x, std::numeric_limits<std::size_t>::max(), f2v_);
    const std::size_t n = var.belief.size();
    std::vector<double> w(n, 1.0);
    for (const auto* s : sets) {
      if (s->size() != n) return var.belief.best();
      const double total = s->total_weight();
      for (std::size_t i = 0; i < n; ++i) w[i] *= total > 0.0 ? (*s)[i].weight / total : 1.0;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (w[i] > w[best]) best = i;
    return var.belief[best].value;
  }

  ParticleSet<V> update_belief(std::size_t x, std::size_t m) const {
    const auto& var = g_.variables[x];
    if (var.anchored) return var.belief;
    const auto sets = incoming(x, std::numeric_limits<std::size_t>::max(), f2v_);
    if (sets.empty()) return var.belief;
    if (opt_.pooling == Pooling::kProduct) return product(x, sets);
    Rng rng = stream(3, x, 0, m);
    return resample(x, sets, rng, true);
  }

  FactorGraph<V>& g_;
  const Model& model_;
  InferenceOptions<V> opt_;
  std::vector<std::vector<Slot>> f2v_;
  std::vector<std::vector<ParticleSet<V>>> v2f_;
};

template <class V, class Model>
InferenceResult run_inference(FactorGraph<V>& g, const Model& model, InferenceOptions<V> opt = {}) {
  Pmpnbp<V, Model> engine(g, model, std::move(opt));
  return engine.run();
}

/// Highest-weight belief sample of every variable (lowest index on ties).
template <class V>
std::vector<V> max_product_assignment(const FactorGraph<V>& g) {
  std::vector<V> out;
  out.reserve(g.variables.size());
  for (const auto& v : g.variables) out.push_back(v.belief.best());
  return out;
}

/// CSV trace sink: one record per message with its three largest weights.
template <class V>
class TraceCsv {
 public:
  explicit TraceCsv(std::ostream& os) : os_(os) { os_ << "kind,iteration,source,target,size,w1,w2,w3\n"; }

  void operator()(const TraceRecord<V>& r) const {
    static constexpr const char* kNames[] = {"v2f", "f2v", "belief"};
    std::vector<double> w;
    for (const auto& p : *r.particles) w.push_back(p.weight);
    std::partial_sort(w.begin(), w.begin() + static_cast<long>(std::min<std::size_t>(3, w.size())), w.end(),
                      std::greater<>());
    os_ << kNames[static_cast<int>(r.kind)] << ',' << r.iteration << ',' << r.source << ',' << r.target << ','
        << r.particles->size();
    for (std::size_t i = 0; i < 3; ++i) {
      os_ << ',';
      if (i < w.size()) os_ << w[i];
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

}  // namespace shycobra
