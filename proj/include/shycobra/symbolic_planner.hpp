#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "shycobra/schema.hpp"

namespace shycobra {

class UnsolvableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered ground actions achieving `goal` from the state the skeleton was planned in.
struct PlanSkeleton {
  std::vector<GroundAction> actions;
  std::vector<Literal> goal;

  std::size_t size() const { return actions.size(); }
  bool empty() const { return actions.empty(); }
};

/// True when executing the skeleton symbolically from `init` succeeds action by action and
/// ends in a state satisfying the skeleton's goal.
inline bool validate_skeleton(const PlanSkeleton& plan, SymbolicState state) {
  for (const auto& a : plan.actions) {
    if (!applicable(a, state)) return false;
    state = apply_effects(a, std::move(state));
  }
  return satisfies(state, plan.goal);
}

/// Breadth-first forward search over ground actions with duplicate-state pruning.
/// Ground actions are expanded in lexicographic (action name, object ids) order, so returned
/// plans are shortest by action count and reproducible.
class SymbolicPlanner {
 public:
  SymbolicPlanner(std::vector<ActionSchema> schemas, std::vector<std::string> objects, std::size_t depth_bound = 40)
      : objects_(std::move(objects)), depth_bound_(depth_bound) {
    std::sort(objects_.begin(), objects_.end());
    for (auto& s : schemas) schemas_.push_back(std::make_shared<const ActionSchema>(std::move(s)));
    for (const auto& s : schemas_)
      for (const auto& l : s->effects) fluents_.insert(l.predicate);
  }

  const std::vector<std::shared_ptr<const ActionSchema>>& schemas() const { return schemas_; }
  std::shared_ptr<const ActionSchema> schema(std::string_view name) const {
    for (const auto& s : schemas_)
      if (s->name == name) return s;
    throw std::invalid_argument("unknown action schema '" + std::string(name) + "'");
  }

  /// Shortest skeleton from `init` to `goal`; throws UnsolvableError if none exists within the depth bound.
  PlanSkeleton plan(const SymbolicState& init, const std::vector<Literal>& goal) const {
    PlanSkeleton out;
    out.goal = goal;
    if (satisfies(init, goal)) return out;
    const auto actions = ground_all(init);

    struct Node {
      SymbolicState state;
      int parent;
      int action;
      std::size_t depth;
    };
    std::vector<Node> nodes{{init, -1, -1, 0}};
    std::set<SymbolicState> seen{init};
    std::deque<int> frontier{0};
    while (!frontier.empty()) {
      const int n = frontier.front();
      frontier.pop_front();
      if (nodes[n].depth >= depth_bound_) continue;
      for (std::size_t ai = 0; ai < actions.size(); ++ai) {
        const auto& a = actions[ai];
        if (!a.applicable(nodes[n].state)) continue;
        SymbolicState next = a.apply(nodes[n].state);
        if (!seen.insert(next).second) continue;
        nodes.push_back({std::move(next), n, static_cast<int>(ai), nodes[n].depth + 1});
        const int child = static_cast<int>(nodes.size()) - 1;
        if (satisfies(nodes[child].state, goal)) {
          std::vector<int> chain;
          for (int c = child; nodes[c].parent >= 0; c = nodes[c].parent) chain.push_back(nodes[c].action);
          std::reverse(chain.begin(), chain.end());
          for (int idx : chain) out.actions.push_back(ground(actions[idx].schema, actions[idx].bindings));
          return out;
        }
        frontier.push_back(child);
      }
    }
    throw UnsolvableError("goal unreachable within depth " + std::to_string(depth_bound_));
  }

  /// Replans from the post-observation state after `failed` did not produce its declared effect;
  /// the unexecuted suffix of `current` is discarded and replaced.
  PlanSkeleton update_plan_skeleton(const PlanSkeleton& current, const GroundAction& failed,
                                    const SymbolicState& state, const std::vector<Literal>& goal) const {
    (void)current;
    (void)failed;
    return plan(state, goal);
  }

 private:
  struct Candidate {
    std::shared_ptr<const ActionSchema> schema;
    std::map<std::string, std::string> bindings;
    std::vector<Atom> pre_pos, pre_neg, add, del;

    bool applicable(const SymbolicState& s) const {
      for (const auto& a : pre_pos)
        if (!s.count(a)) return false;
      for (const auto& a : pre_neg)
        if (s.count(a)) return false;
      return true;
    }
    SymbolicState apply(SymbolicState s) const {
      for (const auto& a : del) s.erase(a);
      for (const auto& a : add) s.insert(a);
      return s;
    }
  };

  std::vector<Candidate> ground_all(const SymbolicState& init) const {
    std::vector<Candidate> out;
    for (const auto& schema : schemas_) {
      const auto params = schema->symbolic_parameters();
      std::map<std::string, std::string> binding;
      enumerate(*schema, schema, params, 0, binding, init, out);
    }
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
      if (a.schema->name != b.schema->name) return a.schema->name < b.schema->name;
      for (const auto& p : a.schema->parameters) {
        if (p.kind != ParamKind::kSymbol) continue;
        const auto& x = a.bindings.at(p.name);
        const auto& y = b.bindings.at(p.name);
        if (x != y) return x < y;
      }
      return false;
    });
    return out;
  }

  // Binding is rejected as soon as a fully-bound static precondition fails against `init`.
  bool static_ok(const ActionSchema& s, const std::map<std::string, std::string>& b, const SymbolicState& init) const {
    for (const auto& l : s.preconditions) {
      if (fluents_.count(l.predicate)) continue;
      std::vector<std::string> args;
      bool bound = true;
      for (const auto& x : l.args) {
        const auto* p = s.find_parameter(x);
        if (p && p->kind != ParamKind::kSymbol) {
          bound = false;
          break;
        }
        if (p) {
          auto it = b.find(x);
          if (it == b.end()) {
            bound = false;
            break;
          }
          args.push_back(it->second);
        } else {
          args.push_back(x);
        }
      }
      if (!bound) continue;
      if (init.count(make_atom(l.predicate, args)) == l.negated) return false;
    }
    return true;
  }

  void enumerate(const ActionSchema& s, const std::shared_ptr<const ActionSchema>& sp, const std::vector<Parameter>& params,
                 std::size_t k, std::map<std::string, std::string>& binding, const SymbolicState& init,
                 std::vector<Candidate>& out) const {
    if (!static_ok(s, binding, init)) return;
    if (k == params.size()) {
      Candidate c;
      c.schema = sp;
      c.bindings = binding;
      GroundAction probe;
      probe.schema = sp;
      probe.objects = binding;
      for (const auto& l : s.preconditions)
        if (auto a = ground_literal(l, probe)) (l.negated ? c.pre_neg : c.pre_pos).push_back(*a);
      for (const auto& l : s.effects)
        if (auto a = ground_literal(l, probe)) (l.negated ? c.del : c.add).push_back(*a);
      out.push_back(std::move(c));
      return;
    }
    for (const auto& o : objects_) {
      binding[params[k].name] = o;
      enumerate(s, sp, params, k + 1, binding, init, out);
    }
    binding.erase(params[k].name);
  }

  std::vector<std::shared_ptr<const ActionSchema>> schemas_;
  std::vector<std::string> objects_;
  std::set<std::string> fluents_;
  std::size_t depth_bound_;
};

}  // namespace shycobra
