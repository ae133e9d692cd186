#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shycobra/sexpr.hpp"

namespace shycobra {

enum class ParamKind { kConfig, kPose, kGrasp, kTrajectory, kSymbol };

inline std::string_view to_string(ParamKind k) {
  switch (k) {
    case ParamKind::kConfig: return "config";
    case ParamKind::kPose: return "pose";
    case ParamKind::kGrasp: return "grasp";
    case ParamKind::kTrajectory: return "trajectory";
    case ParamKind::kSymbol: return "symbol";
  }
  return "?";
}

inline std::optional<ParamKind> param_kind_from_string(std::string_view s) {
  if (s == "config") return ParamKind::kConfig;
  if (s == "pose") return ParamKind::kPose;
  if (s == "grasp") return ParamKind::kGrasp;
  if (s == "trajectory") return ParamKind::kTrajectory;
  if (s == "symbol" || s == "object") return ParamKind::kSymbol;
  return std::nullopt;
}

/// Closed catalog of constraint names and the parameter kinds each one takes.
inline const std::map<std::string, std::vector<ParamKind>, std::less<>>& constraint_catalog() {
  using K = ParamKind;
  static const std::map<std::string, std::vector<ParamKind>, std::less<>> catalog = {
      {"Motion", {K::kConfig, K::kConfig, K::kTrajectory}},
      {"Kin", {K::kConfig, K::kPose, K::kGrasp}},
      {"CFree", {K::kTrajectory}},
      {"CFreeH", {K::kTrajectory, K::kGrasp}},
      {"GraspH", {K::kGrasp}},
      {"Grasp", {K::kConfig, K::kPose, K::kGrasp, K::kConfig, K::kPose}},
      {"Stable", {K::kPose}},
      {"InBasin", {K::kPose}},
      {"InSaucepan", {K::kPose}},
  };
  return catalog;
}

struct Parameter {
  std::string name;  // without the leading '?'
  ParamKind kind = ParamKind::kSymbol;
  friend bool operator==(const Parameter&, const Parameter&) = default;
};

/// A constraint occurrence in a schema: `Name[binding...](arg...)`.
struct ConstraintRef {
  std::string name;
  std::vector<std::string> bindings;  // symbolic parameters (object/region) the constraint is indexed by
  std::vector<std::string> args;      // continuous parameter names
  friend bool operator==(const ConstraintRef&, const ConstraintRef&) = default;
};

/// A (possibly negated) literal whose arguments are parameter names or constants.
struct Literal {
  std::string predicate;
  std::vector<std::string> args;
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<ConstraintRef> constraints;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;

  const Parameter* find_parameter(std::string_view n) const {
    for (const auto& p : parameters)
      if (p.name == n) return &p;
    return nullptr;
  }
  std::vector<Parameter> symbolic_parameters() const {
    std::vector<Parameter> out;
    for (const auto& p : parameters)
      if (p.kind == ParamKind::kSymbol) out.push_back(p);
    return out;
  }
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Problem {
  std::string name;
  std::string domain;
  std::vector<std::string> objects;
  std::vector<Literal> init;
  std::vector<Literal> goal;
};

/// Ground atom, printed canonically as `(pred a b)`.
using Atom = std::string;

inline Atom make_atom(std::string_view predicate, const std::vector<std::string>& args) {
  std::string s = "(";
  s += predicate;
  for (const auto& a : args) {
    s += ' ';
    s += a;
  }
  s += ')';
  return s;
}

/// Closed-world symbolic state: the set of true ground atoms.
using SymbolicState = std::set<Atom>;

/// Unresolved continuous parameter of a ground action.
struct VariableRef {
  std::uint64_t id = 0;
  ParamKind kind = ParamKind::kConfig;
  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

struct GroundAction {
  std::shared_ptr<const ActionSchema> schema;
  std::map<std::string, std::string> objects;           // symbolic parameter -> object id
  std::map<std::string, VariableRef> free_parameters;   // continuous parameter -> variable ref

  const std::string& name() const { return schema->name; }
  /// Object bound to `param`, or `param` itself when it is a constant.
  std::string resolve(const std::string& param) const {
    auto it = objects.find(param);
    return it == objects.end() ? param : it->second;
  }
  /// Object ids in schema parameter order, e.g. {"pear", "drawer1", "cabinet"}.
  std::vector<std::string> arguments() const {
    std::vector<std::string> out;
    for (const auto& p : schema->parameters)
      if (p.kind == ParamKind::kSymbol) out.push_back(objects.at(p.name));
    return out;
  }
  /// e.g. "pick(pear, drawer1, cabinet)"
  std::string to_string() const {
    std::string s = name() + "(";
    const auto args = arguments();
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i];
    return s + ")";
  }
};

namespace detail {

inline bool is_variable_token(std::string_view s) { return !s.empty() && s.front() == '?'; }
inline std::string strip_q(std::string_view s) { return std::string(is_variable_token(s) ? s.substr(1) : s); }

inline ParamKind infer_kind(std::string_view name) {
  if (name == "phi" || name.starts_with("phi")) return ParamKind::kConfig;
  if (name == "tau" || name.starts_with("tau")) return ParamKind::kTrajectory;
  if (name == "g") return ParamKind::kGrasp;
  if (name == "p") return ParamKind::kPose;
  return ParamKind::kSymbol;
}

class SchemaParser {
 public:
  explicit SchemaParser(ActionSchema& schema) : schema_(schema) {}

  void declare(const std::string& name, ParamKind kind, const SExpr& where) {
    if (schema_.find_parameter(name))
      throw ParseError("duplicate parameter '" + name + "'", where.line, where.column);
    schema_.parameters.push_back({name, kind});
  }

  // Parses a flat parameter list: `?a ?b - kind ?c`.
  void parse_parameter_list(const std::vector<SExpr>& items, bool force_symbol) {
    std::vector<std::pair<std::string, const SExpr*>> pending;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& it = items[i];
      if (it.is_list) throw ParseError("nested list in parameter list", it.line, it.column);
      if (it.atom == "-") {
        if (i + 1 >= items.size() || items[i + 1].is_list)
          throw ParseError("expected a type after '-'", it.line, it.column);
        const auto kind = param_kind_from_string(items[i + 1].atom);
        if (!kind) throw ParseError("unknown parameter type '" + items[i + 1].atom + "'", items[i + 1].line,
                                    items[i + 1].column);
        for (auto& [n, w] : pending) declare(n, *kind, *w);
        pending.clear();
        ++i;
        continue;
      }
      pending.emplace_back(strip_q(it.atom), &it);
    }
    for (auto& [n, w] : pending) declare(n, force_symbol ? ParamKind::kSymbol : infer_kind(n), *w);
  }

  std::string reference(const SExpr& atom, bool must_be_param) const {
    const std::string n = strip_q(atom.atom);
    const bool declared = schema_.find_parameter(n) != nullptr;
    if ((is_variable_token(atom.atom) || must_be_param) && !declared)
      throw ParseError("undeclared parameter '" + n + "'", atom.line, atom.column);
    return n;
  }

  Literal parse_literal(const SExpr& e) const {
    if (!e.is_list || e.items.empty() || e.items[0].is_list)
      throw ParseError("expected a literal", e.line, e.column);
    if (e.items[0].atom == "not") {
      if (e.items.size() != 2) throw ParseError("'not' takes one literal", e.line, e.column);
      Literal l = parse_literal(e.items[1]);
      l.negated = !l.negated;
      return l;
    }
    Literal l;
    l.predicate = e.items[0].atom;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (e.items[i].is_list) throw ParseError("nested term in literal", e.items[i].line, e.items[i].column);
      l.args.push_back(reference(e.items[i], false));
    }
    return l;
  }

  std::vector<Literal> parse_formula(const std::vector<SExpr>& forms) const {
    std::vector<Literal> out;
    for (const auto& f : forms) {
      if (f.is_list && !f.items.empty() && f.items[0].is_atom("and")) {
        auto inner = parse_formula({f.items.begin() + 1, f.items.end()});
        out.insert(out.end(), inner.begin(), inner.end());
      } else {
        out.push_back(parse_literal(f));
      }
    }
    return out;
  }

  ConstraintRef parse_constraint(const SExpr& e) const {
    if (!e.is_list || e.items.empty() || e.items[0].is_list)
      throw ParseError("expected a constraint", e.line, e.column);
    ConstraintRef c;
    c.name = e.items[0].atom;
    const auto& catalog = constraint_catalog();
    auto entry = catalog.find(c.name);
    if (entry == catalog.end())
      throw ParseError("unknown constraint '" + c.name + "'", e.items[0].line, e.items[0].column);
    std::size_t i = 1;
    if (i < e.items.size() && e.items[i].is_atom("[")) {
      ++i;
      while (i < e.items.size() && !e.items[i].is_atom("]")) {
        c.bindings.push_back(reference(e.items[i], true));
        ++i;
      }
      if (i == e.items.size()) throw ParseError("unterminated '['", e.line, e.column);
      ++i;
    }
    for (; i < e.items.size(); ++i) {
      const auto& a = e.items[i];
      if (a.is_list) throw ParseError("nested term in constraint", a.line, a.column);
      c.args.push_back(reference(a, true));
    }
    const auto& kinds = entry->second;
    if (c.args.size() != kinds.size())
      throw ParseError("constraint '" + c.name + "' takes " + std::to_string(kinds.size()) + " argument(s), got " +
                           std::to_string(c.args.size()),
                       e.line, e.column);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const auto* p = schema_.find_parameter(c.args[k]);
      if (p->kind != kinds[k])
        throw ParseError("argument '" + c.args[k] + "' of '" + c.name + "' must be a " +
                             std::string(to_string(kinds[k])),
                         e.line, e.column);
    }
    for (const auto& b : c.bindings)
      if (schema_.find_parameter(b)->kind != ParamKind::kSymbol)
        throw ParseError("constraint binding '" + b + "' must be symbolic", e.line, e.column);
    return c;
  }

 private:
  ActionSchema& schema_;
};

inline ActionSchema parse_action(const SExpr& form) {
  // (:action NAME [sym...] :parameters (...) :constraints ... :preconditions ... :effects ...)
  ActionSchema schema;
  SchemaParser parser(schema);
  const auto& items = form.items;
  if (items.size() < 2 || items[1].is_list) throw ParseError("expected action name", form.line, form.column);
  schema.name = items[1].atom;
  std::size_t i = 2;
  if (i < items.size() && items[i].is_atom("[")) {
    std::vector<SExpr> syms;
    ++i;
    while (i < items.size() && !items[i].is_atom("]")) syms.push_back(items[i++]);
    if (i == items.size()) throw ParseError("unterminated '['", form.line, form.column);
    ++i;
    parser.parse_parameter_list(syms, true);
  }
  // Group the remaining items by keyword.
  std::map<std::string, std::vector<SExpr>> sections;
  std::vector<std::string> order;
  std::string current;
  for (; i < items.size(); ++i) {
    const auto& it = items[i];
    if (!it.is_list && it.atom.starts_with(":")) {
      current = it.atom;
      if (sections.count(current)) throw ParseError("duplicate section " + current, it.line, it.column);
      static const std::set<std::string> known = {":parameters", ":constraints", ":preconditions", ":precondition",
                                                  ":effects", ":effect"};
      if (!known.count(current)) throw ParseError("unknown section " + current, it.line, it.column);
      sections[current];
      order.push_back(current);
      continue;
    }
    if (current.empty()) throw ParseError("expected a section keyword", it.line, it.column);
    sections[current].push_back(it);
  }
  if (auto it = sections.find(":parameters"); it != sections.end()) {
    for (const auto& list : it->second) {
      if (!list.is_list) throw ParseError("expected parameter list", list.line, list.column);
      parser.parse_parameter_list(list.items, false);
    }
  }
  if (auto it = sections.find(":constraints"); it != sections.end()) {
    for (const auto& c : it->second) {
      if (c.is_list && !c.items.empty() && c.items[0].is_atom("and")) {
        for (std::size_t k = 1; k < c.items.size(); ++k) schema.constraints.push_back(parser.parse_constraint(c.items[k]));
      } else {
        schema.constraints.push_back(parser.parse_constraint(c));
      }
    }
  }
  for (const char* key : {":preconditions", ":precondition"})
    if (auto it = sections.find(key); it != sections.end()) schema.preconditions = parser.parse_formula(it->second);
  for (const char* key : {":effects", ":effect"})
    if (auto it = sections.find(key); it != sections.end()) schema.effects = parser.parse_formula(it->second);
  return schema;
}

inline const SExpr& expect_define(const SExpr& top, std::string_view what) {
  if (!top.is_list || top.items.size() < 2 || !top.items[0].is_atom("define") || !top.items[1].is_list ||
      top.items[1].items.size() != 2 || !top.items[1].items[0].is_atom(what))
    throw ParseError("expected (define (" + std::string(what) + " NAME) ...)", top.line, top.column);
  return top.items[1].items[1];
}

inline void print_literal(std::ostream& os, const Literal& l, const ActionSchema* s) {
  auto ref = [&](const std::string& a) { return (s && s->find_parameter(a)) ? "?" + a : a; };
  if (l.negated) os << "(not ";
  os << '(' << l.predicate;
  for (const auto& a : l.args) os << ' ' << ref(a);
  os << ')';
  if (l.negated) os << ')';
}

}  // namespace detail

/// Parses a domain file and returns its action schemas in file order.
/// Throws ParseError (with line/column) on syntax errors, undeclared parameter references,
/// unknown constraint names and constraint arity/kind mismatches.
inline std::vector<ActionSchema> parse_domain(std::string_view text) {
  std::vector<ActionSchema> out;
  for (const auto& top : read_sexprs(text)) {
    detail::expect_define(top, "domain");
    for (std::size_t i = 2; i < top.items.size(); ++i) {
      const auto& f = top.items[i];
      if (!f.is_list || f.items.empty() || f.items[0].is_list)
        throw ParseError("expected a domain section", f.line, f.column);
      if (f.items[0].atom == ":action") {
        out.push_back(detail::parse_action(f));
      } else if (f.items[0].atom == ":predicates" || f.items[0].atom == ":requirements") {
        continue;
      } else {
        throw ParseError("unknown domain section " + f.items[0].atom, f.line, f.column);
      }
    }
  }
  return out;
}

inline Problem parse_problem(std::string_view text) {
  const auto tops = read_sexprs(text);
  if (tops.size() != 1) throw ParseError("expected exactly one problem definition", 1, 1);
  const auto& top = tops.front();
  Problem p;
  p.name = detail::expect_define(top, "problem").atom;
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const auto& f = top.items[i];
    if (!f.is_list || f.items.empty() || f.items[0].is_list) throw ParseError("expected a problem section", f.line, f.column);
    const auto& key = f.items[0].atom;
    ActionSchema none;
    detail::SchemaParser lits(none);
    std::vector<SExpr> rest(f.items.begin() + 1, f.items.end());
    if (key == ":domain") {
      if (rest.size() != 1 || rest[0].is_list) throw ParseError("expected domain name", f.line, f.column);
      p.domain = rest[0].atom;
    } else if (key == ":objects") {
      for (const auto& o : rest) {
        if (o.is_list) throw ParseError("expected object name", o.line, o.column);
        if (o.atom == "-") throw ParseError("typed objects are not supported", o.line, o.column);
        p.objects.push_back(o.atom);
      }
    } else if (key == ":init") {
      p.init = lits.parse_formula(rest);
    } else if (key == ":goal") {
      p.goal = lits.parse_formula(rest);
    } else {
      throw ParseError("unknown problem section " + key, f.line, f.column);
    }
  }
  return p;
}

/// Prints schemas back in the grammar accepted by parse_domain.
inline std::string print_domain(const std::vector<ActionSchema>& schemas, std::string_view name = "domain") {
  std::ostringstream os;
  os << "(define (domain " << name << ")\n";
  for (const auto& s : schemas) {
    os << "  (:action " << s.name << '\n' << "    :parameters (";
    bool first = true;
    for (const auto& p : s.parameters) {
      os << (first ? "" : " ") << '?' << p.name << " - " << to_string(p.kind);
      first = false;
    }
    os << ")\n    :constraints (and";
    for (const auto& c : s.constraints) {
      os << " (" << c.name;
      if (!c.bindings.empty()) {
        os << '[';
        for (std::size_t i = 0; i < c.bindings.size(); ++i) os << (i ? " ?" : "?") << c.bindings[i];
        os << ']';
      }
      for (const auto& a : c.args) os << " ?" << a;
      os << ')';
    }
    os << ")\n    :preconditions (and";
    for (const auto& l : s.preconditions) {
      os << ' ';
      detail::print_literal(os, l, &s);
    }
    os << ")\n    :effects (and";
    for (const auto& l : s.effects) {
      os << ' ';
      detail::print_literal(os, l, &s);
    }
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

inline std::uint64_t next_variable_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

/// Binds the symbolic parameters of `schema` and emits fresh variable references for its
/// continuous parameters. Throws std::invalid_argument on a missing binding, a binding for a
/// continuous parameter (type mismatch) or an unknown parameter name.
inline GroundAction ground(std::shared_ptr<const ActionSchema> schema, const std::map<std::string, std::string>& bindings) {
  GroundAction a;
  for (const auto& [k, v] : bindings) {
    const auto* p = schema->find_parameter(k);
    if (!p) throw std::invalid_argument(schema->name + ": unknown parameter '" + k + "'");
    if (p->kind != ParamKind::kSymbol)
      throw std::invalid_argument(schema->name + ": parameter '" + k + "' is a " + std::string(to_string(p->kind)) +
                                  ", not an object");
  }
  for (const auto& p : schema->parameters) {
    if (p.kind == ParamKind::kSymbol) {
      auto it = bindings.find(p.name);
      if (it == bindings.end()) throw std::invalid_argument(schema->name + ": missing binding for '" + p.name + "'");
      a.objects[p.name] = it->second;
    } else {
      a.free_parameters[p.name] = VariableRef{next_variable_id(), p.kind};
    }
  }
  a.schema = std::move(schema);
  return a;
}

/// Atom for a schema literal under the action's bindings, or nullopt when the literal mentions a
/// continuous parameter (those are geometric and enforced by constraints, not by the symbolic layer).
inline std::optional<Atom> ground_literal(const Literal& l, const GroundAction& a) {
  std::vector<std::string> args;
  for (const auto& x : l.args) {
    const auto* p = a.schema->find_parameter(x);
    if (p && p->kind != ParamKind::kSymbol) return std::nullopt;
    args.push_back(a.resolve(x));
  }
  return make_atom(l.predicate, args);
}

inline bool applicable(const GroundAction& a, const SymbolicState& s) {
  for (const auto& l : a.schema->preconditions) {
    auto atom = ground_literal(l, a);
    if (!atom) continue;
    if (s.count(*atom) == l.negated) return false;
  }
  return true;
}

inline SymbolicState apply_effects(const GroundAction& a, SymbolicState s) {
  for (const auto& l : a.schema->effects)
    if (l.negated)
      if (auto atom = ground_literal(l, a)) s.erase(*atom);
  for (const auto& l : a.schema->effects)
    if (!l.negated)
      if (auto atom = ground_literal(l, a)) s.insert(*atom);
  return s;
}

inline SymbolicState make_state(const std::vector<Literal>& literals) {
  SymbolicState s;
  for (const auto& l : literals)
    if (!l.negated) s.insert(make_atom(l.predicate, l.args));
  return s;
}

inline bool satisfies(const SymbolicState& s, const std::vector<Literal>& goal) {
  for (const auto& l : goal)
    if (s.count(make_atom(l.predicate, l.args)) == l.negated) return false;
  return true;
}

}  // namespace shycobra
