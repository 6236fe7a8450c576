#include "clslr/types.hpp"

#include <algorithm>

namespace clslr {

char feature_letter(Feature f) {
  static constexpr char kLetters[] = {'d', 'r', 's', 'e', 'o', 'i'};
  return kLetters[static_cast<unsigned>(f)];
}

std::optional<Feature> feature_from_letter(char c) {
  for (Feature f : kAllFeatures) {
    if (feature_letter(f) == c) return f;
  }
  return std::nullopt;
}

MembraneType Classification::lookup(const std::string& element) const {
  auto it = types.find(element);
  if (it != types.end()) return it->second;
  if (policy == LookupPolicy::Strict) throw UnknownElement(element);
  return {};
}

namespace {

void count_occurrences(const Pattern& p, std::map<Variable, std::size_t>& counts) {
  switch (p.kind()) {
    case NodeKind::Seq:
      for (const Atom& a : p.atoms()) {
        if (a.kind == AtomKind::ElementVar) ++counts[{VarKind::Element, a.name}];
        if (a.kind == AtomKind::SequenceVar) ++counts[{VarKind::Sequence, a.name}];
      }
      break;
    case NodeKind::TermVar:
      ++counts[{VarKind::Term, p.var_name()}];
      break;
    case NodeKind::Loop:
      for (const Atom& a : p.membrane()) {
        if (a.kind == AtomKind::ElementVar) ++counts[{VarKind::Element, a.name}];
        if (a.kind == AtomKind::SequenceVar) ++counts[{VarKind::Sequence, a.name}];
      }
      count_occurrences(p.content(), counts);
      break;
    case NodeKind::Par:
      for (const Pattern& m : p.members()) count_occurrences(m, counts);
      break;
    case NodeKind::Rule:
      break;
  }
}

bool repeats_a_variable(const Pattern& p) {
  std::map<Variable, std::size_t> counts;
  count_occurrences(p, counts);
  return std::any_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second >= 2; });
}

MembraneType plain_features(const Pattern& lhs, const Pattern& rhs) {
  MembraneType phi;
  const VariableSet left = vars(lhs, RuleBodies::Exclude);
  const VariableSet right = vars(rhs, RuleBodies::Exclude);
  if (left.size() > right.size() && std::includes(left.begin(), left.end(), right.begin(), right.end())) {
    phi.insert(Feature::d);
  }
  if (repeats_a_variable(rhs)) phi.insert(Feature::r);
  // Every node's variables are a subset of the whole side's, which is itself a node.
  if (left.size() >= 2) phi.insert(Feature::s);
  if (repeats_a_variable(lhs)) phi.insert(Feature::e);
  return phi;
}

std::string rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::Plain:
      return "TRloc";
    case RuleKind::Out:
      return "TRlocOut";
    case RuleKind::In:
      return "TRlocIn";
  }
  return {};
}

bool sequence_closed(const Sequence& s, const Basis* delta) {
  for (const Atom& a : s) {
    if (!a.is_variable()) continue;
    if (delta == nullptr) return false;
    const Variable v{a.kind == AtomKind::ElementVar ? VarKind::Element : VarKind::Sequence, a.name};
    if (delta->find(v) == delta->end()) return false;
  }
  return true;
}

// delta == nullptr types the rule with its variables open.
PatternType type_rule_impl(const Basis* delta, const Classification& lambda, const LocalRule& r);

PatternType type_impl(const Basis* delta, const Classification& lambda, const Pattern& p) {
  switch (p.kind()) {
    case NodeKind::Seq:
      return {};
    case NodeKind::TermVar: {
      const Variable v{VarKind::Term, p.var_name()};
      if (delta == nullptr) return {};
      auto it = delta->find(v);
      if (it == delta->end() || !std::holds_alternative<PatternType>(it->second)) {
        throw UnboundVariable(to_string(v));
      }
      return std::get<PatternType>(it->second);
    }
    case NodeKind::Par: {
      PatternType tau;
      for (const Pattern& m : p.members()) tau = union_type(tau, type_impl(delta, lambda, m));
      return tau;
    }
    case NodeKind::Loop: {
      static const Basis kEmpty;
      const MembraneType phi = type_seq(delta != nullptr ? *delta : kEmpty, lambda, p.membrane());
      const PatternType inner = type_impl(delta, lambda, p.content());
      const MembraneType head = inner.empty() ? MembraneType{} : inner.front();
      if (!head.subset_of(phi)) {
        throw SideConditionViolated("Tcomp", normalize(p).key(), render_membrane_type(head),
                                    render_membrane_type(phi));
      }
      if (inner.empty()) return {};
      return PatternType(inner.begin() + 1, inner.end());
    }
    case NodeKind::Rule:
      return type_rule_impl(nullptr, lambda, p.local_rule());
  }
  return {};
}

PatternType type_rule_impl(const Basis* delta, const Classification& lambda, const LocalRule& r) {
  const MembraneType phi_rule = plain_features(r.lhs, r.rhs);
  const PatternType tau2 = type_impl(delta, lambda, r.rhs);
  if (r.kind == RuleKind::Plain) return union_type({phi_rule}, tau2);

  const bool checkable = sequence_closed(r.lhs_membrane, delta) && sequence_closed(r.rhs_membrane, delta);
  static const Basis kEmpty;
  const Basis& d = delta != nullptr ? *delta : kEmpty;
  const std::string where = normalize(Pattern::rule(r)).key();

  if (r.kind == RuleKind::Out) {
    if (checkable) {
      const MembraneType phi1 = type_seq(d, lambda, r.lhs_membrane);
      const MembraneType phi2 = type_seq(d, lambda, r.rhs_membrane);
      if (!phi1.subset_of(phi2)) {
        throw SideConditionViolated(rule_name(r.kind), where, render_membrane_type(phi1),
                                    render_membrane_type(phi2));
      }
    }
    PatternType out{MembraneType{Feature::o}};
    out.insert(out.end(), tau2.begin(), tau2.end());
    return out;
  }

  const MembraneType head = tau2.empty() ? MembraneType{} : tau2.front();
  const PatternType tail = tau2.empty() ? PatternType{} : PatternType(tau2.begin() + 1, tau2.end());
  if (checkable) {
    const MembraneType phi1 = type_seq(d, lambda, r.lhs_membrane);
    const MembraneType phi2 = type_seq(d, lambda, r.rhs_membrane);
    if (!(head | phi1).subset_of(phi2)) {
      throw SideConditionViolated(rule_name(r.kind), where, render_membrane_type(head | phi1),
                                  render_membrane_type(phi2));
    }
  }
  return union_type({MembraneType{Feature::i}}, tail);
}

void membrane_vars(const Pattern& p, VariableSet& out) {
  if (p.is_loop()) {
    const VariableSet m = vars(p.membrane());
    out.insert(m.begin(), m.end());
    membrane_vars(p.content(), out);
  } else if (p.is_par()) {
    for (const Pattern& c : p.members()) membrane_vars(c, out);
  }
}

void term_vars(const Pattern& p, VariableSet& out) {
  for (const Variable& v : vars(p, RuleBodies::Exclude)) {
    if (v.kind == VarKind::Term) out.insert(v);
  }
}

void collect_membrane_elements(const Pattern& p, std::set<std::string>& out);

void collect_membrane_elements(const Sequence& s, std::set<std::string>& out) {
  for (const Atom& a : s) {
    if (a.kind == AtomKind::Element) out.insert(a.name);
  }
}

void collect_membrane_elements(const Pattern& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case NodeKind::Loop:
      collect_membrane_elements(p.membrane(), out);
      collect_membrane_elements(p.content(), out);
      break;
    case NodeKind::Par:
      for (const Pattern& m : p.members()) collect_membrane_elements(m, out);
      break;
    case NodeKind::Rule: {
      const LocalRule& r = p.local_rule();
      collect_membrane_elements(r.lhs_membrane, out);
      collect_membrane_elements(r.rhs_membrane, out);
      collect_membrane_elements(r.lhs, out);
      collect_membrane_elements(r.rhs, out);
      break;
    }
    default:
      break;
  }
}

}  // namespace

MembraneType features(const LocalRule& r) {
  MembraneType phi = plain_features(r.lhs, r.rhs);
  if (r.kind == RuleKind::Out) phi.insert(Feature::o);
  if (r.kind == RuleKind::In) phi.insert(Feature::i);
  return phi;
}

PatternType union_type(const PatternType& a, const PatternType& b) {
  PatternType out(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k < a.size()) out[k] = out[k] | a[k];
    if (k < b.size()) out[k] = out[k] | b[k];
  }
  return out;
}

bool contained(const PatternType& a, const PatternType& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const MembraneType other = k < b.size() ? b[k] : MembraneType{};
    if (!a[k].subset_of(other)) return false;
  }
  return true;
}

MembraneType type_seq(const Basis& delta, const Classification& lambda, const Sequence& sp) {
  MembraneType phi;
  for (const Atom& a : sp) {
    if (a.kind == AtomKind::Element) {
      phi = phi | lambda.lookup(a.name);
      continue;
    }
    const Variable v{a.kind == AtomKind::ElementVar ? VarKind::Element : VarKind::Sequence, a.name};
    auto it = delta.find(v);
    if (it == delta.end() || !std::holds_alternative<MembraneType>(it->second)) {
      throw UnboundVariable(to_string(v));
    }
    phi = phi | std::get<MembraneType>(it->second);
  }
  return phi;
}

PatternType type_pattern(const Basis& delta, const Classification& lambda, const Pattern& p) {
  return type_impl(&delta, lambda, normalize(p));
}

PatternType type_rule_static(const Classification& lambda, const LocalRule& r) {
  return type_rule_impl(nullptr, lambda, r);
}

PatternType type_rule(const Basis& delta, const Classification& lambda, const LocalRule& r) {
  return type_rule_impl(&delta, lambda, r);
}

bool check_global(const Basis& delta, const Classification& lambda, const GlobalRule& g) {
  const PatternType tau1 = type_pattern(delta, lambda, g.lhs);
  const PatternType tau2 = type_pattern(delta, lambda, g.rhs);
  return contained(tau2, tau1);
}

VariableSet typing_relevant_vars(const GlobalRule& g) {
  VariableSet out;
  term_vars(g.lhs, out);
  term_vars(g.rhs, out);
  membrane_vars(g.lhs, out);
  membrane_vars(g.rhs, out);
  return out;
}

VariableSet typing_relevant_vars(const LocalRule& r) {
  VariableSet out = vars(r.lhs_membrane);
  const VariableSet s2 = vars(r.rhs_membrane);
  out.insert(s2.begin(), s2.end());
  term_vars(r.rhs, out);
  return out;
}

Basis infer_basis(const Instantiation& sigma, const Classification& lambda, const VariableSet* only) {
  Basis delta;
  for (const auto& [var, value] : sigma) {
    if (only != nullptr && only->count(var) == 0) continue;
    if (const auto* s = std::get_if<Sequence>(&value)) {
      delta[var] = type_seq({}, lambda, *s);
    } else {
      delta[var] = type_pattern({}, lambda, std::get<Pattern>(value));
    }
  }
  return delta;
}

bool agrees(const Instantiation& sigma, const Basis& delta, const Classification& lambda) {
  for (const auto& [var, entry] : delta) {
    auto it = sigma.find(var);
    if (it == sigma.end()) return false;
    if (const auto* phi = std::get_if<MembraneType>(&entry)) {
      const auto* s = std::get_if<Sequence>(&it->second);
      if (s == nullptr || !(type_seq({}, lambda, *s) == *phi)) return false;
    } else {
      const auto* p = std::get_if<Pattern>(&it->second);
      if (p == nullptr) return false;
      try {
        if (type_pattern({}, lambda, *p) != std::get<PatternType>(entry)) return false;
      } catch (const SideConditionViolated&) {
        return false;
      }
    }
  }
  return true;
}

std::string render_membrane_type(const MembraneType& phi) {
  std::string out = "{";
  bool first = true;
  for (Feature f : kAllFeatures) {
    if (!phi.contains(f)) continue;
    if (!first) out += ',';
    first = false;
    out += feature_letter(f);
  }
  return out + "}";
}

std::string render_type(const PatternType& tau) {
  std::string out;
  for (const MembraneType& phi : tau) out += render_membrane_type(phi) + "::";
  return out + "∅";
}

std::set<std::string> unclassified_elements(const Pattern& p, const Classification& lambda) {
  std::set<std::string> used;
  collect_membrane_elements(p, used);
  std::set<std::string> out;
  for (const std::string& e : used) {
    if (lambda.types.count(e) == 0) out.insert(e);
  }
  return out;
}

}  // namespace clslr
