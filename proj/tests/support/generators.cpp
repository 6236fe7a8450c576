#include "generators.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace clslr::testing {

std::vector<std::string> alphabet(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('a' + i));
  return out;
}

namespace {

Atom random_atom(Random& r, const std::vector<std::string>& elements, bool variables) {
  if (variables && r.chance(0.3)) {
    static const std::vector<std::string> names = {"x", "y"};
    return r.chance(0.5) ? Atom::element_var(r.pick(names)) : Atom::sequence_var(r.pick(names));
  }
  return Atom::element(r.pick(elements));
}

Sequence random_sequence(Random& r, const std::vector<std::string>& elements, std::size_t lo, std::size_t hi,
                         bool variables) {
  Sequence s;
  const std::size_t n = r.between(lo, hi);
  for (std::size_t i = 0; i < n; ++i) s.push_back(random_atom(r, elements, variables));
  return s;
}

Pattern raw(Random& r, const RawOptions& o, const std::vector<std::string>& elements, std::size_t& leaves,
            std::size_t depth) {
  const std::size_t choice = r.below(o.rules ? 7 : 6);
  if (leaves == 0 || choice == 0) return r.chance(0.5) ? Pattern::seq({}) : Pattern::par({});
  switch (choice) {
    case 1:
    case 2: {
      Sequence s = random_sequence(r, elements, 1, std::min<std::size_t>(leaves, 3), o.variables);
      leaves -= std::min(leaves, s.size());
      return Pattern::seq(std::move(s));
    }
    case 3:
      if (o.variables) {
        --leaves;
        return Pattern::term_var(r.chance(0.5) ? "X" : "Y");
      }
      [[fallthrough]];
    case 4:
      if (depth < o.max_depth) {
        Sequence m = random_sequence(r, elements, 0, std::min<std::size_t>(leaves, 2), o.variables);
        leaves -= std::min(leaves, m.size());
        return Pattern::loop(std::move(m), raw(r, o, elements, leaves, depth + 1));
      }
      [[fallthrough]];
    case 5: {
      std::vector<Pattern> members;
      const std::size_t n = r.between(2, 3);
      for (std::size_t i = 0; i < n; ++i) members.push_back(raw(r, o, elements, leaves, depth));
      return Pattern::par(std::move(members));
    }
    default: {
      --leaves;
      return Pattern::rule(random_local_rule(r, elements, false));
    }
  }
}

Pattern random_l_pattern(Random& r, const std::vector<std::string>& elements, const std::vector<Variable>& pool,
                         std::size_t items, bool allow_rules) {
  std::vector<Pattern> members;
  for (std::size_t i = 0; i < items; ++i) {
    const std::size_t kind = r.below(allow_rules ? 6 : 5);
    std::vector<Variable> seq_pool;
    std::vector<Variable> term_pool;
    for (const Variable& v : pool) (v.kind == VarKind::Term ? term_pool : seq_pool).push_back(v);
    if (kind == 4 && !term_pool.empty()) {
      members.push_back(Pattern::term_var(r.pick(term_pool).name));
      continue;
    }
    if (kind == 5) {
      members.push_back(Pattern::rule(random_local_rule(r, elements, false)));
      continue;
    }
    Sequence s;
    const std::size_t n = r.between(1, 3);
    for (std::size_t k = 0; k < n; ++k) {
      if (!seq_pool.empty() && r.chance(0.35)) {
        const Variable& v = r.pick(seq_pool);
        s.push_back(v.kind == VarKind::Element ? Atom::element_var(v.name) : Atom::sequence_var(v.name));
      } else {
        s.push_back(Atom::element(r.pick(elements)));
      }
    }
    members.push_back(Pattern::seq(std::move(s)));
  }
  return normalize(Pattern::par(std::move(members)));
}

std::vector<Variable> pattern_vars(const Pattern& p) {
  const VariableSet vs = vars(p, RuleBodies::Exclude);
  return {vs.begin(), vs.end()};
}

Sequence membrane_over(Random& r, const std::vector<std::string>& elements, const std::vector<Variable>& pool,
                       std::size_t lo, std::size_t hi) {
  Sequence s;
  const std::size_t n = r.between(lo, hi);
  for (std::size_t k = 0; k < n; ++k) {
    if (!pool.empty() && r.chance(0.5)) {
      const Variable& v = r.pick(pool);
      s.push_back(v.kind == VarKind::Element ? Atom::element_var(v.name) : Atom::sequence_var(v.name));
    } else {
      s.push_back(Atom::element(r.pick(elements)));
    }
  }
  return s;
}

}  // namespace

Pattern random_term(Random& r, std::size_t alphabet_size, std::size_t max_depth, std::size_t max_items) {
  const std::vector<std::string> elements = alphabet(alphabet_size);
  std::function<Pattern(std::size_t)> content = [&](std::size_t depth) {
    std::vector<Pattern> members;
    const std::size_t n = r.between(0, max_items);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t kind = r.below(5);
      if (kind == 0 && depth < max_depth) {
        members.push_back(Pattern::loop(random_sequence(r, elements, 0, 2, false), content(depth + 1)));
      } else if (kind == 1) {
        members.push_back(Pattern::rule(random_local_rule(r, elements)));
      } else {
        members.push_back(Pattern::seq(random_sequence(r, elements, 1, 3, false)));
      }
    }
    return Pattern::par(std::move(members));
  };
  return normalize(content(0));
}

Pattern random_raw_pattern(Random& r, const RawOptions& o) {
  const std::vector<std::string> elements = alphabet(o.alphabet);
  std::size_t leaves = o.max_leaves;
  return raw(r, o, elements, leaves, 0);
}

LocalRule random_local_rule(Random& r, const std::vector<std::string>& elements, bool allow_nested) {
  static const std::vector<Variable> lhs_pool = {
      {VarKind::Element, "x"}, {VarKind::Sequence, "s"}, {VarKind::Term, "X"}};
  for (;;) {
    std::vector<Variable> pool;
    for (const Variable& v : lhs_pool) {
      if (r.chance(0.4)) pool.push_back(v);
    }
    Pattern lhs = random_l_pattern(r, elements, pool, r.between(1, 2), false);
    if (lhs.is_epsilon()) continue;
    const std::vector<Variable> bound = pattern_vars(lhs);
    Pattern rhs = random_l_pattern(r, elements, bound, r.between(0, 2), allow_nested);
    const std::size_t kind = r.below(3);
    LocalRule rule;
    if (kind == 0) {
      rule = LocalRule::plain(lhs, rhs);
    } else {
      static const std::vector<Variable> mem_pool = {{VarKind::Sequence, "m"}, {VarKind::Element, "e"}};
      std::vector<Variable> mpool;
      for (const Variable& v : mem_pool) {
        if (r.chance(0.5)) mpool.push_back(v);
      }
      Sequence s1 = membrane_over(r, elements, mpool, 1, 2);
      const VariableSet s1vars = vars(s1);
      Sequence s2 = membrane_over(r, elements, {s1vars.begin(), s1vars.end()}, 1, 2);
      rule = kind == 1 ? LocalRule::out(lhs, s1, rhs, s2) : LocalRule::in(lhs, s1, rhs, s2);
    }
    if (well_formed_local_rule(rule)) return rule;
  }
}

Classification random_classification(Random& r, const std::vector<std::string>& elements, double density) {
  Classification lambda;
  for (const std::string& e : elements) {
    MembraneType phi;
    for (Feature f : kAllFeatures) {
      if (r.chance(density)) phi.insert(f);
    }
    lambda.types[e] = phi;
  }
  return lambda;
}

namespace {

Pattern model_content(Random& r, const std::vector<std::string>& elements, std::size_t depth,
                      std::size_t max_depth, std::size_t& rules_left);

Instantiation random_sigma(Random& r, const VariableSet& vs, const std::vector<std::string>& elements,
                           bool allow_loops) {
  Instantiation sigma;
  for (const Variable& v : vs) {
    // Mostly single atoms for term variables: small instances keep the model
    // within its depth bound and make further redexes likely.
    if (v.kind == VarKind::Term && (!allow_loops || r.chance(0.7))) {
      sigma[v] = Pattern::seq({Atom::element(r.pick(elements))});
    } else {
      sigma[v] = random_image(r, v, elements.size());
    }
  }
  return sigma;
}

// A rule together with material it can consume, so that generated models
// actually reduce: an instance of the left side next to the rule, a target
// compartment for in rules, and an enclosing compartment for out rules.
Pattern rule_with_redex(Random& r, const std::vector<std::string>& elements, std::size_t depth,
                        std::size_t max_depth, std::size_t& rules_left) {
  const LocalRule rule = random_local_rule(r, elements);
  std::vector<Pattern> members{Pattern::rule(rule)};
  if (!r.chance(0.85)) return members.front();
  VariableSet vs = vars(rule.lhs, RuleBodies::Exclude);
  const VariableSet ms = vars(rule.lhs_membrane);
  vs.insert(ms.begin(), ms.end());
  const Instantiation sigma = random_sigma(r, vs, elements, depth + 1 < max_depth);
  members.push_back(substitute(rule.lhs, sigma));
  if (rule.kind == RuleKind::In) {
    members.push_back(Pattern::loop(substitute(rule.lhs_membrane, sigma),
                                    depth < max_depth ? model_content(r, elements, depth + 1, max_depth, rules_left)
                                                      : Pattern()));
  }
  if (rule.kind == RuleKind::Out && depth < max_depth) {
    return Pattern::loop(substitute(rule.lhs_membrane, sigma), Pattern::par(members));
  }
  return Pattern::par(members);
}

Pattern model_content(Random& r, const std::vector<std::string>& elements, std::size_t depth,
                      std::size_t max_depth, std::size_t& rules_left) {
  std::vector<Pattern> members;
  const std::size_t n = r.between(1, 4);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kind = r.below(4);
    if (kind == 0 && depth < max_depth) {
      Sequence m = random_sequence(r, elements, 1, 2, false);
      members.push_back(Pattern::loop(std::move(m), model_content(r, elements, depth + 1, max_depth, rules_left)));
    } else if (kind == 1 && rules_left > 0) {
      --rules_left;
      members.push_back(rule_with_redex(r, elements, depth, max_depth, rules_left));
    } else {
      members.push_back(Pattern::seq(random_sequence(r, elements, 1, 3, false)));
    }
  }
  return Pattern::par(std::move(members));
}

GlobalRule random_global(Random& r, const std::vector<std::string>& elements) {
  const Sequence m = random_sequence(r, elements, 1, 1, false);
  switch (r.below(3)) {
    case 0:
      // Dissolve a compartment.
      return {normalize(Pattern::loop(m, Pattern::term_var("X"))), Pattern::term_var("X")};
    case 1:
      // Wrap some material in a new compartment.
      return {normalize(Pattern::par({Pattern::seq({Atom::element(r.pick(elements))}), Pattern::term_var("X")})),
              normalize(Pattern::loop(m, Pattern::term_var("X")))};
    default:
      return {Pattern::seq({Atom::element(r.pick(elements))}),
              normalize(Pattern::par({Pattern::seq({Atom::element(r.pick(elements))}),
                                      Pattern::seq({Atom::element(r.pick(elements))})}))};
  }
}

}  // namespace

TypedModel random_typed_model(Random& r, std::size_t alphabet_size, std::size_t max_depth, std::size_t max_rules) {
  const std::vector<std::string> elements = alphabet(alphabet_size);
  for (;;) {
    std::size_t rules_left = r.between(1, max_rules);
    TypedModel m;
    std::size_t globals = r.chance(0.4) ? 1 : 0;
    if (globals > rules_left) globals = rules_left;
    rules_left -= globals;
    Pattern content = model_content(r, elements, 0, max_depth, rules_left);
    std::vector<Pattern> top{content};
    while (rules_left > 0) {
      --rules_left;
      top.push_back(rule_with_redex(r, elements, 0, max_depth, rules_left));
    }
    m.term = normalize(Pattern::par(std::move(top)));
    for (std::size_t g = 0; g < globals; ++g) m.globals.push_back(random_global(r, elements));
    m.lambda = random_classification(r, elements, 0.65);
    try {
      type_pattern({}, m.lambda, m.term);
      return m;
    } catch (const Error&) {
    }
  }
}

Value random_image(Random& r, const Variable& v, std::size_t alphabet_size) {
  const std::vector<std::string> elements = alphabet(alphabet_size);
  switch (v.kind) {
    case VarKind::Element:
      return Sequence{Atom::element(r.pick(elements))};
    case VarKind::Sequence:
      return random_sequence(r, elements, 0, 3, false);
    case VarKind::Term:
      break;
  }
  std::size_t rules_left = 2;
  if (r.chance(0.2)) return Pattern();
  return normalize(model_content(r, elements, 1, 2, rules_left));
}

Pattern random_pattern_over(Random& r, const std::vector<Variable>& pool, std::size_t alphabet_size,
                            std::size_t max_depth) {
  const std::vector<std::string> elements = alphabet(alphabet_size);
  std::vector<Variable> seq_pool;
  std::vector<Variable> term_pool;
  for (const Variable& v : pool) (v.kind == VarKind::Term ? term_pool : seq_pool).push_back(v);
  std::function<Pattern(std::size_t)> content = [&](std::size_t depth) {
    std::vector<Pattern> members;
    const std::size_t n = r.between(1, 3);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t kind = r.below(5);
      if (kind == 0 && depth < max_depth) {
        members.push_back(Pattern::loop(membrane_over(r, elements, seq_pool, 1, 2), content(depth + 1)));
      } else if (kind == 1 && !term_pool.empty()) {
        members.push_back(Pattern::term_var(r.pick(term_pool).name));
      } else if (kind == 2) {
        members.push_back(Pattern::rule(random_local_rule(r, elements)));
      } else {
        members.push_back(Pattern::seq(membrane_over(r, elements, seq_pool, 1, 3)));
      }
    }
    return Pattern::par(std::move(members));
  };
  return normalize(content(0));
}

namespace {

struct Enumerator {
  std::vector<Atom> atoms;
  std::vector<std::string> term_vars;
  bool rule_leaf = false;
  std::vector<std::vector<Pattern>> items;     // by leaf count, n >= 1
  std::vector<std::vector<Pattern>> contents;  // by leaf count, n >= 0

  void sequences(std::size_t n, Sequence& cur, std::vector<Sequence>& out) const {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (const Atom& a : atoms) {
      cur.push_back(a);
      sequences(n, cur, out);
      cur.pop_back();
    }
  }

  // Multisets of items with total leaf count n, as lists of indices into a
  // flattened, size-ordered item list so that each multiset appears once.
  void multisets(std::size_t n, const std::vector<std::pair<std::size_t, const Pattern*>>& flat, std::size_t from,
                 std::vector<Pattern>& cur, std::vector<Pattern>& out) const {
    if (n == 0) {
      if (cur.size() >= 2) out.push_back(normalize(Pattern::par(cur)));
      return;
    }
    for (std::size_t i = from; i < flat.size(); ++i) {
      if (flat[i].first > n) continue;
      cur.push_back(*flat[i].second);
      multisets(n - flat[i].first, flat, i, cur, out);
      cur.pop_back();
    }
  }

  void build(std::size_t max) {
    items.assign(max + 1, {});
    contents.assign(max + 1, {});
    contents[0].push_back(Pattern());
    for (std::size_t n = 1; n <= max; ++n) {
      std::set<std::string> seen;
      auto add = [&](const Pattern& p) {
        if (seen.insert(p.key()).second) items[n].push_back(p);
      };
      std::vector<Sequence> seqs;
      Sequence cur;
      sequences(n, cur, seqs);
      for (Sequence& s : seqs) add(Pattern::seq(std::move(s)));
      if (n == 1) {
        for (const std::string& v : term_vars) add(Pattern::term_var(v));
        if (rule_leaf) {
          add(Pattern::rule(LocalRule::plain(Pattern::seq({Atom::element("a")}), Pattern::seq({Atom::element("b")}))));
        }
      }
      // A compartment costs one leaf plus its membrane and content.
      for (std::size_t m = 0; m + 1 <= n; ++m) {
        std::vector<Sequence> membranes;
        Sequence mc;
        sequences(m, mc, membranes);
        for (const Sequence& mem : membranes) {
          for (const Pattern& c : contents[n - 1 - m]) {
            Pattern l = normalize(Pattern::loop(mem, c));
            if (!l.is_epsilon()) add(l);
          }
        }
      }
      std::vector<std::pair<std::size_t, const Pattern*>> flat;
      for (std::size_t k = 1; k < n; ++k) {
        for (const Pattern& p : items[k]) flat.emplace_back(k, &p);
      }
      std::vector<Pattern> pars;
      std::vector<Pattern> stack;
      multisets(n, flat, 0, stack, pars);
      contents[n] = items[n];
      contents[n].insert(contents[n].end(), pars.begin(), pars.end());
    }
  }
};

}  // namespace

std::vector<Pattern> enumerate_patterns(std::size_t max_leaves, const std::vector<Atom>& atoms,
                                        const std::vector<std::string>& term_vars, bool rule_leaf) {
  Enumerator e;
  e.atoms = atoms;
  e.term_vars = term_vars;
  e.rule_leaf = rule_leaf;
  e.build(max_leaves);
  std::vector<Pattern> out;
  for (std::size_t n = 0; n <= max_leaves; ++n) out.insert(out.end(), e.contents[n].begin(), e.contents[n].end());
  return out;
}

std::size_t leaf_count(const Pattern& p) {
  switch (p.kind()) {
    case NodeKind::Seq:
      return p.atoms().size();
    case NodeKind::TermVar:
    case NodeKind::Rule:
      return 1;
    case NodeKind::Loop:
      return 1 + p.membrane().size() + leaf_count(p.content());
    case NodeKind::Par: {
      std::size_t n = 0;
      for (const Pattern& m : p.members()) n += leaf_count(m);
      return n;
    }
  }
  return 0;
}

}  // namespace clslr::testing
