#include "clslr/term.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace clslr {

namespace detail {

struct Node {
  NodeKind kind = NodeKind::Seq;
  Sequence atoms;                 // Seq atoms, Loop membrane
  std::vector<Pattern> children;  // Par members, Loop content
  std::shared_ptr<const LocalRule> rule;
  std::string name;
  std::uint32_t mark = 0;
  std::uint32_t membrane_mark = 0;
  std::uint32_t origin = 0;
  bool has_marks = false;
  std::string key;
  std::string marked_key;
};

}  // namespace detail

namespace {

std::string render_atom(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Element:
      return a.name;
    case AtomKind::ElementVar:
      return "?" + a.name;
    case AtomKind::SequenceVar:
      return "~" + a.name;
  }
  return a.name;
}

std::string wrap_mark(std::uint32_t mark, std::string inner) {
  if (mark == 0) return inner;
  return "_" + std::to_string(mark) + "(" + std::move(inner) + ")";
}

std::string par_member_text(const Pattern& m, bool marked) {
  const std::string& text = marked ? m.marked_key() : m.key();
  if (m.is_par() && !(marked && m.frozen())) return "(" + text + ")";
  return text;
}

std::string rule_text(const LocalRule& r) {
  switch (r.kind) {
    case RuleKind::Plain:
      return "{" + r.lhs.key() + " => " + r.rhs.key() + "}";
    case RuleKind::Out:
      return "{" + r.lhs.key() + " ^ " + render_sequence(r.lhs_membrane) + " => " +
             r.rhs.key() + " ^ " + render_sequence(r.rhs_membrane) + "}";
    case RuleKind::In:
      return "{" + r.lhs.key() + " @ " + render_sequence(r.lhs_membrane) + " => " +
             r.rhs.key() + " @ " + render_sequence(r.rhs_membrane) + "}";
  }
  return {};
}

void compute_keys(detail::Node& n) {
  std::string plain;
  std::string marked;
  switch (n.kind) {
    case NodeKind::Seq:
      plain = render_sequence(n.atoms);
      marked = plain;
      break;
    case NodeKind::TermVar:
      plain = "$" + n.name;
      marked = plain;
      break;
    case NodeKind::Rule:
      plain = rule_text(*n.rule);
      marked = plain;
      break;
    case NodeKind::Loop: {
      const Pattern& c = n.children.front();
      const std::string mem = render_sequence(n.atoms);
      plain = "loop(" + mem + ")[" + c.key() + "]";
      marked = "loop(" + wrap_mark(n.membrane_mark, mem) + ")[" + c.marked_key() + "]";
      n.has_marks = n.membrane_mark != 0 || c.has_marks();
      break;
    }
    case NodeKind::Par: {
      if (n.children.empty()) {
        plain = "eps";
        marked = plain;
        break;
      }
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i != 0) {
          plain += " | ";
          marked += " | ";
        }
        plain += par_member_text(n.children[i], false);
        marked += par_member_text(n.children[i], true);
        n.has_marks = n.has_marks || n.children[i].has_marks();
      }
      break;
    }
  }
  n.has_marks = n.has_marks || n.mark != 0;
  n.marked_key = n.has_marks ? wrap_mark(n.mark, std::move(marked)) : plain;
  n.key = std::move(plain);
}

const std::shared_ptr<const detail::Node>& epsilon_node() {
  static const std::shared_ptr<const detail::Node> node = [] {
    detail::Node n;
    n.kind = NodeKind::Seq;
    compute_keys(n);
    return std::make_shared<const detail::Node>(std::move(n));
  }();
  return node;
}

}  // namespace

std::string to_string(const Variable& v) {
  switch (v.kind) {
    case VarKind::Element:
      return "?" + v.name;
    case VarKind::Sequence:
      return "~" + v.name;
    case VarKind::Term:
      return "$" + v.name;
  }
  return v.name;
}

std::string render_sequence(const Sequence& s) {
  if (s.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i != 0) out += '.';
    out += render_atom(s[i]);
  }
  return out;
}

Sequence least_rotation(const Sequence& s) {
  Sequence best = s;
  Sequence candidate;
  for (std::size_t shift = 1; shift < s.size(); ++shift) {
    candidate.assign(s.begin() + static_cast<std::ptrdiff_t>(shift), s.end());
    candidate.insert(candidate.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(shift));
    if (candidate < best) best = candidate;
  }
  return best;
}

Pattern::Pattern() : node_(epsilon_node()) {}

Pattern Pattern::make(detail::Node node) {
  compute_keys(node);
  return Pattern(std::make_shared<const detail::Node>(std::move(node)));
}

Pattern Pattern::seq(Sequence atoms) {
  if (atoms.empty()) return {};
  detail::Node n;
  n.kind = NodeKind::Seq;
  n.atoms = std::move(atoms);
  return make(std::move(n));
}

Pattern Pattern::loop(Sequence membrane, Pattern content) {
  detail::Node n;
  n.kind = NodeKind::Loop;
  n.atoms = std::move(membrane);
  n.children.push_back(std::move(content));
  return make(std::move(n));
}

Pattern Pattern::par(std::vector<Pattern> members) {
  detail::Node n;
  n.kind = NodeKind::Par;
  n.children = std::move(members);
  return make(std::move(n));
}

Pattern Pattern::rule(LocalRule rule) {
  detail::Node n;
  n.kind = NodeKind::Rule;
  n.rule = std::make_shared<const LocalRule>(std::move(rule));
  return make(std::move(n));
}

Pattern Pattern::term_var(std::string name) {
  detail::Node n;
  n.kind = NodeKind::TermVar;
  n.name = std::move(name);
  return make(std::move(n));
}

NodeKind Pattern::kind() const { return node_->kind; }

bool Pattern::is_epsilon() const {
  return (node_->kind == NodeKind::Seq && node_->atoms.empty()) ||
         (node_->kind == NodeKind::Par && node_->children.empty());
}

const Sequence& Pattern::atoms() const {
  assert(kind() == NodeKind::Seq);
  return node_->atoms;
}

const Sequence& Pattern::membrane() const {
  assert(kind() == NodeKind::Loop);
  return node_->atoms;
}

const Pattern& Pattern::content() const {
  assert(kind() == NodeKind::Loop);
  return node_->children.front();
}

const std::vector<Pattern>& Pattern::members() const {
  assert(kind() == NodeKind::Par);
  return node_->children;
}

const LocalRule& Pattern::local_rule() const {
  assert(kind() == NodeKind::Rule);
  return *node_->rule;
}

const std::string& Pattern::var_name() const {
  assert(kind() == NodeKind::TermVar);
  return node_->name;
}

std::uint32_t Pattern::mark() const { return node_->mark; }
std::uint32_t Pattern::membrane_mark() const { return node_->membrane_mark; }
bool Pattern::has_marks() const { return node_->has_marks; }
std::uint32_t Pattern::origin() const { return node_->origin; }

Pattern Pattern::with_mark(std::uint32_t mark) const {
  if (node_->mark == mark) return *this;
  detail::Node n = *node_;
  n.mark = mark;
  n.has_marks = false;
  return make(std::move(n));
}

Pattern Pattern::with_membrane_mark(std::uint32_t mark) const {
  assert(kind() == NodeKind::Loop);
  if (node_->membrane_mark == mark) return *this;
  detail::Node n = *node_;
  n.membrane_mark = mark;
  n.has_marks = false;
  return make(std::move(n));
}

Pattern Pattern::with_origin(std::uint32_t origin) const {
  if (node_->origin == origin) return *this;
  detail::Node n = *node_;
  n.origin = origin;
  n.has_marks = false;
  return make(std::move(n));
}

Pattern Pattern::with_content(Pattern content) const {
  assert(kind() == NodeKind::Loop);
  detail::Node n = *node_;
  n.children = {std::move(content)};
  n.has_marks = false;
  return make(std::move(n));
}

Pattern Pattern::with_membrane(Sequence membrane) const {
  assert(kind() == NodeKind::Loop);
  detail::Node n = *node_;
  n.atoms = std::move(membrane);
  n.has_marks = false;
  return make(std::move(n));
}

const std::string& Pattern::key() const { return node_->key; }
const std::string& Pattern::marked_key() const { return node_->marked_key; }

bool operator==(const Pattern& a, const Pattern& b) {
  return a.node_ == b.node_ || a.node_->marked_key == b.node_->marked_key;
}

std::vector<Pattern> members_of(const Pattern& p) {
  if (p.is_epsilon()) return {};
  if (p.is_par()) return p.members();
  return {p};
}

Pattern normalize(const Pattern& p) {
  switch (p.kind()) {
    case NodeKind::Seq:
      return p.atoms().empty() ? Pattern() : p;
    case NodeKind::TermVar:
      return p;
    case NodeKind::Rule: {
      const LocalRule& r = p.local_rule();
      Pattern lhs = normalize(r.lhs);
      Pattern rhs = normalize(r.rhs);
      if (lhs.identical(r.lhs) && rhs.identical(r.rhs)) return p;
      LocalRule nr = r;
      nr.lhs = std::move(lhs);
      nr.rhs = std::move(rhs);
      return Pattern::rule(std::move(nr)).with_mark(p.mark()).with_origin(p.origin());
    }
    case NodeKind::Loop: {
      Sequence membrane = least_rotation(p.membrane());
      Pattern content = normalize(p.content());
      // A frozen epsilon membrane is kept so that the mark survives the step.
      if (membrane.empty() && content.is_epsilon() && p.membrane_mark() == 0) return {};
      if (membrane == p.membrane() && content.identical(p.content())) return p;
      return p.with_membrane(std::move(membrane)).with_content(std::move(content));
    }
    case NodeKind::Par: {
      std::vector<Pattern> flat;
      const std::uint32_t inherited = p.mark();
      auto push = [&](const Pattern& n) {
        flat.push_back(inherited != 0 && !n.frozen() ? n.with_mark(inherited) : n);
      };
      for (const Pattern& m : p.members()) {
        Pattern n = normalize(m);
        if (n.is_epsilon()) continue;
        if (n.is_par()) {
          for (const Pattern& c : n.members()) push(c);
        } else {
          push(n);
        }
      }
      std::stable_sort(flat.begin(), flat.end(), [](const Pattern& a, const Pattern& b) {
        if (a.key() != b.key()) return a.key() < b.key();
        return a.marked_key() < b.marked_key();
      });
      if (flat.empty()) return {};
      if (flat.size() == 1) return flat.front();
      if (inherited == 0 && flat.size() == p.members().size() &&
          std::equal(flat.begin(), flat.end(), p.members().begin(),
                     [](const Pattern& a, const Pattern& b) { return a.identical(b); })) {
        return p;
      }
      return Pattern::par(std::move(flat)).with_origin(p.origin());
    }
  }
  return p;
}

bool equiv(const Pattern& a, const Pattern& b) {
  return normalize(a).marked_key() == normalize(b).marked_key();
}

namespace {

void collect_vars(const Sequence& s, VariableSet& out) {
  for (const Atom& a : s) {
    if (a.kind == AtomKind::ElementVar) out.insert({VarKind::Element, a.name});
    if (a.kind == AtomKind::SequenceVar) out.insert({VarKind::Sequence, a.name});
  }
}

void collect_vars(const Pattern& p, RuleBodies bodies, VariableSet& out) {
  switch (p.kind()) {
    case NodeKind::Seq:
      collect_vars(p.atoms(), out);
      break;
    case NodeKind::TermVar:
      out.insert({VarKind::Term, p.var_name()});
      break;
    case NodeKind::Loop:
      collect_vars(p.membrane(), out);
      collect_vars(p.content(), bodies, out);
      break;
    case NodeKind::Par:
      for (const Pattern& m : p.members()) collect_vars(m, bodies, out);
      break;
    case NodeKind::Rule:
      if (bodies == RuleBodies::Include) {
        const LocalRule& r = p.local_rule();
        collect_vars(r.lhs, bodies, out);
        collect_vars(r.rhs, bodies, out);
        collect_vars(r.lhs_membrane, out);
        collect_vars(r.rhs_membrane, out);
      }
      break;
  }
}

Pattern strip_marks(const Pattern& p) {
  if (!p.has_marks() && p.origin() == 0) return p;
  switch (p.kind()) {
    case NodeKind::Loop:
      return Pattern::loop(p.membrane(), strip_marks(p.content()));
    case NodeKind::Par: {
      std::vector<Pattern> members;
      members.reserve(p.members().size());
      for (const Pattern& m : p.members()) members.push_back(strip_marks(m));
      return Pattern::par(std::move(members));
    }
    default:
      return p.with_mark(0).with_origin(0);
  }
}

}  // namespace

VariableSet vars(const Pattern& p, RuleBodies bodies) {
  VariableSet out;
  collect_vars(p, bodies, out);
  return out;
}

VariableSet vars(const Sequence& s) {
  VariableSet out;
  collect_vars(s, out);
  return out;
}

VariableSet vars(const LocalRule& r) { return vars(Pattern::rule(r)); }

bool is_ground(const Pattern& p) { return vars(p, RuleBodies::Exclude).empty(); }

WellFormedness check_local_rule(const LocalRule& r) {
  if (normalize(r.lhs).is_epsilon()) return WellFormedness::EmptyLeftHandSide;
  const VariableSet left = vars(r.lhs);
  const VariableSet right = vars(r.rhs);
  if (!std::includes(left.begin(), left.end(), right.begin(), right.end())) {
    return WellFormedness::RightVariablesNotInLeft;
  }
  if (r.kind != RuleKind::Plain) {
    const VariableSet left_mem = vars(r.lhs_membrane);
    const VariableSet right_mem = vars(r.rhs_membrane);
    if (!std::includes(left_mem.begin(), left_mem.end(), right_mem.begin(), right_mem.end())) {
      return WellFormedness::MembraneVariablesNotInLeft;
    }
  }
  return WellFormedness::Ok;
}

bool well_formed_local_rule(const LocalRule& r) { return check_local_rule(r) == WellFormedness::Ok; }

std::string describe(WellFormedness w) {
  switch (w) {
    case WellFormedness::Ok:
      return "well formed";
    case WellFormedness::EmptyLeftHandSide:
      return "left-hand side is congruent to eps";
    case WellFormedness::RightVariablesNotInLeft:
      return "right-hand side uses variables absent from the left-hand side";
    case WellFormedness::MembraneVariablesNotInLeft:
      return "target membrane uses variables absent from the source membrane";
  }
  return {};
}

Pattern erase(const Pattern& marked) { return normalize(strip_marks(marked)); }

Pattern freeze(const Pattern& p, std::uint32_t mark) {
  Pattern n = normalize(p);
  if (n.is_epsilon() || mark == 0) return n;
  if (!n.is_par()) return n.frozen() ? n : n.with_mark(mark);
  std::vector<Pattern> members;
  for (const Pattern& m : n.members()) members.push_back(m.frozen() ? m : m.with_mark(mark));
  return normalize(Pattern::par(std::move(members)));
}

}  // namespace clslr
