#pragma once

// Patterns, terms and local rules of the calculus of looping sequences with
// local rules, together with structural congruence by canonical normalization.

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace clslr {

enum class AtomKind : std::uint8_t { Element, ElementVar, SequenceVar };

/// One position of a sequence pattern. The defaulted ordering (kind, then
/// name) is the total order used to pick canonical membrane rotations.
struct Atom {
  AtomKind kind = AtomKind::Element;
  std::string name;

  static Atom element(std::string name) { return {AtomKind::Element, std::move(name)}; }
  static Atom element_var(std::string name) { return {AtomKind::ElementVar, std::move(name)}; }
  static Atom sequence_var(std::string name) { return {AtomKind::SequenceVar, std::move(name)}; }

  bool is_variable() const { return kind != AtomKind::Element; }

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// A flattened sequence pattern; the empty vector is epsilon.
using Sequence = std::vector<Atom>;

enum class VarKind : std::uint8_t { Element, Sequence, Term };

struct Variable {
  VarKind kind = VarKind::Term;
  std::string name;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using VariableSet = std::set<Variable>;

std::string to_string(const Variable& v);
std::string render_sequence(const Sequence& s);

/// Lexicographically least rotation of `s` under the atom order.
Sequence least_rotation(const Sequence& s);

enum class NodeKind : std::uint8_t { Seq, Loop, Par, Rule, TermVar };
enum class RuleKind : std::uint8_t { Plain, Out, In };

struct LocalRule;

namespace detail {
struct Node;
}

/// Immutable, shareable pattern tree. The same type carries terms (ground
/// patterns) and marked terms: any node may be frozen by a reduction label
/// (mark != 0) and a compartment's membrane may be frozen separately.
class Pattern {
 public:
  Pattern();  // epsilon

  static Pattern epsilon() { return {}; }
  static Pattern seq(Sequence atoms);
  static Pattern loop(Sequence membrane, Pattern content);
  static Pattern par(std::vector<Pattern> members);
  static Pattern rule(LocalRule rule);
  static Pattern term_var(std::string name);

  NodeKind kind() const;
  bool is_epsilon() const;
  bool is_seq() const { return kind() == NodeKind::Seq; }
  bool is_loop() const { return kind() == NodeKind::Loop; }
  bool is_par() const { return kind() == NodeKind::Par; }
  bool is_rule() const { return kind() == NodeKind::Rule; }
  bool is_term_var() const { return kind() == NodeKind::TermVar; }

  const Sequence& atoms() const;     // Seq
  const Sequence& membrane() const;  // Loop
  const Pattern& content() const;    // Loop
  const std::vector<Pattern>& members() const;  // Par
  const LocalRule& local_rule() const;          // Rule
  const std::string& var_name() const;          // TermVar

  std::uint32_t mark() const;
  std::uint32_t membrane_mark() const;
  bool frozen() const { return mark() != 0; }
  /// True when some node of the subtree (or a membrane in it) carries a mark.
  bool has_marks() const;
  /// Bookkeeping id used by the decomposition verifier; not part of identity.
  std::uint32_t origin() const;

  Pattern with_mark(std::uint32_t mark) const;
  Pattern with_membrane_mark(std::uint32_t mark) const;
  Pattern with_origin(std::uint32_t origin) const;
  /// Rebuilds a compartment around new content, keeping marks and origin.
  Pattern with_content(Pattern content) const;
  Pattern with_membrane(Sequence membrane) const;

  /// Rendering of the tree as written, ignoring marks.
  const std::string& key() const;
  /// Rendering including marks; equals key() for unmarked trees.
  const std::string& marked_key() const;

  /// True iff both handles share one node.
  bool identical(const Pattern& other) const { return node_ == other.node_; }

  /// Syntactic (node-for-node, marks included) equality.
  friend bool operator==(const Pattern& a, const Pattern& b);

 private:
  explicit Pattern(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  static Pattern make(detail::Node node);

  std::shared_ptr<const detail::Node> node_;
};

/// L |-> L, L^S |-> L^S (out) or L@S |-> L@S (in).
struct LocalRule {
  RuleKind kind = RuleKind::Plain;
  Pattern lhs;
  Pattern rhs;
  Sequence lhs_membrane;  // Out/In only
  Sequence rhs_membrane;

  static LocalRule plain(Pattern lhs, Pattern rhs) {
    return {RuleKind::Plain, std::move(lhs), std::move(rhs), {}, {}};
  }
  static LocalRule out(Pattern lhs, Sequence lhs_membrane, Pattern rhs, Sequence rhs_membrane) {
    return {RuleKind::Out, std::move(lhs), std::move(rhs), std::move(lhs_membrane),
            std::move(rhs_membrane)};
  }
  static LocalRule in(Pattern lhs, Sequence lhs_membrane, Pattern rhs, Sequence rhs_membrane) {
    return {RuleKind::In, std::move(lhs), std::move(rhs), std::move(lhs_membrane),
            std::move(rhs_membrane)};
  }
};

/// P |-> P, applicable at any context hole of the whole term.
struct GlobalRule {
  Pattern lhs;
  Pattern rhs;
};

/// Members of a parallel position: the Par members, nothing for epsilon, or
/// the single item otherwise.
std::vector<Pattern> members_of(const Pattern& p);

/// Canonical representative of the structural-congruence class of `p`.
/// Marks are kept on the nodes that carry them; a mark on a Par is pushed to
/// its members.
Pattern normalize(const Pattern& p);

bool equiv(const Pattern& a, const Pattern& b);

enum class RuleBodies : std::uint8_t { Include, Exclude };

VariableSet vars(const Pattern& p, RuleBodies bodies = RuleBodies::Include);
VariableSet vars(const Sequence& s);
VariableSet vars(const LocalRule& r);

/// True iff no variable occurs outside the body of an embedded local rule.
bool is_ground(const Pattern& p);

/// Which well-formedness clause a local rule breaks, if any.
enum class WellFormedness : std::uint8_t {
  Ok,
  EmptyLeftHandSide,
  RightVariablesNotInLeft,
  MembraneVariablesNotInLeft,
};

WellFormedness check_local_rule(const LocalRule& r);
bool well_formed_local_rule(const LocalRule& r);
std::string describe(WellFormedness w);

/// Removes every mark and returns the normalized term.
Pattern erase(const Pattern& marked);

/// Marks every top-level member of `p` with `mark` (members already marked
/// keep their mark).
Pattern freeze(const Pattern& p, std::uint32_t mark);

}  // namespace clslr
