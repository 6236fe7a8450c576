#pragma once

// Rule features, membrane types, pattern types and the typing judgments for
// sequences, patterns and global rules.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "clslr/error.hpp"
#include "clslr/instantiation.hpp"
#include "clslr/term.hpp"

namespace clslr {

enum class Feature : std::uint8_t { d, r, s, e, o, i };

inline constexpr Feature kAllFeatures[] = {Feature::d, Feature::r, Feature::s,
                                           Feature::e, Feature::o, Feature::i};

char feature_letter(Feature f);
std::optional<Feature> feature_from_letter(char c);

/// A set of features.
class MembraneType {
 public:
  MembraneType() = default;
  MembraneType(std::initializer_list<Feature> features) {
    for (Feature f : features) insert(f);
  }

  void insert(Feature f) { bits_ |= bit(f); }
  bool contains(Feature f) const { return (bits_ & bit(f)) != 0; }
  bool empty() const { return bits_ == 0; }
  bool subset_of(const MembraneType& other) const { return (bits_ & ~other.bits_) == 0; }
  MembraneType operator|(const MembraneType& other) const {
    MembraneType out;
    out.bits_ = static_cast<std::uint8_t>(bits_ | other.bits_);
    return out;
  }
  std::uint8_t bits() const { return bits_; }
  static MembraneType from_bits(std::uint8_t bits) {
    MembraneType out;
    out.bits_ = static_cast<std::uint8_t>(bits & 0x3f);
    return out;
  }

  friend bool operator==(const MembraneType&, const MembraneType&) = default;

 private:
  static std::uint8_t bit(Feature f) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(f)); }
  std::uint8_t bits_ = 0;
};

/// Sequence of membrane types; the empty list is the empty pattern type.
using PatternType = std::vector<MembraneType>;

enum class LookupPolicy : std::uint8_t { Strict, Permissive };

/// Lambda: membrane types of elements.
struct Classification {
  std::map<std::string, MembraneType> types;
  LookupPolicy policy = LookupPolicy::Strict;

  /// Throws UnknownElement in strict mode; returns the empty set otherwise.
  MembraneType lookup(const std::string& element) const;
};

using BasisEntry = std::variant<MembraneType, PatternType>;

/// Delta: membrane types for element and sequence variables, pattern types
/// for term variables.
using Basis = std::map<Variable, BasisEntry>;

MembraneType features(const LocalRule& r);

PatternType union_type(const PatternType& a, const PatternType& b);
/// Positionwise inclusion, the shorter list padded with empty sets.
bool contained(const PatternType& a, const PatternType& b);

MembraneType type_seq(const Basis& delta, const Classification& lambda, const Sequence& sp);

/// Syntax-directed type of p. Embedded rules are typed with their own
/// variables left open: see type_rule_static.
PatternType type_pattern(const Basis& delta, const Classification& lambda, const Pattern& p);

/// Type of a local rule whose variables are not yet known. Term variables of
/// the right-hand side count as the empty type, and a membrane side condition
/// is checked only when both membranes are ground.
PatternType type_rule_static(const Classification& lambda, const LocalRule& r);

/// Type of a local rule under a basis covering all its variables, with every
/// side condition checked.
PatternType type_rule(const Basis& delta, const Classification& lambda, const LocalRule& r);

bool check_global(const Basis& delta, const Classification& lambda, const GlobalRule& g);

/// Variables whose basis entry can influence typing of the rule: term
/// variables, and sequence or element variables in membrane positions.
VariableSet typing_relevant_vars(const GlobalRule& g);
VariableSet typing_relevant_vars(const LocalRule& r);

/// Delta mapping each variable of sigma (or only those in `only`) to the
/// type of its image.
Basis infer_basis(const Instantiation& sigma, const Classification& lambda,
                  const VariableSet* only = nullptr);

bool agrees(const Instantiation& sigma, const Basis& delta, const Classification& lambda);

std::string render_membrane_type(const MembraneType& phi);
std::string render_type(const PatternType& tau);

/// Membrane elements of p (outside rule bodies and inside them) that Lambda
/// does not classify.
std::set<std::string> unclassified_elements(const Pattern& p, const Classification& lambda);

}  // namespace clslr
