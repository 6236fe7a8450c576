#pragma once

// Seeded generators of patterns, terms, rules and typed models.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "clslr/typed_engine.hpp"

namespace clslr::testing {

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

std::vector<std::string> alphabet(std::size_t n);  // a, b, c, ...

/// Unnormalized pattern trees: nested Par, explicit eps members, unrotated
/// membranes, Loop(eps)|eps. Leaves are atoms or term variables.
struct RawOptions {
  std::size_t alphabet = 3;
  std::size_t max_leaves = 8;
  std::size_t max_depth = 3;
  bool variables = true;
  bool rules = true;
};
Pattern random_raw_pattern(Random& r, const RawOptions& o);

/// A random ground term (rules inside may carry variables).
Pattern random_term(Random& r, std::size_t alphabet, std::size_t max_depth, std::size_t max_items);

/// A random well-formed local rule over `elements`.
LocalRule random_local_rule(Random& r, const std::vector<std::string>& elements, bool allow_nested = true);

/// A random classification of `elements`.
Classification random_classification(Random& r, const std::vector<std::string>& elements, double density);

/// A random model whose term types under its classification: at most
/// `alphabet` elements, compartment depth at most `max_depth`, at most
/// `max_rules` rules (local and global together).
TypedModel random_typed_model(Random& r, std::size_t alphabet, std::size_t max_depth, std::size_t max_rules);

/// A random ground image of the right kind for v.
Value random_image(Random& r, const Variable& v, std::size_t alphabet);

/// A random pattern whose free variables are drawn from `pool`.
Pattern random_pattern_over(Random& r, const std::vector<Variable>& pool, std::size_t alphabet,
                            std::size_t max_depth);

/// Every normalized pattern with at most `max_leaves` leaves (see leaf_count) built from the
/// given sequence atoms and term-variable names (plus one fixed rule leaf
/// when `rule_leaf` is set).
std::vector<Pattern> enumerate_patterns(std::size_t max_leaves, const std::vector<Atom>& atoms,
                                        const std::vector<std::string>& term_vars, bool rule_leaf);

/// Number of leaves: atoms in sequences and membranes, term variables, rule
/// nodes and compartments (one each).
std::size_t leaf_count(const Pattern& p);

}  // namespace clslr::testing
