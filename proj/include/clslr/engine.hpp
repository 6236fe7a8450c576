#pragma once

// Untyped operational semantics: redexes, rule application with freeze
// marks, parallel reduction and traces.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "clslr/error.hpp"
#include "clslr/instantiation.hpp"
#include "clslr/matcher.hpp"
#include "clslr/term.hpp"

namespace clslr {

enum class Schema : std::uint8_t { GRT, LR, LROut, LRIn };

std::string to_string(Schema s);
Schema schema_from_string(const std::string& s);

struct PathStep {
  enum class Kind : std::uint8_t { Par, Loop };
  Kind kind = Kind::Par;
  std::size_t index = 0;  // Par only

  static PathStep par(std::size_t i) { return {Kind::Par, i}; }
  static PathStep loop() { return {Kind::Loop, 0}; }

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Address of a compartment content position (a context hole). For LR-Out the
/// path addresses the content of the compartment the material leaves.
using ContextPath = std::vector<PathStep>;

std::string to_string(const PathStep& s);
PathStep path_step_from_string(const std::string& s);

using AnyRule = std::variant<GlobalRule, LocalRule>;

std::string render_rule(const AnyRule& r);

struct ReductionLabel {
  Schema schema = Schema::GRT;
  AnyRule rule;
  ContextPath path;
  Instantiation sigma;
  Pattern residue;  // eps for GRT
};

/// Canonical text of a label; equal labels have equal keys.
std::string key(const ReductionLabel& l);

enum class Strategy : std::uint8_t { Single, RandomK, Maximal };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

inline constexpr std::size_t kDefaultStepCap = 100'000;

struct ReduceOptions {
  Strategy strategy = Strategy::Maximal;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::size_t step_cap = kDefaultStepCap;
  std::size_t match_cap = kDefaultMatchCap;
};

/// One parallel step: the applications performed, from `initial` to `final`.
struct Trace {
  Pattern initial;
  std::vector<ReductionLabel> steps;
  Pattern final;
  Strategy strategy = Strategy::Maximal;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  bool typed = false;
};

std::vector<ReductionLabel> find_redexes(const std::vector<GlobalRule>& globals, const Pattern& marked,
                                         MatchBudget& budget);
std::vector<ReductionLabel> find_redexes(const std::vector<GlobalRule>& globals, const Pattern& marked);

/// Applies a label produced by find_redexes on `marked`. Produced material and
/// rewritten membranes receive `mark`. Throws StaleLabel.
Pattern apply_label(const Pattern& marked, const ReductionLabel& label, std::uint32_t mark);

/// What an application touched, as seen by the decomposition verifier.
struct ApplyReport {
  bool touched_frozen = false;
  std::set<std::uint32_t> consumed;            // origins of removed members
  std::set<std::uint32_t> consumed_membranes;  // origins of rewritten compartments
};

/// Like apply_label, but matched material is allowed to be frozen; the report
/// says whether it was.
Pattern apply_label_unchecked(const Pattern& marked, const ReductionLabel& label, std::uint32_t mark,
                              ApplyReport& report);

using RedexFinder = std::function<std::vector<ReductionLabel>(const Pattern& marked, MatchBudget& budget)>;

Trace parallel_reduce(const Pattern& t, const std::vector<GlobalRule>& globals, const ReduceOptions& options);
Trace parallel_reduce_with(const Pattern& t, const RedexFinder& finder, const ReduceOptions& options);

/// Marked term reached by applying the trace's labels to its initial term.
Pattern replay_marked(const Trace& trace);
/// erase(replay_marked(trace)).
Pattern replay(const Trace& trace);

/// Checks that the labels changed pairwise disjoint regions and that initial
/// and final term agree outside them.
bool verify_decomposition(const Trace& trace);

/// Canonical text of the compartment tree with membranes and other material
/// dropped.
std::string loop_shape(const Pattern& t);

}  // namespace clslr
