#pragma once

#include <string>
#include <vector>

#include "clslr/engine.hpp"
#include "clslr/types.hpp"

namespace clslr {

struct TypedModel {
  Pattern term;
  std::vector<GlobalRule> globals;
  Classification lambda;
};

/// Whether a single label may fire in the typed semantics. Typing failures of
/// the instantiated rule reject the label; unknown elements propagate.
bool typed_label(const ReductionLabel& label, const Classification& lambda);

std::vector<ReductionLabel> typed_find_redexes(const TypedModel& m, const Pattern& marked, MatchBudget& budget);
std::vector<ReductionLabel> typed_find_redexes(const TypedModel& m, const Pattern& marked);

Trace typed_parallel_reduce(const TypedModel& m, const ReduceOptions& options);

/// True iff `after` types with a type contained in the type of `before`. A
/// typing failure of `after` yields false with the reason in `diagnostic`.
bool subject_reduction_check(const Pattern& before, const Pattern& after, const Classification& lambda,
                             std::string* diagnostic = nullptr);

}  // namespace clslr
