#include "clslr/typed_engine.hpp"

namespace clslr {

bool typed_label(const ReductionLabel& label, const Classification& lambda) {
  try {
    if (const auto* g = std::get_if<GlobalRule>(&label.rule)) {
      const VariableSet relevant = typing_relevant_vars(*g);
      return check_global(infer_basis(label.sigma, lambda, &relevant), lambda, *g);
    }
    const LocalRule& r = std::get<LocalRule>(label.rule);
    const VariableSet relevant = typing_relevant_vars(r);
    const PatternType dynamic = type_rule(infer_basis(label.sigma, lambda, &relevant), lambda, r);
    // The occurrence was typed before its variables were known; the instance
    // must not carry more than that.
    return contained(dynamic, type_rule_static(lambda, r));
  } catch (const SideConditionViolated&) {
    return false;
  }
}

std::vector<ReductionLabel> typed_find_redexes(const TypedModel& m, const Pattern& marked, MatchBudget& budget) {
  std::vector<ReductionLabel> out;
  for (ReductionLabel& label : find_redexes(m.globals, marked, budget)) {
    if (typed_label(label, m.lambda)) out.push_back(std::move(label));
  }
  return out;
}

std::vector<ReductionLabel> typed_find_redexes(const TypedModel& m, const Pattern& marked) {
  MatchBudget budget;
  return typed_find_redexes(m, marked, budget);
}

Trace typed_parallel_reduce(const TypedModel& m, const ReduceOptions& options) {
  Trace trace = parallel_reduce_with(
      m.term, [&](const Pattern& marked, MatchBudget& budget) { return typed_find_redexes(m, marked, budget); },
      options);
  trace.typed = true;
  return trace;
}

bool subject_reduction_check(const Pattern& before, const Pattern& after, const Classification& lambda,
                             std::string* diagnostic) {
  const PatternType tau = type_pattern({}, lambda, before);
  PatternType tau2;
  try {
    tau2 = type_pattern({}, lambda, after);
  } catch (const Error& e) {
    if (diagnostic != nullptr) *diagnostic = e.what();
    return false;
  }
  if (contained(tau2, tau)) return true;
  if (diagnostic != nullptr) *diagnostic = render_type(tau2) + " is not contained in " + render_type(tau);
  return false;
}

}  // namespace clslr
