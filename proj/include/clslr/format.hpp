#pragma once

// Textual model syntax, canonical rendering and JSON traces.

#include <map>
#include <string>
#include <vector>

#include "clslr/engine.hpp"
#include "clslr/types.hpp"

namespace clslr {

struct ModelFile {
  Pattern term;
  bool has_term = false;
  std::vector<GlobalRule> globals;
  Classification classification;
  std::map<std::string, std::string> options;
};

/// Parses a model or classification file. Rules are checked for
/// well-formedness and the term for groundness.
ModelFile parse_model(const std::string& text);

/// Parses one pattern; variables are allowed anywhere.
Pattern parse_pattern(const std::string& text);
Sequence parse_sequence(const std::string& text);
/// "lhs => rhs", the text of a global rule as rendered in traces.
GlobalRule parse_global_rule(const std::string& text);

/// Canonical text of p: parse(render(p)) is equivalent to p, and equivalent
/// patterns render identically.
std::string render(const Pattern& p);
std::string render(const GlobalRule& g);
std::string render_model(const ModelFile& m);

std::string trace_to_json(const Trace& trace);
/// A JSON array of traces, one per parallel step.
std::string traces_to_json(const std::vector<Trace>& traces);

Trace trace_from_json(const std::string& text);
/// Accepts either a single trace object or an array of them.
std::vector<Trace> traces_from_json(const std::string& text);

}  // namespace clslr
