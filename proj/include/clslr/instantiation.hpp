#pragma once

#include <map>
#include <string>
#include <variant>

#include "clslr/term.hpp"

namespace clslr {

/// Image of a variable: a sequence for element and sequence variables (an
/// element variable's image has exactly one atom), a term for term variables.
using Value = std::variant<Sequence, Pattern>;

using Instantiation = std::map<Variable, Value>;

std::string render_value(const Value& v);
bool same_value(const Value& a, const Value& b);

/// Canonical text of sigma, used for deduplication and as a map key.
std::string key(const Instantiation& sigma);

}  // namespace clslr
