#include "clslr/instantiation.hpp"

namespace clslr {

std::string render_value(const Value& v) {
  if (const auto* s = std::get_if<Sequence>(&v)) return render_sequence(*s);
  return normalize(std::get<Pattern>(v)).key();
}

bool same_value(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (const auto* s = std::get_if<Sequence>(&a)) return *s == std::get<Sequence>(b);
  return std::get<Pattern>(a).key() == std::get<Pattern>(b).key();
}

std::string key(const Instantiation& sigma) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, value] : sigma) {
    if (!first) out += ", ";
    first = false;
    out += to_string(var) + " -> " + render_value(value);
  }
  return out + "}";
}

}  // namespace clslr
