#include "clslr/format.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>

namespace clslr {

namespace {

enum class Tok : std::uint8_t { Ident, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLocation where;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    const SourceLocation where{line, col};
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::Ident, text.substr(i, j - i), where});
      advance(j - i);
      continue;
    }
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::Symbol, "=>", where});
      advance(2);
      continue;
    }
    static const std::string kSymbols = "|.()[]{}^@?~$:;,=-";
    if (kSymbols.find(c) == std::string::npos) {
      throw SyntaxError(where, "a token, found '" + std::string(1, c) + "'");
    }
    out.push_back({Tok::Symbol, std::string(1, c), where});
    advance(1);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(lex(text)) {}

  ModelFile file() {
    ModelFile m;
    while (!at_end()) {
      const Token& t = peek();
      if (is_keyword("global")) {
        next();
        const SourceLocation where = t.where;
        Pattern lhs = par(false);
        expect("=>");
        Pattern rhs = par(false);
        expect(";");
        m.globals.push_back(checked_global(where, std::move(lhs), std::move(rhs)));
      } else if (is_keyword("element")) {
        next();
        const std::string name = ident("an element name");
        expect(":");
        expect("{");
        MembraneType phi;
        if (!is_symbol("}")) {
          do {
            const Token& f = peek();
            const std::string letter = ident("a feature letter");
            const auto feature = letter.size() == 1 ? feature_from_letter(letter[0]) : std::nullopt;
            if (!feature) throw SyntaxError(f.where, "one of the features d, r, s, e, o, i");
            phi.insert(*feature);
          } while (accept(","));
        }
        expect("}");
        expect(";");
        m.classification.types[name] = phi;
      } else if (is_keyword("option")) {
        next();
        const std::string name = ident("an option name");
        expect("=");
        std::string value;
        while (!is_symbol(";") && !at_end()) value += next().text;
        if (value.empty()) throw SyntaxError(peek().where, "an option value");
        expect(";");
        m.options[name] = value;
      } else {
        if (m.has_term) throw SyntaxError(t.where, "a single term statement per file");
        const SourceLocation where = t.where;
        m.term = normalize(par(false));
        if (!is_ground(m.term)) {
          throw SyntaxError(where, "a ground term (variables may only occur inside local rules)");
        }
        m.has_term = true;
        accept(";");
      }
    }
    return m;
  }

  Pattern whole_pattern() {
    Pattern p = par(false);
    expect_end();
    return normalize(p);
  }

  Sequence whole_sequence() {
    Sequence s = seq();
    expect_end();
    return s;
  }

  GlobalRule whole_global() {
    const SourceLocation where = peek().where;
    Pattern lhs = par(false);
    expect("=>");
    Pattern rhs = par(false);
    expect_end();
    return checked_global(where, std::move(lhs), std::move(rhs));
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_symbol(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Symbol && peek(ahead).text == s;
  }
  bool is_keyword(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool accept(const char* s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  void expect(const char* s) {
    if (!accept(s)) throw SyntaxError(peek().where, std::string("'") + s + "'");
  }
  void expect_end() {
    if (!at_end()) throw SyntaxError(peek().where, "end of input");
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) throw SyntaxError(peek().where, what);
    return next().text;
  }

  static GlobalRule checked_global(SourceLocation where, Pattern lhs, Pattern rhs) {
    GlobalRule g{normalize(lhs), normalize(rhs)};
    if (g.lhs.is_epsilon()) {
      throw IllFormedRule(where, describe(WellFormedness::EmptyLeftHandSide), render(g));
    }
    // Instantiation never enters rule bodies, so only free occurrences count.
    const VariableSet left = vars(g.lhs, RuleBodies::Exclude);
    const VariableSet right = vars(g.rhs, RuleBodies::Exclude);
    if (!std::includes(left.begin(), left.end(), right.begin(), right.end())) {
      throw IllFormedRule(where, describe(WellFormedness::RightVariablesNotInLeft), render(g));
    }
    return g;
  }

  Pattern par(bool rule_side) {
    std::vector<Pattern> items;
    items.push_back(item(rule_side));
    while (accept("|")) items.push_back(item(rule_side));
    if (items.size() == 1) return items.front();
    return Pattern::par(std::move(items));
  }

  Pattern item(bool rule_side) {
    const Token& t = peek();
    if (accept("(")) {
      Pattern inner = par(rule_side);
      expect(")");
      return inner;
    }
    if (is_symbol("{")) return rule();
    if (accept("$")) return Pattern::term_var(ident("a term variable name"));
    if (t.kind == Tok::Ident && t.text == "loop" && is_symbol("(", 1)) {
      if (rule_side) throw SyntaxError(t.where, "a pattern without compartments inside a local rule");
      next();
      expect("(");
      Sequence membrane = seq();
      expect(")");
      expect("[");
      Pattern content = par(false);
      expect("]");
      return Pattern::loop(std::move(membrane), std::move(content));
    }
    if (t.kind == Tok::Ident || is_symbol("?") || is_symbol("~")) return Pattern::seq(seq());
    throw SyntaxError(t.where, "a pattern");
  }

  Sequence seq() {
    if (is_keyword("eps")) {
      next();
      return {};
    }
    Sequence out;
    out.push_back(atom());
    while (accept(".")) out.push_back(atom());
    return out;
  }

  Atom atom() {
    if (accept("?")) return Atom::element_var(ident("an element variable name"));
    if (accept("~")) return Atom::sequence_var(ident("a sequence variable name"));
    const Token& t = peek();
    if (t.kind == Tok::Ident && (t.text == "eps" || t.text == "loop")) {
      throw SyntaxError(t.where, "an element name ('" + t.text + "' is reserved)");
    }
    return Atom::element(ident("an element, ?var or ~var"));
  }

  Pattern rule() {
    const SourceLocation where = peek().where;
    expect("{");
    Pattern lhs = par(true);
    LocalRule r;
    if (accept("=>")) {
      Pattern rhs = par(true);
      r = LocalRule::plain(std::move(lhs), std::move(rhs));
    } else {
      const bool out = is_symbol("^");
      if (!out && !is_symbol("@")) throw SyntaxError(peek().where, "'=>', '^' or '@'");
      const char* dir = out ? "^" : "@";
      next();
      Sequence s1 = seq();
      expect("=>");
      Pattern rhs = par(true);
      expect(dir);
      Sequence s2 = seq();
      r = out ? LocalRule::out(std::move(lhs), std::move(s1), std::move(rhs), std::move(s2))
              : LocalRule::in(std::move(lhs), std::move(s1), std::move(rhs), std::move(s2));
    }
    expect("}");
    r.lhs = normalize(r.lhs);
    r.rhs = normalize(r.rhs);
    const WellFormedness w = check_local_rule(r);
    Pattern node = Pattern::rule(r);
    if (w != WellFormedness::Ok) throw IllFormedRule(where, describe(w), node.key());
    return node;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

using nlohmann::json;

json label_to_json(const ReductionLabel& l) {
  json step;
  step["schema"] = to_string(l.schema);
  step["rule"] = render_rule(l.rule);
  json path = json::array();
  for (const PathStep& s : l.path) path.push_back(to_string(s));
  step["path"] = path;
  json sigma = json::object();
  for (const auto& [var, value] : l.sigma) sigma[to_string(var)] = render_value(value);
  step["sigma"] = sigma;
  step["residue"] = render(l.residue);
  return step;
}

json to_json(const Trace& t) {
  json j;
  j["initial"] = render(t.initial);
  j["final"] = render(t.final);
  j["seed"] = t.seed;
  j["strategy"] = to_string(t.strategy);
  j["typed"] = t.typed;
  if (t.strategy == Strategy::RandomK) j["k"] = t.k;
  json steps = json::array();
  for (const ReductionLabel& l : t.steps) steps.push_back(label_to_json(l));
  j["steps"] = steps;
  return j;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(std::string("malformed trace: missing \"") + name + "\"");
  return j.at(name);
}

std::string string_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) throw Error(std::string("malformed trace: \"") + name + "\" is not a string");
  return v.get<std::string>();
}

ReductionLabel label_from_json(const json& j) {
  ReductionLabel l;
  l.schema = schema_from_string(string_field(j, "schema"));
  const std::string rule = string_field(j, "rule");
  if (l.schema == Schema::GRT) {
    l.rule = parse_global_rule(rule);
  } else {
    const Pattern p = parse_pattern(rule);
    const RuleKind expected = l.schema == Schema::LR      ? RuleKind::Plain
                              : l.schema == Schema::LROut ? RuleKind::Out
                                                          : RuleKind::In;
    if (!p.is_rule() || p.local_rule().kind != expected) {
      throw Error("malformed trace: rule '" + rule + "' does not fit schema " + to_string(l.schema));
    }
    l.rule = p.local_rule();
  }
  for (const json& s : field(j, "path")) {
    if (!s.is_string()) throw Error("malformed trace: path steps must be strings");
    l.path.push_back(path_step_from_string(s.get<std::string>()));
  }
  for (const auto& [name, value] : field(j, "sigma").items()) {
    if (name.size() < 2 || !value.is_string()) throw Error("malformed trace: bad binding '" + name + "'");
    const std::string text = value.get<std::string>();
    const std::string var = name.substr(1);
    switch (name[0]) {
      case '?': {
        Sequence s = parse_sequence(text);
        if (s.size() != 1 || s[0].is_variable()) throw Error("malformed trace: ?" + var + " must bind one element");
        l.sigma[{VarKind::Element, var}] = std::move(s);
        break;
      }
      case '~':
        l.sigma[{VarKind::Sequence, var}] = parse_sequence(text);
        break;
      case '$':
        l.sigma[{VarKind::Term, var}] = parse_pattern(text);
        break;
      default:
        throw Error("malformed trace: bad variable '" + name + "'");
    }
  }
  l.residue = parse_pattern(string_field(j, "residue"));
  return l;
}

Trace from_json(const json& j) {
  Trace t;
  t.initial = parse_pattern(string_field(j, "initial"));
  t.final = parse_pattern(string_field(j, "final"));
  const json& seed = field(j, "seed");
  if (!seed.is_number_integer()) throw Error("malformed trace: \"seed\" is not an integer");
  t.seed = seed.get<std::uint64_t>();
  t.strategy = strategy_from_string(string_field(j, "strategy"));
  if (j.contains("typed")) t.typed = j.at("typed").get<bool>();
  if (j.contains("k")) t.k = j.at("k").get<std::size_t>();
  const json& steps = field(j, "steps");
  if (!steps.is_array()) throw Error("malformed trace: \"steps\" is not an array");
  for (const json& s : steps) t.steps.push_back(label_from_json(s));
  return t;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed trace: ") + e.what());
  }
}

}  // namespace

ModelFile parse_model(const std::string& text) { return Parser(text).file(); }

Pattern parse_pattern(const std::string& text) { return Parser(text).whole_pattern(); }

Sequence parse_sequence(const std::string& text) { return Parser(text).whole_sequence(); }

GlobalRule parse_global_rule(const std::string& text) { return Parser(text).whole_global(); }

std::string render(const Pattern& p) { return normalize(p).key(); }

std::string render(const GlobalRule& g) { return render(g.lhs) + " => " + render(g.rhs); }

std::string render_model(const ModelFile& m) {
  std::string out;
  for (const auto& [name, value] : m.options) out += "option " + name + " = " + value + ";\n";
  for (const auto& [name, phi] : m.classification.types) {
    out += "element " + name + " : " + render_membrane_type(phi) + ";\n";
  }
  for (const GlobalRule& g : m.globals) out += "global " + render(g) + ";\n";
  if (m.has_term) out += render(m.term) + "\n";
  return out;
}

std::string trace_to_json(const Trace& trace) { return to_json(trace).dump(2) + "\n"; }

std::string traces_to_json(const std::vector<Trace>& traces) {
  json arr = json::array();
  for (const Trace& t : traces) arr.push_back(to_json(t));
  return arr.dump(2) + "\n";
}

Trace trace_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error("malformed trace: expected an object");
  return from_json(j);
}

std::vector<Trace> traces_from_json(const std::string& text) {
  const json j = parse_json(text);
  std::vector<Trace> out;
  if (j.is_array()) {
    for (const json& t : j) out.push_back(from_json(t));
  } else {
    out.push_back(from_json(j));
  }
  return out;
}

}  // namespace clslr
