// clslr: check, type-check, run and replay models.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "clslr/format.hpp"
#include "clslr/typed_engine.hpp"

namespace {

using namespace clslr;

constexpr int kOk = 0;
constexpr int kDiagnostic = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An error already prefixed with the file it came from.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelFile load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const Error& e) {
    throw FileError(path + ":" + e.what());
  }
}

struct Options {
  std::string model;
  std::string trace;
  std::optional<std::string> lambda;
  std::string strategy = "maximal";
  std::optional<std::size_t> k;
  std::uint64_t seed = 0;
  std::size_t steps = 1;
  bool typed = false;
  std::optional<std::string> out;
  std::string format = "text";
  bool permissive = false;
  std::size_t match_cap = kDefaultMatchCap;
};

Classification load_classification(const Options& o, const ModelFile& model) {
  Classification lambda = model.classification;
  if (o.lambda) {
    const ModelFile file = load_model(*o.lambda);
    if (file.has_term) throw FileError(*o.lambda + ": a classification file must not contain a term");
    for (const auto& [name, phi] : file.classification.types) lambda.types[name] = phi;
  }
  lambda.policy = o.permissive ? LookupPolicy::Permissive : LookupPolicy::Strict;
  if (o.permissive) {
    for (const std::string& e : unclassified_elements(model.term, lambda)) {
      std::cerr << o.model << ": warning: element '" << e << "' is unclassified; assuming {}\n";
    }
  }
  return lambda;
}

void emit(const Options& o, const std::string& text) {
  if (!o.out) {
    std::cout << text;
    return;
  }
  std::ofstream out(*o.out, std::ios::binary);
  if (!out) throw FileError(*o.out + ": cannot write file");
  out << text;
}

int cmd_check(const Options& o) {
  const ModelFile model = load_model(o.model);
  std::cout << "ok: " << model.globals.size() << " global rule(s), "
            << model.classification.types.size() << " classified element(s)\n";
  return kOk;
}

int cmd_typecheck(const Options& o) {
  const ModelFile model = load_model(o.model);
  const Classification lambda = load_classification(o, model);
  const PatternType tau = type_pattern({}, lambda, model.term);
  for (const GlobalRule& g : model.globals) {
    if (!is_ground(g.lhs) || !is_ground(g.rhs)) continue;
    if (!check_global({}, lambda, g)) {
      throw FileError(o.model + ": global rule " + render(g) + " produces more features than it consumes");
    }
  }
  if (o.format == "json") {
    emit(o, "{\"type\": \"" + render_type(tau) + "\"}\n");
  } else {
    emit(o, render_type(tau) + "\n");
  }
  return kOk;
}

std::string describe(const ReductionLabel& l) {
  std::string path;
  for (const PathStep& s : l.path) path += "/" + to_string(s);
  return "  " + to_string(l.schema) + " " + render_rule(l.rule) + " at " + (path.empty() ? "/" : path) +
         " with " + key(l.sigma) + "\n";
}

int cmd_run(const Options& o) {
  const ModelFile model = load_model(o.model);
  ReduceOptions ro;
  ro.strategy = strategy_from_string(o.strategy);
  ro.k = o.k.value_or(1);
  ro.match_cap = o.match_cap;
  std::optional<TypedModel> typed;
  if (o.typed) {
    typed = TypedModel{model.term, model.globals, load_classification(o, model)};
    type_pattern({}, typed->lambda, model.term);
  }
  std::vector<Trace> traces;
  Pattern current = model.term;
  std::string text;
  for (std::size_t n = 0; n < o.steps; ++n) {
    ro.seed = o.seed + n;
    Trace t;
    if (typed) {
      typed->term = current;
      t = typed_parallel_reduce(*typed, ro);
    } else {
      t = parallel_reduce(current, model.globals, ro);
    }
    text += "step " + std::to_string(n + 1) + ": " + std::to_string(t.steps.size()) + " application(s)\n";
    for (const ReductionLabel& l : t.steps) text += describe(l);
    text += "  => " + render(t.final) + "\n";
    current = t.final;
    const bool idle = t.steps.empty();
    traces.push_back(std::move(t));
    if (idle) break;
  }
  if (o.format == "json") {
    emit(o, traces.size() == 1 ? trace_to_json(traces.front()) : traces_to_json(traces));
  } else {
    emit(o, text);
  }
  return kOk;
}

int cmd_replay(const Options& o) {
  const ModelFile model = load_model(o.model);
  std::vector<Trace> traces;
  try {
    traces = traces_from_json(read_file(o.trace));
  } catch (const Error& e) {
    throw FileError(o.trace + ": " + e.what());
  }
  Pattern expected = model.term;
  for (std::size_t n = 0; n < traces.size(); ++n) {
    const Trace& t = traces[n];
    const std::string where = o.trace + ": step " + std::to_string(n + 1);
    if (!equiv(t.initial, expected)) throw FileError(where + ": initial term does not continue the run");
    for (const ReductionLabel& l : t.steps) {
      const auto* g = std::get_if<GlobalRule>(&l.rule);
      if (g == nullptr) continue;
      const bool known = std::any_of(model.globals.begin(), model.globals.end(), [&](const GlobalRule& m) {
        return render(m) == render(*g);
      });
      if (!known) throw FileError(where + ": global rule " + render(*g) + " is not part of the model");
    }
    Pattern final;
    try {
      final = replay(t);
    } catch (const Error& e) {
      throw FileError(where + ": " + e.what());
    }
    if (!equiv(final, t.final)) throw FileError(where + ": replay reaches " + render(final) + ", not the recorded final term");
    if (!verify_decomposition(t)) throw FileError(where + ": labels do not rewrite disjoint regions");
    expected = t.final;
  }
  std::cout << "ok: " << traces.size() << " parallel step(s) replayed and verified\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calculus of looping sequences with local rules"};
  app.require_subcommand(1);
  Options o;

  auto add_lambda = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", o.lambda, "Classification file")->check(CLI::ExistingFile);
    auto* strict = cmd->add_flag("--strict-lambda", "Unclassified elements are errors (default)");
    auto* permissive = cmd->add_flag("--permissive-lambda", o.permissive, "Unclassified elements get {}");
    strict->excludes(permissive);
  };

  auto* check = app.add_subcommand("check", "Parse a model and check well-formedness");
  check->add_option("model", o.model, "Model file")->required();

  auto* typecheck = app.add_subcommand("typecheck", "Print the pattern type of a model's term");
  typecheck->add_option("model", o.model, "Model file")->required();
  typecheck->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  typecheck->add_option("--out", o.out, "Output file");
  add_lambda(typecheck);

  auto* run = app.add_subcommand("run", "Perform parallel reduction steps");
  run->add_option("model", o.model, "Model file")->required();
  run->add_option("--strategy", o.strategy)->check(CLI::IsMember({"single", "random-k", "maximal"}));
  auto* k = run->add_option("--k", o.k, "Applications per step for random-k")->check(CLI::PositiveNumber);
  run->add_option("--seed", o.seed);
  run->add_option("--steps", o.steps, "Number of parallel steps")->check(CLI::PositiveNumber);
  run->add_flag("--typed", o.typed, "Use the typed semantics");
  run->add_option("--out", o.out, "Output file");
  run->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  run->add_option("--match-cap", o.match_cap, "Matcher candidate cap")->check(CLI::PositiveNumber);
  add_lambda(run);

  auto* replay = app.add_subcommand("replay", "Replay and verify a JSON trace");
  replay->add_option("model", o.model, "Model file")->required();
  replay->add_option("trace", o.trace, "Trace file")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      if (o.typed && !o.lambda) throw UsageError("--typed requires --lambda");
      if ((o.strategy == "random-k") != (k->count() > 0)) {
        throw UsageError("--k is required with --strategy random-k and only allowed with it");
      }
    }
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(o);
    if (typecheck->parsed()) return cmd_typecheck(o);
    if (run->parsed()) return cmd_run(o);
    return cmd_replay(o);
  } catch (const FileError& e) {
    std::cerr << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << o.model << ": " << e.what() << "\n";
  }
  return kDiagnostic;
}
