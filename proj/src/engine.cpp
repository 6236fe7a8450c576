#include "clslr/engine.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace clslr {

std::string to_string(Schema s) {
  switch (s) {
    case Schema::GRT:
      return "GRT";
    case Schema::LR:
      return "LR";
    case Schema::LROut:
      return "LR-Out";
    case Schema::LRIn:
      return "LR-In";
  }
  return {};
}

Schema schema_from_string(const std::string& s) {
  if (s == "GRT") return Schema::GRT;
  if (s == "LR") return Schema::LR;
  if (s == "LR-Out") return Schema::LROut;
  if (s == "LR-In") return Schema::LRIn;
  throw Error("unknown schema '" + s + "'");
}

std::string to_string(const PathStep& s) {
  if (s.kind == PathStep::Kind::Loop) return "loop";
  return "par:" + std::to_string(s.index);
}

PathStep path_step_from_string(const std::string& s) {
  if (s == "loop") return PathStep::loop();
  if (s.rfind("par:", 0) == 0 && s.size() > 4 &&
      std::all_of(s.begin() + 4, s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return PathStep::par(std::stoul(s.substr(4)));
  }
  throw Error("malformed path step '" + s + "'");
}

std::string render_rule(const AnyRule& r) {
  if (const auto* g = std::get_if<GlobalRule>(&r)) {
    return normalize(g->lhs).key() + " => " + normalize(g->rhs).key();
  }
  return normalize(Pattern::rule(std::get<LocalRule>(r))).key();
}

std::string key(const ReductionLabel& l) {
  std::string out = to_string(l.schema) + "|" + render_rule(l.rule) + "|";
  for (const PathStep& s : l.path) out += to_string(s) + "/";
  return out + "|" + key(l.sigma) + "|" + l.residue.key();
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Single:
      return "single";
    case Strategy::RandomK:
      return "random-k";
    case Strategy::Maximal:
      return "maximal";
  }
  return {};
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "single") return Strategy::Single;
  if (s == "random-k") return Strategy::RandomK;
  if (s == "maximal") return Strategy::Maximal;
  throw Error("unknown strategy '" + s + "'");
}

namespace {

struct Site {
  ContextPath path;
  Pattern content;
};

// Frozen compartments are produced material as a whole and are not entered.
void collect_sites(const Pattern& content, ContextPath& path, std::vector<Site>& out) {
  out.push_back({path, content});
  const std::vector<Pattern> members = members_of(content);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Pattern& m = members[i];
    if (!m.is_loop() || m.frozen()) continue;
    if (content.is_par()) path.push_back(PathStep::par(i));
    path.push_back(PathStep::loop());
    collect_sites(m.content(), path, out);
    path.pop_back();
    if (content.is_par()) path.pop_back();
  }
}

Pattern node_at(const Pattern& root, const ContextPath& path, std::size_t len) {
  Pattern cur = root;
  for (std::size_t k = 0; k < len; ++k) {
    const PathStep& s = path[k];
    if (s.kind == PathStep::Kind::Loop) {
      if (!cur.is_loop()) throw StaleLabel("path step " + to_string(s) + " does not reach a compartment");
      cur = cur.content();
    } else {
      if (!cur.is_par() || s.index >= cur.members().size()) {
        throw StaleLabel("path step " + to_string(s) + " is out of range");
      }
      cur = cur.members()[s.index];
    }
  }
  return cur;
}

Pattern replace_at(const Pattern& node, const ContextPath& path, std::size_t pos, std::size_t len,
                   const Pattern& replacement) {
  if (pos == len) return replacement;
  const PathStep& s = path[pos];
  if (s.kind == PathStep::Kind::Loop) {
    return node.with_content(replace_at(node.content(), path, pos + 1, len, replacement));
  }
  std::vector<Pattern> members = node.members();
  members[s.index] = replace_at(members[s.index], path, pos + 1, len, replacement);
  return Pattern::par(std::move(members));
}

Pattern replace_at(const Pattern& root, const ContextPath& path, std::size_t len, const Pattern& replacement) {
  node_at(root, path, len);  // validates the path
  return normalize(replace_at(root, path, 0, len, replacement));
}

bool clean(const Pattern& m) { return !m.has_marks(); }

bool clean_target(const Pattern& m) { return m.mark() == 0 && m.membrane_mark() == 0; }

/// Index of the first member satisfying `pred`, preferring members for which
/// `is_clean` holds. Checked mode accepts nothing else.
template <typename Pred, typename Clean>
std::ptrdiff_t locate(const std::vector<Pattern>& members, Pred pred, Clean is_clean, bool checked,
                      ApplyReport* report) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (pred(members[i]) && is_clean(members[i])) return static_cast<std::ptrdiff_t>(i);
  }
  if (checked) return -1;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (pred(members[i])) {
      if (report != nullptr) report->touched_frozen = true;
      return static_cast<std::ptrdiff_t>(i);
    }
  }
  return -1;
}

/// Removes one member with the key of each element of `part`.
bool take(std::vector<Pattern>& members, const std::vector<Pattern>& part, bool checked, ApplyReport* report) {
  for (const Pattern& p : part) {
    const std::ptrdiff_t at =
        locate(members, [&](const Pattern& m) { return m.key() == p.key(); }, clean, checked, report);
    if (at < 0) return false;
    if (report != nullptr) report->consumed.insert(members[static_cast<std::size_t>(at)].origin());
    members.erase(members.begin() + at);
  }
  return true;
}

void append_members(std::vector<Pattern>& members, const Pattern& p) {
  for (const Pattern& m : members_of(p)) members.push_back(m);
}

Pattern residue_after(std::vector<Pattern> members, std::size_t rule_index, const Pattern& consumed) {
  members.erase(members.begin() + static_cast<std::ptrdiff_t>(rule_index));
  take(members, members_of(consumed), true, nullptr);
  return erase(Pattern::par(std::move(members)));
}

class RedexCollector {
 public:
  RedexCollector(const std::vector<GlobalRule>& globals, const Pattern& root, MatchBudget& budget)
      : globals_(globals), root_(root), budget_(budget) {}

  std::vector<ReductionLabel> run() {
    std::vector<Site> sites;
    ContextPath path;
    collect_sites(root_, path, sites);
    for (const Site& site : sites) visit(site);
    return std::move(out_);
  }

 private:
  void push(ReductionLabel label) {
    if (seen_.insert(key(label)).second) out_.push_back(std::move(label));
  }

  void visit(const Site& site) {
    const std::vector<Pattern> members = members_of(site.content);
    std::vector<Pattern> available;
    for (const Pattern& m : members) {
      if (clean(m)) available.push_back(m);
    }
    for (const GlobalRule& g : globals_) {
      for (Instantiation& sigma : match_part(g.lhs, available, budget_)) {
        if (substitute(g.lhs, sigma).is_epsilon()) continue;
        push({Schema::GRT, g, site.path, std::move(sigma), Pattern()});
      }
    }
    std::unordered_set<std::string> rules_done;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Pattern& occurrence = members[i];
      if (!occurrence.is_rule() || !clean(occurrence) || !rules_done.insert(occurrence.key()).second) continue;
      std::vector<Pattern> others = available;
      subtract_members(others, {occurrence});
      const LocalRule& r = occurrence.local_rule();
      switch (r.kind) {
        case RuleKind::Plain:
          for (Instantiation& sigma : match_part(r.lhs, others, budget_)) {
            const Pattern consumed = substitute(r.lhs, sigma);
            if (consumed.is_epsilon()) continue;
            push({Schema::LR, r, site.path, std::move(sigma), residue_after(members, i, consumed)});
          }
          break;
        case RuleKind::Out:
          visit_out(site, members, i, others, r);
          break;
        case RuleKind::In:
          visit_in(site, members, i, others, r);
          break;
      }
    }
  }

  void visit_out(const Site& site, const std::vector<Pattern>& members, std::size_t i,
                 const std::vector<Pattern>& others, const LocalRule& r) {
    if (site.path.empty() || site.path.back().kind != PathStep::Kind::Loop) return;
    const Pattern loop = node_at(root_, site.path, site.path.size() - 1);
    if (loop.membrane_mark() != 0) return;
    for (const Instantiation& seed : match_membrane(r.lhs_membrane, loop.membrane(), budget_)) {
      for (Instantiation& sigma : match_part(r.lhs, others, budget_, seed)) {
        const Pattern consumed = substitute(r.lhs, sigma);
        if (consumed.is_epsilon()) continue;
        push({Schema::LROut, r, site.path, std::move(sigma), residue_after(members, i, consumed)});
      }
    }
  }

  void visit_in(const Site& site, const std::vector<Pattern>& members, std::size_t i,
                const std::vector<Pattern>& others, const LocalRule& r) {
    std::unordered_set<std::string> targets_done;
    for (std::size_t j = 0; j < members.size(); ++j) {
      const Pattern& target = members[j];
      if (j == i || !target.is_loop() || !clean_target(target)) continue;
      if (!targets_done.insert(target.marked_key()).second) continue;
      std::vector<Pattern> rest = others;
      if (clean(target)) subtract_members(rest, {target});
      const Pattern residue = erase(target.content());
      for (const Instantiation& seed : match_membrane(r.lhs_membrane, target.membrane(), budget_)) {
        for (Instantiation& sigma : match_part(r.lhs, rest, budget_, seed)) {
          if (substitute(r.lhs, sigma).is_epsilon()) continue;
          push({Schema::LRIn, r, site.path, std::move(sigma), residue});
        }
      }
    }
  }

  const std::vector<GlobalRule>& globals_;
  const Pattern& root_;
  MatchBudget& budget_;
  std::vector<ReductionLabel> out_;
  std::unordered_set<std::string> seen_;
};

Pattern apply_impl(const Pattern& marked, const ReductionLabel& label, std::uint32_t mark, bool checked,
                   ApplyReport* report) {
  const Pattern root = normalize(marked);
  const ContextPath& path = label.path;
  const Pattern site = node_at(root, path, path.size());
  std::vector<Pattern> members = members_of(site);

  if (label.schema == Schema::GRT) {
    const auto* g = std::get_if<GlobalRule>(&label.rule);
    if (g == nullptr) throw StaleLabel("GRT label without a global rule");
    const Pattern consumed = substitute(g->lhs, label.sigma);
    if (consumed.is_epsilon()) throw StaleLabel("left-hand side instance is eps");
    if (!take(members, members_of(consumed), checked, report)) {
      throw StaleLabel("no instance of " + consumed.key() + " at the addressed position");
    }
    append_members(members, freeze(substitute(g->rhs, label.sigma), mark));
    return replace_at(root, path, path.size(), Pattern::par(std::move(members)));
  }

  const auto* r = std::get_if<LocalRule>(&label.rule);
  if (r == nullptr) throw StaleLabel(to_string(label.schema) + " label without a local rule");
  const std::string rule_key = normalize(Pattern::rule(*r)).key();
  const std::ptrdiff_t at = locate(
      members, [&](const Pattern& m) { return m.is_rule() && m.key() == rule_key; }, clean, checked, report);
  if (at < 0) throw StaleLabel("rule " + rule_key + " does not occur at the addressed position");
  const Pattern occurrence = members[static_cast<std::size_t>(at)];
  members.erase(members.begin() + at);

  const Pattern consumed = substitute(r->lhs, label.sigma);
  if (consumed.is_epsilon()) throw StaleLabel("left-hand side instance is eps");
  if (!take(members, members_of(consumed), checked, report)) {
    throw StaleLabel("no instance of " + consumed.key() + " next to rule " + rule_key);
  }
  const Pattern produced = freeze(substitute(r->rhs, label.sigma), mark);

  if (label.schema == Schema::LR || label.schema == Schema::LROut) {
    if (erase(Pattern::par(members)).key() != label.residue.key()) {
      throw StaleLabel("residue differs from the recorded one");
    }
  }

  switch (label.schema) {
    case Schema::LR: {
      members.push_back(occurrence);
      append_members(members, produced);
      return replace_at(root, path, path.size(), Pattern::par(std::move(members)));
    }
    case Schema::LROut: {
      if (path.empty() || path.back().kind != PathStep::Kind::Loop) {
        throw StaleLabel("out label does not address a compartment content");
      }
      const std::size_t loop_len = path.size() - 1;
      const Pattern loop = node_at(root, path, loop_len);
      if (!loop.is_loop()) throw StaleLabel("out label does not address a compartment");
      if (loop.membrane_mark() != 0 || loop.frozen()) {
        if (checked) throw StaleLabel("membrane already rewritten in this step");
        if (report != nullptr) report->touched_frozen = true;
      }
      if (least_rotation(substitute(r->lhs_membrane, label.sigma)) != least_rotation(loop.membrane())) {
        throw StaleLabel("membrane does not match the rule");
      }
      if (report != nullptr) report->consumed_membranes.insert(loop.origin());
      members.push_back(occurrence);
      const Pattern rewritten = loop.with_membrane(substitute(r->rhs_membrane, label.sigma))
                                    .with_membrane_mark(mark)
                                    .with_content(Pattern::par(std::move(members)));
      std::vector<Pattern> outer;
      std::size_t outer_len = loop_len;
      if (loop_len > 0 && path[loop_len - 1].kind == PathStep::Kind::Par) {
        outer_len = loop_len - 1;
        outer = node_at(root, path, outer_len).members();
        outer[path[loop_len - 1].index] = rewritten;
      } else {
        outer.push_back(rewritten);
      }
      append_members(outer, produced);
      return replace_at(root, path, outer_len, Pattern::par(std::move(outer)));
    }
    case Schema::LRIn: {
      const Sequence source = least_rotation(substitute(r->lhs_membrane, label.sigma));
      const std::ptrdiff_t t = locate(
          members,
          [&](const Pattern& m) {
            return m.is_loop() && least_rotation(m.membrane()) == source &&
                   erase(m.content()).key() == label.residue.key();
          },
          clean_target, checked, report);
      if (t < 0) throw StaleLabel("no target compartment for in rule " + rule_key);
      Pattern& target = members[static_cast<std::size_t>(t)];
      if (report != nullptr) report->consumed_membranes.insert(target.origin());
      std::vector<Pattern> inner = members_of(target.content());
      append_members(inner, produced);
      target = target.with_membrane(substitute(r->rhs_membrane, label.sigma))
                   .with_membrane_mark(mark)
                   .with_content(Pattern::par(std::move(inner)));
      members.push_back(occurrence);
      return replace_at(root, path, path.size(), Pattern::par(std::move(members)));
    }
    case Schema::GRT:
      break;
  }
  return root;
}

Pattern annotate(const Pattern& p, std::uint32_t& next) {
  switch (p.kind()) {
    case NodeKind::Par: {
      std::vector<Pattern> members;
      for (const Pattern& m : p.members()) members.push_back(annotate(m, next));
      return Pattern::par(std::move(members));
    }
    case NodeKind::Loop: {
      const std::uint32_t id = next++;
      return p.with_content(annotate(p.content(), next)).with_origin(id);
    }
    default:
      return p.with_origin(next++);
  }
}

const Sequence& hole_membrane() {
  static const Sequence hole{Atom::element("#hole")};
  return hole;
}

Pattern carve_initial(const Pattern& p, const ApplyReport& report) {
  if (p.is_par()) {
    std::vector<Pattern> members;
    for (const Pattern& m : p.members()) {
      if (report.consumed.count(m.origin()) == 0) members.push_back(carve_initial(m, report));
    }
    return Pattern::par(std::move(members));
  }
  if (report.consumed.count(p.origin()) != 0) return {};
  if (!p.is_loop()) return p;
  Pattern out = p.with_content(carve_initial(p.content(), report));
  if (report.consumed_membranes.count(p.origin()) != 0) out = out.with_membrane(hole_membrane());
  return out.with_origin(0);
}

Pattern carve_final(const Pattern& p) {
  if (p.is_par()) {
    std::vector<Pattern> members;
    for (const Pattern& m : p.members()) {
      if (!m.frozen()) members.push_back(carve_final(m));
    }
    return Pattern::par(std::move(members));
  }
  if (p.frozen()) return {};
  if (!p.is_loop()) return p;
  Pattern out = p.with_content(carve_final(p.content()));
  if (p.membrane_mark() != 0) out = out.with_membrane(hole_membrane()).with_membrane_mark(0);
  return out;
}

bool marks_nest_properly(const Pattern& p, std::uint32_t enclosing) {
  if (p.frozen()) {
    if (enclosing != 0 && enclosing != p.mark()) return false;
    enclosing = p.mark();
  }
  switch (p.kind()) {
    case NodeKind::Loop:
      if (p.membrane_mark() != 0 && enclosing != 0 && p.membrane_mark() != enclosing) return false;
      return marks_nest_properly(p.content(), enclosing);
    case NodeKind::Par:
      return std::all_of(p.members().begin(), p.members().end(),
                         [&](const Pattern& m) { return marks_nest_properly(m, enclosing); });
    default:
      return true;
  }
}

void shape(const Pattern& content, std::string& out) {
  std::vector<std::string> children;
  for (const Pattern& m : members_of(content)) {
    if (!m.is_loop()) continue;
    std::string child;
    shape(m.content(), child);
    children.push_back(std::move(child));
  }
  std::sort(children.begin(), children.end());
  out += "[";
  for (const std::string& c : children) out += c;
  out += "]";
}

}  // namespace

std::vector<ReductionLabel> find_redexes(const std::vector<GlobalRule>& globals, const Pattern& marked,
                                         MatchBudget& budget) {
  const Pattern root = normalize(marked);
  return RedexCollector(globals, root, budget).run();
}

std::vector<ReductionLabel> find_redexes(const std::vector<GlobalRule>& globals, const Pattern& marked) {
  MatchBudget budget;
  return find_redexes(globals, marked, budget);
}

Pattern apply_label(const Pattern& marked, const ReductionLabel& label, std::uint32_t mark) {
  return apply_impl(marked, label, mark, true, nullptr);
}

Pattern apply_label_unchecked(const Pattern& marked, const ReductionLabel& label, std::uint32_t mark,
                              ApplyReport& report) {
  return apply_impl(marked, label, mark, false, &report);
}

Trace parallel_reduce_with(const Pattern& t, const RedexFinder& finder, const ReduceOptions& options) {
  Trace trace;
  trace.initial = normalize(t);
  trace.strategy = options.strategy;
  trace.seed = options.seed;
  trace.k = options.strategy == Strategy::RandomK ? options.k : 0;
  std::mt19937_64 rng(options.seed);
  Pattern current = trace.initial;

  auto step = [&](bool random) {
    MatchBudget budget(options.match_cap);
    std::vector<ReductionLabel> labels = finder(current, budget);
    if (labels.empty()) return false;
    if (trace.steps.size() >= options.step_cap) {
      throw StepCapExceeded("parallel step exceeded " + std::to_string(options.step_cap) + " applications");
    }
    const std::size_t pick = random ? static_cast<std::size_t>(rng() % labels.size()) : 0;
    const auto mark = static_cast<std::uint32_t>(trace.steps.size() + 1);
    current = apply_label(current, labels[pick], mark);
    trace.steps.push_back(std::move(labels[pick]));
    return true;
  };

  switch (options.strategy) {
    case Strategy::Single:
      step(false);
      break;
    case Strategy::RandomK:
      for (std::size_t n = 0; n < options.k && step(true); ++n) {
      }
      break;
    case Strategy::Maximal:
      while (step(true)) {
      }
      break;
  }
  trace.final = erase(current);
  return trace;
}

Trace parallel_reduce(const Pattern& t, const std::vector<GlobalRule>& globals, const ReduceOptions& options) {
  return parallel_reduce_with(
      t, [&](const Pattern& marked, MatchBudget& budget) { return find_redexes(globals, marked, budget); },
      options);
}

Pattern replay_marked(const Trace& trace) {
  Pattern current = normalize(trace.initial);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    current = apply_label(current, trace.steps[i], static_cast<std::uint32_t>(i + 1));
  }
  return current;
}

Pattern replay(const Trace& trace) { return erase(replay_marked(trace)); }

bool verify_decomposition(const Trace& trace) {
  std::uint32_t next = 1;
  const Pattern initial = normalize(annotate(normalize(trace.initial), next));
  Pattern current = initial;
  ApplyReport total;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    ApplyReport report;
    try {
      current = apply_label_unchecked(current, trace.steps[i], static_cast<std::uint32_t>(i + 1), report);
    } catch (const Error&) {
      return false;
    }
    if (report.touched_frozen || report.consumed.count(0) != 0 || report.consumed_membranes.count(0) != 0) {
      return false;
    }
    total.consumed.insert(report.consumed.begin(), report.consumed.end());
    total.consumed_membranes.insert(report.consumed_membranes.begin(), report.consumed_membranes.end());
  }
  if (!marks_nest_properly(current, 0)) return false;
  if (erase(current).key() != normalize(trace.final).key()) return false;
  const Pattern before = normalize(carve_initial(initial, total));
  const Pattern after = normalize(carve_final(current));
  return before.key() == after.key();
}

std::string loop_shape(const Pattern& t) {
  std::string out;
  shape(normalize(t), out);
  return out;
}

}  // namespace clslr
