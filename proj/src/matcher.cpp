#include "clslr/matcher.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

namespace clslr {

namespace {

using Cont = std::function<void()>;

bool only_sequence_vars(const Sequence& s) {
  return std::all_of(s.begin(), s.end(), [](const Atom& a) { return a.kind == AtomKind::SequenceVar; });
}

// Whether some instance of p is epsilon. A compartment vanishes when both its
// membrane and its content do.
bool can_be_empty(const Pattern& p) {
  switch (p.kind()) {
    case NodeKind::Seq:
      return only_sequence_vars(p.atoms());
    case NodeKind::TermVar:
      return true;
    case NodeKind::Loop:
      return only_sequence_vars(p.membrane()) && can_be_empty(p.content());
    case NodeKind::Par:
      return std::all_of(p.members().begin(), p.members().end(), can_be_empty);
    case NodeKind::Rule:
      return false;
  }
  return false;
}

/// Backtracking matcher. Every successful path calls the continuation with
/// `sigma` holding the bindings made so far.
class Matcher {
 public:
  explicit Matcher(MatchBudget& budget) : budget_(budget) {}

  Instantiation sigma;

  void node(const Pattern& p, const Pattern& t, const Cont& k) {
    budget_.spend();
    switch (p.kind()) {
      case NodeKind::Seq:
        if (p.atoms().empty()) {
          if (t.is_epsilon()) k();
        } else if (t.is_epsilon()) {
          sequence(p.atoms(), 0, {}, 0, k);
        } else if (t.is_seq()) {
          sequence(p.atoms(), 0, t.atoms(), 0, k);
        }
        return;
      case NodeKind::TermVar:
        bind({VarKind::Term, p.var_name()}, t, k);
        return;
      case NodeKind::Loop:
        if (t.is_epsilon()) {
          if (can_be_empty(p)) sequence(p.membrane(), 0, {}, 0, [&] { node(p.content(), t, k); });
          return;
        }
        if (!t.is_loop()) return;
        membrane(p.membrane(), t.membrane(), [&] { node(p.content(), t.content(), k); });
        return;
      case NodeKind::Rule:
        if (t.is_rule() && p.key() == t.key()) k();
        return;
      case NodeKind::Par:
        members(p.members(), members_of(t), k);
        return;
    }
  }

  void membrane(const Sequence& p, const Sequence& t, const Cont& k) {
    std::set<Sequence> seen;
    Sequence rot;
    for (std::size_t shift = 0; shift < std::max<std::size_t>(t.size(), 1); ++shift) {
      rot.assign(t.begin() + static_cast<std::ptrdiff_t>(shift), t.end());
      rot.insert(rot.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(shift));
      if (!seen.insert(rot).second) continue;
      const Sequence current = rot;
      sequence(p, 0, current, 0, k);
    }
  }

  void members(const std::vector<Pattern>& p, const std::vector<Pattern>& t, const Cont& k) {
    std::vector<const Pattern*> rigid;
    std::map<std::string, std::size_t> multiplicity;
    for (const Pattern& m : p) {
      if (m.is_term_var()) {
        ++multiplicity[m.var_name()];
      } else {
        rigid.push_back(&m);
      }
    }
    std::vector<bool> used(t.size(), false);
    assign_rigid(rigid, 0, t, used, multiplicity, k);
  }

 private:
  void bind(const Variable& v, Value value, const Cont& k) {
    auto it = sigma.find(v);
    if (it != sigma.end()) {
      if (same_value(it->second, value)) k();
      return;
    }
    it = sigma.emplace(v, std::move(value)).first;
    k();
    sigma.erase(it);
  }

  void sequence(const Sequence& p, std::size_t i, const Sequence& t, std::size_t j, const Cont& k) {
    budget_.spend();
    if (i == p.size()) {
      if (j == t.size()) k();
      return;
    }
    const Atom& a = p[i];
    switch (a.kind) {
      case AtomKind::Element:
        if (j < t.size() && t[j] == a) sequence(p, i + 1, t, j + 1, k);
        return;
      case AtomKind::ElementVar:
        if (j < t.size()) {
          bind({VarKind::Element, a.name}, Sequence{t[j]}, [&] { sequence(p, i + 1, t, j + 1, k); });
        }
        return;
      case AtomKind::SequenceVar: {
        for (std::size_t len = 0; j + len <= t.size(); ++len) {
          Sequence image(t.begin() + static_cast<std::ptrdiff_t>(j),
                         t.begin() + static_cast<std::ptrdiff_t>(j + len));
          bind({VarKind::Sequence, a.name}, std::move(image),
               [&] { sequence(p, i + 1, t, j + len, k); });
        }
        return;
      }
    }
  }

  void assign_rigid(const std::vector<const Pattern*>& rigid, std::size_t idx,
                    const std::vector<Pattern>& t, std::vector<bool>& used,
                    const std::map<std::string, std::size_t>& multiplicity, const Cont& k) {
    if (idx == rigid.size()) {
      std::vector<Pattern> rest;
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (!used[j]) rest.push_back(t[j]);
      }
      assign_vars(multiplicity, std::move(rest), k);
      return;
    }
    const Pattern& r = *rigid[idx];
    auto next = [&] { assign_rigid(rigid, idx + 1, t, used, multiplicity, k); };
    if (can_be_empty(r)) node(r, Pattern(), next);
    std::unordered_set<std::string> tried;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (used[j] || !tried.insert(t[j].key()).second) continue;
      used[j] = true;
      node(r, t[j], next);
      used[j] = false;
    }
  }

  void assign_vars(const std::map<std::string, std::size_t>& multiplicity, std::vector<Pattern> rest,
                   const Cont& k) {
    std::vector<std::pair<std::string, std::size_t>> open;
    for (const auto& [name, count] : multiplicity) {
      auto it = sigma.find({VarKind::Term, name});
      if (it == sigma.end()) {
        open.emplace_back(name, count);
        continue;
      }
      const std::vector<Pattern> image = members_of(std::get<Pattern>(it->second));
      for (std::size_t c = 0; c < count; ++c) {
        if (!subtract_members(rest, image)) return;
      }
    }
    if (open.empty()) {
      if (rest.empty()) k();
      return;
    }
    // Group the remaining members by key; each group is split among the open
    // variables so that a variable occurring m times receives m equal shares.
    std::vector<std::pair<Pattern, std::size_t>> groups;
    std::sort(rest.begin(), rest.end(), [](const Pattern& a, const Pattern& b) { return a.key() < b.key(); });
    for (const Pattern& m : rest) {
      if (!groups.empty() && groups.back().first.key() == m.key()) {
        ++groups.back().second;
      } else {
        groups.emplace_back(m, 1);
      }
    }
    std::vector<std::vector<std::size_t>> share(open.size(), std::vector<std::size_t>(groups.size(), 0));
    distribute(open, groups, share, 0, 0, groups.empty() ? 0 : groups[0].second, k);
  }

  void distribute(const std::vector<std::pair<std::string, std::size_t>>& open,
                  const std::vector<std::pair<Pattern, std::size_t>>& groups,
                  std::vector<std::vector<std::size_t>>& share, std::size_t g, std::size_t v,
                  std::size_t left, const Cont& k) {
    budget_.spend();
    if (g == groups.size()) {
      bind_open(open, groups, share, 0, k);
      return;
    }
    const std::size_t m = open[v].second;
    if (v + 1 == open.size()) {
      if (left % m != 0) return;
      share[v][g] = left / m;
      const std::size_t next_left = g + 1 < groups.size() ? groups[g + 1].second : 0;
      distribute(open, groups, share, g + 1, 0, next_left, k);
      share[v][g] = 0;
      return;
    }
    for (std::size_t a = 0; a * m <= left; ++a) {
      share[v][g] = a;
      distribute(open, groups, share, g, v + 1, left - a * m, k);
    }
    share[v][g] = 0;
  }

  void bind_open(const std::vector<std::pair<std::string, std::size_t>>& open,
                 const std::vector<std::pair<Pattern, std::size_t>>& groups,
                 const std::vector<std::vector<std::size_t>>& share, std::size_t v, const Cont& k) {
    if (v == open.size()) {
      k();
      return;
    }
    std::vector<Pattern> image;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t c = 0; c < share[v][g]; ++c) image.push_back(groups[g].first);
    }
    bind({VarKind::Term, open[v].first}, normalize(Pattern::par(std::move(image))),
         [&] { bind_open(open, groups, share, v + 1, k); });
  }

  MatchBudget& budget_;
};

const std::string kRestVar;  // the empty name cannot be written in a model

}  // namespace

Sequence substitute(const Sequence& s, const Instantiation& sigma) {
  Sequence out;
  for (const Atom& a : s) {
    if (a.kind == AtomKind::Element) {
      out.push_back(a);
      continue;
    }
    const Variable v{a.kind == AtomKind::ElementVar ? VarKind::Element : VarKind::Sequence, a.name};
    auto it = sigma.find(v);
    if (it == sigma.end()) throw UnboundVariable(to_string(v));
    const Sequence& image = std::get<Sequence>(it->second);
    out.insert(out.end(), image.begin(), image.end());
  }
  return out;
}

namespace {

Pattern substitute_raw(const Pattern& p, const Instantiation& sigma) {
  switch (p.kind()) {
    case NodeKind::Seq:
      return Pattern::seq(substitute(p.atoms(), sigma));
    case NodeKind::TermVar: {
      const Variable v{VarKind::Term, p.var_name()};
      auto it = sigma.find(v);
      if (it == sigma.end()) throw UnboundVariable(to_string(v));
      return std::get<Pattern>(it->second);
    }
    case NodeKind::Loop:
      return Pattern::loop(substitute(p.membrane(), sigma), substitute_raw(p.content(), sigma));
    case NodeKind::Par: {
      std::vector<Pattern> members;
      for (const Pattern& m : p.members()) members.push_back(substitute_raw(m, sigma));
      return Pattern::par(std::move(members));
    }
    case NodeKind::Rule:
      return p;
  }
  return p;
}

}  // namespace

Pattern substitute(const Pattern& p, const Instantiation& sigma) {
  return normalize(substitute_raw(p, sigma));
}

std::vector<Instantiation> match(const Pattern& p, const Pattern& t, MatchBudget& budget) {
  const Pattern np = normalize(p);
  const Pattern nt = normalize(t);
  Matcher m(budget);
  std::vector<Instantiation> out;
  std::unordered_set<std::string> seen;
  m.node(np, nt, [&] {
    if (seen.insert(key(m.sigma)).second) out.push_back(m.sigma);
  });
  return out;
}

std::vector<Instantiation> match(const Pattern& p, const Pattern& t) {
  MatchBudget budget;
  return match(p, t, budget);
}

std::vector<Instantiation> match_part(const Pattern& p, const std::vector<Pattern>& available,
                                      MatchBudget& budget, const Instantiation& seed) {
  const Pattern np = normalize(Pattern::par({p, Pattern::term_var(kRestVar)}));
  Matcher m(budget);
  m.sigma = seed;
  std::vector<Instantiation> out;
  std::unordered_set<std::string> seen;
  m.node(np, normalize(Pattern::par(available)), [&] {
    Instantiation sigma = m.sigma;
    sigma.erase({VarKind::Term, kRestVar});
    if (seen.insert(key(sigma)).second) out.push_back(std::move(sigma));
  });
  return out;
}

std::vector<Instantiation> match_membrane(const Sequence& s, const Sequence& membrane,
                                          MatchBudget& budget, const Instantiation& seed) {
  Matcher m(budget);
  m.sigma = seed;
  std::vector<Instantiation> out;
  std::unordered_set<std::string> seen;
  m.membrane(s, membrane, [&] {
    if (seen.insert(key(m.sigma)).second) out.push_back(m.sigma);
  });
  return out;
}

bool subtract_members(std::vector<Pattern>& whole, const std::vector<Pattern>& part) {
  for (const Pattern& m : part) {
    auto it = std::find_if(whole.begin(), whole.end(), [&](const Pattern& w) { return w.key() == m.key(); });
    if (it == whole.end()) return false;
    whole.erase(it);
  }
  return true;
}

}  // namespace clslr
