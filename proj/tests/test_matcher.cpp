#include <gtest/gtest.h>

#include <set>

#include "clslr/format.hpp"
#include "clslr/matcher.hpp"
#include "clslr/types.hpp"
#include "generators.hpp"
#include "mito.hpp"
#include "oracles.hpp"

namespace clslr {
namespace {

using testing::Random;

Pattern P(const std::string& s) { return parse_pattern(s); }

std::set<std::string> keys(const std::vector<Instantiation>& sigmas) {
  std::set<std::string> out;
  for (const Instantiation& s : sigmas) out.insert(key(s));
  return out;
}

Variable sv(const std::string& n) { return {VarKind::Sequence, n}; }
Variable ev(const std::string& n) { return {VarKind::Element, n}; }
Variable tv(const std::string& n) { return {VarKind::Term, n}; }

TEST(Substitute, Examples) {
  const Instantiation sigma{{sv("x"), parse_sequence("a")}, {sv("y"), parse_sequence("b")}};
  EXPECT_TRUE(equiv(substitute(P("~x.g.~y | mRNA"), sigma), P("a.g.b | mRNA")));
  const Pattern rule = P("{ ?x => ?x }");
  EXPECT_EQ(substitute(rule, {{ev("x"), parse_sequence("q")}}).marked_key(), rule.marked_key());
  EXPECT_TRUE(substitute(P("$X"), {{tv("X"), Pattern()}}).is_epsilon());
  EXPECT_THROW(substitute(P("$X | ?y"), {{tv("X"), Pattern()}}), UnboundVariable);
}

TEST(Substitute, DistributesOverConstructors) {
  Random r(1);
  const std::vector<Variable> pool{ev("x"), sv("y"), tv("X")};
  for (int i = 0; i < 300; ++i) {
    Instantiation sigma;
    for (const Variable& v : pool) sigma[v] = testing::random_image(r, v, 3);
    const Pattern p = testing::random_pattern_over(r, pool, 3, 2);
    const Pattern q = testing::random_pattern_over(r, pool, 3, 2);
    EXPECT_TRUE(equiv(substitute(Pattern::par({p, q}), sigma),
                      Pattern::par({substitute(p, sigma), substitute(q, sigma)})));
    const Sequence m{Atom::element_var("x"), Atom::sequence_var("y")};
    EXPECT_TRUE(equiv(substitute(Pattern::loop(m, p), sigma),
                      Pattern::loop(substitute(m, sigma), substitute(p, sigma))));
  }
}

TEST(Match, Examples) {
  EXPECT_EQ(keys(match(P("~x.g.~y"), P("a.g.b"))), (std::set<std::string>{"{~x -> a, ~y -> b}"}));
  EXPECT_EQ(keys(match(P("?x | $X"), P("a | b"))),
            (std::set<std::string>{"{?x -> a, $X -> b}", "{?x -> b, $X -> a}"}));
  EXPECT_TRUE(match(P("a"), P("b")).empty());
}

TEST(Match, SequenceVariablesMayBindEpsilon) {
  EXPECT_EQ(keys(match(P("~x.g.~y"), P("g"))), (std::set<std::string>{"{~x -> eps, ~y -> eps}"}));
  EXPECT_EQ(match(P("~x.g.~y"), P("g.g")).size(), 2U);
  EXPECT_TRUE(match(P("?x.g"), P("g")).empty());
}

TEST(Match, MembranesMatchUpToRotation) {
  EXPECT_EQ(keys(match(P("loop(a.~x)[$X]"), P("loop(b.a.c)[d]"))), (std::set<std::string>{"{~x -> c.b, $X -> d}"}));
  EXPECT_EQ(match(P("loop(~x)[eps]"), P("loop(a.b.c)[eps]")).size(), 3U);
}

TEST(Match, RepeatedVariablesNeedEqualImages) {
  EXPECT_EQ(match(P("?x | ?x"), P("a | a")).size(), 1U);
  EXPECT_TRUE(match(P("?x | ?x"), P("a | b")).empty());
  EXPECT_EQ(keys(match(P("$X | $X"), P("a | a | b | b"))), (std::set<std::string>{"{$X -> a | b}"}));
}

TEST(Match, RulesMatchModuloCongruence) {
  EXPECT_EQ(match(P("{ a | b => c } | $X"), P("{ b | a => c | eps } | d")).size(), 1U);
  EXPECT_TRUE(match(P("{ a => c }"), P("{ a => d }")).empty());
}

TEST(Match, MitochondriaStagesAreRecognised) {
  const Pattern cell = testing::mito_model().term;
  EXPECT_FALSE(match(P("loop(cell)[ loop(nucleus)[ ~x.g.~y | $A ] | $B ]"), cell).empty());
  EXPECT_TRUE(match(testing::mito_stages()[0], cell).empty());
  // The two compartments, or nothing at all.
  EXPECT_EQ(match(P("loop(cell)[ $M | $M | $R ]"), cell).size(), 2U);
}

TEST(Match, CompartmentsMayVanish) {
  EXPECT_EQ(keys(match(P("$X | loop(~y)[~y]"), Pattern())), (std::set<std::string>{"{~y -> eps, $X -> eps}"}));
  EXPECT_EQ(keys(match(P("a | loop(~y)[loop(~z)[$X]]"), P("a"))),
            (std::set<std::string>{"{~y -> eps, ~z -> eps, $X -> eps}"}));
  EXPECT_TRUE(match(P("loop(?y)[$X]"), Pattern()).empty());
}

TEST(Match, BudgetIsEnforced) {
  MatchBudget tiny(10);
  EXPECT_THROW(match(P("$X | $Y | $Z"), P("a | b | c | d | e | f"), tiny), ResourceLimitExceeded);
}

TEST(Match, IsSound) {
  Random r(2);
  const std::vector<Variable> pool{ev("x"), sv("y"), sv("z"), tv("X"), tv("Y")};
  for (int i = 0; i < 500; ++i) {
    const Pattern p = testing::random_pattern_over(r, pool, 3, 2);
    const Pattern t = testing::random_term(r, 3, 2, 4);
    for (const Instantiation& sigma : match(p, t)) EXPECT_TRUE(equiv(substitute(p, sigma), t));
    Instantiation sigma;
    for (const Variable& v : pool) sigma[v] = testing::random_image(r, v, 3);
    const Pattern instance = substitute(p, sigma);
    const std::vector<Instantiation> found = match(p, instance);
    ASSERT_FALSE(found.empty()) << p.key() << " vs " << instance.key();
    for (const Instantiation& s : found) EXPECT_TRUE(equiv(substitute(p, s), instance));
  }
}

TEST(Match, IsDeterministic) {
  Random r(3);
  const std::vector<Variable> pool{ev("x"), sv("y"), tv("X"), tv("Y")};
  for (int i = 0; i < 200; ++i) {
    const Pattern p = testing::random_pattern_over(r, pool, 2, 2);
    Instantiation sigma;
    for (const Variable& v : pool) sigma[v] = testing::random_image(r, v, 2);
    const Pattern t = substitute(p, sigma);
    const std::vector<Instantiation> a = match(p, t);
    const std::vector<Instantiation> b = match(p, t);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(key(a[k]), key(b[k]));
  }
}

TEST(Match, AgreesWithOracleOnSmallPairs) {
  Random r(4);
  const std::vector<Variable> pool{ev("x"), sv("y"), tv("X")};
  for (int i = 0; i < 400; ++i) {
    const Pattern p = testing::random_pattern_over(r, pool, 2, 1);
    Instantiation sigma;
    for (const Variable& v : pool) sigma[v] = testing::random_image(r, v, 2);
    const Pattern t = r.chance(0.5) ? substitute(p, sigma) : testing::random_term(r, 2, 1, 3);
    EXPECT_EQ(keys(match(p, t)), testing::match_oracle(p, t)) << p.key() << " vs " << t.key();
  }
}

TEST(Agrees, Examples) {
  const Classification lambda = testing::mito_lambda();
  EXPECT_TRUE(agrees({{sv("x"), parse_sequence("Tom")}}, {{sv("x"), MembraneType{Feature::o, Feature::i}}}, lambda));
  EXPECT_TRUE(agrees({}, {}, lambda));
  Classification any;
  any.types["a"] = {};
  EXPECT_FALSE(agrees({{tv("X"), P("{ ?a => ?a | ?a }")}}, {{tv("X"), PatternType{}}}, any));
}

}  // namespace
}  // namespace clslr
