#include <gtest/gtest.h>

#include "cbaco/policy/rules.hpp"
#include "cbaco/strategy/interpreter.hpp"
#include "cbaco/strategy/parser.hpp"

using namespace cbaco;
using namespace cbaco::strat;
using pg::Id;
using pg::PortGraph;

namespace {

pg::LocatedRule relabel(const std::string& from, const std::string& to) {
  pg::RewriteRule r;
  r.name = from + "to" + to;
  Id ln = r.lhs.add_node({{"Name", from}});
  Id lp = r.lhs.add_port(ln, {{"Name", "p"}});
  Id rn = r.rhs.add_node({{"Name", to}});
  Id rp = r.rhs.add_port(rn, {{"Name", "p"}});
  r.arrow.push_back({pg::ArrowKind::bridge, {lp}, {rp}});
  return {std::move(r), std::nullopt, {}, {}};
}

// Empty lhs: applies everywhere, forever.
pg::LocatedRule grow() {
  pg::RewriteRule r;
  r.name = "grow";
  r.rhs.add_node({{"Name", "G"}});
  return {std::move(r), std::nullopt, {}, {}};
}

// n nodes labelled A on a path, each with one port.
pg::LocatedGraph chain(int n, const std::string& label = "A") {
  PortGraph g;
  Id prev = 0;
  for (int i = 0; i < n; ++i) {
    Id v = g.add_node({{"Name", label}, {"i", i}});
    Id p = g.add_port(v, {{"Name", "p"}});
    if (prev) g.add_edge(prev, p, {{"Name", "e"}});
    prev = p;
  }
  return pg::LocatedGraph::whole(std::move(g));
}

RuleSet rules() {
  return {{"AtoB", relabel("A", "B")}, {"BtoC", relabel("B", "C")},
          {"ZtoZ", relabel("Z", "Z")}, {"grow", grow()}};
}

std::size_t count_label(const PortGraph& g, const std::string& label) {
  std::size_t n = 0;
  for (const auto& [id, d] : g.nodes())
    if (pg::string_attr(d.attrs, "Name") == label) ++n;
  return n;
}

}  // namespace

TEST(Parser, ParsesAuxPcScript) {
  Expr e = parse_strategy(policy::aux_pc_strategy);
  ASSERT_EQ(e.op, Op::seq);
  ASSERT_EQ(e.kids.size(), 2u);
  EXPECT_EQ(e.kids[0].op, Op::set_ban);
  const Expr& loop = e.kids[1];
  ASSERT_EQ(loop.op, Op::while_do);
  EXPECT_EQ(loop.kids[0].op, Op::not_);
  const Expr& body = loop.kids[1];
  ASSERT_EQ(body.op, Op::seq);
  ASSERT_EQ(body.kids.size(), 4u);
  EXPECT_EQ(body.kids[3].op, Op::while_do);
  std::set<std::string> names;
  collect_rule_names(e, names);
  EXPECT_EQ(names, std::set<std::string>{"auxPC"});
}

TEST(Parser, RepeatOfOne) {
  Expr e = parse_strategy("repeat(one(R))");
  ASSERT_EQ(e.op, Op::repeat);
  ASSERT_EQ(e.kids[0].op, Op::one);
  EXPECT_EQ(e.kids[0].kids[0].op, Op::rule);
  EXPECT_EQ(e.kids[0].kids[0].name, "R");
}

TEST(Parser, SetOperatorsAssociateLeft) {
  Expr e = parse_strategy("crtGraph\\crtPos[cup]crtBan");
  ASSERT_EQ(e.op, Op::set_union);
  EXPECT_EQ(e.kids[0].op, Op::set_diff);
  EXPECT_EQ(e.kids[1].op, Op::crt_ban);
}

TEST(Parser, PrettyPrintRoundTrip) {
  const std::vector<std::string> scripts = {
      "R",
      "one(R)",
      "all(R)",
      "repeat(one(R))",
      "R;S;T",
      "(R;S);T",
      "not(R)",
      "while(R)do(S;T)",
      "isEmpty(crtBan)",
      "setPos(crtGraph)",
      "setBan(all(crtBan\\crtPos))",
      "setPos(all(crtPos[cup]ngb(crtPos,edge,type==\"PC\")))",
      "setPos(property(crtGraph,node,w==1))",
      "setPos(property(crtGraph,port,open==true))",
      "setPos(ngb(crtPos,node,k==-3))",
      "crtGraph\\(crtPos[cup]crtBan)",
      "while(not(isEmpty(crtBan)))do(setPos(one(crtBan)))",
      "repeat(while(one(a-b))do(all(c_d)))",
      "setPos(property(crtGraph,node,Name==\"q\\\"x\"))",
      policy::aux_pc_strategy,
  };
  for (const auto& s : scripts) {
    Expr a = parse_strategy(s);
    std::string printed = to_string(a);
    Expr b = parse_strategy(printed);
    EXPECT_EQ(a, b) << s << "\n  printed as " << printed;
    EXPECT_EQ(printed, to_string(b));
  }
}

TEST(Parser, WhitespaceAndCommentsAreInsignificant) {
  EXPECT_EQ(parse_strategy("repeat ( one ( R ) ) ;\n S // trailing\n"),
            parse_strategy("repeat(one(R));S"));
}

TEST(Parser, ReportsPosition) {
  try {
    parse_strategy("repeat(one(R);\n  frob(S)");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(parse_strategy("one(R"), SyntaxError);
  EXPECT_THROW(parse_strategy("R;;S"), SyntaxError);
  EXPECT_THROW(parse_strategy("property(crtGraph,vertex,a==1)"), SyntaxError);
  EXPECT_THROW(parse_strategy("while(R)(S)"), SyntaxError);
  EXPECT_THROW(parse_strategy(""), SyntaxError);
}

TEST(Interpreter, UnknownRuleIsReportedBeforeRunning) {
  auto start = chain(2);
  EXPECT_THROW(eval_strategy(start, parse_strategy("AtoB;nosuch"), rules()), UnknownRule);
}

TEST(Interpreter, SetExpressionsOnlyWhereSetsBelong) {
  auto start = chain(1);
  EXPECT_THROW(eval_strategy(start, parse_strategy("setPos(AtoB)"), rules()), Error);
  EXPECT_THROW(eval_strategy(start, parse_strategy("isEmpty(repeat(AtoB))"), rules()), Error);
}

TEST(Interpreter, RepeatIsExhaustive) {
  auto res = eval_strategy(chain(4), parse_strategy("repeat(one(AtoB))"), rules());
  EXPECT_TRUE(res.success);
  EXPECT_EQ(res.applications, 4u);
  EXPECT_EQ(count_label(res.state.graph, "B"), 4u);
  EXPECT_TRUE(res.state.graph.check_invariants().empty());
  EXPECT_EQ(res.tree.size(), res.applications + 1);
}

TEST(Interpreter, VacuousRepeatSucceedsUnchanged) {
  auto start = chain(3);
  auto res = eval_strategy(start, parse_strategy("repeat(ZtoZ)"), rules());
  EXPECT_TRUE(res.success);
  EXPECT_EQ(res.applications, 0u);
  EXPECT_EQ(res.state, start);
  EXPECT_EQ(res.tree.size(), 1u);
}

TEST(Interpreter, FailureRollsBack) {
  auto start = chain(3);
  auto res = eval_strategy(start, parse_strategy("AtoB;ZtoZ"), rules());
  EXPECT_FALSE(res.success);
  EXPECT_EQ(res.state, start);
  EXPECT_EQ(res.applications, 0u);
  EXPECT_EQ(res.tree.size(), 1u);
}

TEST(Interpreter, NotRestoresState) {
  auto start = chain(2);
  auto res = eval_strategy(start, parse_strategy("not(ZtoZ);not(not(AtoB))"), rules());
  EXPECT_TRUE(res.success);
  EXPECT_EQ(res.state, start);
}

TEST(Interpreter, WhileKeepsConditionEffects) {
  // The condition applies AtoB, the body turns that B into C.
  auto res = eval_strategy(chain(3), parse_strategy("while(AtoB)do(BtoC)"), rules());
  EXPECT_TRUE(res.success);
  EXPECT_EQ(count_label(res.state.graph, "C"), 3u);
  EXPECT_EQ(res.applications, 6u);
}

TEST(Interpreter, WhileFailsWhenBodyFails) {
  auto start = chain(2);
  auto res = eval_strategy(start, parse_strategy("while(AtoB)do(ZtoZ)"), rules());
  EXPECT_FALSE(res.success);
  EXPECT_EQ(res.state, start);
}

TEST(Interpreter, BudgetStopsDivergence) {
  EvalOptions opts;
  opts.step_budget = 50;
  EXPECT_THROW(eval_strategy(chain(1), parse_strategy("repeat(grow)"), rules(), opts),
               BudgetExceeded);
}

TEST(Interpreter, AllAppliesAtIndependentMatches) {
  // Path of 5 A nodes: matches 1, 3 and 5 are pairwise non-adjacent.
  auto res = eval_strategy(chain(5), parse_strategy("all(AtoB)"), rules());
  EXPECT_TRUE(res.success);
  EXPECT_EQ(res.applications, 3u);
  EXPECT_EQ(count_label(res.state.graph, "B"), 3u);
  auto none = eval_strategy(chain(2), parse_strategy("all(ZtoZ)"), rules());
  EXPECT_FALSE(none.success);
}

TEST(Interpreter, PositionAndBanSets) {
  auto start = chain(4);
  std::vector<Id> nodes;
  for (const auto& [id, n] : start.graph.nodes()) nodes.push_back(id);
  // Ban the first two nodes, rewrite the rest.
  auto script = parse_strategy(
      "setBan(property(crtGraph,node,i==0)[cup]property(crtGraph,node,i==1));repeat(AtoB)");
  auto res = eval_strategy(start, script, rules());
  EXPECT_TRUE(res.success);
  EXPECT_EQ(res.applications, 2u);
  EXPECT_TRUE(res.state.graph.has_node(nodes[0]));
  EXPECT_TRUE(res.state.graph.has_node(nodes[1]));
  EXPECT_FALSE(res.state.graph.has_node(nodes[2]));
  EXPECT_EQ(res.state.banned, (pg::IdSet{nodes[0], nodes[1]}));
}

TEST(Interpreter, SetsAsConditions) {
  auto start = chain(3);
  EXPECT_TRUE(eval_strategy(start, parse_strategy("isEmpty(crtBan)"), rules()).success);
  EXPECT_FALSE(eval_strategy(start, parse_strategy("isEmpty(crtPos)"), rules()).success);
  EXPECT_FALSE(eval_strategy(start, parse_strategy("setPos(one(crtBan))"), rules()).success);
  EXPECT_TRUE(eval_strategy(start, parse_strategy("property(crtGraph,node,i==2)"), rules())
                  .success);
  EXPECT_FALSE(eval_strategy(start, parse_strategy("property(crtGraph,node,i==7)"), rules())
                   .success);
}

TEST(Interpreter, NeighbourFilters) {
  auto start = chain(3);
  std::vector<Id> nodes;
  for (const auto& [id, n] : start.graph.nodes()) nodes.push_back(id);
  auto res = eval_strategy(
      start, parse_strategy("setPos(ngb(property(crtGraph,node,i==1),edge,Name==\"e\"))"),
      rules());
  EXPECT_EQ(res.state.position, (pg::IdSet{nodes[0], nodes[2]}));
  res = eval_strategy(
      start, parse_strategy("setPos(ngb(property(crtGraph,node,i==1),node,i==2))"), rules());
  EXPECT_EQ(res.state.position, (pg::IdSet{nodes[2]}));
  res = eval_strategy(
      start, parse_strategy("setPos(ngb(property(crtGraph,node,i==1),port,Name==\"q\"))"),
      rules());
  EXPECT_TRUE(res.state.position.empty());
}

TEST(Interpreter, DeterministicRuns) {
  auto start = chain(6);
  auto script = parse_strategy("repeat(AtoB;BtoC)");
  auto first = eval_strategy(start, script, rules());
  for (int i = 0; i < 5; ++i) {
    auto again = eval_strategy(start, script, rules());
    EXPECT_EQ(again.state, first.state);
    EXPECT_EQ(again.tree.to_json(false).dump(), first.tree.to_json(false).dump());
  }
  EvalOptions seeded;
  seeded.seed = 7;
  auto s1 = eval_strategy(start, parse_strategy("repeat(AtoB)"), rules(), seeded);
  auto s2 = eval_strategy(start, parse_strategy("repeat(AtoB)"), rules(), seeded);
  EXPECT_EQ(s1.state, s2.state);
  EXPECT_EQ(s1.tree.to_json(false).dump(), s2.tree.to_json(false).dump());
}

TEST(Derivation, TreeRecordsRuleNamesAndParents) {
  auto res = eval_strategy(chain(2), parse_strategy("AtoB;BtoC"), rules());
  ASSERT_EQ(res.tree.size(), 3u);
  EXPECT_EQ(res.tree.at(1).rule, "AtoB");
  EXPECT_EQ(res.tree.at(2).rule, "BtoC");
  EXPECT_EQ(res.tree.at(2).parent, std::optional<std::size_t>(1));
  auto j = res.tree.to_json(true);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_TRUE(j[0].contains("graph"));
  EXPECT_EQ(res.tree.to_json(false, 1).size(), 2u);
}
