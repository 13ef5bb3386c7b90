#include <gtest/gtest.h>

#include <random>

#include "cbaco/portgraph/canonical.hpp"
#include "cbaco/portgraph/io.hpp"
#include "cbaco/portgraph/located.hpp"
#include "support/random_graphs.hpp"

using namespace cbaco;
using namespace cbaco::pg;

namespace {

struct Star {
  PortGraph g;
  Id centre = 0, centre_port = 0;
  std::vector<Id> leaves;
};

// One "X" node whose single port is linked to k leaf nodes.
Star star(int k) {
  Star s;
  s.centre = s.g.add_node({{"Name", "X"}});
  s.centre_port = s.g.add_port(s.centre, {{"Name", "p"}});
  for (int i = 0; i < k; ++i) {
    Id n = s.g.add_node({{"Name", "L"}});
    Id p = s.g.add_port(n, {{"Name", "p"}});
    s.g.add_edge(s.centre_port, p, {{"Name", "e"}, {"i", i}});
    s.leaves.push_back(n);
  }
  return s;
}

RewriteRule single_node_rule(const std::string& label, int rhs_ports) {
  RewriteRule r;
  r.name = "grow";
  Id n = r.lhs.add_node({{"Name", label}});
  Id lp = r.lhs.add_port(n, {{"Name", "p"}});
  Id rn = r.rhs.add_node({{"Name", "Y"}});
  ArrowPort ap{ArrowKind::bridge, {lp}, {}};
  for (int i = 0; i < rhs_ports; ++i)
    ap.rhs_ports.push_back(r.rhs.add_port(rn, {{"Name", "q" + std::to_string(i)}}));
  r.arrow.push_back(ap);
  return r;
}

}  // namespace

TEST(PortGraph, InvariantsHoldAfterConstruction) {
  auto s = star(3);
  EXPECT_TRUE(s.g.check_invariants().empty());
  EXPECT_EQ(s.g.arity(s.centre_port), 3u);
  auto lbl = s.g.label(s.centre_port);
  EXPECT_EQ(lbl.at("Arity"), Value(3));
  EXPECT_EQ(lbl.at("Attach"), Value(static_cast<std::int64_t>(s.centre)));
}

TEST(PortGraph, RemoveNodeDropsIncidentEdges) {
  auto s = star(2);
  s.g.remove_node(s.leaves[0]);
  EXPECT_EQ(s.g.edges().size(), 1u);
  EXPECT_TRUE(s.g.check_invariants().empty());
}

TEST(Match, IdentityEmbeddingOfSingleNode) {
  PortGraph host;
  Id n = host.add_node({{"Name", "X"}});
  Id p = host.add_port(n, {{"Name", "p"}});
  RewriteRule r;
  r.name = "id";
  Id ln = r.lhs.add_node({{"Name", "X"}});
  Id lp = r.lhs.add_port(ln, {{"Name", "p"}});
  Id rn = r.rhs.add_node({{"Name", "X"}});
  Id rp = r.rhs.add_port(rn, {{"Name", "p"}});
  r.arrow.push_back({ArrowKind::bridge, {lp}, {rp}});
  auto ms = match_rule(host, r);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].nodes.at(ln), n);
  EXPECT_EQ(ms[0].ports.at(lp), p);
}

TEST(Match, DanglingConditionBlocksUnbridgedPorts) {
  auto s = star(2);
  auto r = single_node_rule("X", 1);
  r.arrow.clear();
  EXPECT_TRUE(match_rule(s.g, r).empty());
  r.rhs = PortGraph();
  auto lone = star(0);
  EXPECT_EQ(match_rule(lone.g, r).size(), 1u);
}

TEST(Match, VariablesBindConsistently) {
  PortGraph host;
  Id a = host.add_node({{"Name", "A"}, {"k", 1}});
  host.add_port(a, {{"Name", "p"}, {"k", 1}});
  Id b = host.add_node({{"Name", "A"}, {"k", 1}});
  host.add_port(b, {{"Name", "p"}, {"k", 2}});
  RewriteRule r;
  r.name = "v";
  Id ln = r.lhs.add_node({{"Name", "A"}, {"k", Value::var("K")}});
  Id lp = r.lhs.add_port(ln, {{"Name", "p"}, {"k", Value::var("K")}});
  r.arrow.push_back({ArrowKind::blackhole, {lp}, {}});
  auto ms = match_rule(host, r);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].nodes.at(ln), a);
  EXPECT_EQ(ms[0].bindings.at("K"), Value(1));
}

TEST(Match, AttributeVariablesAreRejected) {
  auto s = star(0);
  RewriteRule r;
  r.name = "attrvar";
  Id ln = r.lhs.add_node({{"Name", "X"}, {"?attr", 1}});
  r.lhs.add_port(ln, {{"Name", "p"}});
  EXPECT_THROW(match_rule(s.g, r), InvalidRule);
}

TEST(Match, AgreesWithExhaustiveEnumeration) {
  std::mt19937 rng(7);
  int with_matches = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto host = testsupport::random_host(rng, 6);
    auto rule = testsupport::random_rule(rng);
    auto ms = match_rule(host, rule);
    std::set<testsupport::BruteForceMatcher::Key> got;
    for (const auto& m : ms) got.insert({m.nodes, m.ports, m.edges});
    ASSERT_EQ(got.size(), ms.size()) << "duplicate morphisms, trial " << trial;
    ASSERT_EQ(got, testsupport::BruteForceMatcher(host, rule).run())
        << "trial " << trial;
    if (!ms.empty()) ++with_matches;
    for (const auto& m : ms) {
      auto out = apply_rule(host, rule, m);
      ASSERT_TRUE(out.check_invariants().empty()) << "trial " << trial;
    }
  }
  EXPECT_GT(with_matches, 30);
}

TEST(Match, CanonicalOrderIsDeterministic) {
  auto s = star(0);
  Id n2 = s.g.add_node({{"Name", "X"}});
  s.g.add_port(n2, {{"Name", "p"}});
  auto r = single_node_rule("X", 1);
  auto a = match_rule(s.g, r);
  auto b = match_rule(s.g, r);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a, b);
  EXPECT_LT(a[0].nodes.begin()->second, a[1].nodes.begin()->second);
}

TEST(Rewrite, EmptyRuleLeavesHostUnchanged) {
  auto s = star(2);
  RewriteRule r;
  r.name = "noop";
  auto ms = match_rule(s.g, r);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(apply_rule(s.g, r, ms[0]), s.g);
}

TEST(Rewrite, BridgeToTwoPortsDoublesExternalEdges) {
  for (int k = 0; k <= 4; ++k) {
    auto s = star(k);
    auto r = single_node_rule("X", 2);
    auto ms = match_rule(s.g, r);
    ASSERT_EQ(ms.size(), 1u);
    auto out = apply_rule(s.g, r, ms[0]);
    EXPECT_EQ(out.edges().size(), static_cast<std::size_t>(2 * k));
    EXPECT_TRUE(out.check_invariants().empty());
    EXPECT_FALSE(out.has_node(s.centre));
  }
}

TEST(Rewrite, BridgeKeepsEdgeIdentity) {
  auto s = star(1);
  Id e = s.g.edges().begin()->first;
  auto r = single_node_rule("X", 1);
  auto out = apply_rule(s.g, r, match_rule(s.g, r)[0]);
  ASSERT_TRUE(out.has_edge(e));
  EXPECT_EQ(out.edge(e).attrs, s.g.edge(e).attrs);
}

TEST(Rewrite, BlackholeErasesExternalEdges) {
  auto s = star(3);
  RewriteRule r;
  r.name = "drop";
  Id ln = r.lhs.add_node({{"Name", "X"}});
  Id lp = r.lhs.add_port(ln, {{"Name", "p"}});
  r.arrow.push_back({ArrowKind::blackhole, {lp}, {}});
  auto out = apply_rule(s.g, r, match_rule(s.g, r)[0]);
  EXPECT_TRUE(out.edges().empty());
  EXPECT_EQ(out.nodes().size(), 3u);
}

TEST(Rewrite, WireConnectsNeighbourhoods) {
  // a - X(p1) ; X(p2) - b, c  ==> a-b, a-c
  PortGraph g;
  Id x = g.add_node({{"Name", "X"}});
  Id p1 = g.add_port(x, {{"Name", "p1"}});
  Id p2 = g.add_port(x, {{"Name", "p2"}});
  auto leaf = [&](const char* n) {
    Id id = g.add_node({{"Name", n}});
    return g.add_port(id, {{"Name", "p"}});
  };
  Id a = leaf("a"), b = leaf("b"), c = leaf("c");
  g.add_edge(p1, a, {{"Name", "e"}});
  g.add_edge(p2, b, {{"Name", "f"}});
  g.add_edge(p2, c, {{"Name", "f"}});
  RewriteRule r;
  r.name = "splice";
  Id ln = r.lhs.add_node({{"Name", "X"}});
  Id l1 = r.lhs.add_port(ln, {{"Name", "p1"}});
  Id l2 = r.lhs.add_port(ln, {{"Name", "p2"}});
  r.arrow.push_back({ArrowKind::wire, {l1, l2}, {}});
  auto ms = match_rule(g, r);
  ASSERT_EQ(ms.size(), 1u);
  auto out = apply_rule(g, r, ms[0]);
  EXPECT_EQ(out.edges().size(), 2u);
  for (const auto& [id, e] : out.edges()) {
    std::set<Id> ends{e.a, e.b};
    EXPECT_TRUE(ends.count(a));
    EXPECT_EQ(string_attr(e.attrs, "Name"), "e");
  }
  EXPECT_TRUE(out.check_invariants().empty());
}

TEST(Rewrite, RuleCheckRejectsMalformedArrows) {
  RewriteRule r;
  r.name = "bad";
  Id ln = r.lhs.add_node({{"Name", "X"}});
  Id lp = r.lhs.add_port(ln, {{"Name", "p"}});
  r.arrow.push_back({ArrowKind::wire, {lp, lp}, {}});
  EXPECT_FALSE(r.check().empty());
  r.arrow = {{ArrowKind::bridge, {lp}, {}}};
  EXPECT_FALSE(r.check().empty());
  r.arrow = {{ArrowKind::blackhole, {lp}, {}}, {ArrowKind::blackhole, {}, {}}};
  EXPECT_FALSE(r.check().empty());
  r.arrow.clear();
  Id rn = r.rhs.add_node({{"Name", Value::var("Unbound")}});
  (void)rn;
  EXPECT_FALSE(r.check().empty());
}

TEST(Rewrite, StaleMorphismIsRejected) {
  auto s = star(1);
  auto r = single_node_rule("X", 1);
  auto m = match_rule(s.g, r)[0];
  auto once = apply_rule(s.g, r, m);
  EXPECT_THROW(apply_rule(once, r, m), InvalidMorphism);
}

TEST(Rewrite, DisjointApplicationsCommute) {
  std::mt19937 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    auto host = testsupport::random_host(rng, 8);
    auto rule = testsupport::random_rule(rng);
    auto ms = match_rule(host, rule);
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (std::size_t j = i + 1; j < ms.size(); ++j) {
        auto ii = ms[i].image(), jj = ms[j].image();
        bool disjoint = true;
        for (Id x : ii)
          if (jj.count(x)) disjoint = false;
        if (!disjoint) continue;
        // Commutation requires neither application to touch the other's
        // image, which holds when no edge links the two images.
        bool linked = false;
        for (const auto& [eid, e] : host.edges())
          if ((ii.count(e.a) && jj.count(e.b)) || (ii.count(e.b) && jj.count(e.a)))
            linked = true;
        if (linked) continue;
        auto a1 = apply_rule(host, rule, ms[i]);
        auto a2 = apply_rule(a1, rule, ms[j]);
        auto b1 = apply_rule(host, rule, ms[j]);
        auto b2 = apply_rule(b1, rule, ms[i]);
        ASSERT_TRUE(isomorphic(a2, b2)) << "trial " << trial;
        ++checked;
      }
  }
  EXPECT_GT(checked, 10);
}

TEST(Located, FullPositionStaysWhole) {
  auto s = star(2);
  auto r = single_node_rule("X", 2);
  LocatedRule lr{r, std::nullopt, r.rhs.elements(), {}};
  auto lg = LocatedGraph::whole(s.g);
  auto ms = match_located(lg, lr);
  ASSERT_EQ(ms.size(), 1u);
  auto out = apply_located_rule(lg, lr, ms[0]);
  EXPECT_EQ(out.position, out.graph.elements());
  EXPECT_TRUE(out.banned.empty());
}

TEST(Located, BannedAndPositionViolations) {
  auto s = star(1);
  auto r = single_node_rule("X", 1);
  LocatedRule lr{r, std::nullopt, {}, {}};
  auto lg = LocatedGraph::whole(s.g);
  auto m = match_rule(s.g, r)[0];
  lg.banned = {s.centre};
  EXPECT_TRUE(match_located(lg, lr).empty());
  EXPECT_THROW(apply_located_rule(lg, lr, m), BannedViolation);
  lg.banned.clear();
  lg.position.clear();
  lr.where = IdSet{r.lhs.nodes().begin()->first};
  EXPECT_TRUE(match_located(lg, lr).empty());
  EXPECT_THROW(apply_located_rule(lg, lr, m), PositionViolation);
}

TEST(Located, BookkeepingMatchesSetAlgebra) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto host = testsupport::random_host(rng, 6);
    auto rule = testsupport::random_rule(rng);
    LocatedRule lr{rule, std::nullopt, {}, {}};
    for (Id x : rule.rhs.elements()) {
      if (testsupport::uniform(rng, 0, 1)) lr.pos_rhs.insert(x);
      if (testsupport::uniform(rng, 0, 2) == 0) lr.ban_rhs.insert(x);
    }
    LocatedGraph lg{host, {}, {}};
    for (Id x : host.elements()) {
      if (testsupport::uniform(rng, 0, 1)) lg.position.insert(x);
      if (testsupport::uniform(rng, 0, 5) == 0) lg.banned.insert(x);
    }
    for (int step = 0; step < 3; ++step) {
      auto ms = match_located(lg, lr);
      if (ms.empty()) break;
      const auto& f = ms.front();
      auto trace = apply_rule_traced(lg.graph, rule, f);
      auto next = apply_located_rule(lg, lr, f);
      // Oracle: P' = (P \ f(L)) u f(M), Q' = Q u f(N), restricted to live
      // elements; copies of retained edges belong where their origin did.
      auto oracle = [&](const IdSet& old, const IdSet& rhs_part) {
        IdSet out;
        IdSet img = f.image();
        for (Id x : old)
          if (!img.count(x) && trace.graph.contains(x)) out.insert(x);
        for (Id x : rhs_part) out.insert(trace.rhs_images.at(x));
        for (const auto& [copy, origin] : trace.edge_copies)
          if (old.count(origin)) out.insert(copy);
        return out;
      };
      EXPECT_EQ(next.position, oracle(lg.position, lr.pos_rhs));
      EXPECT_EQ(next.banned, oracle(lg.banned, lr.ban_rhs));
      for (Id x : lg.banned)
        if (next.graph.contains(x)) EXPECT_TRUE(next.banned.count(x));
      lg = next;
    }
  }
}

TEST(Canonical, InsensitiveToIdAssignment) {
  PortGraph a, b;
  Id a1 = a.add_node({{"Name", "A"}});
  Id a2 = a.add_node({{"Name", "B"}});
  Id ap1 = a.add_port(a1, {{"Name", "x"}});
  Id ap2 = a.add_port(a2, {{"Name", "x"}});
  a.add_edge(ap1, ap2, {{"Name", "e"}});
  Id b2 = b.add_node({{"Name", "B"}});
  Id bp2 = b.add_port(b2, {{"Name", "x"}});
  Id b1 = b.add_node({{"Name", "A"}});
  Id bp1 = b.add_port(b1, {{"Name", "x"}});
  b.add_edge(bp2, bp1, {{"Name", "e"}});
  EXPECT_TRUE(isomorphic(a, b));
  b.set_attr(b1, "Name", "C");
  EXPECT_FALSE(isomorphic(a, b));
}

TEST(Canonical, DistinguishesSymmetricShapes) {
  // Two triangles vs a hexagon: same colour refinement, not isomorphic.
  auto ring = [](const std::vector<std::pair<int, int>>& links, int n) {
    PortGraph g;
    std::vector<Id> ports;
    for (int i = 0; i < n; ++i) {
      Id id = g.add_node({{"Name", "v"}});
      ports.push_back(g.add_port(id, {{"Name", "p"}}));
    }
    for (auto [x, y] : links) g.add_edge(ports[x], ports[y], {{"Name", "e"}});
    return g;
  };
  auto two_triangles = ring({{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}}, 6);
  auto hexagon = ring({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}, 6);
  auto hexagon2 = ring({{0, 2}, {2, 4}, {4, 1}, {1, 3}, {3, 5}, {5, 0}}, 6);
  EXPECT_FALSE(isomorphic(two_triangles, hexagon));
  EXPECT_TRUE(isomorphic(hexagon, hexagon2));
}

TEST(Io, JsonRoundTripPreservesShape) {
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    auto g = testsupport::random_host(rng, 6);
    g.set_attr(g.nodes().begin()->first, "t",
               Value::tuple({Value(), Value("s"), Value::var("X")}));
    auto back = graph_from_json(json::parse(to_json(g).dump()));
    EXPECT_TRUE(isomorphic(g, back));
  }
  EXPECT_THROW(graph_from_json(json::parse(R"({"nodes":[{"attrs":{"a":{"x":1}}}]})")),
               ParseError);
}

TEST(Io, DotMentionsEveryNode) {
  auto s = star(2);
  auto dot = to_dot(s.g);
  EXPECT_NE(dot.find("n" + std::to_string(s.centre)), std::string::npos);
  EXPECT_NE(dot.find("--"), std::string::npos);
}
