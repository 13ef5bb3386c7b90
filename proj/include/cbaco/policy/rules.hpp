#pragma once

#include <string>

#include "cbaco/policy/entity.hpp"
#include "cbaco/portgraph/located.hpp"

namespace cbaco::policy {

// Layer-by-layer closure of auxPC from every principal.
inline const std::string aux_pc_strategy = R"(setBan(all(property(crtGraph,node,type=="P")));
while(not(isEmpty(crtBan)))do(
  setPos(one(crtBan));
  setBan(all(crtBan\crtPos));
  setPos(all(crtPos[cup]ngb(crtPos,edge,type=="PC")));
  while(one(auxPC))do(
    repeat(one(auxPC));
    setPos(all(
    property(crtPos,node,type=="P")[cup]property(crtBan,node,type=="C")
    ));
    setBan(all(property(crtBan,node,type=="P")))
))
)";

// p -PC- c1 -CC-> c2 (auth) gives an auxiliary p -PC- c2. Position: p and c1;
// the new c2 is banned so each layer only extends by one step.
inline pg::LocatedRule aux_pc_rule() {
  using pg::Value;
  pg::RewriteRule r;
  r.name = "auxPC";

  struct Side {
    pg::Id p, c1, c2;
    pg::Id p_main, c1_main, c1_in, c1_out, c2_main, c2_in, c2_out;
  };
  auto build = [](pg::PortGraph& g, bool rhs) {
    Side s{};
    auto node = [&](const char* kind, const char* var) {
      return g.add_node({{"Name", Value(kind)}, {"type", Value(kind)}, {"ent", Value::var(var)}});
    };
    auto port = [&](pg::Id n, const char* name) { return g.add_port(n, {{"Name", Value(name)}}); };
    s.p = node("P", "P");
    s.p_main = port(s.p, main_port);
    s.c1 = node("C", "C1");
    s.c1_main = port(s.c1, main_port);
    s.c1_in = port(s.c1, in_port);
    s.c1_out = port(s.c1, out_port);
    s.c2 = node("C", "C2");
    s.c2_main = port(s.c2, main_port);
    s.c2_in = port(s.c2, in_port);
    s.c2_out = port(s.c2, out_port);
    g.add_edge(s.p_main, s.c1_main,
               {{"Name", Value("PC")}, {"type", Value("PC")}, {"aux", Value::var("X")}});
    g.add_edge(s.c1_out, s.c2_in,
               {{"Name", Value("CC")},
                {"type", Value("CC")},
                {"auth", Value(true)},
                {"target", Value::var("T")},
                {"obl", Value::var("O")}});
    if (rhs)
      g.add_edge(s.p_main, s.c2_main,
                 {{"Name", Value("PC")}, {"type", Value("PC")}, {"aux", Value(true)}});
    return s;
  };
  Side l = build(r.lhs, false);
  Side h = build(r.rhs, true);
  auto bridge = [&](pg::Id a, pg::Id b) {
    r.arrow.push_back({pg::ArrowKind::bridge, {a}, {b}});
  };
  bridge(l.p_main, h.p_main);
  bridge(l.c1_main, h.c1_main);
  bridge(l.c1_in, h.c1_in);
  bridge(l.c1_out, h.c1_out);
  bridge(l.c2_main, h.c2_main);
  bridge(l.c2_in, h.c2_in);
  bridge(l.c2_out, h.c2_out);

  pg::LocatedRule out;
  out.rule = std::move(r);
  out.where = pg::IdSet{l.p, l.c1};
  out.pos_rhs = {h.p, h.c1};
  out.ban_rhs = {h.c2};
  return out;
}

}  // namespace cbaco::policy
