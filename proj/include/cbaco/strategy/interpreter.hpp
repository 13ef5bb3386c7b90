#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "cbaco/error.hpp"
#include "cbaco/portgraph/located.hpp"
#include "cbaco/strategy/ast.hpp"
#include "cbaco/strategy/derivation.hpp"

namespace cbaco::strat {

using RuleSet = std::map<std::string, pg::LocatedRule>;

struct EvalOptions {
  // Rule applications plus loop iterations allowed before BudgetExceeded.
  std::size_t step_budget = 10000;
  // When set, one() picks uniformly among candidates instead of the first.
  std::optional<std::uint64_t> seed;
};

struct EvalResult {
  bool success = false;
  pg::LocatedGraph state;
  DerivationTree tree;
  std::size_t applications = 0;
  std::size_t steps = 0;
};

// True for expressions denoting element sets rather than strategies.
inline bool is_set_expr(const Expr& e) {
  switch (e.op) {
    case Op::crt_graph:
    case Op::crt_pos:
    case Op::crt_ban:
    case Op::set_union:
    case Op::set_diff:
    case Op::ngb:
    case Op::property:
      return true;
    case Op::one:
    case Op::all:
      return is_set_expr(e.kids[0]);
    default:
      return false;
  }
}

namespace detail {

inline void check_shape(const Expr& e) {
  auto need_set = [](const Expr& k, const char* where) {
    if (!is_set_expr(k))
      throw Error(std::string(where) + " expects a set expression, got " + to_string(k));
  };
  switch (e.op) {
    case Op::is_empty: need_set(e.kids[0], "isEmpty"); break;
    case Op::set_pos: need_set(e.kids[0], "setPos"); break;
    case Op::set_ban: need_set(e.kids[0], "setBan"); break;
    case Op::ngb: need_set(e.kids[0], "ngb"); break;
    case Op::property: need_set(e.kids[0], "property"); break;
    case Op::set_union:
    case Op::set_diff:
      need_set(e.kids[0], "set operator");
      need_set(e.kids[1], "set operator");
      break;
    case Op::one:
    case Op::all:
      if (e.kids[0].op != Op::rule && !is_set_expr(e.kids[0]))
        throw Error(std::string(keyword(e.op)) +
                    " expects a rule name or a set expression, got " +
                    to_string(e.kids[0]));
      break;
    default:
      break;
  }
  for (const auto& k : e.kids) check_shape(k);
}

inline bool satisfies(const pg::Record& r, const Predicate& p) {
  auto it = r.find(p.attr);
  return it != r.end() && it->second == p.literal;
}

class Interpreter {
 public:
  Interpreter(const RuleSet& rules, const EvalOptions& opts, pg::LocatedGraph start)
      : rules_(rules), opts_(opts), state_(std::move(start)), tree_(state_) {
    if (opts.seed) rng_.seed(*opts.seed);
  }

  EvalResult run(const Expr& e) {
    EvalResult out;
    out.success = strategy(e);
    out.state = state_;
    out.tree = tree_;
    out.applications = applications_;
    out.steps = steps_;
    return out;
  }

 private:
  struct Snapshot {
    pg::LocatedGraph state;
    std::size_t tree_size;
    std::size_t current;
    std::size_t applications;
  };

  Snapshot save() const { return {state_, tree_.size(), current_, applications_}; }

  void restore(Snapshot s) {
    state_ = std::move(s.state);
    tree_.truncate(s.tree_size);
    current_ = s.current;
    applications_ = s.applications;
  }

  void tick() {
    if (++steps_ > opts_.step_budget)
      throw BudgetExceeded("strategy exceeded its step budget of " +
                           std::to_string(opts_.step_budget));
  }

  void record(const std::string& rule, const pg::Morphism& f) {
    current_ = tree_.add(current_, state_, rule, f.digest());
    ++applications_;
  }

  const pg::LocatedRule& rule(const std::string& name) const {
    auto it = rules_.find(name);
    if (it == rules_.end()) throw UnknownRule("unknown rule " + name);
    return it->second;
  }

  bool apply_one(const std::string& name) {
    const auto& r = rule(name);
    auto ms = pg::match_located(state_, r);
    if (ms.empty()) return false;
    std::size_t pick = 0;
    if (opts_.seed)
      pick = std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng_);
    tick();
    state_ = pg::apply_located_rule(state_, r, ms[pick]);
    record(name, ms[pick]);
    return true;
  }

  // Applies the rule at a maximal set of pairwise independent matches:
  // disjoint images and no edge joining two images, chosen greedily in
  // canonical order. Such matches stay valid after each other's application.
  bool apply_all(const std::string& name) {
    const auto& r = rule(name);
    auto ms = pg::match_located(state_, r);
    if (ms.empty()) return false;
    std::vector<pg::Morphism> chosen;
    pg::IdSet taken;
    for (auto& m : ms) {
      pg::IdSet img = m.image();
      bool free = true;
      for (pg::Id x : img)
        if (taken.count(x)) free = false;
      if (free)
        for (pg::Id p : img)
          if (state_.graph.has_port(p))
            for (pg::Id e : state_.graph.port(p).edges)
              if (!img.count(e) && taken.count(state_.graph.edge(e).other(p)))
                free = false;
      if (!free) continue;
      taken.insert(img.begin(), img.end());
      chosen.push_back(std::move(m));
    }
    for (const auto& m : chosen) {
      tick();
      state_ = pg::apply_located_rule(state_, r, m);
      record(name, m);
    }
    return true;
  }

  // Returns nullopt when the set expression fails (one() of an empty set).
  std::optional<pg::IdSet> set(const Expr& e) {
    const auto& g = state_.graph;
    switch (e.op) {
      case Op::crt_graph:
        return g.elements();
      case Op::crt_pos:
        return state_.position;
      case Op::crt_ban:
        return state_.banned;
      case Op::set_union:
      case Op::set_diff: {
        auto a = set(e.kids[0]);
        if (!a) return std::nullopt;
        auto b = set(e.kids[1]);
        if (!b) return std::nullopt;
        pg::IdSet out;
        if (e.op == Op::set_union) {
          out = *a;
          out.insert(b->begin(), b->end());
        } else {
          for (pg::Id x : *a)
            if (!b->count(x)) out.insert(x);
        }
        return out;
      }
      case Op::property: {
        auto src = set(e.kids[0]);
        if (!src) return std::nullopt;
        pg::IdSet out;
        for (pg::Id x : *src)
          if (g.kind_of(x) == e.kind && satisfies(g.attrs(x), e.pred)) out.insert(x);
        return out;
      }
      case Op::ngb: {
        auto src = set(e.kids[0]);
        if (!src) return std::nullopt;
        return neighbours(*src, e.kind, e.pred);
      }
      case Op::one: {
        auto s = set(e.kids[0]);
        if (!s || s->empty()) return std::nullopt;
        auto it = s->begin();
        if (opts_.seed)
          std::advance(it, std::uniform_int_distribution<std::size_t>(0, s->size() - 1)(rng_));
        return pg::IdSet{*it};
      }
      case Op::all:
        return set(e.kids[0]);
      default:
        throw Error("not a set expression: " + to_string(e));
    }
  }

  // Nodes adjacent to the nodes of src. The predicate constrains the
  // neighbour (node), the connecting edge (edge) or the src-side port (port).
  pg::IdSet neighbours(const pg::IdSet& src, ElementKind kind, const Predicate& pred) const {
    const auto& g = state_.graph;
    pg::IdSet out;
    for (pg::Id n : src) {
      if (!g.has_node(n)) continue;
      for (pg::Id p : g.node(n).ports) {
        if (kind == ElementKind::port && !satisfies(g.port(p).attrs, pred)) continue;
        for (pg::Id e : g.port(p).edges) {
          if (kind == ElementKind::edge && !satisfies(g.edge(e).attrs, pred)) continue;
          pg::Id far = g.port(g.edge(e).other(p)).node;
          if (kind == ElementKind::node && !satisfies(g.node(far).attrs, pred)) continue;
          out.insert(far);
        }
      }
    }
    return out;
  }

  // Runs e as a strategy. A failing strategy leaves no trace: state and
  // derivation tree are rolled back to where it started.
  bool strategy(const Expr& e) {
    Snapshot before = save();
    bool ok = attempt(e);
    if (!ok) restore(std::move(before));
    return ok;
  }

  bool attempt(const Expr& e) {
    switch (e.op) {
      case Op::rule:
        return apply_one(e.name);
      case Op::one:
        if (e.kids[0].op == Op::rule) return apply_one(e.kids[0].name);
        return set(e).has_value();
      case Op::all:
        if (e.kids[0].op == Op::rule) return apply_all(e.kids[0].name);
        return set(e).has_value();
      case Op::repeat:
        while (true) {
          tick();
          if (!strategy(e.kids[0])) return true;
        }
      case Op::while_do:
        while (true) {
          tick();
          if (!strategy(e.kids[0])) return true;
          if (!strategy(e.kids[1])) return false;
        }
      case Op::not_: {
        Snapshot before = save();
        bool ok = strategy(e.kids[0]);
        restore(std::move(before));
        return !ok;
      }
      case Op::is_empty: {
        auto s = set(e.kids[0]);
        return s && s->empty();
      }
      case Op::set_pos:
      case Op::set_ban: {
        auto s = set(e.kids[0]);
        if (!s) return false;
        (e.op == Op::set_pos ? state_.position : state_.banned) = std::move(*s);
        return true;
      }
      case Op::seq:
        for (const auto& k : e.kids)
          if (!strategy(k)) return false;
        return true;
      default: {
        auto s = set(e);
        return s && !s->empty();
      }
    }
  }

  const RuleSet& rules_;
  const EvalOptions& opts_;
  pg::LocatedGraph state_;
  DerivationTree tree_;
  std::size_t current_ = 0;
  std::size_t applications_ = 0;
  std::size_t steps_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace detail

// Runs a strategy from the start state. Unknown rule names are reported
// before anything is evaluated.
inline EvalResult eval_strategy(const pg::LocatedGraph& start, const Expr& ast,
                                const RuleSet& rules, const EvalOptions& opts = {}) {
  std::set<std::string> names;
  collect_rule_names(ast, names);
  for (const auto& n : names)
    if (!rules.count(n)) throw UnknownRule("unknown rule " + n);
  detail::check_shape(ast);
  return detail::Interpreter(rules, opts, start).run(ast);
}

}  // namespace cbaco::strat
