#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cbaco/portgraph/graph.hpp"

namespace cbaco::pg {

namespace detail {

// Nodes and ports are the vertices; edges become labelled port-port links.
class Canonicalizer {
 public:
  explicit Canonicalizer(const PortGraph& g) {
    for (const auto& [id, n] : g.nodes()) {
      index_[id] = labels_.size();
      labels_.push_back("N" + record_repr(n.attrs));
      is_port_.push_back(false);
    }
    for (const auto& [id, p] : g.ports()) {
      index_[id] = labels_.size();
      labels_.push_back("P" + record_repr(p.attrs));
      is_port_.push_back(true);
    }
    adj_.resize(labels_.size());
    attach_.assign(labels_.size(), npos);
    for (const auto& [id, p] : g.ports()) {
      std::size_t pi = index_.at(id), ni = index_.at(p.node);
      attach_[pi] = ni;
      adj_[pi].emplace_back("attach", ni);
      adj_[ni].emplace_back("iface", pi);
    }
    for (const auto& [id, e] : g.edges()) {
      std::size_t a = index_.at(e.a), b = index_.at(e.b);
      std::string lbl = "E" + record_repr(e.attrs);
      edges_.emplace_back(a, b, lbl);
      adj_[a].emplace_back(lbl, b);
      if (a != b) adj_[b].emplace_back(lbl, a);
    }
  }

  std::string run() {
    std::vector<std::size_t> colour = initial();
    refine(colour);
    search(colour);
    return best_ ? *best_ : std::string("empty");
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<std::size_t> initial() const {
    std::vector<std::string> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::size_t> c(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i)
      c[i] = std::lower_bound(sorted.begin(), sorted.end(), labels_[i]) -
             sorted.begin();
    return c;
  }

  static std::size_t count(const std::vector<std::size_t>& c) {
    std::vector<std::size_t> s = c;
    std::sort(s.begin(), s.end());
    return std::unique(s.begin(), s.end()) - s.begin();
  }

  // Colour refinement until the partition stops splitting. Colours are ranks
  // of signatures, so the result does not depend on the input ids.
  void refine(std::vector<std::size_t>& c) const {
    std::size_t classes = count(c);
    while (true) {
      std::vector<std::pair<std::size_t, std::vector<std::pair<std::string, std::size_t>>>> sig(c.size());
      for (std::size_t v = 0; v < c.size(); ++v) {
        sig[v].first = c[v];
        for (const auto& [lbl, w] : adj_[v]) sig[v].second.emplace_back(lbl, c[w]);
        std::sort(sig[v].second.begin(), sig[v].second.end());
      }
      auto sorted = sig;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      std::vector<std::size_t> next(c.size());
      for (std::size_t v = 0; v < c.size(); ++v)
        next[v] = std::lower_bound(sorted.begin(), sorted.end(), sig[v]) -
                  sorted.begin();
      std::size_t n = count(next);
      c = std::move(next);
      if (n == classes) return;
      classes = n;
    }
  }

  // Individualise every vertex of the first non-singleton cell in turn and
  // keep the smallest serialisation.
  void search(const std::vector<std::size_t>& c) {
    std::map<std::size_t, std::vector<std::size_t>> cells;
    for (std::size_t v = 0; v < c.size(); ++v) cells[c[v]].push_back(v);
    for (const auto& [col, members] : cells) {
      if (members.size() < 2) continue;
      for (std::size_t v : members) {
        std::vector<std::size_t> next(c.size());
        for (std::size_t w = 0; w < c.size(); ++w)
          next[w] = 2 * c[w] + ((c[w] == col && w != v) ? 1 : 0);
        refine(next);
        search(next);
      }
      return;
    }
    std::string s = serialise(c);
    if (!best_ || s < *best_) best_ = s;
  }

  std::string serialise(const std::vector<std::size_t>& c) const {
    std::vector<std::size_t> order(c.size());
    for (std::size_t v = 0; v < c.size(); ++v) order[c[v]] = v;
    std::vector<std::size_t> pos(c.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::size_t v = order[i];
      out += labels_[v];
      if (is_port_[v]) out += "@" + std::to_string(pos[attach_[v]]);
      out += '\n';
    }
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> es;
    for (const auto& [a, b, lbl] : edges_) {
      std::size_t x = pos[a], y = pos[b];
      es.emplace_back(std::min(x, y), std::max(x, y), lbl);
    }
    std::sort(es.begin(), es.end());
    for (const auto& [x, y, lbl] : es)
      out += std::to_string(x) + "-" + std::to_string(y) + lbl + '\n';
    return out;
  }

  std::map<Id, std::size_t> index_;
  std::vector<std::string> labels_;
  std::vector<bool> is_port_;
  std::vector<std::size_t> attach_;
  std::vector<std::vector<std::pair<std::string, std::size_t>>> adj_;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges_;
  std::optional<std::string> best_;
};

}  // namespace detail

// A string equal for two graphs iff they are isomorphic (ids ignored).
// Exponential in the size of symmetric vertex classes; meant for small graphs.
inline std::string canonical_form(const PortGraph& g) {
  return detail::Canonicalizer(g).run();
}

inline bool isomorphic(const PortGraph& a, const PortGraph& b) {
  if (a.nodes().size() != b.nodes().size() ||
      a.ports().size() != b.ports().size() ||
      a.edges().size() != b.edges().size())
    return false;
  return canonical_form(a) == canonical_form(b);
}

}  // namespace cbaco::pg
