#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cbaco/portgraph/io.hpp"
#include "cbaco/portgraph/located.hpp"

namespace cbaco::strat {

struct DerivationNode {
  pg::LocatedGraph state;
  std::optional<std::size_t> parent;
  std::string rule;    // empty for the root
  std::string digest;  // morphism digest, empty for the root

  bool operator==(const DerivationNode&) const = default;
};

// States reached by rule applications. Index 0 is the root; every other node
// has exactly one parent with a smaller index.
class DerivationTree {
 public:
  DerivationTree() = default;
  explicit DerivationTree(pg::LocatedGraph root) {
    nodes_.push_back({std::move(root), std::nullopt, {}, {}});
  }

  std::size_t add(std::size_t parent, pg::LocatedGraph state, std::string rule,
                  std::string digest) {
    nodes_.push_back({std::move(state), parent, std::move(rule), std::move(digest)});
    return nodes_.size() - 1;
  }

  // Drops every node with index >= n (used when a strategy fails and its
  // applications are undone).
  void truncate(std::size_t n) {
    if (n < nodes_.size()) nodes_.resize(n);
  }

  const std::vector<DerivationNode>& nodes() const { return nodes_; }
  const DerivationNode& at(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  bool operator==(const DerivationTree&) const = default;

  nlohmann::json to_json(bool with_graphs = false, std::size_t from = 0) const {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = from; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      nlohmann::json j = {{"index", i},
                          {"rule", n.rule},
                          {"digest", n.digest},
                          {"nodes", n.state.graph.nodes().size()},
                          {"edges", n.state.graph.edges().size()}};
      j["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
      if (with_graphs) {
        j["graph"] = pg::to_json(n.state.graph);
        j["position"] = n.state.position;
        j["banned"] = n.state.banned;
      }
      arr.push_back(std::move(j));
    }
    return arr;
  }

 private:
  std::vector<DerivationNode> nodes_;
};

}  // namespace cbaco::strat
