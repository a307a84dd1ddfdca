#pragma once

// Gibbs sampler for proper k-colorings. The forward step redraws a color for
// v until it clashes with no neighbor; the bounding step collects every
// color some bounded state could end up accepting.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boundchain/bounds.hpp"
#include "boundchain/graph.hpp"
#include "boundchain/keyed_random.hpp"

namespace boundchain {

struct ColoringParams {
  std::size_t k = 3;

  void validate(const Graph& g) const {
    if (k > ColorSet::kCapacity)
      throw std::invalid_argument("coloring: at most 64 colors are supported");
    if (k <= g.max_degree())
      throw std::invalid_argument("coloring: k must exceed the maximum degree (k >= " +
                                  std::to_string(g.max_degree() + 1) + ")");
  }
  /// Below Δ+2 the Gibbs chain may fail to connect the proper colorings.
  bool may_be_non_ergodic(const Graph& g) const { return k < g.max_degree() + 2; }
};

using Coloring = std::vector<std::uint32_t>;

class ColoringModel {
 public:
  using State = Coloring;
  using Bound = Form1Bound;

  ColoringModel(Graph graph, ColoringParams params) : graph_(std::move(graph)), params_(params) {
    params_.validate(graph_);
  }

  const Graph& graph() const { return graph_; }
  std::size_t colors() const { return params_.k; }
  std::string name() const { return "coloring"; }

  // Draw 0 picks v; draws 1, 2, ... are the candidate colors.
  void forward_step(State& x, const StepDraws& d) const {
    const auto v = static_cast<Node>(d.index(0, graph_.node_count()));
    ColorSet used;
    for (Node w : graph_.neighbors(v)) used.insert(x[w]);
    for (std::uint32_t draw = 1;; ++draw) {
      const auto c = static_cast<std::uint32_t>(d.index(draw, params_.k));
      if (!used.contains(c)) {
        x[v] = c;
        return;
      }
    }
  }

  // A drawn color blocked by a singleton neighbor is rejected by every bounded
  // state; any other drawn color may be accepted by some of them. Each bounded
  // state can reject an unblocked color only by matching one of the u_v
  // uncertain neighbors, so after u_v + 1 distinct unblocked colors every
  // bounded state has accepted.
  void bounding_step(Bound& y, const StepDraws& d) const {
    const auto v = static_cast<Node>(d.index(0, graph_.node_count()));
    ColorSet blocked, possible;
    std::size_t uncertain = 0;
    for (Node w : graph_.neighbors(v)) {
      const ColorSet s = y.sets[w];
      possible |= s;
      if (s.is_singleton())
        blocked |= s;
      else
        ++uncertain;
    }
    ColorSet next;
    for (std::uint32_t draw = 1;; ++draw) {
      const auto c = static_cast<std::uint32_t>(d.index(draw, params_.k));
      if (!blocked.contains(c)) next.insert(c);
      if (!possible.contains(c) || next.size() > uncertain) break;
    }
    y.sets[v] = next;
  }

  Bound init_bound() const { return Form1Bound::full(graph_.node_count(), params_.k); }
  std::size_t metric(const Bound& y) const { return boundchain::metric(y); }
  State extract(const Bound& y) const { return extract_unique(y); }
  bool contains(const Bound& y, const State& x) const { return y.bounds(x); }

  /// ⌈4 n ln(n+1)⌉.
  std::uint64_t default_t0() const {
    const double n = static_cast<double>(graph_.node_count());
    return static_cast<std::uint64_t>(std::ceil(4.0 * n * std::log(n + 1.0)));
  }

  nlohmann::json params_json() const { return {{"k", params_.k}}; }
  nlohmann::json state_json(const State& x) const { return x; }

  bool is_proper(const State& x) const {
    for (const auto& e : graph_.edges())
      if (x[e.u] == x[e.v]) return false;
    return true;
  }

  /// A proper coloring: greedy smallest-available color in node order.
  State greedy() const {
    State x(graph_.node_count(), 0);
    for (Node v = 0; v < graph_.node_count(); ++v) {
      ColorSet used;
      for (Node w : graph_.neighbors(v))
        if (w < v) used.insert(x[w]);
      std::uint32_t c = 0;
      while (used.contains(c)) ++c;
      x[v] = c;
    }
    return x;
  }

 private:
  Graph graph_;
  ColoringParams params_;
};

}  // namespace boundchain
