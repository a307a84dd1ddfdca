#pragma once

// Gibbs sampler over sink-free orientations. Edge e = {u, v} in input order
// has direction 0 for u→v and 1 for v→u. The plain bounding chain never
// leaves the all-unknown state, so coalescence is detected with a three-phase
// schedule: one split step (Phase I), two independent bounding chains, one per
// split outcome (Phase II), then a pairwise coupling of the two resulting
// states (Phase III).

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "boundchain/bounds.hpp"
#include "boundchain/graph.hpp"
#include "boundchain/keyed_random.hpp"
#include "boundchain/model.hpp"

namespace boundchain {

using Orientation = std::vector<std::uint8_t>;

/// Form 1 bound over edges; each set is a subset of the two directions.
using OrientationBound = Form1Bound;

enum class SinkFreePhase { I, II, III };

/// Coupling-time record of a forward run through the phase schedule.
struct PhaseRunResult {
  std::optional<std::uint64_t> tau;
  std::uint64_t restarts = 0;
  std::vector<std::pair<std::uint64_t, std::size_t>> trajectory;
};

class SinkFreeModel {
 public:
  using State = Orientation;
  using Bound = OrientationBound;

  static constexpr std::uint32_t kSharedBranch = 0;

  explicit SinkFreeModel(Graph graph) : graph_(std::move(graph)) {
    if (graph_.edge_count() == 0 || !graph_.connected())
      throw std::invalid_argument("sinkfree: graph must be connected");
    if (graph_.min_degree() < 2)
      throw std::invalid_argument(
          "sinkfree: every node needs degree >= 2; prune leaves (their edges are forced "
          "outward) and pass the pruned graph");
  }

  const Graph& graph() const { return graph_; }
  std::size_t edge_count() const { return graph_.edge_count(); }
  std::string name() const { return "sinkfree"; }

  Node tail(std::size_t e, std::uint8_t dir) const {
    return dir == 0 ? graph_.edge(e).u : graph_.edge(e).v;
  }
  Node head(std::size_t e, std::uint8_t dir) const {
    return dir == 0 ? graph_.edge(e).v : graph_.edge(e).u;
  }
  /// Direction of e that leaves node a.
  std::uint8_t leaving(std::size_t e, Node a) const { return graph_.edge(e).u == a ? 0 : 1; }

  /// U < 1/2 proposes direction 0; U = 1/2 falls to direction 1.
  static std::uint8_t proposed_direction(double u) { return u < 0.5 ? 0 : 1; }

  /// Drawn edge and proposed direction of a step.
  std::pair<std::size_t, std::uint8_t> proposal(const StepDraws& d) const {
    const auto e = static_cast<std::size_t>(d.index(0, graph_.edge_count()));
    return {e, proposed_direction(d.uniform(1))};
  }

  /// The two outcome classes of a split step with proposal (e, t→h): states
  /// that accept it (class 1) and states that reject it, whose other edges at h
  /// all enter h (class 2).
  std::pair<Bound, Bound> split_bounds(const StepDraws& d) const {
    const auto [e, dir] = proposal(d);
    const Node h = head(e, dir);
    auto y1 = init_bound();
    y1.sets[e] = ColorSet::single(dir);
    auto y2 = init_bound();
    y2.sets[e] = ColorSet::single(1 - dir);
    for (auto f : graph_.incident_edges(h))
      if (f != e) y2.sets[f] = ColorSet::single(1 - leaving(f, h));
    return {std::move(y1), std::move(y2)};
  }

  // The proposal is applied unless it leaves the new head without an outgoing edge.
  void forward_step(State& x, const StepDraws& d) const {
    const auto [e, dir] = proposal(d);
    const Node h = head(e, dir);
    for (auto f : graph_.incident_edges(h))
      if (f != e && tail(f, x[f]) == h) {
        x[e] = dir;
        return;
      }
  }

  void bounding_step(Bound& y, const StepDraws& d) const {
    const auto [e, dir] = proposal(d);
    const Node h = head(e, dir);
    bool unknown_nearby = false;
    for (auto f : graph_.incident_edges(h)) {
      if (f == e) continue;
      const ColorSet s = y.sets[f];
      if (!s.is_singleton()) {
        unknown_nearby = true;
      } else if (tail(f, static_cast<std::uint8_t>(s.first())) == h) {
        y.sets[e] = ColorSet::single(dir);
        return;
      }
    }
    // Otherwise every other edge at h is known to enter h and the move is
    // rejected in every bounded state.
    if (unknown_nearby) y.sets[e] = ColorSet::full(2);
  }

  Bound init_bound() const { return Form1Bound::full(graph_.edge_count(), 2); }
  std::size_t metric(const Bound& y) const { return boundchain::metric(y); }
  State extract(const Bound& y) const {
    const auto x = extract_unique(y);
    return State(x.begin(), x.end());
  }
  bool contains(const Bound& y, const State& x) const {
    for (std::size_t e = 0; e < x.size(); ++e)
      if (!y.sets[e].contains(x[e])) return false;
    return true;
  }

  /// ⌈m²⌉.
  std::uint64_t default_t0() const {
    return static_cast<std::uint64_t>(graph_.edge_count()) * graph_.edge_count();
  }

  nlohmann::json params_json() const { return nlohmann::json::object(); }
  /// [tail, head] pairs in edge order.
  nlohmann::json state_json(const State& x) const {
    auto out = nlohmann::json::array();
    for (std::size_t e = 0; e < x.size(); ++e) out.push_back({tail(e, x[e]), head(e, x[e])});
    return out;
  }

  bool is_sink_free(const State& x) const {
    std::vector<char> has_out(graph_.node_count(), 0);
    for (std::size_t e = 0; e < x.size(); ++e) has_out[tail(e, x[e])] = 1;
    for (char c : has_out)
      if (!c) return false;
    return true;
  }

  /// No node whose every edge is known to enter it.
  bool has_no_certain_sink(const Bound& y) const {
    for (Node a = 0; a < graph_.node_count(); ++a) {
      bool possible_out = false;
      for (auto f : graph_.incident_edges(a))
        if (y.sets[f].contains(leaving(f, a))) possible_out = true;
      if (!possible_out) return false;
    }
    return true;
  }

  /// A sink-free orientation: tree edges point to the root, then one
  /// non-tree edge a→b plus the reversed tree path root→a give the root an exit.
  State some_sink_free() const {
    const std::size_t n = graph_.node_count();
    std::vector<std::int64_t> parent_edge(n, -1);
    std::vector<char> seen(n, 0);
    std::vector<char> is_tree(graph_.edge_count(), 0);
    std::vector<Node> queue{0};
    seen[0] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const Node a = queue[qi];
      for (auto f : graph_.incident_edges(a)) {
        const Node b = graph_.edge(f).other(a);
        if (seen[b]) continue;
        seen[b] = 1;
        parent_edge[b] = f;
        is_tree[f] = 1;
        queue.push_back(b);
      }
    }
    State x(graph_.edge_count(), 0);
    for (Node b = 1; b < n; ++b) x[parent_edge[b]] = leaving(parent_edge[b], b);
    std::size_t extra = 0;
    while (is_tree[extra]) ++extra;
    const Node a = graph_.edge(extra).u;
    x[extra] = leaving(extra, a);
    for (Node c = a; c != 0;) {
      const auto f = static_cast<std::size_t>(parent_edge[c]);
      const Node p = graph_.edge(f).other(c);
      x[f] = leaving(f, p);
      c = p;
    }
    return x;
  }

  /// Runs the three-phase schedule one global step ("slot") at a time. The
  /// schedule depends only on the keyed draws of the block.
  class PhaseMachine {
   public:
    PhaseMachine(const SinkFreeModel& model, std::uint64_t seed, std::uint32_t block)
        : model_(&model), seed_(seed), block_(block) {}

    SinkFreePhase phase() const { return phase_; }
    std::uint64_t restarts() const { return restarts_; }
    bool coalesced() const { return phase_ == SinkFreePhase::III && coupled_; }
    const State& coalesced_state() const { return x1_; }

    StepDraws draws(std::uint64_t slot, std::uint32_t branch) const {
      return StepDraws{seed_, block_, branch, slot};
    }

    /// Unknown edges of both Phase II chains, or disagreeing edges in Phase III.
    std::size_t metric() const {
      const std::size_t m = model_->edge_count();
      switch (phase_) {
        case SinkFreePhase::I: return 2 * m;
        case SinkFreePhase::II: return model_->metric(y1_) + model_->metric(y2_);
        case SinkFreePhase::III: {
          std::size_t diff = 0;
          if (!coupled_)
            for (std::size_t e = 0; e < m; ++e) diff += x1_[e] != x2_[e] ? 1 : 0;
          return diff;
        }
      }
      return 0;
    }

    std::string describe() const {
      std::ostringstream os;
      os << "phase " << (phase_ == SinkFreePhase::I ? "I" : phase_ == SinkFreePhase::II ? "II" : "III")
         << ", restarts " << restarts_;
      if (phase_ == SinkFreePhase::II)
        os << ", unknown edges " << model_->metric(y1_) << "/" << model_->metric(y2_);
      if (phase_ == SinkFreePhase::III) os << ", disagreeing edges " << metric();
      if (restarts_ > 0 && phase_ != SinkFreePhase::III) os << " (bounds keep collapsing to all-unknown)";
      return os.str();
    }

    void advance(std::uint64_t slot) {
      switch (phase_) {
        case SinkFreePhase::I: split(slot); break;
        case SinkFreePhase::II:
          model_->bounding_step(y1_, draws(slot, 1));
          model_->bounding_step(y2_, draws(slot, 2));
          settle();
          break;
        case SinkFreePhase::III:
          model_->forward_step(x1_, draws(slot, kSharedBranch));
          if (!coupled_) {
            model_->forward_step(x2_, draws(slot, kSharedBranch));
            coupled_ = x1_ == x2_;
          }
          break;
      }
    }

   private:
    void split(std::uint64_t slot) {
      std::tie(y1_, y2_) = model_->split_bounds(draws(slot, kSharedBranch));
      phase_ = SinkFreePhase::II;
      settle();
    }

    void settle() {
      const std::size_t m = model_->edge_count();
      if (model_->metric(y1_) == m || model_->metric(y2_) == m) {
        phase_ = SinkFreePhase::I;
        ++restarts_;
      } else if (model_->metric(y1_) == 0 && model_->metric(y2_) == 0) {
        x1_ = model_->extract(y1_);
        x2_ = model_->extract(y2_);
        coupled_ = x1_ == x2_;
        phase_ = SinkFreePhase::III;
      }
    }

    const SinkFreeModel* model_;
    std::uint64_t seed_;
    std::uint32_t block_;
    SinkFreePhase phase_ = SinkFreePhase::I;
    std::uint64_t restarts_ = 0;
    Bound y1_, y2_;
    State x1_, x2_;
    bool coupled_ = false;
  };

  /// One slot of the replay of a single state through the schedule. Returns
  /// the Phase II branch the state follows after a split (1 or 2).
  std::uint32_t replay_slot(State& x, const PhaseMachine& machine, std::uint64_t slot,
                            std::uint32_t branch) const {
    switch (machine.phase()) {
      case SinkFreePhase::I: {
        const auto d = machine.draws(slot, kSharedBranch);
        forward_step(x, d);
        const auto [e, dir] = proposal(d);
        return x[e] == dir ? 1 : 2;
      }
      case SinkFreePhase::II: forward_step(x, machine.draws(slot, branch)); return branch;
      case SinkFreePhase::III: forward_step(x, machine.draws(slot, kSharedBranch)); return branch;
    }
    return branch;
  }

  BlockOutcome<State> detect_block(std::uint64_t seed, std::uint32_t block,
                                   std::uint64_t length) const {
    PhaseMachine machine(*this, seed, block);
    for (std::uint64_t s = 0; s < length; ++s) machine.advance(s);
    BlockOutcome<State> out;
    out.final_metric = machine.metric();
    if (machine.coalesced())
      out.value = machine.coalesced_state();
    else
      out.detail = machine.describe();
    return out;
  }

  void replay_block(State& x, std::uint64_t seed, std::uint32_t block, std::uint64_t length) const {
    PhaseMachine machine(*this, seed, block);
    std::uint32_t branch = kSharedBranch;
    std::uint64_t s = 0;
    for (; s < length && machine.phase() != SinkFreePhase::III; ++s) {
      branch = replay_slot(x, machine, s, branch);
      machine.advance(s);
    }
    // Phase III lasts to the end of the block.
    for (; s < length; ++s) forward_step(x, machine.draws(s, kSharedBranch));
  }

  PhaseRunResult forward_phases(std::uint64_t seed, std::uint32_t block, std::uint64_t t_cap,
                                bool record) const {
    PhaseMachine machine(*this, seed, block);
    PhaseRunResult out;
    for (std::uint64_t s = 0; s < t_cap; ++s) {
      machine.advance(s);
      if (record) out.trajectory.emplace_back(s + 1, machine.metric());
      if (machine.coalesced()) {
        out.tau = s + 1;
        break;
      }
    }
    out.restarts = machine.restarts();
    return out;
  }

 private:
  Graph graph_;
};

}  // namespace boundchain
