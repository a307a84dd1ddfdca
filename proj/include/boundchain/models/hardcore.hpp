#pragma once

// Hard-core gas: independent sets weighted by λ^{|A|}, sampled with the
// Dyer–Greenhill insert/delete/swap chain. The bounding chain is Form 2.

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

struct HardcoreParams {
  double lambda = 1.0;
  double p_swap = 0.25;

  double alpha() const { return lambda / (lambda + 1.0); }
  void validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw std::invalid_argument("hardcore: fugacity lambda must be positive");
    if (!(p_swap >= 0.0 && p_swap <= 1.0))
      throw std::invalid_argument("hardcore: p_swap must lie in [0, 1]");
  }
};

/// Occupancy per node.
using IndependentSet = std::vector<std::uint8_t>;

/// Which branch of the bounding step fired. `Unchanged` covers every guard
/// combination not listed.
enum class HardcoreCase { I, IIa, IIb, IIc, IId, IIIa, IIIb, Unchanged };

class HardcoreModel {
 public:
  using State = IndependentSet;
  using Bound = Form2Bound;
  using Status = Form2Bound::Status;

  HardcoreModel(Graph graph, HardcoreParams params)
      : graph_(std::move(graph)), params_(params), alpha_(params.alpha()),
        swap_alpha_(params.p_swap * params.alpha()) {
    params_.validate();
  }

  const Graph& graph() const { return graph_; }
  const HardcoreParams& params() const { return params_; }
  std::string name() const { return "hardcore"; }

  // Draw 0 picks v, draw 1 is U. Insertions happen on U < α.
  void forward_step(State& a, const StepDraws& d) const {
    const auto v = static_cast<Node>(d.index(0, graph_.node_count()));
    const double u = d.uniform(1);
    if (u >= alpha_) {
      a[v] = 0;
      return;
    }
    std::size_t occupied = 0;
    Node last = 0;
    for (Node w : graph_.neighbors(v))
      if (a[w]) {
        ++occupied;
        last = w;
      }
    if (occupied == 0) {
      a[v] = 1;
    } else if (occupied == 1 && u < swap_alpha_) {
      a[last] = 0;
      a[v] = 1;
    }
  }

  void bounding_step(Bound& y, const StepDraws& d) const { bounding_step_case(y, d); }

  HardcoreCase bounding_step_case(Bound& y, const StepDraws& d) const {
    const auto v = static_cast<Node>(d.index(0, graph_.node_count()));
    const double u = d.uniform(1);
    if (u >= alpha_) {
      y.status[v] = Status::Out;
      return HardcoreCase::I;
    }
    std::size_t in_b = 0, in_d = 0;
    Node b_nb = 0, d_nb = 0;
    for (Node w : graph_.neighbors(v)) {
      if (y.status[w] == Status::Known) {
        ++in_b;
        b_nb = w;
      } else if (y.status[w] == Status::Uncertain) {
        ++in_d;
        d_nb = w;
      }
    }
    const bool swap = u < swap_alpha_;
    if (in_b == 0) {
      if (in_d == 0) {
        y.status[v] = Status::Known;
        return HardcoreCase::IIa;
      }
      if (in_d == 1) {
        if (swap) {
          y.status[v] = Status::Known;
          y.status[d_nb] = Status::Out;
          return HardcoreCase::IIc;
        }
        y.status[v] = Status::Uncertain;
        return HardcoreCase::IIb;
      }
      y.status[v] = Status::Uncertain;
      return HardcoreCase::IId;
    }
    if (in_b == 1 && swap) {
      if (in_d == 0) {
        y.status[v] = Status::Known;
        y.status[b_nb] = Status::Out;
        return HardcoreCase::IIIa;
      }
      y.status[v] = Status::Uncertain;
      y.status[b_nb] = Status::Uncertain;
      return HardcoreCase::IIIb;
    }
    return HardcoreCase::Unchanged;
  }

  Bound init_bound() const { return Form2Bound::all_uncertain(graph_.node_count()); }
  std::size_t metric(const Bound& y) const { return boundchain::metric(y); }
  State extract(const Bound& y) const { return extract_unique(y); }
  bool contains(const Bound& y, const State& a) const { return y.bounds(a); }

  /// ⌈4 n ln(n+1)⌉.
  std::uint64_t default_t0() const {
    const double n = static_cast<double>(graph_.node_count());
    return static_cast<std::uint64_t>(std::ceil(4.0 * n * std::log(n + 1.0)));
  }

  nlohmann::json params_json() const {
    return {{"lambda", params_.lambda}, {"pswap", params_.p_swap}};
  }
  /// Sorted array of occupied nodes.
  nlohmann::json state_json(const State& a) const {
    auto out = nlohmann::json::array();
    for (std::size_t v = 0; v < a.size(); ++v)
      if (a[v]) out.push_back(v);
    return out;
  }

  bool is_independent(const State& a) const {
    for (const auto& e : graph_.edges())
      if (a[e.u] && a[e.v]) return false;
    return true;
  }

 private:
  Graph graph_;
  HardcoreParams params_;
  double alpha_;
  double swap_alpha_;
};

}  // namespace boundchain
