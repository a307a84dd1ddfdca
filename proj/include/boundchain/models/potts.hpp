#pragma once

// Antiferromagnetic Potts model, π(x) ∝ γ^{-#monochromatic edges} with
// γ = exp(2/T). Gibbs updates by rejection: propose (c, U), accept when
// U ≤ γ^{-a_c}, a_c = neighbors of v already colored c.

#include <algorithm>
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

struct PottsParams {
  std::size_t k = 2;
  double temperature = 1.0;
  int coupling = -1;  // J; only the antiferromagnet is supported

  double gamma() const { return std::exp(2.0 / temperature); }
  void validate() const {
    if (coupling != -1)
      throw std::invalid_argument("potts: only the antiferromagnetic model (J = -1) is supported");
    if (k < 2) throw std::invalid_argument("potts: k must be at least 2");
    if (k > ColorSet::kCapacity) throw std::invalid_argument("potts: at most 64 colors are supported");
    if (!(temperature > 0.0) || !std::isfinite(temperature))
      throw std::invalid_argument("potts: temperature must be positive");
  }
};

using PottsConfig = std::vector<std::uint32_t>;

class PottsModel {
 public:
  using State = PottsConfig;
  using Bound = Form1Bound;

  PottsModel(Graph graph, PottsParams params) : PottsModel(std::move(graph), params, 0.0) {}

  /// Bypasses T and sets γ directly; the zero-temperature limit tests use it.
  static PottsModel with_gamma(Graph graph, std::size_t k, double gamma) {
    PottsParams p{k, 2.0 / std::log(gamma), -1};
    return PottsModel(std::move(graph), p, gamma);
  }

  const Graph& graph() const { return graph_; }
  const PottsParams& params() const { return params_; }
  double gamma() const { return gamma_; }
  std::string name() const { return "potts"; }

  // Draw 0 picks v; proposal i uses draw index i for both c and U (distinct lanes).
  void forward_step(State& x, const StepDraws& d) const {
    const auto v = static_cast<Node>(d.index(0, graph_.node_count()));
    std::vector<std::uint32_t> count(params_.k, 0);
    for (Node w : graph_.neighbors(v)) ++count[x[w]];
    for (std::uint32_t draw = 1;; ++draw) {
      const auto c = static_cast<std::uint32_t>(d.index(draw, params_.k));
      if (d.uniform(draw) <= inv_gamma_pow_[count[c]]) {
        x[v] = c;
        return;
      }
    }
  }

  // b_c ≤ a_c ≤ d_c over bounded states. Accepting at U ≤ γ^{-b_c} covers every
  // acceptance; U ≤ γ^{-d_c} means every bounded state has accepted by now.
  void bounding_step(Bound& y, const StepDraws& d) const {
    const auto v = static_cast<Node>(d.index(0, graph_.node_count()));
    std::vector<std::uint32_t> fixed(params_.k, 0), maybe(params_.k, 0);
    std::size_t uncertain = 0;
    for (Node w : graph_.neighbors(v)) {
      const ColorSet s = y.sets[w];
      if (s.is_singleton()) {
        ++fixed[s.first()];
        ++maybe[s.first()];
      } else {
        ++uncertain;
        for (std::uint32_t c = 0; c < params_.k; ++c)
          if (s.contains(c)) ++maybe[c];
      }
    }
    // Once every color has been added the set cannot grow, so k - 1 also caps it.
    const std::size_t cap = std::min({graph_.max_degree(), uncertain, params_.k - 1});
    ColorSet next;
    for (std::uint32_t draw = 1;; ++draw) {
      const auto c = static_cast<std::uint32_t>(d.index(draw, params_.k));
      const double u = d.uniform(draw);
      if (u <= inv_gamma_pow_[fixed[c]]) next.insert(c);
      if (u <= inv_gamma_pow_[maybe[c]] || next.size() > cap) break;
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

  nlohmann::json params_json() const {
    return {{"k", params_.k}, {"temp", params_.temperature}};
  }
  nlohmann::json state_json(const State& x) const { return x; }

  std::size_t monochromatic_edges(const State& x) const {
    std::size_t m = 0;
    for (const auto& e : graph_.edges()) m += x[e.u] == x[e.v] ? 1 : 0;
    return m;
  }

 private:
  PottsModel(Graph graph, PottsParams params, double gamma_override)
      : graph_(std::move(graph)), params_(params) {
    params_.validate();
    gamma_ = gamma_override > 0.0 ? gamma_override : params_.gamma();
    // γ^{-a} by repeated multiplication, a = 0..Δ.
    inv_gamma_pow_.assign(graph_.max_degree() + 1, 1.0);
    for (std::size_t a = 1; a < inv_gamma_pow_.size(); ++a)
      inv_gamma_pow_[a] = inv_gamma_pow_[a - 1] / gamma_;
  }

  Graph graph_;
  PottsParams params_;
  double gamma_ = 1.0;
  std::vector<double> inv_gamma_pow_;
};

}  // namespace boundchain
