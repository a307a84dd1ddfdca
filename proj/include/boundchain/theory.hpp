#pragma once

// Contraction rates β of E[W_t] ≤ n β^t, where the bounding-chain drift
// analyses give one. Outside their parameter regimes there is no rate.

#include <cmath>
#include <cstdint>
#include <optional>

#include "boundchain/models/coloring.hpp"
#include "boundchain/models/hardcore.hpp"
#include "boundchain/models/permutation.hpp"
#include "boundchain/models/potts.hpp"
#include "boundchain/models/sinkfree.hpp"

namespace boundchain {

/// Δλ / (2(λ+1)), valid when λ < 2/(Δ-2) (any λ when Δ ≤ 2).
inline std::optional<double> hardcore_beta(double lambda, std::size_t max_degree) {
  const double delta = static_cast<double>(max_degree);
  if (max_degree > 2 && !(lambda < 2.0 / (delta - 2.0))) return std::nullopt;
  return delta * lambda / (2.0 * (lambda + 1.0));
}

/// 1 - (1 - (Δ+1)Δ/(k-Δ+1)) / n, valid when k ≥ Δ(Δ+2).
inline std::optional<double> coloring_beta(std::size_t k, std::size_t max_degree, std::size_t n) {
  if (k < max_degree * (max_degree + 2)) return std::nullopt;
  const double delta = static_cast<double>(max_degree);
  const double ratio = (delta + 1.0) * delta / (static_cast<double>(k) - delta + 1.0);
  return 1.0 - (1.0 - ratio) / static_cast<double>(n);
}

/// Three regimes for the antiferromagnetic Potts chain (γ = exp(2/T)):
///   k ≥ Δ(Δ+2): the coloring rate, for every T;
///   Δ < k < Δ(Δ+2) with (Δ+1)Δ(1-1/γ) < k-Δ-1:
///     β₂ = 1 - (1/n)[1 - (Δ+1)Δ(1-1/γ)/(k-Δ-1)];
///   k ≤ Δ with γ < Δk/(Δk-1):  β₃ = 1 - (1/n)[1 - Δk(1-1/γ)].
inline std::optional<double> potts_beta(std::size_t k, double temperature, std::size_t max_degree,
                                        std::size_t n) {
  if (auto b = coloring_beta(k, max_degree, n)) return b;
  const double delta = static_cast<double>(max_degree);
  const double kk = static_cast<double>(k);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double leak = 1.0 - std::exp(-2.0 / temperature);  // 1 - 1/γ
  if (k > max_degree) {
    const double slack = kk - delta - 1.0;
    const double growth = (delta + 1.0) * delta * leak;
    if (!(slack > 0.0) || !(growth < slack)) return std::nullopt;
    return 1.0 - inv_n * (1.0 - growth / slack);
  }
  const double growth = delta * kk * leak;
  if (!(growth < 1.0)) return std::nullopt;
  return 1.0 - inv_n * (1.0 - growth);
}

inline std::optional<double> theoretical_beta(const PermutationModel&) { return std::nullopt; }
inline std::optional<double> theoretical_beta(const SinkFreeModel&) { return std::nullopt; }
inline std::optional<double> theoretical_beta(const HardcoreModel& m) {
  return hardcore_beta(m.params().lambda, m.graph().max_degree());
}
inline std::optional<double> theoretical_beta(const ColoringModel& m) {
  return coloring_beta(m.colors(), m.graph().max_degree(), m.graph().node_count());
}
inline std::optional<double> theoretical_beta(const PottsModel& m) {
  return potts_beta(m.params().k, m.params().temperature, m.graph().max_degree(),
                    m.graph().node_count());
}

/// ⌈ln n / ln(1/β)⌉ + θ: the step count after which P(not coalesced) ≤ β^θ.
inline std::uint64_t guarantee_steps(double beta, std::size_t n, std::uint64_t theta) {
  return static_cast<std::uint64_t>(std::ceil(std::log(static_cast<double>(n)) / std::log(1.0 / beta))) +
         theta;
}

/// Smallest integer θ with β^θ ≤ target.
inline std::uint64_t theta_for(double beta, double target) {
  return static_cast<std::uint64_t>(std::ceil(std::log(target) / std::log(beta)));
}

}  // namespace boundchain
