#pragma once

// Shared fixtures: random bounded pairs and draw searches for the model tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "boundchain/boundchain.hpp"

namespace boundchain::testing {

using Rng = std::mt19937_64;

/// First step index whose draws satisfy `pred`.
inline StepDraws find_draws(const std::function<bool(const StepDraws&)>& pred,
                            std::uint64_t seed = 12345, std::uint32_t block = 99) {
  for (std::uint64_t step = 0; step < 10'000'000; ++step) {
    const StepDraws d{seed, block, 0, step};
    if (pred(d)) return d;
  }
  throw std::runtime_error("find_draws: no matching key");
}

inline bool within(double x, double lo, double hi) { return x >= lo && x < hi; }

/// |freq - p| within 3 binomial standard deviations.
inline bool within_3_sigma(std::size_t hits, std::size_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  return std::abs(static_cast<double>(hits) / n - p) <= 3.0 * sigma;
}

inline Permutation random_permutation(std::size_t n, Rng& rng) {
  Permutation x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint32_t>(i);
  std::shuffle(x.begin(), x.end(), rng);
  return x;
}

inline IndependentSet random_independent_set(const Graph& g, Rng& rng) {
  IndependentSet a(g.node_count(), 0);
  std::vector<Node> order(g.node_count());
  for (Node v = 0; v < order.size(); ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(0.5);
  for (Node v : order) {
    if (!coin(rng)) continue;
    bool free = true;
    for (Node w : g.neighbors(v)) free = free && !a[w];
    if (free) a[v] = 1;
  }
  return a;
}

/// Proper coloring built greedily in random order with random free colors.
inline Coloring random_proper_coloring(const Graph& g, std::size_t k, Rng& rng) {
  Coloring x(g.node_count(), 0);
  std::vector<char> set(g.node_count(), 0);
  std::vector<Node> order(g.node_count());
  for (Node v = 0; v < order.size(); ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  for (Node v : order) {
    std::vector<std::uint32_t> free;
    for (std::uint32_t c = 0; c < k; ++c) {
      bool ok = true;
      for (Node w : g.neighbors(v)) ok = ok && !(set[w] && x[w] == c);
      if (ok) free.push_back(c);
    }
    x[v] = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
    set[v] = 1;
  }
  return x;
}

inline PottsConfig random_config(std::size_t n, std::size_t k, Rng& rng) {
  PottsConfig x(n);
  for (auto& c : x) c = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, k - 1)(rng));
  return x;
}

/// Form 1 bound holding x, each dimension widened with probability 1/2.
inline Form1Bound random_form1_around(const std::vector<std::uint32_t>& x, std::size_t colors, Rng& rng) {
  Form1Bound y;
  std::bernoulli_distribution coin(0.5);
  for (auto c : x) {
    ColorSet s = ColorSet::single(c);
    if (coin(rng))
      for (std::uint32_t o = 0; o < colors; ++o)
        if (coin(rng)) s.insert(o);
    y.sets.push_back(s);
  }
  return y;
}

/// B ⊆ A ⊆ B ∪ D with extra uncertain nodes outside A.
inline Form2Bound random_form2_around(const IndependentSet& a, Rng& rng) {
  Form2Bound y;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t v = 0; v < a.size(); ++v) {
    using S = Form2Bound::Status;
    if (a[v])
      y.status.push_back(coin(rng) ? S::Known : S::Uncertain);
    else
      y.status.push_back(coin(rng) ? S::Uncertain : S::Out);
  }
  return y;
}

/// Positions known to x's item with probability 1/2.
inline PermutationBound random_perm_bound_around(const Permutation& x, Rng& rng) {
  const std::size_t n = x.size();
  PermutationBound y{std::vector<std::int64_t>(n, PermutationBound::kUnknown),
                     std::vector<std::int64_t>(n, PermutationBound::kUnknown)};
  std::bernoulli_distribution coin(0.5);
  for (std::size_t p = 0; p < n; ++p)
    if (coin(rng)) {
      y.item_at[p] = x[p];
      y.where[x[p]] = static_cast<std::int64_t>(p);
    }
  return y;
}

/// A sink-free orientation reached by random forward steps from a fixed one.
inline Orientation random_sink_free(const SinkFreeModel& m, Rng& rng, std::size_t steps = 200) {
  auto x = m.some_sink_free();
  const std::uint64_t seed = rng();
  for (std::size_t s = 0; s < steps; ++s) m.forward_step(x, StepDraws{seed, 7, 0, s});
  return x;
}

/// Steps (x, y) with shared draws and returns the number of containment violations.
template <class M>
std::size_t containment_violations(const M& model, typename M::State x, typename M::Bound y,
                                   std::uint64_t seed, std::size_t steps) {
  std::size_t violations = model.contains(y, x) ? 0 : 1;
  for (std::size_t s = 0; s < steps; ++s) {
    const StepDraws d{seed, 3, 0, s};
    model.forward_step(x, d);
    model.bounding_step(y, d);
    if (!model.contains(y, x)) ++violations;
  }
  return violations;
}

/// Union construction check: from every state the bound contains, one step with
/// draws d lands inside the stepped bound. Returns the number of escapes.
template <class M>
std::size_t union_escapes(const M& model, const std::vector<typename M::State>& space,
                          const typename M::Bound& y, const StepDraws& d) {
  auto next = y;
  model.bounding_step(next, d);
  std::size_t escapes = 0;
  for (auto x : space) {
    if (!model.contains(y, x)) continue;
    model.forward_step(x, d);
    if (!model.contains(next, x)) ++escapes;
  }
  return escapes;
}

}  // namespace boundchain::testing
