#pragma once

// Brute-force ground truth for desk-scale instances: enumeration of state
// spaces, exact target distributions, one-step kernels and goodness-of-fit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "boundchain/models/coloring.hpp"
#include "boundchain/models/hardcore.hpp"
#include "boundchain/models/permutation.hpp"
#include "boundchain/models/potts.hpp"
#include "boundchain/models/sinkfree.hpp"

namespace boundchain {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An empirical sample landed on a state of probability zero.
class ImpossibleStateError : public OracleError {
 public:
  explicit ImpossibleStateError(const std::string& state)
      : OracleError("sample contains impossible state " + state), state_(state) {}
  const std::string& state() const { return state_; }

 private:
  std::string state_;
};

inline constexpr double kMaxEnumeration = 1e7;

/// Canonical serialization: the JSON form the CLI writes.
template <class M>
std::string canonical(const M& model, const typename M::State& x) {
  return model.state_json(x).dump();
}

using Counts = std::map<std::string, std::size_t>;

struct ExactDistribution {
  std::vector<std::string> states;
  std::vector<double> probabilities;
  double partition = 0.0;  // unnormalized weight sum

  double probability(const std::string& s) const {
    const auto it = index_.find(s);
    return it == index_.end() ? 0.0 : probabilities[it->second];
  }
  bool supports(const std::string& s) const { return index_.count(s) != 0; }
  std::size_t size() const { return states.size(); }

  static ExactDistribution from_weights(std::vector<std::string> states, const std::vector<double>& weights) {
    ExactDistribution d;
    d.partition = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(d.partition > 0.0)) throw OracleError("exact distribution has no mass");
    std::map<std::string, double> merged;
    for (std::size_t i = 0; i < states.size(); ++i) merged[states[i]] += weights[i];
    // Keep first-seen order for display.
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (d.index_.count(states[i])) continue;
      d.index_[states[i]] = d.states.size();
      d.states.push_back(states[i]);
      d.probabilities.push_back(merged[states[i]] / d.partition);
    }
    return d;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline void guard_size(double size) {
  if (size > kMaxEnumeration)
    throw OracleError("state space too large to enumerate (" + std::to_string(size) + " > 1e7)");
}

/// All vectors in {0..radix-1}^len in lexicographic order.
template <class Fn>
void for_each_assignment(std::size_t len, std::size_t radix, Fn&& fn) {
  guard_size(std::pow(static_cast<double>(radix), static_cast<double>(len)));
  std::vector<std::uint32_t> x(len, 0);
  while (true) {
    fn(x);
    std::size_t i = len;
    while (i > 0 && x[i - 1] + 1 == radix) x[--i] = 0;
    if (i == 0) return;
    ++x[i - 1];
  }
}

}  // namespace detail

inline std::vector<Permutation> enumerate(const PermutationModel& m) {
  detail::guard_size(std::tgamma(static_cast<double>(m.size()) + 1.0));
  std::vector<Permutation> out;
  auto x = m.identity();
  do out.push_back(x);
  while (std::next_permutation(x.begin(), x.end()));
  return out;
}

/// Independent sets in bitmask order ({0} before {1} before {0,1} ...).
inline std::vector<IndependentSet> enumerate(const HardcoreModel& m) {
  const std::size_t n = m.graph().node_count();
  detail::guard_size(std::ldexp(1.0, static_cast<int>(n)));
  std::vector<IndependentSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    IndependentSet a(n);
    for (std::size_t v = 0; v < n; ++v) a[v] = (mask >> v) & 1U;
    if (m.is_independent(a)) out.push_back(std::move(a));
  }
  return out;
}

inline std::vector<Coloring> enumerate(const ColoringModel& m) {
  std::vector<Coloring> out;
  detail::for_each_assignment(m.graph().node_count(), m.colors(), [&](const auto& x) {
    if (m.is_proper(x)) out.push_back(x);
  });
  return out;
}

inline std::vector<PottsConfig> enumerate(const PottsModel& m) {
  std::vector<PottsConfig> out;
  detail::for_each_assignment(m.graph().node_count(), m.params().k,
                              [&](const auto& x) { out.push_back(x); });
  return out;
}

inline std::vector<Orientation> enumerate(const SinkFreeModel& m) {
  std::vector<Orientation> out;
  detail::for_each_assignment(m.edge_count(), 2, [&](const auto& x) {
    Orientation o(x.begin(), x.end());
    if (m.is_sink_free(o)) out.push_back(std::move(o));
  });
  return out;
}

/// Unnormalized target weight: λ^{|A|} for the hard-core gas,
/// γ^{-#monochromatic edges} for Potts, 1 otherwise.
inline double target_weight(const HardcoreModel& m, const IndependentSet& a) {
  const auto occupied = static_cast<double>(std::count(a.begin(), a.end(), 1));
  return std::pow(m.params().lambda, occupied);
}
inline double target_weight(const PottsModel& m, const PottsConfig& x) {
  return std::pow(m.gamma(), -static_cast<double>(m.monochromatic_edges(x)));
}
template <class M>
double target_weight(const M&, const typename M::State&) {
  return 1.0;
}

template <class M>
ExactDistribution exact_distribution(const M& model) {
  std::vector<std::string> states;
  std::vector<double> weights;
  for (const auto& x : enumerate(model)) {
    states.push_back(canonical(model, x));
    weights.push_back(target_weight(model, x));
  }
  return ExactDistribution::from_weights(std::move(states), weights);
}

inline std::size_t total(const Counts& counts) {
  std::size_t n = 0;
  for (const auto& [_, c] : counts) n += c;
  return n;
}

inline void check_support(const Counts& counts, const ExactDistribution& exact) {
  for (const auto& [s, c] : counts)
    if (c > 0 && !exact.supports(s)) throw ImpossibleStateError(s);
}

/// (1/2) Σ |empirical − exact|.
inline double tv_distance(const Counts& counts, const ExactDistribution& exact) {
  check_support(counts, exact);
  const double n = static_cast<double>(total(counts));
  if (n == 0) throw OracleError("empty sample");
  double sum = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const auto it = counts.find(exact.states[i]);
    const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    sum += std::abs(freq - exact.probabilities[i]);
  }
  return 0.5 * sum;
}

// Regularized lower incomplete gamma P(a, x): series below a+1, continued
// fraction (modified Lentz) above.
inline double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(log_prefactor);
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

inline double chi_square_cdf(double x, std::size_t dof) {
  return regularized_gamma_p(0.5 * static_cast<double>(dof), 0.5 * x);
}

/// Upper-tail critical value: P(χ²_dof > q) = significance.
inline double chi_square_quantile(std::size_t dof, double significance) {
  if (dof == 0) return 0.0;
  const double target = 1.0 - significance;
  double lo = 0.0, hi = static_cast<double>(dof) + 10.0;
  while (chi_square_cdf(hi, dof) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(mid, dof) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct GoodnessReport {
  double tv_distance = 0.0;
  double chi_square_statistic = 0.0;
  std::size_t dof = 0;
  double critical_value = 0.0;
  bool pass = false;  // chi-square below the critical value
};

/// Pearson chi-square against `exact`. Cells with expected count below 5 are
/// pooled, smallest first.
inline GoodnessReport chi_square(const Counts& counts, const ExactDistribution& exact,
                                 double significance = 0.001) {
  const std::size_t n = total(counts);
  if (n == 0) throw OracleError("empty sample");
  GoodnessReport report;
  report.tv_distance = tv_distance(counts, exact);

  struct Cell {
    double expected;
    double observed;
  };
  std::vector<Cell> raw;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const auto it = counts.find(exact.states[i]);
    raw.push_back({exact.probabilities[i] * static_cast<double>(n),
                   it == counts.end() ? 0.0 : static_cast<double>(it->second)});
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
  std::vector<Cell> cells;
  Cell pool{0.0, 0.0};
  for (const auto& c : raw) {
    pool.expected += c.expected;
    pool.observed += c.observed;
    if (pool.expected >= 5.0) {
      cells.push_back(pool);
      pool = {0.0, 0.0};
    }
  }
  if (pool.expected > 0.0) {
    if (cells.empty())
      cells.push_back(pool);
    else {
      cells.back().expected += pool.expected;
      cells.back().observed += pool.observed;
    }
  }
  for (const auto& c : cells)
    report.chi_square_statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  report.dof = cells.size() - 1;
  report.critical_value = chi_square_quantile(report.dof, significance);
  report.pass = report.chi_square_statistic < report.critical_value || report.dof == 0;
  return report;
}

/// Kolmogorov–Smirnov distance between the sample and Uniform[0,1).
inline double ks_uniform_statistic(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - xs[i]);
    d = std::max(d, xs[i] - static_cast<double>(i) / n);
  }
  return d;
}

/// Asymptotic one-sample KS critical value sqrt(-ln(α/2)/2)/sqrt(n).
inline double ks_critical_value(std::size_t n, double significance = 0.001) {
  return std::sqrt(-0.5 * std::log(0.5 * significance)) / std::sqrt(static_cast<double>(n));
}

/// One-step transition row K(x, ·). Holding: 1/n; each transposition: 2/n².
inline ExactDistribution analytic_kernel(const PermutationModel& m, const Permutation& x) {
  const std::size_t n = m.size();
  const double nn = static_cast<double>(n);
  std::vector<std::string> states{canonical(m, x)};
  std::vector<double> weights{1.0 / nn};
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      auto y = x;
      std::swap(y[p], y[q]);
      states.push_back(canonical(m, y));
      weights.push_back(2.0 / (nn * nn));
    }
  return ExactDistribution::from_weights(std::move(states), weights);
}

/// One-step transition row K(x, ·): recolor v to each allowed color with
/// probability 1/(n b_x(v)).
inline ExactDistribution analytic_kernel(const ColoringModel& m, const Coloring& x) {
  const std::size_t n = m.graph().node_count();
  std::vector<std::string> states;
  std::vector<double> weights;
  for (Node v = 0; v < n; ++v) {
    ColorSet used;
    for (Node w : m.graph().neighbors(v)) used.insert(x[w]);
    const std::size_t allowed = m.colors() - used.size();
    for (std::uint32_t c = 0; c < m.colors(); ++c) {
      if (used.contains(c)) continue;
      auto y = x;
      y[v] = c;
      states.push_back(canonical(m, y));
      weights.push_back(1.0 / (static_cast<double>(n) * static_cast<double>(allowed)));
    }
  }
  return ExactDistribution::from_weights(std::move(states), weights);
}

}  // namespace boundchain
