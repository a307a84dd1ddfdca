#pragma once

// Coupling from the past over any CoupledModel, plus forward coupling-time
// experiments.
//
// Level L covers t0·2^L steps with block id L, and lies further in the past
// than level L-1. The deepest level that detects a constant block map fixes
// the output; every shallower block is then replayed forward from it with the
// same keyed draws.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boundchain/model.hpp"

namespace boundchain {

struct LevelReport {
  std::uint32_t level = 0;
  std::uint64_t length = 0;
  std::size_t final_metric = 0;
  std::string detail;
};

class MaxLevelsExceeded : public std::runtime_error {
 public:
  explicit MaxLevelsExceeded(std::vector<LevelReport> levels)
      : std::runtime_error(format(levels)), levels_(std::move(levels)) {}
  const std::vector<LevelReport>& levels() const { return levels_; }

 private:
  static std::string format(const std::vector<LevelReport>& levels) {
    std::ostringstream os;
    os << "no constant block map within " << levels.size() << " levels";
    for (const auto& l : levels) {
      os << "\n  level " << l.level << " (" << l.length << " steps): W=" << l.final_metric;
      if (!l.detail.empty()) os << ", " << l.detail;
    }
    return os.str();
  }
  std::vector<LevelReport> levels_;
};

template <class State>
struct SampleResult {
  State state;
  std::uint32_t levels_used = 0;  // blocks examined, deepest included
  std::uint64_t total_steps = 0;  // sum of their lengths
  std::uint64_t root_seed = 0;
};

struct CoupleTimeResult {
  std::optional<std::uint64_t> tau;  // empty when t_cap was reached first
  std::uint64_t restarts = 0;
  std::vector<std::pair<std::uint64_t, std::size_t>> trajectory;  // (t, W_t), t >= 1
};

struct CftpOptions {
  std::uint64_t t0 = 0;  // 0 selects the model default
  std::uint32_t max_levels = 40;
};

inline constexpr std::uint32_t kForwardBlock = 0;

inline StepDraws shared_draws(std::uint64_t seed, std::uint32_t block, std::uint64_t step) {
  return StepDraws{seed, block, 0, step};
}

/// Runs the bounding chain from the full bound across one block. Once the
/// bound coalesces the rest of the block follows the single bounded state.
template <CoupledModel M>
BlockOutcome<typename M::State> detect_block(const M& model, std::uint64_t seed,
                                             std::uint32_t block, std::uint64_t length) {
  if constexpr (BlockScheduledModel<M>) {
    return model.detect_block(seed, block, length);
  } else {
    auto y = model.init_bound();
    std::uint64_t s = 0;
    // A bound that starts coalesced (e.g. one position) needs no bounding steps.
    for (; s < length && model.metric(y) != 0; ++s)
      model.bounding_step(y, shared_draws(seed, block, s));
    BlockOutcome<typename M::State> out;
    out.final_metric = model.metric(y);
    if (out.final_metric != 0) return out;
    auto x = model.extract(y);
    for (; s < length; ++s) model.forward_step(x, shared_draws(seed, block, s));
    out.value = std::move(x);
    return out;
  }
}

template <CoupledModel M>
void replay_block(const M& model, typename M::State& x, std::uint64_t seed, std::uint32_t block,
                  std::uint64_t length) {
  if constexpr (BlockScheduledModel<M>) {
    model.replay_block(x, seed, block, length);
  } else {
    for (std::uint64_t s = 0; s < length; ++s) model.forward_step(x, shared_draws(seed, block, s));
  }
}

template <CoupledModel M>
SampleResult<typename M::State> cftp_sample(const M& model, std::uint64_t root_seed,
                                            CftpOptions options = {}) {
  const std::uint64_t t0 = options.t0 != 0 ? options.t0 : model.default_t0();
  if (t0 == 0) throw std::invalid_argument("cftp: t0 must be at least 1");
  std::vector<LevelReport> reports;
  std::uint64_t total = 0;
  for (std::uint32_t level = 0; level < options.max_levels; ++level) {
    if (t0 > (~std::uint64_t{0} >> level)) break;
    const std::uint64_t length = t0 << level;
    total += length;
    auto outcome = detect_block(model, root_seed, level, length);
    if (outcome.value) {
      auto x = std::move(*outcome.value);
      for (std::uint32_t l = level; l-- > 0;) replay_block(model, x, root_seed, l, t0 << l);
      return SampleResult<typename M::State>{std::move(x), level + 1, total, root_seed};
    }
    reports.push_back(LevelReport{level, length, outcome.final_metric, std::move(outcome.detail)});
  }
  throw MaxLevelsExceeded(std::move(reports));
}

/// Steps the bounding chain forward from the full bound and reports the first
/// t >= 1 with W_t = 0.
template <CoupledModel M>
CoupleTimeResult forward_couple_time(const M& model, std::uint64_t root_seed, std::uint64_t t_cap,
                                     bool record_trajectory = false) {
  if (t_cap == 0) throw std::invalid_argument("forward_couple_time: t_cap must be at least 1");
  CoupleTimeResult out;
  if constexpr (BlockScheduledModel<M>) {
    auto run = model.forward_phases(root_seed, kForwardBlock, t_cap, record_trajectory);
    out.tau = run.tau;
    out.restarts = run.restarts;
    out.trajectory = std::move(run.trajectory);
  } else {
    auto y = model.init_bound();
    for (std::uint64_t t = 1; t <= t_cap; ++t) {
      model.bounding_step(y, shared_draws(root_seed, kForwardBlock, t - 1));
      const std::size_t w = model.metric(y);
      if (record_trajectory) out.trajectory.emplace_back(t, w);
      if (w == 0) {
        out.tau = t;
        break;
      }
    }
  }
  return out;
}

/// Curve from already computed coupling times; runs without a tau count as
/// never coalesced.
inline std::vector<std::pair<std::uint64_t, double>> curve_from_taus(
    const std::vector<std::optional<std::uint64_t>>& taus, std::uint64_t t_max) {
  std::vector<std::size_t> coalesced_at(t_max + 1, 0);
  for (const auto& tau : taus)
    if (tau && *tau <= t_max) ++coalesced_at[*tau];
  std::vector<std::pair<std::uint64_t, double>> curve;
  std::size_t done = 0;
  const double reps = static_cast<double>(taus.size());
  for (std::uint64_t t = 0; t <= t_max; ++t) {
    done += coalesced_at[t];
    curve.emplace_back(t, (reps - static_cast<double>(done)) / reps);
  }
  return curve;
}

/// Fraction of `reps` forward runs (seeds root_seed, root_seed+1, ...) not yet
/// coalesced at t = 0..t_max. An upper bound on total variation distance.
template <CoupledModel M>
std::vector<std::pair<std::uint64_t, double>> mixing_bound_curve(const M& model, std::size_t reps,
                                                                 std::uint64_t t_max,
                                                                 std::uint64_t root_seed) {
  if (reps == 0) throw std::invalid_argument("mixing_bound_curve: reps must be at least 1");
  std::vector<std::optional<std::uint64_t>> taus;
  taus.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r)
    taus.push_back(forward_couple_time(model, root_seed + r, std::max<std::uint64_t>(t_max, 1)).tau);
  return curve_from_taus(taus, t_max);
}

}  // namespace boundchain
