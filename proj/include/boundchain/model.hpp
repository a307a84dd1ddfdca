#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "boundchain/keyed_random.hpp"

namespace boundchain {

/// A chain together with its complete coupling and bounding chain. The
/// forward step and the bounding step read the same StepDraws; that shared
/// stream is the coupling.
template <class M>
concept CoupledModel = requires(const M& m, typename M::State& x, typename M::Bound& y,
                                const typename M::Bound& cy, const typename M::State& cx,
                                const StepDraws& d) {
  m.forward_step(x, d);
  m.bounding_step(y, d);
  { m.init_bound() } -> std::same_as<typename M::Bound>;
  { m.metric(cy) } -> std::convertible_to<std::size_t>;
  { m.extract(cy) } -> std::same_as<typename M::State>;
  { m.contains(cy, cx) } -> std::convertible_to<bool>;
  { m.default_t0() } -> std::convertible_to<std::uint64_t>;
  { m.name() } -> std::convertible_to<std::string>;
  { m.params_json() } -> std::same_as<nlohmann::json>;
  { m.state_json(cx) } -> std::same_as<nlohmann::json>;
};

/// Outcome of running block detection over one CFTP block.
template <class State>
struct BlockOutcome {
  std::optional<State> value;  // set iff the block map is constant
  std::size_t final_metric = 0;
  std::string detail;  // model-specific diagnostics for non-constant blocks
};

/// Models whose coalescence detection is not a plain bounding-chain run
/// (e.g. phase schedules) supply their own block routines.
template <class M>
concept BlockScheduledModel =
    CoupledModel<M> && requires(const M& m, typename M::State& x, std::uint64_t seed,
                                std::uint32_t block, std::uint64_t len) {
      { m.detect_block(seed, block, len) } -> std::same_as<BlockOutcome<typename M::State>>;
      m.replay_block(x, seed, block, len);
    };

}  // namespace boundchain
