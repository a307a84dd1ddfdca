#pragma once

// Random transpositions on permutations, coupled by "move item i to position j".

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boundchain/bounds.hpp"
#include "boundchain/keyed_random.hpp"

namespace boundchain {

/// x[position] = item.
using Permutation = std::vector<std::uint32_t>;

/// Per position: a known item, or unknown (the whole item set). Unknown
/// positions are never shrunk. `where` is the reverse index for known items.
struct PermutationBound {
  static constexpr std::int64_t kUnknown = -1;

  std::vector<std::int64_t> item_at;  // per position
  std::vector<std::int64_t> where;    // per item; kUnknown if not known anywhere

  bool known(std::size_t pos) const { return item_at[pos] != kUnknown; }
  friend bool operator==(const PermutationBound&, const PermutationBound&) = default;
};

class PermutationModel {
 public:
  using State = Permutation;
  using Bound = PermutationBound;

  explicit PermutationModel(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("permutation: n must be at least 1");
  }

  std::size_t size() const { return n_; }
  std::string name() const { return "perm"; }

  // Draw 0 picks the item, draw 1 the position.
  void forward_step(State& x, const StepDraws& d) const {
    const auto item = static_cast<std::uint32_t>(d.index(0, n_));
    const auto pos = static_cast<std::size_t>(d.index(1, n_));
    std::size_t from = 0;
    while (x[from] != item) ++from;
    x[from] = x[pos];
    x[pos] = item;
  }

  void bounding_step(Bound& y, const StepDraws& d) const {
    const auto item = static_cast<std::int64_t>(d.index(0, n_));
    const auto pos = static_cast<std::size_t>(d.index(1, n_));
    const std::int64_t displaced = y.item_at[pos];
    const std::int64_t from = y.where[item];
    if (from != Bound::kUnknown) {
      // The item's old position receives whatever position j held.
      y.item_at[from] = displaced;
      if (displaced != Bound::kUnknown) y.where[displaced] = from;
    } else if (displaced != Bound::kUnknown) {
      // Displaced item lands in some unknown position.
      y.where[displaced] = Bound::kUnknown;
    }
    y.item_at[pos] = item;
    y.where[item] = static_cast<std::int64_t>(pos);
  }

  Bound init_bound() const {
    Bound y{std::vector<std::int64_t>(n_, Bound::kUnknown), std::vector<std::int64_t>(n_, Bound::kUnknown)};
    if (n_ == 1) y.item_at[0] = y.where[0] = 0;
    return y;
  }

  /// Unknown positions.
  std::size_t metric(const Bound& y) const {
    std::size_t w = 0;
    for (auto it : y.item_at) w += it == Bound::kUnknown ? 1 : 0;
    return w;
  }

  State extract(const Bound& y) const {
    State x(n_);
    for (std::size_t p = 0; p < n_; ++p) {
      if (!y.known(p)) throw NotCoalescedError();
      x[p] = static_cast<std::uint32_t>(y.item_at[p]);
    }
    return x;
  }

  bool contains(const Bound& y, const State& x) const {
    for (std::size_t p = 0; p < n_; ++p)
      if (y.known(p) && y.item_at[p] != static_cast<std::int64_t>(x[p])) return false;
    return true;
  }

  /// ⌈2n²⌉.
  std::uint64_t default_t0() const { return 2 * static_cast<std::uint64_t>(n_) * n_; }

  nlohmann::json params_json() const { return {{"n", n_}}; }
  nlohmann::json state_json(const State& x) const { return x; }

  State identity() const {
    State x(n_);
    for (std::uint32_t i = 0; i < n_; ++i) x[i] = i;
    return x;
  }

 private:
  std::size_t n_;
};

}  // namespace boundchain
