#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace boundchain {

class NotCoalescedError : public std::logic_error {
 public:
  NotCoalescedError() : std::logic_error("bound is not coalesced") {}
};

/// Subset of a color set {0, ..., 63}.
class ColorSet {
 public:
  static constexpr std::size_t kCapacity = 64;

  constexpr ColorSet() = default;
  constexpr explicit ColorSet(std::uint64_t mask) : mask_(mask) {}

  static constexpr ColorSet single(std::uint32_t c) { return ColorSet(std::uint64_t{1} << c); }
  static constexpr ColorSet full(std::size_t k) {
    return ColorSet(k >= kCapacity ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1);
  }

  constexpr bool contains(std::uint32_t c) const { return (mask_ >> c) & 1U; }
  constexpr void insert(std::uint32_t c) { mask_ |= std::uint64_t{1} << c; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool is_singleton() const { return std::has_single_bit(mask_); }
  /// Smallest member; the only member of a singleton.
  constexpr std::uint32_t first() const { return static_cast<std::uint32_t>(std::countr_zero(mask_)); }
  constexpr std::uint64_t mask() const { return mask_; }

  constexpr ColorSet& operator|=(ColorSet o) {
    mask_ |= o.mask_;
    return *this;
  }
  friend constexpr bool operator==(ColorSet, ColorSet) = default;

 private:
  std::uint64_t mask_ = 0;
};

/// Form 1 bounding state: one color set per dimension.
struct Form1Bound {
  std::vector<ColorSet> sets;

  static Form1Bound full(std::size_t dims, std::size_t colors) {
    return Form1Bound{std::vector<ColorSet>(dims, ColorSet::full(colors))};
  }

  bool bounds(const std::vector<std::uint32_t>& x) const {
    if (x.size() != sets.size()) return false;
    for (std::size_t v = 0; v < x.size(); ++v)
      if (!sets[v].contains(x[v])) return false;
    return true;
  }
  friend bool operator==(const Form1Bound&, const Form1Bound&) = default;
};

/// Number of non-singleton dimensions.
inline std::size_t metric(const Form1Bound& y) {
  std::size_t w = 0;
  for (const auto& s : y.sets) w += s.is_singleton() ? 0 : 1;
  return w;
}

inline std::vector<std::uint32_t> extract_unique(const Form1Bound& y) {
  std::vector<std::uint32_t> x(y.sets.size());
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (!y.sets[v].is_singleton()) throw NotCoalescedError();
    x[v] = y.sets[v].first();
  }
  return x;
}

/// Form 2 bounding state specialized to one "occupied" color: B holds the
/// dimensions known to be occupied, D those that might be. Each dimension has
/// exactly one status, so B and D are disjoint by construction.
struct Form2Bound {
  enum class Status : std::uint8_t { Out, Known, Uncertain };

  std::vector<Status> status;

  static Form2Bound all_uncertain(std::size_t dims) {
    return Form2Bound{std::vector<Status>(dims, Status::Uncertain)};
  }

  bool in_known(std::size_t v) const { return status[v] == Status::Known; }
  bool in_uncertain(std::size_t v) const { return status[v] == Status::Uncertain; }

  /// B ⊆ A ⊆ B ∪ D for the occupancy vector `a`.
  bool bounds(const std::vector<std::uint8_t>& a) const {
    if (a.size() != status.size()) return false;
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (status[v] == Status::Known && !a[v]) return false;
      if (status[v] == Status::Out && a[v]) return false;
    }
    return true;
  }
  friend bool operator==(const Form2Bound&, const Form2Bound&) = default;
};

/// |D|.
inline std::size_t metric(const Form2Bound& y) {
  std::size_t w = 0;
  for (auto s : y.status) w += s == Form2Bound::Status::Uncertain ? 1 : 0;
  return w;
}

/// Occupancy vector equal to B.
inline std::vector<std::uint8_t> extract_unique(const Form2Bound& y) {
  std::vector<std::uint8_t> a(y.status.size(), 0);
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (y.status[v] == Form2Bound::Status::Uncertain) throw NotCoalescedError();
    a[v] = y.status[v] == Form2Bound::Status::Known ? 1 : 0;
  }
  return a;
}

}  // namespace boundchain
