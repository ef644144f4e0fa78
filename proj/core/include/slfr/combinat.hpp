#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slfr/error.hpp"

namespace slfr {

/// A set of 1-based user indices in [1, 64], always iterated in increasing
/// order. Ordering between sets is lexicographic on the increasing member
/// sequences, so {1,2} < {1,3} < {2,3} and {1} < {1,2} < {2}.
class IndexSet {
 public:
  static constexpr int kMaxUser = 64;

  constexpr IndexSet() noexcept = default;
  /// Members must be strictly increasing and within [1, 64].
  IndexSet(std::initializer_list<int> members);
  explicit IndexSet(const std::vector<int>& members);

  /// {lo, lo+1, ..., hi}; empty when hi < lo.
  static IndexSet range(int lo, int hi);
  static constexpr IndexSet from_mask(std::uint64_t mask) noexcept { return IndexSet(mask, 0); }
  static IndexSet from_json(const nlohmann::json& j);

  std::uint64_t mask() const noexcept { return mask_; }
  int size() const noexcept { return std::popcount(mask_); }
  bool empty() const noexcept { return mask_ == 0; }
  bool contains(int k) const noexcept {
    return k >= 1 && k <= kMaxUser && (mask_ >> (k - 1)) & 1u;
  }
  bool is_subset_of(const IndexSet& other) const noexcept { return (mask_ & ~other.mask_) == 0; }

  /// Smallest / largest member; precondition: non-empty.
  int front() const noexcept { return std::countr_zero(mask_) + 1; }
  int back() const noexcept { return 64 - std::countl_zero(mask_); }

  IndexSet with(int k) const;
  IndexSet without(int k) const;

  std::vector<int> members() const;
  /// "{1,3}" (or "{}" when empty).
  std::string to_string() const;
  /// "1,3" (empty string when empty); used inside serialized map keys.
  std::string key() const;
  static IndexSet parse_key(std::string_view text);
  nlohmann::json to_json() const;

  class iterator {
   public:
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() noexcept = default;
    constexpr explicit iterator(std::uint64_t rest) noexcept : rest_(rest) {}
    int operator*() const noexcept { return std::countr_zero(rest_) + 1; }
    iterator& operator++() noexcept {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) noexcept {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator&, const iterator&) = default;

   private:
    std::uint64_t rest_ = 0;
  };
  iterator begin() const noexcept { return iterator(mask_); }
  iterator end() const noexcept { return iterator(0); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) noexcept;

  friend IndexSet operator|(IndexSet a, IndexSet b) noexcept { return IndexSet(a.mask_ | b.mask_, 0); }
  friend IndexSet operator&(IndexSet a, IndexSet b) noexcept { return IndexSet(a.mask_ & b.mask_, 0); }
  /// Set difference a \ b.
  friend IndexSet operator-(IndexSet a, IndexSet b) noexcept { return IndexSet(a.mask_ & ~b.mask_, 0); }

 private:
  constexpr IndexSet(std::uint64_t mask, int) noexcept : mask_(mask) {}
  std::uint64_t mask_ = 0;
};

std::ostream& operator<<(std::ostream& os, const IndexSet& s);

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) { return a | b; }
inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) { return a & b; }
inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) { return a - b; }

/// All subsets of `ground` with exactly t members, in lexicographic order.
/// Throws InvalidSize unless 0 <= t <= |ground|.
std::vector<IndexSet> enumerate_subsets(const IndexSet& ground, int t);

/// 1-based position of k among the members of s; 0 when k is not in s.
int ind(const IndexSet& s, int k) noexcept;

/// |s ∩ leaders|.
inline int hierarchy(const IndexSet& s, const IndexSet& leaders) noexcept { return (s & leaders).size(); }

/// C(n, k); 0 when k < 0 or k > n. Throws InvalidArguments on overflow.
std::uint64_t binomial(int n, int k);

}  // namespace slfr
