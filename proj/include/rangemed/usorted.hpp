#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rangemed/element.hpp"

namespace rangemed {

/// A relaxed-sorted array.
///
/// `markers` lists positions of `data` whose element is in its final sorted
/// place: everything before it is smaller, everything after it is larger.
/// The runs between consecutive markers (segments) are in arbitrary order and
/// each holds at most ceil(|data| / u) elements. With u >= |data| the array is
/// fully sorted and every position is a marker.
struct USortedArray {
  std::vector<Element> data;
  std::vector<std::size_t> markers;
  std::size_t u = 1;

  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }

  /// Longest segment the invariant allows: ceil(size / u).
  [[nodiscard]] std::size_t segment_limit() const noexcept {
    return u == 0 ? data.size() : (data.size() + u - 1) / u;
  }

  [[nodiscard]] bool fully_marked() const noexcept { return markers.size() == data.size(); }
};

/// Marker budget allowed by the invariant checker.
inline constexpr std::size_t kMarkerBudgetFactor = 20;

/// Builds a u-sorted copy of `data` by recursive median partitioning.
/// Uses O(|data| log u) comparisons. Throws ContractViolation when u < 1 or
/// `data` is empty.
USortedArray u_sort(std::span<const Element> data, std::size_t u, ComparisonLedger& ledger);

/// Merges two u-sorted arrays sharing the same u into one u-sorted array with
/// at most 2u + 1 markers, using O(|x| + |y|) comparisons.
USortedArray merge_usorted(const USortedArray& x, const USortedArray& y,
                           ComparisonLedger& ledger);

/// Checks every USortedArray invariant without touching any ledger.
[[nodiscard]] bool validate_usorted(const USortedArray& x);

struct MarkerRank {
  Element element;
  std::size_t rank = 0;  // 1-based rank within the array
};

/// Exact ranks of the marker elements; free, since markers sit at their
/// sorted position.
std::vector<MarkerRank> marker_ranks(const USortedArray& x);

}  // namespace rangemed
