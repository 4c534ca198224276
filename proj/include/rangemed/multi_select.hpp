#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rangemed/element.hpp"
#include "rangemed/usorted.hpp"

namespace rangemed {

/// A sorted array with an active window [lo, hi) (half-open, 0-based).
struct SortedView {
  std::span<const Element> source;
  std::size_t lo = 0;
  std::size_t hi = 0;

  static SortedView whole(std::span<const Element> s) { return {s, 0, s.size()}; }
  [[nodiscard]] std::size_t size() const noexcept { return hi - lo; }
};

/// One pruning round.
struct LevelRecord {
  std::size_t active = 0;     // n_curr at the start of the round
  std::size_t arrays = 0;     // arrays with a non-empty active range
  std::size_t discarded = 0;  // elements removed by the round
};

struct SelectStats {
  std::vector<LevelRecord> levels;
  std::size_t final_select_size = 0;
};

#ifdef NDEBUG
inline constexpr bool kDebugChecks = false;
#else
inline constexpr bool kDebugChecks = true;
#endif

struct SelectOptions {
  /// Verify (uncounted) that every view is sorted.
  bool check_sorted = kDebugChecks;
  /// Verify (uncounted, O(n) per probe) that each probed element's true rank
  /// lies inside its computed rank interval.
  bool audit_rank_intervals = kDebugChecks;
  SelectStats* stats = nullptr;
};

/// Element of 1-based `rank` in the union of sorted `views`.
///
/// Each round samples every active range at spacing about n_curr / (32 l),
/// merges the samples, bounds each sample's global rank, and drops blocks
/// that cannot hold the answer. Rounds stop once n_curr <= 32 l, and the rest
/// is finished with `select`.
Element select_from_sorted(std::span<const SortedView> views, std::size_t rank,
                           ComparisonLedger& ledger, const SelectOptions& options = {});

/// Same answer as `select_from_sorted` without merging the samples.
///
/// Pivots are picked by weighted selection over the samples, aimed just
/// below and just above the target rank. If a round still falls short of
/// ceil(n_curr / 8) discarded elements, it also prunes with the pooled sample
/// median and quartiles, and then with the merging round.
Element select_from_sorted_fast(std::span<const SortedView> views, std::size_t rank,
                                ComparisonLedger& ledger, const SelectOptions& options = {});

/// Half-open position range inside one input array.
struct SubRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
  [[nodiscard]] std::size_t size() const noexcept { return hi - lo; }
};

struct TrimResult {
  std::vector<SubRange> sub_ranges;  // one per input array, possibly empty
  std::size_t adjusted_rank = 0;     // rank of the answer inside the union of sub_ranges
};

/// Narrows `rank` over u-sorted arrays using marker comparisons only.
///
/// Markers have exact in-array ranks, while non-marker elements are only
/// known up to their segment. Pruning continues until a pass that uses every
/// marker in the active ranges removes nothing. The element of
/// `adjusted_rank` in the union of the returned sub-ranges is the element of
/// `rank` in the union of the arrays.
TrimResult trim_usorted(std::span<const USortedArray* const> arrays, std::size_t rank,
                        ComparisonLedger& ledger, const SelectOptions& options = {});

}  // namespace rangemed
