#include "rangemed/usorted.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "rangemed/select.hpp"
#include "rangemed/sorting.hpp"

namespace rangemed {
namespace {

// Splits `items` at medians until every piece holds at most `limit`
// elements; appends the split positions (offset-adjusted) in increasing order.
void refine(std::span<Element> items, std::size_t offset, std::size_t limit,
            std::vector<std::size_t>& markers, ComparisonLedger& ledger) {
  if (items.size() <= limit) return;
  const std::size_t r0 = median_rank(items.size()) - 1;
  detail::select_in_place(items, r0, ledger);
  refine(items.first(r0), offset, limit, markers, ledger);
  markers.push_back(offset + r0);
  refine(items.subspan(r0 + 1), offset + r0 + 1, limit, markers, ledger);
}

// A median split level costs several times a merge sort level, so fully
// sorting wins while log|X| stays within this factor of the split depth.
constexpr std::size_t kSortOverSplit = 4;

std::size_t ceil_log2(std::size_t m) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < m) ++b;
  return b;
}

void mark_all(USortedArray& a) {
  a.markers.resize(a.data.size());
  std::iota(a.markers.begin(), a.markers.end(), std::size_t{0});
}

struct CombinedMarker {
  Element element;
  bool from_x = false;
};

// Bucket of every non-marker element of `a`: the number of combined markers
// smaller than it. `own_slot[i]` is the combined index of a's i-th marker.
void assign_buckets(const USortedArray& a, const std::vector<std::size_t>& own_slot,
                    const std::vector<CombinedMarker>& combined,
                    std::vector<std::uint32_t>& bucket_of, ComparisonLedger& ledger) {
  bucket_of.assign(a.size(), 0);
  std::size_t next_marker = 0;
  for (std::size_t pos = 0; pos < a.size(); ++pos) {
    if (next_marker < a.markers.size() && a.markers[next_marker] == pos) {
      ++next_marker;
      continue;
    }
    // Segment `next_marker` spans combined slots (first, last) exclusive.
    const std::size_t first = next_marker == 0 ? 0 : own_slot[next_marker - 1] + 1;
    const std::size_t last =
        next_marker == a.markers.size() ? combined.size() : own_slot[next_marker];
    std::size_t lo = first;
    std::size_t hi = last;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (less(combined[mid].element, a.data[pos], ledger)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    bucket_of[pos] = static_cast<std::uint32_t>(lo);
  }
}

}  // namespace

USortedArray u_sort(std::span<const Element> data, std::size_t u, ComparisonLedger& ledger) {
  if (u < 1) throw ContractViolation("u_sort: u must be >= 1");
  if (data.empty()) throw ContractViolation("u_sort: empty input");
  USortedArray out{std::vector<Element>(data.begin(), data.end()), {}, u};
  const std::size_t limit = out.segment_limit();
  const std::size_t depth = ceil_log2((out.size() + limit - 1) / limit);
  if (limit == 1 || ceil_log2(out.size()) <= kSortOverSplit * depth) {
    counted_sort(out.data, ledger);
    if (out.size() <= kMarkerBudgetFactor * u) {
      mark_all(out);
    } else {
      for (std::size_t p = limit; p < out.size(); p += limit + 1) out.markers.push_back(p);
    }
    return out;
  }
  refine(out.data, 0, limit, out.markers, ledger);
  return out;
}

USortedArray merge_usorted(const USortedArray& x, const USortedArray& y,
                           ComparisonLedger& ledger) {
  if (x.u != y.u) {
    throw ContractViolation("merge_usorted: mismatched u (" + std::to_string(x.u) + " vs " +
                            std::to_string(y.u) + ")");
  }
  if (x.u < 1) throw ContractViolation("merge_usorted: u must be >= 1");
  if (x.data.empty()) return y;
  if (y.data.empty()) return x;
  const std::size_t u = x.u;

  // Step 1: thread both marker lists into one sorted skeleton.
  std::vector<CombinedMarker> combined;
  combined.reserve(x.markers.size() + y.markers.size());
  std::vector<std::size_t> slot_x(x.markers.size());
  std::vector<std::size_t> slot_y(y.markers.size());
  {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.markers.size() || j < y.markers.size()) {
      bool take_x;
      if (i == x.markers.size()) {
        take_x = false;
      } else if (j == y.markers.size()) {
        take_x = true;
      } else {
        take_x = less(x.data[x.markers[i]], y.data[y.markers[j]], ledger);
      }
      if (take_x) {
        slot_x[i] = combined.size();
        combined.push_back({x.data[x.markers[i++]], true});
      } else {
        slot_y[j] = combined.size();
        combined.push_back({y.data[y.markers[j++]], false});
      }
    }
  }

  // Step 2: drop every non-marker into the gap of the skeleton it belongs
  // to, searching only among the other array's markers inside its segment.
  std::vector<std::uint32_t> bucket_x;
  std::vector<std::uint32_t> bucket_y;
  assign_buckets(x, slot_x, combined, bucket_x, ledger);
  assign_buckets(y, slot_y, combined, bucket_y, ledger);

  const std::size_t buckets = combined.size() + 1;
  std::vector<std::size_t> start(buckets + 1, 0);
  auto count = [&](const USortedArray& a, const std::vector<std::uint32_t>& bucket_of) {
    std::size_t m = 0;
    for (std::size_t pos = 0; pos < a.size(); ++pos) {
      if (m < a.markers.size() && a.markers[m] == pos) {
        ++m;
        continue;
      }
      ++start[bucket_of[pos] + 1];
    }
  };
  count(x, bucket_x);
  count(y, bucket_y);
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<Element> pooled(start.back());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    auto place = [&](const USortedArray& a, const std::vector<std::uint32_t>& bucket_of) {
      std::size_t m = 0;
      for (std::size_t pos = 0; pos < a.size(); ++pos) {
        if (m < a.markers.size() && a.markers[m] == pos) {
          ++m;
          continue;
        }
        pooled[fill[bucket_of[pos]]++] = a.data[pos];
      }
    };
    place(x, bucket_x);
    place(y, bucket_y);
  }

  USortedArray z;
  z.u = u;
  z.data.reserve(x.size() + y.size());
  const std::size_t limit = (x.size() + y.size() + u - 1) / u;

  // Lay out gap, marker, gap, marker, ..., gap. A gap longer than the limit
  // is split at medians; this only happens when both inputs' segment limits
  // round up past the merged one.
  std::vector<std::size_t> markers;
  markers.reserve(combined.size() + 2);
  for (std::size_t b = 0; b < buckets; ++b) {
    const std::size_t offset = z.data.size();
    z.data.insert(z.data.end(), pooled.begin() + static_cast<std::ptrdiff_t>(start[b]),
                  pooled.begin() + static_cast<std::ptrdiff_t>(start[b + 1]));
    const std::size_t len = start[b + 1] - start[b];
    if (len > limit) {
      refine(std::span<Element>(z.data).subspan(offset, len), offset, limit, markers, ledger);
    }
    if (b < combined.size()) {
      markers.push_back(z.data.size());
      z.data.push_back(combined[b].element);
    }
  }

  if (limit == 1) {
    // Every gap has at most one element and is therefore in place.
    mark_all(z);
    return z;
  }

  // Step 3: greedy left-to-right coalescing of short neighbouring segments.
  std::size_t current = markers.empty() ? z.data.size() : markers.front();
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const std::size_t next_end = i + 1 < markers.size() ? markers[i + 1] : z.data.size();
    const std::size_t next = next_end - markers[i] - 1;
    if (current + 1 + next <= limit) {
      current += 1 + next;
    } else {
      z.markers.push_back(markers[i]);
      current = next;
    }
  }
  return z;
}

bool validate_usorted(const USortedArray& x) {
  if (x.u < 1) return false;
  const std::size_t n = x.size();
  if (x.markers.size() > kMarkerBudgetFactor * x.u) return false;
  for (std::size_t i = 0; i < x.markers.size(); ++i) {
    if (x.markers[i] >= n) return false;
    if (i > 0 && x.markers[i] <= x.markers[i - 1]) return false;
  }
  const std::size_t limit = x.segment_limit();
  std::size_t previous_end = 0;
  for (std::size_t m : x.markers) {
    if (m - previous_end > limit) return false;
    previous_end = m + 1;
  }
  if (n - previous_end > limit) return false;
  if (x.markers.empty()) return true;

  // Marker at p is in place iff max(data[0..p)) < data[p] < min(data(p..n)).
  std::vector<std::size_t> suffix_min(n);
  suffix_min[n - 1] = n - 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    const std::size_t best = suffix_min[i + 1];
    suffix_min[i] = uncounted_less(x.data[i], x.data[best]) ? i : best;
  }
  std::size_t prefix_max = n;  // none yet
  std::size_t scanned = 0;
  for (std::size_t m : x.markers) {
    for (; scanned < m; ++scanned) {
      if (prefix_max == n || uncounted_less(x.data[prefix_max], x.data[scanned])) {
        prefix_max = scanned;
      }
    }
    if (prefix_max != n && !uncounted_less(x.data[prefix_max], x.data[m])) return false;
    if (m + 1 < n && !uncounted_less(x.data[m], x.data[suffix_min[m + 1]])) return false;
  }
  return true;
}

std::vector<MarkerRank> marker_ranks(const USortedArray& x) {
  std::vector<MarkerRank> out;
  out.reserve(x.markers.size());
  for (std::size_t m : x.markers) out.push_back({x.data[m], m + 1});
  return out;
}

}  // namespace rangemed
