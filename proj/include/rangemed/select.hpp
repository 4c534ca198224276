#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rangemed/element.hpp"

namespace rangemed {

/// Returns the element of 1-based `rank` among `items` using deterministic
/// median-of-medians selection. `items` is reordered so that the answer sits
/// at position rank-1 with every smaller element before it and every larger
/// element after it.
///
/// Charges at most 24 * items.size() comparisons.
Element select(std::span<Element> items, std::size_t rank, ComparisonLedger& ledger);

namespace detail {

/// Element plus the group it was drawn from; the recursion on group medians
/// uses this to recover which group lies on which side of the pivot.
struct Tagged {
  Element element;
  std::uint32_t group = 0;
};

/// An element carrying a non-negative weight and an opaque caller tag.
struct Weighted {
  Element element;
  std::uint64_t weight = 0;
  std::uint64_t tag = 0;
};

inline const Element& key(const Element& e) noexcept { return e; }
inline const Element& key(const Tagged& t) noexcept { return t.element; }
inline const Element& key(const Weighted& w) noexcept { return w.element; }

inline constexpr std::size_t kSmallSelect = 12;

template <class T>
void binary_insertion_sort(std::span<T> items, ComparisonLedger& ledger) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    T x = items[i];
    std::size_t lo = 0;
    std::size_t hi = i;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (less(key(x), key(items[mid]), ledger)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    std::move_backward(items.begin() + static_cast<std::ptrdiff_t>(lo),
                       items.begin() + static_cast<std::ptrdiff_t>(i),
                       items.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    items[lo] = std::move(x);
  }
}

/// Rearranges g[0..5) into [lo, lo, median, hi, hi] with six comparisons.
template <class T>
void arrange_five(T* g, ComparisonLedger& ledger) {
  auto lt = [&ledger](const T& x, const T& y) { return less(key(x), key(y), ledger); };
  T a = g[0], b = g[1], c = g[2], d = g[3], e = g[4];
  if (lt(b, a)) std::swap(a, b);
  if (lt(d, c)) std::swap(c, d);
  if (lt(c, a)) {
    std::swap(a, c);
    std::swap(b, d);
  }
  // a < b and a < c < d: a is below the median.
  T p = b, q = e;
  if (lt(q, p)) std::swap(p, q);
  if (lt(c, p)) {
    // c < p < q and c < d; median is min(p, d).
    g[0] = a;
    g[1] = c;
    if (lt(p, d)) {
      g[2] = p, g[3] = q, g[4] = d;
    } else {
      g[2] = d, g[3] = p, g[4] = q;
    }
  } else {
    // p < c < d and p < q; median is min(q, c).
    g[0] = a;
    g[1] = p;
    if (lt(q, c)) {
      g[2] = q, g[3] = c, g[4] = d;
    } else {
      g[2] = c, g[3] = q, g[4] = d;
    }
  }
}

/// In-place median-of-medians selection of 0-based `r0`. On return items[r0]
/// holds the answer and `items` is partitioned around it.
///
/// Group members already ordered against their group median are placed
/// without a second comparison, so a partition round costs about 2n/5
/// comparisons on top of the 6n/5 spent inside the groups.
template <class T>
void select_in_place(std::span<T> items, std::size_t r0, ComparisonLedger& ledger) {
  std::vector<T> scratch;
  std::vector<Tagged> medians;
  std::vector<std::int8_t> side;
  while (true) {
    const std::size_t n = items.size();
    if (n <= kSmallSelect) {
      binary_insertion_sort(items, ledger);
      return;
    }
    const std::size_t groups = n / 5;
    medians.clear();
    for (std::size_t j = 0; j < groups; ++j) {
      arrange_five(&items[5 * j], ledger);
      medians.push_back(Tagged{key(items[5 * j + 2]), static_cast<std::uint32_t>(j)});
    }
    const std::size_t mid = (groups - 1) / 2;
    select_in_place<Tagged>(std::span<Tagged>(medians), mid, ledger);

    side.assign(groups, 0);
    for (std::size_t i = 0; i < groups; ++i) {
      side[medians[i].group] = i < mid ? -1 : (i > mid ? 1 : 0);
    }
    const T pivot = items[5 * medians[mid].group + 2];

    scratch.resize(n);
    std::size_t lo = 0;
    std::size_t hi = n;
    auto put_lo = [&](const T& x) { scratch[lo++] = x; };
    auto put_hi = [&](const T& x) { scratch[--hi] = x; };
    auto classify = [&](const T& x) {
      if (less(key(x), key(pivot), ledger)) {
        put_lo(x);
      } else {
        put_hi(x);
      }
    };
    for (std::size_t j = 0; j < groups; ++j) {
      const T* g = &items[5 * j];
      if (side[j] < 0) {
        put_lo(g[0]), put_lo(g[1]), put_lo(g[2]);
        classify(g[3]), classify(g[4]);
      } else if (side[j] > 0) {
        put_hi(g[2]), put_hi(g[3]), put_hi(g[4]);
        classify(g[0]), classify(g[1]);
      } else {
        put_lo(g[0]), put_lo(g[1]);
        put_hi(g[3]), put_hi(g[4]);
      }
    }
    for (std::size_t i = 5 * groups; i < n; ++i) classify(items[i]);
    scratch[lo] = pivot;
    std::copy(scratch.begin(), scratch.end(), items.begin());

    if (r0 == lo) return;
    if (r0 < lo) {
      items = items.first(lo);
    } else {
      items = items.subspan(lo + 1);
      r0 -= lo + 1;
    }
  }
}

/// Weighted selection: returns the position p (into the original span) of
/// the item such that the weight strictly before it is < `target` and the
/// weight up to and including it is >= `target`. `items` ends up partitioned
/// around p. Requires 1 <= target <= total weight.
template <class T>
std::size_t weighted_select_in_place(std::span<T> items, std::uint64_t target,
                                     ComparisonLedger& ledger) {
  std::size_t base = 0;
  while (true) {
    const std::size_t n = items.size();
    if (n <= kSmallSelect) {
      binary_insertion_sort(items, ledger);
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += items[i].weight;
        if (acc >= target) return base + i;
      }
      return base + n - 1;
    }
    const std::size_t mid = (n - 1) / 2;
    select_in_place(items, mid, ledger);
    std::uint64_t below = 0;
    for (std::size_t i = 0; i < mid; ++i) below += items[i].weight;
    if (target <= below) {
      items = items.first(mid);
    } else if (target <= below + items[mid].weight) {
      return base + mid;
    } else {
      target -= below + items[mid].weight;
      items = items.subspan(mid + 1);
      base += mid + 1;
    }
  }
}

}  // namespace detail
}  // namespace rangemed
