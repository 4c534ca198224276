#pragma once

#include <span>
#include <vector>

#include "rangemed/element.hpp"

namespace rangemed {

/// Counted top-down merge sort.
void counted_sort(std::span<Element> items, ComparisonLedger& ledger);

/// Counted two-way merge of sorted inputs.
std::vector<Element> merge_sorted(std::span<const Element> a, std::span<const Element> b,
                                  ComparisonLedger& ledger);

}  // namespace rangemed
