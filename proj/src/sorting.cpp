#include "rangemed/sorting.hpp"

#include <algorithm>

#include "rangemed/select.hpp"

namespace rangemed {
namespace {

void merge_into(std::span<const Element> a, std::span<const Element> b, Element* out,
                ComparisonLedger& ledger) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (less(b[j], a[i], ledger)) {
      *out++ = b[j++];
    } else {
      *out++ = a[i++];
    }
  }
  out = std::copy(a.begin() + static_cast<std::ptrdiff_t>(i), a.end(), out);
  std::copy(b.begin() + static_cast<std::ptrdiff_t>(j), b.end(), out);
}

void sort_rec(std::span<Element> items, std::span<Element> buffer, ComparisonLedger& ledger) {
  if (items.size() <= 8) {
    detail::binary_insertion_sort(items, ledger);
    return;
  }
  const std::size_t half = items.size() / 2;
  sort_rec(items.first(half), buffer.first(half), ledger);
  sort_rec(items.subspan(half), buffer.subspan(half), ledger);
  merge_into(items.first(half), items.subspan(half), buffer.data(), ledger);
  std::copy(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(items.size()),
            items.begin());
}

}  // namespace

void counted_sort(std::span<Element> items, ComparisonLedger& ledger) {
  std::vector<Element> buffer(items.size());
  sort_rec(items, buffer, ledger);
}

std::vector<Element> merge_sorted(std::span<const Element> a, std::span<const Element> b,
                                  ComparisonLedger& ledger) {
  std::vector<Element> out(a.size() + b.size());
  merge_into(a, b, out.data(), ledger);
  return out;
}

}  // namespace rangemed
