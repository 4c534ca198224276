#include "rangemed/select.hpp"

#include <string>

namespace rangemed {

Element select(std::span<Element> items, std::size_t rank, ComparisonLedger& ledger) {
  if (rank < 1 || rank > items.size()) {
    throw ContractViolation("select: rank " + std::to_string(rank) + " outside [1, " +
                            std::to_string(items.size()) + "]");
  }
  detail::select_in_place(items, rank - 1, ledger);
  return items[rank - 1];
}

}  // namespace rangemed
