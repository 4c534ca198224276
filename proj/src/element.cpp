#include "rangemed/element.hpp"

#include <cmath>

namespace rangemed {

std::size_t median_rank(std::size_t m) {
  if (m == 0) throw ContractViolation("median_rank: empty range");
  return (m + 1) / 2;
}

Dataset::Dataset(std::span<const double> values) {
  elements_.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ContractViolation("Dataset: non-finite value at index " + std::to_string(i));
    }
    elements_.push_back(Element{values[i], static_cast<std::int64_t>(i)});
  }
}

std::span<const Element> Dataset::slice(std::size_t l, std::size_t r) const {
  if (l < 1 || l > r || r > elements_.size()) {
    throw ContractViolation("Dataset::slice: invalid interval [" + std::to_string(l) + ", " +
                            std::to_string(r) + "]");
  }
  return std::span<const Element>(elements_).subspan(l - 1, r - l + 1);
}

}  // namespace rangemed
