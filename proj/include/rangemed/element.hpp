#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rangemed {

/// Raised when a caller breaks an operation's documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An array entry. Ties on `value` are broken by `index`, which makes the
/// order strict even when the input has duplicate values.
struct Element {
  double value = 0.0;
  std::int64_t index = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

/// Tallies element comparisons. Every order test in the library goes through
/// `compare` / `less` below and is charged here exactly once.
class ComparisonLedger {
 public:
  void charge(std::uint64_t n = 1) noexcept { count_ += n; }
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_ = 0;
};

enum class Ordering { less, greater };

/// Uncounted order test. Reserved for oracles, validators and test code.
[[nodiscard]] inline bool uncounted_less(const Element& a, const Element& b) noexcept {
  if (a.value != b.value) return a.value < b.value;
  return a.index < b.index;
}

[[nodiscard]] inline bool less(const Element& a, const Element& b,
                               ComparisonLedger& ledger) noexcept {
  ledger.charge();
  return uncounted_less(a, b);
}

[[nodiscard]] inline Ordering compare(const Element& a, const Element& b,
                                      ComparisonLedger& ledger) noexcept {
  return less(a, b, ledger) ? Ordering::less : Ordering::greater;
}

/// Rank (1-based) of the median of `m` items: ceil(m / 2).
[[nodiscard]] std::size_t median_rank(std::size_t m);

/// The immutable input array. `elements()[i].index == i` always holds.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::span<const double> values);

  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] bool empty() const noexcept { return elements_.empty(); }
  [[nodiscard]] std::span<const Element> elements() const noexcept { return elements_; }
  [[nodiscard]] const Element& operator[](std::size_t i) const { return elements_[i]; }

  /// Elements at 1-based inclusive positions [l, r].
  [[nodiscard]] std::span<const Element> slice(std::size_t l, std::size_t r) const;

 private:
  std::vector<Element> elements_;
};

}  // namespace rangemed
