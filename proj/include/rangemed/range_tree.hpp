#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rangemed/element.hpp"
#include "rangemed/usorted.hpp"

namespace rangemed {

/// 1-based inclusive query range.
struct QueryInterval {
  std::size_t l = 1;
  std::size_t r = 1;
  [[nodiscard]] std::size_t length() const noexcept { return r - l + 1; }
  bool operator==(const QueryInterval&) const = default;
};

void check_query(std::size_t n, const QueryInterval& q);

/// Cut positions 0 = b_0 < b_1 < ... < b_m = n; atomic interval i covers
/// positions (b_i, b_{i+1}] in 1-based terms.
struct AtomicDecomposition {
  std::vector<std::size_t> boundaries;
  [[nodiscard]] std::size_t count() const noexcept {
    return boundaries.empty() ? 0 : boundaries.size() - 1;
  }
};

AtomicDecomposition decompose(std::size_t n, std::span<const QueryInterval> queries);

/// `parts` near-equal atomic intervals (clamped to [1, n]).
AtomicDecomposition equal_decomposition(std::size_t n, std::size_t parts);

/// u = min(k^2, n), at least 1.
std::size_t relaxation_for(std::size_t k, std::size_t n);

class MergeTree {
 public:
  struct Node {
    std::size_t first_leaf = 0;
    std::size_t last_leaf = 0;  // inclusive
    std::size_t lo = 0;         // 0-based half-open position range
    std::size_t hi = 0;
    int left = -1;
    int right = -1;
    USortedArray array;
  };

  MergeTree(const Dataset& data, AtomicDecomposition decomposition, std::size_t u,
            ComparisonLedger& ledger);

  [[nodiscard]] std::size_t u() const noexcept { return u_; }
  [[nodiscard]] const AtomicDecomposition& decomposition() const noexcept { return decomposition_; }
  [[nodiscard]] const Node& node(std::size_t id) const { return nodes_[id]; }
  [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t root() const noexcept { return root_; }
  [[nodiscard]] std::size_t height() const;
  [[nodiscard]] const Dataset& dataset() const noexcept { return *data_; }

  /// Maximal nodes tiling q, left to right. Throws ContractViolation when an
  /// endpoint falls inside an atomic interval.
  [[nodiscard]] std::vector<std::size_t> canonical_cover(const QueryInterval& q) const;

  /// Leaf index containing 1-based position p.
  [[nodiscard]] std::size_t leaf_of(std::size_t p) const;

 private:
  std::size_t build(std::size_t first, std::size_t last, ComparisonLedger& ledger);
  void cover(std::size_t id, std::size_t lo, std::size_t hi, std::vector<std::size_t>& out) const;

  const Dataset* data_;
  AtomicDecomposition decomposition_;
  std::size_t u_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

/// Optional per-query instrumentation.
struct QueryTrace {
  std::size_t cover_size = 0;
  std::size_t candidates = 0;  // sum of trimmed sub-range sizes
  std::size_t covered = 0;     // elements in the cover
  std::size_t dangling = 0;    // elements u-sorted on the fly
  bool fragments_valid = true;
};

Element query_offline(const MergeTree& tree, const QueryInterval& q, ComparisonLedger& ledger,
                      QueryTrace* trace = nullptr);

/// Answers queries one at a time over u equal atomic intervals.
class OnlineEngine {
 public:
  /// Fixed guess `k` (u = min(k^2, n), or `u_override` when non-zero);
  /// build work goes to `build_ledger`.
  OnlineEngine(const Dataset& data, std::size_t k, ComparisonLedger& build_ledger,
               std::size_t u_override = 0);
  /// Guess-squaring engine starting at 10.
  OnlineEngine(const Dataset& data, ComparisonLedger& build_ledger);

  [[nodiscard]] std::size_t guess() const noexcept { return guess_; }
  [[nodiscard]] std::size_t answered() const noexcept { return answered_; }
  [[nodiscard]] std::size_t rebuilds() const noexcept { return rebuilds_; }
  [[nodiscard]] const MergeTree& tree() const noexcept { return *tree_; }

  Element query_known_k(const QueryInterval& q, ComparisonLedger& ledger,
                        QueryTrace* trace = nullptr) const;
  Element query(const QueryInterval& q, ComparisonLedger& ledger, QueryTrace* trace = nullptr);

 private:
  void rebuild();

  const Dataset* data_;
  ComparisonLedger* build_ledger_;
  bool adaptive_;
  std::size_t guess_;
  std::size_t u_override_ = 0;
  std::size_t answered_ = 0;
  std::size_t rebuilds_ = 0;
  std::unique_ptr<MergeTree> tree_;
};

inline constexpr std::size_t kInitialGuess = 10;

Element query_online_known_k(const OnlineEngine& engine, const QueryInterval& q,
                             ComparisonLedger& ledger, QueryTrace* trace = nullptr);
Element query_online(OnlineEngine& engine, const QueryInterval& q, ComparisonLedger& ledger,
                     QueryTrace* trace = nullptr);

/// Fully sorted merge tree; each query is exact selection over the cover.
class SortedMergeTree {
 public:
  SortedMergeTree(const Dataset& data, AtomicDecomposition decomposition, ComparisonLedger& ledger);
  Element query(const QueryInterval& q, ComparisonLedger& ledger) const;

 private:
  struct Node {
    std::size_t lo = 0;
    std::size_t hi = 0;
    int left = -1;
    int right = -1;
    std::vector<Element> sorted;
  };
  std::size_t build(std::size_t first, std::size_t last, ComparisonLedger& ledger);
  void cover(std::size_t id, std::size_t lo, std::size_t hi, std::vector<std::size_t>& out) const;

  const Dataset* data_;
  AtomicDecomposition decomposition_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

/// Build cost goes to `build_ledger`; query i is charged to `query_ledgers[i]`
/// when provided (size must match), else to `build_ledger`.
std::vector<Element> query_slow(const Dataset& data, std::span<const QueryInterval> queries,
                                ComparisonLedger& build_ledger,
                                std::span<ComparisonLedger> query_ledgers = {});

}  // namespace rangemed
