#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rangemed/element.hpp"
#include "rangemed/range_tree.hpp"

namespace rangemed {

/// Sort-the-slice reference median. Touches no ledger.
Element oracle_median(const Dataset& data, const QueryInterval& q);

/// Elements of ranks n/k, 2n/k, ..., n of `data`, obtained only through
/// range-median queries on an extended array of length 4n: n values below
/// the minimum, the data, then 2n values above the maximum. The i-th query is
/// [1, 2n + 2(i n / k) - 1]. Returned indices refer to `data`.
std::vector<Element> multi_select_via_reduction(const Dataset& data, std::size_t k,
                                                ComparisonLedger& ledger);

enum class Nesting { random, hierarchical };

/// How random-mode interval lengths are drawn.
enum class LengthMix {
  uniform,      // endpoints uniform over all pairs
  log_uniform,  // length n^U with U uniform in [0, 1]
  long_only,    // length at least n / 2
};

struct Workload {
  std::size_t n = 1000;
  double duplicate_rate = 0.0;  // chance a value repeats the first one
  std::uint64_t data_seed = 1;
  std::size_t k = 10;
  LengthMix lengths = LengthMix::uniform;
  Nesting nesting = Nesting::random;
  std::uint64_t query_seed = 2;
};

struct Instance {
  Dataset dataset;
  std::vector<QueryInterval> queries;
};

Instance generate(const Workload& w);

/// True when every pair of intervals is nested or disjoint.
bool is_laminar(const std::vector<QueryInterval>& queries);

}  // namespace rangemed
