#include "rangemed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>

namespace rangemed {
namespace {

double strictly_below(double v) {
  double s = v - 1.0;
  if (!(s < v)) s = std::nextafter(v, -std::numeric_limits<double>::infinity());
  if (!std::isfinite(s)) throw ContractViolation("reduction: no finite value below the minimum");
  return s;
}

double strictly_above(double v) {
  double s = v + 1.0;
  if (!(s > v)) s = std::nextafter(v, std::numeric_limits<double>::infinity());
  if (!std::isfinite(s)) throw ContractViolation("reduction: no finite value above the maximum");
  return s;
}

std::vector<QueryInterval> random_queries(std::size_t n, std::size_t k, LengthMix mix,
                                          std::mt19937_64& rng) {
  std::vector<QueryInterval> out;
  out.reserve(k);
  std::uniform_int_distribution<std::size_t> pos(1, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t len = 1;
    switch (mix) {
      case LengthMix::uniform: {
        std::size_t a = pos(rng);
        std::size_t b = pos(rng);
        if (a > b) std::swap(a, b);
        out.push_back({a, b});
        continue;
      }
      case LengthMix::log_uniform:
        len = static_cast<std::size_t>(std::pow(static_cast<double>(n), unit(rng)));
        break;
      case LengthMix::long_only:
        len = std::uniform_int_distribution<std::size_t>((n + 1) / 2, n)(rng);
        break;
    }
    len = std::clamp<std::size_t>(len, 1, n);
    const std::size_t l = std::uniform_int_distribution<std::size_t>(1, n - len + 1)(rng);
    out.push_back({l, l + len - 1});
  }
  return out;
}

// Walks the halving tree of [1, n] breadth first, emitting each visited
// interval with probability 1/2, and restarts at the root until k intervals
// are out. All intervals come from one tree, so the set is laminar.
std::vector<QueryInterval> hierarchical_queries(std::size_t n, std::size_t k,
                                                std::mt19937_64& rng) {
  std::vector<QueryInterval> out;
  out.reserve(k);
  std::bernoulli_distribution coin(0.5);
  while (out.size() < k) {
    std::deque<QueryInterval> pending{{1, n}};
    while (!pending.empty() && out.size() < k) {
      const QueryInterval q = pending.front();
      pending.pop_front();
      if (coin(rng)) out.push_back(q);
      if (q.l < q.r) {
        const std::size_t mid = q.l + (q.r - q.l) / 2;
        pending.push_back({q.l, mid});
        pending.push_back({mid + 1, q.r});
      }
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

Element oracle_median(const Dataset& data, const QueryInterval& q) {
  check_query(data.size(), q);
  const auto slice = data.slice(q.l, q.r);
  std::vector<Element> copy(slice.begin(), slice.end());
  std::sort(copy.begin(), copy.end(), uncounted_less);
  return copy[median_rank(copy.size()) - 1];
}

std::vector<Element> multi_select_via_reduction(const Dataset& data, std::size_t k,
                                                ComparisonLedger& ledger) {
  const std::size_t n = data.size();
  if (n == 0 || k == 0 || n % k != 0) {
    throw ContractViolation("multi_select_via_reduction: k = " + std::to_string(k) +
                            " must divide n = " + std::to_string(n));
  }
  const auto elems = data.elements();
  const auto [lo, hi] = std::minmax_element(elems.begin(), elems.end(), uncounted_less);
  const double below = strictly_below(lo->value);
  const double above = strictly_above(hi->value);

  std::vector<double> t(4 * n, below);
  for (std::size_t i = 0; i < n; ++i) t[n + i] = elems[i].value;
  std::fill(t.begin() + static_cast<std::ptrdiff_t>(2 * n), t.end(), above);
  const Dataset extended(t);

  std::vector<QueryInterval> queries;
  queries.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) queries.push_back({1, 2 * n + 2 * (i * n / k) - 1});
  const MergeTree tree(extended, decompose(extended.size(), queries),
                       relaxation_for(k, extended.size()), ledger);

  std::vector<Element> out;
  out.reserve(k);
  const auto offset = static_cast<std::int64_t>(n);
  for (const QueryInterval& q : queries) {
    Element e = query_offline(tree, q, ledger);
    if (e.index < offset || e.index >= 2 * offset) {
      throw std::logic_error("multi_select_via_reduction: answer is a sentinel");
    }
    e.index -= offset;
    out.push_back(e);
  }
  return out;
}

Instance generate(const Workload& w) {
  if (w.n < 1 || w.k < 1) throw ContractViolation("generate: n and k must be >= 1");
  std::mt19937_64 data_rng(w.data_seed);
  std::uniform_int_distribution<std::int64_t> fresh(0, 999'999'999);
  std::bernoulli_distribution repeat(std::clamp(w.duplicate_rate, 0.0, 1.0));
  std::vector<double> values(w.n);
  values[0] = static_cast<double>(fresh(data_rng));
  for (std::size_t i = 1; i < w.n; ++i) {
    const bool dup = repeat(data_rng);
    const auto v = static_cast<double>(fresh(data_rng));
    values[i] = dup ? values[0] : v;
  }

  std::mt19937_64 query_rng(w.query_seed);
  Instance out{Dataset(values), {}};
  out.queries = w.nesting == Nesting::hierarchical ? hierarchical_queries(w.n, w.k, query_rng)
                                                   : random_queries(w.n, w.k, w.lengths, query_rng);
  return out;
}

bool is_laminar(const std::vector<QueryInterval>& queries) {
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t j = i + 1; j < queries.size(); ++j) {
      const QueryInterval& a = queries[i];
      const QueryInterval& b = queries[j];
      const bool disjoint = a.r < b.l || b.r < a.l;
      const bool nested = (a.l <= b.l && b.r <= a.r) || (b.l <= a.l && a.r <= b.r);
      if (!disjoint && !nested) return false;
    }
  }
  return true;
}

}  // namespace rangemed
