#include "rangemed/range_tree.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "rangemed/multi_select.hpp"
#include "rangemed/select.hpp"
#include "rangemed/sorting.hpp"

namespace rangemed {
namespace {

std::string describe(const QueryInterval& q) {
  return "[" + std::to_string(q.l) + ", " + std::to_string(q.r) + "]";
}

void check_aligned(const AtomicDecomposition& d, const QueryInterval& q) {
  const auto& b = d.boundaries;
  if (!std::binary_search(b.begin(), b.end(), q.l - 1) || !std::binary_search(b.begin(), b.end(), q.r)) {
    throw ContractViolation("canonical cover: " + describe(q) + " is not aligned to atomic intervals");
  }
}

Element trim_and_select(std::span<const USortedArray* const> arrays, std::size_t rank,
                        ComparisonLedger& ledger, QueryTrace* trace) {
  const TrimResult trimmed = trim_usorted(arrays, rank, ledger);
  std::vector<Element> pool;
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    const SubRange s = trimmed.sub_ranges[i];
    pool.insert(pool.end(), arrays[i]->data.begin() + static_cast<std::ptrdiff_t>(s.lo),
                arrays[i]->data.begin() + static_cast<std::ptrdiff_t>(s.hi));
  }
  if (trace) trace->candidates = pool.size();
  return select(pool, trimmed.adjusted_rank, ledger);
}

}  // namespace

void check_query(std::size_t n, const QueryInterval& q) {
  if (q.l < 1 || q.l > q.r || q.r > n) {
    throw ContractViolation("query " + describe(q) + " invalid for n = " + std::to_string(n));
  }
}

AtomicDecomposition decompose(std::size_t n, std::span<const QueryInterval> queries) {
  AtomicDecomposition d;
  d.boundaries.reserve(2 * queries.size() + 2);
  d.boundaries.push_back(0);
  d.boundaries.push_back(n);
  for (const QueryInterval& q : queries) {
    check_query(n, q);
    d.boundaries.push_back(q.l - 1);
    d.boundaries.push_back(q.r);
  }
  std::sort(d.boundaries.begin(), d.boundaries.end());
  d.boundaries.erase(std::unique(d.boundaries.begin(), d.boundaries.end()), d.boundaries.end());
  return d;
}

AtomicDecomposition equal_decomposition(std::size_t n, std::size_t parts) {
  parts = std::clamp<std::size_t>(parts, 1, std::max<std::size_t>(n, 1));
  AtomicDecomposition d;
  d.boundaries.reserve(parts + 1);
  for (std::size_t i = 0; i <= parts; ++i) d.boundaries.push_back(i * n / parts);
  return d;
}

std::size_t relaxation_for(std::size_t k, std::size_t n) {
  if (n == 0) return 1;
  if (k >= n || k >= (std::size_t{1} << 32) || k * k >= n) return n;
  return std::max<std::size_t>(1, k * k);
}

MergeTree::MergeTree(const Dataset& data, AtomicDecomposition decomposition, std::size_t u,
                     ComparisonLedger& ledger)
    : data_(&data), decomposition_(std::move(decomposition)), u_(u) {
  if (u < 1) throw ContractViolation("MergeTree: u must be >= 1");
  if (data.empty()) throw ContractViolation("MergeTree: empty dataset");
  const auto& b = decomposition_.boundaries;
  if (b.size() < 2 || b.front() != 0 || b.back() != data.size() ||
      std::adjacent_find(b.begin(), b.end(), std::greater_equal<>()) != b.end()) {
    throw ContractViolation("MergeTree: malformed decomposition");
  }
  nodes_.reserve(2 * decomposition_.count());
  root_ = build(0, decomposition_.count() - 1, ledger);
}

std::size_t MergeTree::build(std::size_t first, std::size_t last, ComparisonLedger& ledger) {
  const auto& b = decomposition_.boundaries;
  Node node;
  node.first_leaf = first;
  node.last_leaf = last;
  node.lo = b[first];
  node.hi = b[last + 1];
  if (first == last) {
    node.array = u_sort(data_->elements().subspan(node.lo, node.hi - node.lo), u_, ledger);
  } else {
    const std::size_t mid = first + (last - first) / 2;
    const std::size_t left = build(first, mid, ledger);
    const std::size_t right = build(mid + 1, last, ledger);
    node.left = static_cast<int>(left);
    node.right = static_cast<int>(right);
    node.array = merge_usorted(nodes_[left].array, nodes_[right].array, ledger);
  }
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

std::size_t MergeTree::height() const {
  std::vector<std::size_t> depth(nodes_.size(), 1);
  // Children are created before parents.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.left >= 0) {
      depth[i] = 1 + std::max(depth[static_cast<std::size_t>(n.left)],
                              depth[static_cast<std::size_t>(n.right)]);
    }
  }
  return depth[root_];
}

std::size_t MergeTree::leaf_of(std::size_t p) const {
  const auto& b = decomposition_.boundaries;
  if (p < 1 || p > b.back()) throw ContractViolation("leaf_of: position out of range");
  return static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), p) - b.begin()) - 1;
}

void MergeTree::cover(std::size_t id, std::size_t lo, std::size_t hi,
                      std::vector<std::size_t>& out) const {
  const Node& n = nodes_[id];
  if (hi <= n.lo || n.hi <= lo) return;
  if (lo <= n.lo && n.hi <= hi) {
    out.push_back(id);
    return;
  }
  cover(static_cast<std::size_t>(n.left), lo, hi, out);
  cover(static_cast<std::size_t>(n.right), lo, hi, out);
}

std::vector<std::size_t> MergeTree::canonical_cover(const QueryInterval& q) const {
  check_query(data_->size(), q);
  check_aligned(decomposition_, q);
  std::vector<std::size_t> out;
  cover(root_, q.l - 1, q.r, out);
  return out;
}

Element query_offline(const MergeTree& tree, const QueryInterval& q, ComparisonLedger& ledger,
                      QueryTrace* trace) {
  const std::vector<std::size_t> nodes = tree.canonical_cover(q);
  std::vector<const USortedArray*> arrays;
  arrays.reserve(nodes.size());
  for (std::size_t id : nodes) arrays.push_back(&tree.node(id).array);
  if (trace) {
    *trace = QueryTrace{};
    trace->cover_size = nodes.size();
    trace->covered = q.length();
  }
  return trim_and_select(arrays, median_rank(q.length()), ledger, trace);
}

OnlineEngine::OnlineEngine(const Dataset& data, std::size_t k, ComparisonLedger& build_ledger,
                           std::size_t u_override)
    : data_(&data),
      build_ledger_(&build_ledger),
      adaptive_(false),
      guess_(std::max<std::size_t>(k, 1)),
      u_override_(u_override) {
  rebuild();
}

OnlineEngine::OnlineEngine(const Dataset& data, ComparisonLedger& build_ledger)
    : data_(&data), build_ledger_(&build_ledger), adaptive_(true), guess_(kInitialGuess) {
  rebuild();
}

void OnlineEngine::rebuild() {
  const std::size_t n = data_->size();
  const std::size_t u = u_override_ > 0 ? std::min(u_override_, n) : relaxation_for(guess_, n);
  tree_ = std::make_unique<MergeTree>(*data_, equal_decomposition(data_->size(), u), u,
                                      *build_ledger_);
  ++rebuilds_;
}

Element OnlineEngine::query_known_k(const QueryInterval& q, ComparisonLedger& ledger,
                                    QueryTrace* trace) const {
  const MergeTree& t = *tree_;
  check_query(data_->size(), q);
  const auto& b = t.decomposition().boundaries;
  const std::size_t first = t.leaf_of(q.l);
  const std::size_t last = t.leaf_of(q.r);

  // Aligned middle part (1-based inclusive [a, z]) and dangling fragments.
  std::size_t a = q.l;
  std::size_t z = q.r;
  std::vector<USortedArray> fragments;
  if (first == last) {
    if (q.l - 1 != b[first] || q.r != b[first + 1]) {
      fragments.push_back(u_sort(data_->slice(q.l, q.r), t.u(), ledger));
      a = 1;
      z = 0;
    }
  } else {
    if (q.l - 1 != b[first]) {
      fragments.push_back(u_sort(data_->slice(q.l, b[first + 1]), t.u(), ledger));
      a = b[first + 1] + 1;
    }
    if (q.r != b[last + 1]) {
      fragments.push_back(u_sort(data_->slice(b[last] + 1, q.r), t.u(), ledger));
      z = b[last];
    }
  }

  std::vector<const USortedArray*> arrays;
  std::vector<std::size_t> nodes;
  if (a <= z) nodes = t.canonical_cover({a, z});
  for (std::size_t id : nodes) arrays.push_back(&t.node(id).array);
  for (const USortedArray& f : fragments) arrays.push_back(&f);
  if (trace) {
    *trace = QueryTrace{};
    trace->cover_size = arrays.size();
    trace->covered = q.length();
    for (const USortedArray& f : fragments) {
      trace->dangling += f.size();
      trace->fragments_valid = trace->fragments_valid && validate_usorted(f);
    }
  }
  return trim_and_select(arrays, median_rank(q.length()), ledger, trace);
}

Element OnlineEngine::query(const QueryInterval& q, ComparisonLedger& ledger, QueryTrace* trace) {
  check_query(data_->size(), q);
  if (adaptive_ && answered_ >= guess_ && tree_->u() < data_->size()) {
    const std::size_t cap = std::numeric_limits<std::uint32_t>::max();
    guess_ = guess_ >= cap ? guess_ : guess_ * guess_;
    rebuild();
  }
  Element e = query_known_k(q, ledger, trace);
  ++answered_;
  return e;
}

Element query_online_known_k(const OnlineEngine& engine, const QueryInterval& q,
                             ComparisonLedger& ledger, QueryTrace* trace) {
  return engine.query_known_k(q, ledger, trace);
}

Element query_online(OnlineEngine& engine, const QueryInterval& q, ComparisonLedger& ledger,
                     QueryTrace* trace) {
  return engine.query(q, ledger, trace);
}

SortedMergeTree::SortedMergeTree(const Dataset& data, AtomicDecomposition decomposition,
                                 ComparisonLedger& ledger)
    : data_(&data), decomposition_(std::move(decomposition)) {
  if (data.empty()) throw ContractViolation("SortedMergeTree: empty dataset");
  nodes_.reserve(2 * decomposition_.count());
  root_ = build(0, decomposition_.count() - 1, ledger);
}

std::size_t SortedMergeTree::build(std::size_t first, std::size_t last, ComparisonLedger& ledger) {
  const auto& b = decomposition_.boundaries;
  Node node;
  node.lo = b[first];
  node.hi = b[last + 1];
  if (first == last) {
    const auto slice = data_->elements().subspan(node.lo, node.hi - node.lo);
    node.sorted.assign(slice.begin(), slice.end());
    counted_sort(node.sorted, ledger);
  } else {
    const std::size_t mid = first + (last - first) / 2;
    const std::size_t left = build(first, mid, ledger);
    const std::size_t right = build(mid + 1, last, ledger);
    node.left = static_cast<int>(left);
    node.right = static_cast<int>(right);
    node.sorted = merge_sorted(nodes_[left].sorted, nodes_[right].sorted, ledger);
  }
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void SortedMergeTree::cover(std::size_t id, std::size_t lo, std::size_t hi,
                            std::vector<std::size_t>& out) const {
  const Node& n = nodes_[id];
  if (hi <= n.lo || n.hi <= lo) return;
  if (lo <= n.lo && n.hi <= hi) {
    out.push_back(id);
    return;
  }
  cover(static_cast<std::size_t>(n.left), lo, hi, out);
  cover(static_cast<std::size_t>(n.right), lo, hi, out);
}

Element SortedMergeTree::query(const QueryInterval& q, ComparisonLedger& ledger) const {
  check_query(data_->size(), q);
  check_aligned(decomposition_, q);
  std::vector<std::size_t> ids;
  cover(root_, q.l - 1, q.r, ids);
  std::vector<SortedView> views;
  views.reserve(ids.size());
  for (std::size_t id : ids) views.push_back(SortedView::whole(nodes_[id].sorted));
  SelectOptions options;
  options.check_sorted = false;
  return select_from_sorted(views, median_rank(q.length()), ledger, options);
}

std::vector<Element> query_slow(const Dataset& data, std::span<const QueryInterval> queries,
                                ComparisonLedger& build_ledger,
                                std::span<ComparisonLedger> query_ledgers) {
  if (!query_ledgers.empty() && query_ledgers.size() != queries.size()) {
    throw ContractViolation("query_slow: ledger count does not match query count");
  }
  const SortedMergeTree tree(data, decompose(data.size(), queries), build_ledger);
  std::vector<Element> out;
  out.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    ComparisonLedger& ledger = query_ledgers.empty() ? build_ledger : query_ledgers[i];
    out.push_back(tree.query(queries[i], ledger));
  }
  return out;
}

}  // namespace rangemed
