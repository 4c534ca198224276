#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rangemed/usorted.hpp"

using namespace rangemed;

namespace {

std::vector<Element> random_elements(std::size_t n, std::mt19937_64& rng, std::int64_t range,
                                     std::int64_t first_index = 0) {
  std::uniform_int_distribution<std::int64_t> d(0, range);
  std::vector<Element> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({double(d(rng)), first_index + std::int64_t(i)});
  return out;
}

std::vector<Element> sorted_copy(std::vector<Element> v) {
  std::sort(v.begin(), v.end(), uncounted_less);
  return v;
}

bool is_sorted(const std::vector<Element>& v) { return std::is_sorted(v.begin(), v.end(), uncounted_less); }

std::size_t max_gap(const USortedArray& x) {
  std::size_t prev = 0;
  std::size_t widest = 0;
  for (std::size_t m : x.markers) {
    widest = std::max(widest, m - prev);
    prev = m + 1;
  }
  return std::max(widest, x.size() - prev);
}

std::uint64_t log2_ceil(std::uint64_t u) {
  std::uint64_t b = 0;
  while ((std::uint64_t{1} << b) < u) ++b;
  return b;
}

}  // namespace

TEST_CASE("u = 1 leaves the array as one segment") {
  std::mt19937_64 rng(1);
  ComparisonLedger ledger;
  const auto x = u_sort(random_elements(16, rng, 100), 1, ledger);
  CHECK(x.markers.size() <= 1);
  CHECK(validate_usorted(x));
}

TEST_CASE("u >= |X| sorts fully") {
  std::mt19937_64 rng(2);
  for (std::size_t u : {16u, 17u, 1000u}) {
    const auto input = random_elements(16, rng, 5);
    ComparisonLedger ledger;
    const auto x = u_sort(input, u, ledger);
    CHECK(is_sorted(x.data));
    CHECK(x.fully_marked());
    CHECK(validate_usorted(x));
  }
}

TEST_CASE("u_sort of 1000 random elements with u = 10") {
  std::mt19937_64 rng(3);
  ComparisonLedger ledger;
  const auto x = u_sort(random_elements(1000, rng, 1'000'000), 10, ledger);
  CHECK(validate_usorted(x));
  CHECK(max_gap(x) <= 100);
}

TEST_CASE("u_sort contract") {
  ComparisonLedger ledger;
  std::vector<Element> one{{1.0, 0}};
  CHECK_THROWS_AS((void)u_sort(one, 0, ledger), ContractViolation);
  CHECK_THROWS_AS((void)u_sort(std::span<const Element>(), 3, ledger), ContractViolation);
}

TEST_CASE("u_sort keeps the multiset, validates and meets its budget") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3000)(rng);
    const std::size_t u = std::uniform_int_distribution<std::size_t>(1, 400)(rng);
    const auto input = random_elements(n, rng, t % 2 ? 10 : 1'000'000);
    ComparisonLedger ledger;
    const auto x = u_sort(input, u, ledger);
    REQUIRE(validate_usorted(x));
    CHECK(sorted_copy(x.data) == sorted_copy(input));
    CHECK(max_gap(x) <= x.segment_limit());
    CHECK(ledger.count() <= 24 * n * (1 + log2_ceil(u)));
  }
}

TEST_CASE("merging singletons without markers gives a sorted pair") {
  USortedArray a{{{2.0, 0}}, {}, 2};
  USortedArray b{{{1.0, 1}}, {}, 2};
  REQUIRE(validate_usorted(a));
  ComparisonLedger ledger;
  const auto z = merge_usorted(a, b, ledger);
  CHECK(validate_usorted(z));
  CHECK(is_sorted(z.data));
  CHECK(z.data.size() == 2);
}

TEST_CASE("merging two interleaved copies of 1..100 with u = 5") {
  std::mt19937_64 rng(5);
  std::vector<Element> xs;
  std::vector<Element> ys;
  for (int i = 1; i <= 100; ++i) {
    xs.push_back({double(i), i - 1});
    ys.push_back({double(i), 100 + i - 1});
  }
  std::shuffle(xs.begin(), xs.end(), rng);
  std::shuffle(ys.begin(), ys.end(), rng);
  ComparisonLedger ledger;
  const auto x = u_sort(xs, 5, ledger);
  const auto y = u_sort(ys, 5, ledger);
  const auto z = merge_usorted(x, y, ledger);
  CHECK(z.size() == 200);
  CHECK(validate_usorted(z));
  CHECK(z.markers.size() <= 2 * 5 + 1);
}

TEST_CASE("500 random merges keep all invariants and the budget") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 500; ++t) {
    const std::size_t u = std::uniform_int_distribution<std::size_t>(1, 300)(rng);
    const std::size_t nx = std::uniform_int_distribution<std::size_t>(1, 2000)(rng);
    const std::size_t ny = std::uniform_int_distribution<std::size_t>(1, 2000)(rng);
    const std::int64_t range = t % 3 == 0 ? 4 : 1'000'000;
    const auto xs = random_elements(nx, rng, range);
    const auto ys = random_elements(ny, rng, range, std::int64_t(nx));
    ComparisonLedger build;
    const auto x = u_sort(xs, u, build);
    const auto y = u_sort(ys, u, build);
    ComparisonLedger ledger;
    const auto z = merge_usorted(x, y, ledger);
    REQUIRE(validate_usorted(z));
    CHECK(z.markers.size() <= 2 * u + 1);
    CHECK(max_gap(z) <= z.segment_limit());
    CHECK(ledger.count() <= 64 * (nx + ny));
    auto all = xs;
    all.insert(all.end(), ys.begin(), ys.end());
    CHECK(sorted_copy(z.data) == sorted_copy(all));
  }
}

TEST_CASE("repeated merges up a tree stay valid") {
  std::mt19937_64 rng(7);
  const std::size_t u = 64;
  std::vector<USortedArray> level;
  std::int64_t next = 0;
  for (int i = 0; i < 32; ++i) {
    const auto part = random_elements(150, rng, 1000, next);
    next += 150;
    ComparisonLedger ledger;
    level.push_back(u_sort(part, u, ledger));
  }
  while (level.size() > 1) {
    std::vector<USortedArray> up;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      ComparisonLedger ledger;
      up.push_back(merge_usorted(level[i], level[i + 1], ledger));
      REQUIRE(validate_usorted(up.back()));
      CHECK(up.back().markers.size() <= 2 * u + 1);
    }
    level = std::move(up);
  }
}

TEST_CASE("merge contract") {
  ComparisonLedger ledger;
  USortedArray a{{{1.0, 0}}, {0}, 2};
  USortedArray b{{{2.0, 1}}, {0}, 3};
  CHECK_THROWS_AS((void)merge_usorted(a, b, ledger), ContractViolation);
}

TEST_CASE("validator accepts sorted arrays and rejects misplaced markers") {
  USortedArray sorted{{{1, 0}, {2, 1}, {3, 2}, {4, 3}}, {0, 1, 2, 3}, 4};
  CHECK(validate_usorted(sorted));

  USortedArray bad{{{5, 0}, {1, 1}, {7, 2}, {9, 3}}, {1}, 2};
  CHECK_FALSE(validate_usorted(bad));

  USortedArray long_gap{{{1, 0}, {2, 1}, {3, 2}, {4, 3}}, {}, 2};
  CHECK_FALSE(validate_usorted(long_gap));

  USortedArray out_of_range{{{1, 0}, {2, 1}}, {2}, 1};
  CHECK_FALSE(validate_usorted(out_of_range));

  USortedArray too_many{std::vector<Element>(50, Element{0, 0}), {}, 1};
  for (std::size_t i = 0; i < 50; ++i) {
    too_many.data[i] = {double(i), std::int64_t(i)};
    too_many.markers.push_back(i);
  }
  CHECK_FALSE(validate_usorted(too_many));
}

TEST_CASE("marker ranks") {
  USortedArray sorted{{{10, 0}, {20, 1}, {30, 2}}, {0, 1, 2}, 3};
  const auto r = marker_ranks(sorted);
  REQUIRE(r.size() == 3);
  CHECK(r[0].rank == 1);
  CHECK(r[1].rank == 2);
  CHECK(r[2].rank == 3);

  USortedArray x{{{3, 0}, {1, 1}, {2, 2}, {0, 3}, {5, 4}, {7, 5}, {6, 6}}, {4}, 2};
  REQUIRE(validate_usorted(x));
  CHECK(marker_ranks(x).front().rank == 5);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    ComparisonLedger ledger;
    const auto y = u_sort(random_elements(500, rng, 50), 20, ledger);
    for (const MarkerRank& m : marker_ranks(y)) {
      const auto smaller = std::count_if(y.data.begin(), y.data.end(),
                                         [&](const Element& e) { return uncounted_less(e, m.element); });
      CHECK(m.rank == std::size_t(smaller) + 1);
    }
  }
}
