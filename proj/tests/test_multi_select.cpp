#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rangemed/multi_select.hpp"
#include "rangemed/select.hpp"

using namespace rangemed;

namespace {

struct Instance {
  std::vector<std::vector<Element>> arrays;
  std::vector<Element> all;  // sorted union
  std::vector<SortedView> views() const {
    std::vector<SortedView> v;
    for (const auto& a : arrays) v.push_back(SortedView::whole(a));
    return v;
  }
};

Instance random_split(std::size_t n, std::size_t l, std::mt19937_64& rng, std::int64_t range) {
  Instance inst;
  inst.arrays.resize(l);
  std::uniform_int_distribution<std::int64_t> value(0, range);
  std::uniform_int_distribution<std::size_t> which(0, l - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Element e{double(value(rng)), std::int64_t(i)};
    inst.arrays[which(rng)].push_back(e);
    inst.all.push_back(e);
  }
  for (auto& a : inst.arrays) std::sort(a.begin(), a.end(), uncounted_less);
  std::sort(inst.all.begin(), inst.all.end(), uncounted_less);
  return inst;
}

std::vector<Element> values(std::initializer_list<double> vs, std::int64_t first_index) {
  std::vector<Element> out;
  for (double v : vs) out.push_back({v, first_index++});
  return out;
}

SelectOptions audited(SelectStats* stats = nullptr) {
  SelectOptions o;
  o.check_sorted = true;
  o.audit_rank_intervals = true;
  o.stats = stats;
  return o;
}

}  // namespace

TEST_CASE("single array") {
  std::vector<Element> a;
  for (int i = 1; i <= 100; ++i) a.push_back({double(i), i - 1});
  const std::vector<SortedView> v{SortedView::whole(a)};
  ComparisonLedger ledger;
  CHECK(select_from_sorted(v, 50, ledger, audited()).value == 50);
  CHECK(select_from_sorted_fast(v, 50, ledger, audited()).value == 50);
}

TEST_CASE("two interleaved arrays") {
  const auto a = values({1, 3, 5, 7}, 0);
  const auto b = values({2, 4, 6, 8}, 4);
  const std::vector<SortedView> v{SortedView::whole(a), SortedView::whole(b)};
  ComparisonLedger ledger;
  CHECK(select_from_sorted(v, 5, ledger).value == 5);
  CHECK(select_from_sorted_fast(v, 5, ledger).value == 5);
}

TEST_CASE("two singletons") {
  const auto a = values({1}, 0);
  const auto b = values({2}, 1);
  const std::vector<SortedView> v{SortedView::whole(a), SortedView::whole(b)};
  ComparisonLedger ledger;
  CHECK(select_from_sorted_fast(v, 2, ledger).value == 2);
  CHECK(select_from_sorted(v, 2, ledger).value == 2);
}

TEST_CASE("partial views and empty views") {
  const auto a = values({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0);
  const auto b = values({0.5, 100}, 10);
  const std::vector<SortedView> v{{a, 2, 6}, {b, 0, 0}, {b, 1, 2}};
  ComparisonLedger ledger;
  // union is {3, 4, 5, 6, 100}
  CHECK(select_from_sorted(v, 4, ledger).value == 6);
  CHECK(select_from_sorted_fast(v, 5, ledger).value == 100);
}

TEST_CASE("contract violations") {
  const auto a = values({1, 2, 3}, 0);
  const auto unsorted = values({3, 1, 2}, 3);
  ComparisonLedger ledger;
  const std::vector<SortedView> ok{SortedView::whole(a)};
  CHECK_THROWS_AS((void)select_from_sorted(ok, 0, ledger), ContractViolation);
  CHECK_THROWS_AS((void)select_from_sorted(ok, 4, ledger), ContractViolation);
  CHECK_THROWS_AS((void)select_from_sorted_fast(ok, 4, ledger), ContractViolation);
  const std::vector<SortedView> bad{SortedView::whole(unsorted)};
  SelectOptions checking;
  checking.check_sorted = true;
  CHECK_THROWS_AS((void)select_from_sorted(bad, 1, ledger, checking), ContractViolation);
  const std::vector<SortedView> out_of_bounds{{a, 1, 5}};
  CHECK_THROWS_AS((void)select_from_sorted(out_of_bounds, 1, ledger), ContractViolation);
}

TEST_CASE("exhaustive ranks for small totals over random splits") {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 64; ++n) {
    for (int t = 0; t < 4; ++t) {
      const std::size_t l = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(n, 12))(rng);
      const Instance inst = random_split(n, l, rng, t % 2 ? 3 : 1000);
      const auto v = inst.views();
      for (std::size_t r = 1; r <= n; ++r) {
        ComparisonLedger ledger;
        REQUIRE(select_from_sorted(v, r, ledger, audited()) == inst.all[r - 1]);
        REQUIRE(select_from_sorted_fast(v, r, ledger, audited()) == inst.all[r - 1]);
      }
    }
  }
}

TEST_CASE("variants agree on 300 random instances and rank intervals are sound") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 10000)(rng);
    const std::size_t l = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
    const Instance inst = random_split(n, l, rng, t % 3 ? 1'000'000 : 20);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    const auto v = inst.views();
    ComparisonLedger ledger;
    SelectOptions o = audited();
    o.audit_rank_intervals = n <= 3000;
    const Element basic = select_from_sorted(v, r, ledger, o);
    const Element fast = select_from_sorted_fast(v, r, ledger, o);
    CHECK(basic == inst.all[r - 1]);
    CHECK(fast == basic);
  }
}

TEST_CASE("randomized correctness up to 10^5 elements") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {20000u, 60000u, 100000u}) {
    for (std::size_t l : {3u, 40u, 300u}) {
      const Instance inst = random_split(n, l, rng, 1'000'000);
      const auto v = inst.views();
      for (std::size_t r : {std::size_t{1}, n / 4, n / 2, n}) {
        ComparisonLedger ledger;
        CHECK(select_from_sorted(v, r, ledger) == inst.all[r - 1]);
        CHECK(select_from_sorted_fast(v, r, ledger) == inst.all[r - 1]);
      }
    }
  }
}

TEST_CASE("every round above the threshold removes at least an eighth") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(500, 50000)(rng);
    const std::size_t l = std::uniform_int_distribution<std::size_t>(1, 64)(rng);
    const Instance inst = random_split(n, l, rng, 1'000'000);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    for (bool fast : {false, true}) {
      SelectStats stats;
      SelectOptions o;
      o.stats = &stats;
      ComparisonLedger ledger;
      const auto v = inst.views();
      const Element e = fast ? select_from_sorted_fast(v, r, ledger, o) : select_from_sorted(v, r, ledger, o);
      CHECK(e == inst.all[r - 1]);
      for (const LevelRecord& level : stats.levels) {
        CHECK(level.active > 32 * level.arrays);
        CHECK(level.discarded >= (level.active + 7) / 8);
      }
    }
  }
}

TEST_CASE("fast variant is cheaper than basic for 64 arrays of 2^16 total") {
  std::mt19937_64 rng(5);
  double fast_total = 0;
  double basic_total = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const Instance inst = random_split(std::size_t{1} << 16, 64, rng, 1'000'000'000);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, inst.all.size())(rng);
    const auto v = inst.views();
    ComparisonLedger a;
    ComparisonLedger b;
    CHECK(select_from_sorted_fast(v, r, a) == select_from_sorted(v, r, b));
    fast_total += double(a.count());
    basic_total += double(b.count());
  }
  CHECK(fast_total / basic_total < 1.0);
}

TEST_CASE("trim on fully sorted arrays is exact up to two elements per array") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t l = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(l, 2000)(rng);
    Instance inst = random_split(n, l, rng, 1000);
    std::vector<USortedArray> arrays;
    std::vector<const USortedArray*> ptrs;
    for (const auto& a : inst.arrays) {
      if (a.empty()) continue;
      ComparisonLedger ledger;
      arrays.push_back(u_sort(a, n, ledger));
    }
    for (const auto& a : arrays) ptrs.push_back(&a);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    ComparisonLedger ledger;
    const TrimResult res = trim_usorted(ptrs, r, ledger, audited());
    std::vector<Element> pool;
    for (std::size_t i = 0; i < ptrs.size(); ++i) {
      const SubRange s = res.sub_ranges[i];
      pool.insert(pool.end(), ptrs[i]->data.begin() + std::ptrdiff_t(s.lo), ptrs[i]->data.begin() + std::ptrdiff_t(s.hi));
    }
    CHECK(pool.size() <= 2 * ptrs.size());
    REQUIRE(res.adjusted_rank >= 1);
    REQUIRE(res.adjusted_rank <= pool.size());
    CHECK(select(pool, res.adjusted_rank, ledger) == inst.all[r - 1]);
  }
}

TEST_CASE("trim keeps the answer and meets the candidate bound") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t l = t == 0 ? 4 : std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const std::size_t per = t == 0 ? 1000 : std::uniform_int_distribution<std::size_t>(1, 3000)(rng);
    const std::size_t u = t == 0 ? 100 : std::uniform_int_distribution<std::size_t>(1, 500)(rng);
    std::vector<std::vector<Element>> parts(l);
    std::vector<Element> all;
    std::uniform_int_distribution<std::int64_t> value(0, t % 4 == 0 ? 5 : 1'000'000);
    for (auto& p : parts) {
      const std::size_t len = std::uniform_int_distribution<std::size_t>(1, per)(rng);
      for (std::size_t i = 0; i < len; ++i) {
        p.push_back({double(value(rng)), std::int64_t(all.size())});
        all.push_back(p.back());
      }
    }
    std::sort(all.begin(), all.end(), uncounted_less);
    std::vector<USortedArray> arrays;
    for (const auto& p : parts) {
      ComparisonLedger ledger;
      arrays.push_back(u_sort(p, u, ledger));
    }
    std::vector<const USortedArray*> ptrs;
    for (const auto& a : arrays) ptrs.push_back(&a);
    const std::size_t n = all.size();
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    ComparisonLedger ledger;
    SelectOptions o = audited();
    o.audit_rank_intervals = n <= 5000;
    const TrimResult res = trim_usorted(ptrs, r, ledger, o);
    std::vector<Element> pool;
    for (std::size_t i = 0; i < l; ++i) {
      const SubRange s = res.sub_ranges[i];
      pool.insert(pool.end(), arrays[i].data.begin() + std::ptrdiff_t(s.lo), arrays[i].data.begin() + std::ptrdiff_t(s.hi));
    }
    const Element answer = all[r - 1];
    CHECK(std::find(pool.begin(), pool.end(), answer) != pool.end());
    CHECK(double(pool.size()) <= 4.0 * double(l) * double(n) / double(u) + 2.0 * double(l));
    REQUIRE(res.adjusted_rank >= 1);
    REQUIRE(res.adjusted_rank <= pool.size());
    CHECK(select(pool, res.adjusted_rank, ledger) == answer);
  }
}

TEST_CASE("trim contract") {
  ComparisonLedger ledger;
  std::vector<const USortedArray*> none;
  CHECK_THROWS_AS((void)trim_usorted(none, 1, ledger), ContractViolation);
  const USortedArray a{{{1, 0}, {2, 1}}, {0, 1}, 2};
  const USortedArray b{{{3, 2}}, {0}, 1};
  const std::vector<const USortedArray*> mixed{&a, &b};
  CHECK_THROWS_AS((void)trim_usorted(mixed, 1, ledger), ContractViolation);
  const std::vector<const USortedArray*> one{&a};
  CHECK_THROWS_AS((void)trim_usorted(one, 3, ledger), ContractViolation);
}
