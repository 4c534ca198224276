#include "rangemed/multi_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "rangemed/select.hpp"

namespace rangemed {
namespace {

// Samples per array per round scale with n_curr / (kSampleFactor * l).
constexpr std::size_t kSampleFactor = 32;

// A sorted (dense) or u-sorted (sparse) array with its active window. In a
// sparse run only marker positions are probed.
struct Run {
  std::span<const Element> data;
  std::span<const std::size_t> anchors;
  bool dense = true;
  std::size_t lo = 0;
  std::size_t hi = 0;

  [[nodiscard]] std::size_t len() const noexcept { return hi - lo; }
  [[nodiscard]] const Element& at(std::size_t offset) const { return data[lo + offset]; }
};

// Offsets (relative to the run's lo) kept after a round: [lo, hi).
struct Cut {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

struct Probe {
  std::size_t run = 0;
  std::size_t rep = 0;
};

enum class Verdict { below, above, straddles };

enum class Mode { basic, fast };

std::uint64_t pack(Probe p) { return (static_cast<std::uint64_t>(p.run) << 32) | p.rep; }
Probe unpack(std::uint64_t tag) {
  return {static_cast<std::size_t>(tag >> 32), static_cast<std::size_t>(tag & 0xffffffffu)};
}

class Pruner {
 public:
  Pruner(std::vector<Run> runs, std::size_t rank, ComparisonLedger& ledger,
         const SelectOptions& options)
      : runs_(std::move(runs)), k_(rank), ledger_(ledger), options_(options) {
    reps_.resize(runs_.size());
    cuts_.resize(runs_.size());
    counts_.resize(runs_.size());
    bound_lo_.resize(runs_.size());
    bound_hi_.resize(runs_.size());
    widest_.resize(runs_.size());
  }

  Element select_exact(Mode mode) {
    while (true) {
      const std::size_t n = active_total();
      const std::size_t arrays = active_arrays();
      if (n <= kSampleFactor * arrays) return finish_with_select();
      sample(n / (kSampleFactor * arrays), false);
      reset_cuts();
      const std::size_t need = (n + 7) / 8;
      if (mode == Mode::basic) {
        merging_round();
      } else {
        targeted_round(n);
        if (progress() < need) quartile_round();
        if (progress() < need) merging_round();
      }
      const std::size_t removed = apply_cuts(n, arrays);
      if (removed == 0 || (kDebugChecks && removed < need)) {
        throw std::logic_error("multi-array selection removed " + std::to_string(removed) + " of " +
                               std::to_string(n) + " elements in one round");
      }
    }
  }

  TrimResult trim() {
    bool exhaustive = false;
    while (true) {
      const std::size_t n = active_total();
      const std::size_t arrays = active_arrays();
      const std::size_t delta = exhaustive ? 1 : std::max<std::size_t>(1, n / (kSampleFactor * arrays));
      sample(delta, exhaustive);
      if (total_reps() == 0) break;
      reset_cuts();
      const std::size_t need = (n + 7) / 8;
      targeted_round(n);
      if (progress() < need) quartile_round();
      if (progress() < need) merging_round();
      const std::size_t removed = apply_cuts(n, arrays);
      if (removed == 0) {
        if (exhaustive) break;
        exhaustive = true;
      } else {
        exhaustive = false;
      }
    }
    TrimResult out;
    out.adjusted_rank = k_;
    for (const Run& r : runs_) out.sub_ranges.push_back({r.lo, r.hi});
    return out;
  }

 private:
  std::size_t active_total() const {
    std::size_t n = 0;
    for (const Run& r : runs_) n += r.len();
    return n;
  }

  std::size_t active_arrays() const {
    return static_cast<std::size_t>(
        std::count_if(runs_.begin(), runs_.end(), [](const Run& r) { return r.len() > 0; }));
  }

  std::size_t total_reps() const {
    std::size_t m = 0;
    for (const auto& r : reps_) m += r.size();
    return m;
  }

  Element finish_with_select() {
    std::vector<Element> pool;
    pool.reserve(active_total());
    for (const Run& r : runs_) pool.insert(pool.end(), r.data.begin() + static_cast<std::ptrdiff_t>(r.lo),
                                           r.data.begin() + static_cast<std::ptrdiff_t>(r.hi));
    if (options_.stats) options_.stats->final_select_size = pool.size();
    return select(pool, k_, ledger_);
  }

  // Chooses representatives: u_i - 1 equally spaced offsets with
  // u_i = 4 + ceil(len / delta), snapped to markers in sparse runs. In
  // exhaustive mode every probe-able position is a representative.
  void sample(std::size_t delta, bool exhaustive) {
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      const Run& r = runs_[i];
      auto& reps = reps_[i];
      reps.clear();
      const std::size_t len = r.len();
      if (len == 0) continue;
      std::size_t first_anchor = 0;
      std::size_t last_anchor = 0;
      if (!r.dense) {
        first_anchor = static_cast<std::size_t>(
            std::lower_bound(r.anchors.begin(), r.anchors.end(), r.lo) - r.anchors.begin());
        last_anchor = static_cast<std::size_t>(
            std::lower_bound(r.anchors.begin(), r.anchors.end(), r.hi) - r.anchors.begin());
        if (first_anchor == last_anchor) continue;
      }
      if (exhaustive) {
        if (r.dense) {
          for (std::size_t o = 0; o < len; ++o) reps.push_back(o);
        } else {
          for (std::size_t a = first_anchor; a < last_anchor; ++a) reps.push_back(r.anchors[a] - r.lo);
        }
        continue;
      }
      const std::size_t parts = 4 + (len + delta - 1) / delta;
      for (std::size_t j = 1; j < parts; ++j) {
        std::size_t offset = (j * len + parts - 1) / parts;
        if (offset >= len) break;
        if (!r.dense) {
          const auto begin = r.anchors.begin() + static_cast<std::ptrdiff_t>(first_anchor);
          const auto end = r.anchors.begin() + static_cast<std::ptrdiff_t>(last_anchor);
          auto it = std::lower_bound(begin, end, r.lo + offset);
          if (it == end || (it != begin && (r.lo + offset) - *(it - 1) < *it - (r.lo + offset))) --it;
          offset = *it - r.lo;
        }
        if (reps.empty() || reps.back() < offset) reps.push_back(offset);
      }
    }
  }

  // Largest block (run of unsampled positions) of each run, and their sum:
  // the widest a rank interval can be.
  std::size_t uncertainty() {
    std::size_t total = 0;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      const auto& reps = reps_[i];
      const std::size_t len = runs_[i].len();
      std::size_t widest = len;
      if (!reps.empty()) {
        widest = std::max(reps.front(), len - reps.back() - 1);
        for (std::size_t t = 1; t < reps.size(); ++t) widest = std::max(widest, reps[t] - reps[t - 1] - 1);
      }
      widest_[i] = widest;
      total += widest;
    }
    return total;
  }

  // Elements of run j certainly below / at most below a value that exceeds
  // exactly c of its representatives.
  std::size_t known_below(std::size_t j, std::size_t c) const {
    return c == 0 ? 0 : reps_[j][c - 1] + 1;
  }
  std::size_t possibly_below(std::size_t j, std::size_t c) const {
    return c == reps_[j].size() ? runs_[j].len() : reps_[j][c];
  }

  void reset_cuts() {
    for (std::size_t i = 0; i < runs_.size(); ++i) cuts_[i] = Cut{0, runs_[i].len()};
  }

  std::size_t progress() const {
    std::size_t p = 0;
    for (std::size_t i = 0; i < runs_.size(); ++i) p += cuts_[i].lo + (runs_[i].len() - cuts_[i].hi);
    return p;
  }

  std::size_t apply_cuts(std::size_t n, std::size_t arrays) {
    std::size_t removed = 0;
    std::size_t below = 0;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      Run& r = runs_[i];
      const Cut c = cuts_[i];
      if (c.lo > c.hi) throw std::logic_error("multi-array selection: crossing cuts");
      removed += c.lo + (r.len() - c.hi);
      below += c.lo;
      const std::size_t base = r.lo;
      r.lo = base + c.lo;
      r.hi = base + c.hi;
    }
    k_ -= below;
    if (options_.stats) options_.stats->levels.push_back({n, arrays, removed});
    return removed;
  }

  void cut_below(const Probe& x) {
    for (std::size_t j = 0; j < runs_.size(); ++j) {
      if (runs_[j].len() == 0) continue;
      const std::size_t keep_from = j == x.run ? reps_[j][x.rep] + 1 : known_below(j, counts_[j]);
      cuts_[j].lo = std::max(cuts_[j].lo, keep_from);
    }
  }

  void cut_above(const Probe& x) {
    for (std::size_t j = 0; j < runs_.size(); ++j) {
      if (runs_[j].len() == 0) continue;
      const std::size_t keep_to = j == x.run ? reps_[j][x.rep] : possibly_below(j, counts_[j]);
      cuts_[j].hi = std::min(cuts_[j].hi, keep_to);
    }
  }

  void audit(const Probe& x, std::size_t rank_lo, std::size_t rank_hi) const {
    if (!options_.audit_rank_intervals) return;
    const Element& e = runs_[x.run].at(reps_[x.run][x.rep]);
    std::size_t smaller = 0;
    for (const Run& r : runs_) {
      for (std::size_t p = r.lo; p < r.hi; ++p) smaller += uncounted_less(r.data[p], e) ? 1 : 0;
    }
    const std::size_t rank = smaller + 1;
    if (rank < rank_lo || rank > rank_hi) {
      throw std::logic_error("rank interval audit failed: rank " + std::to_string(rank) +
                             " outside [" + std::to_string(rank_lo) + ", " +
                             std::to_string(rank_hi) + "]");
    }
  }

  // Locates one representative among every other run's representatives by
  // binary search, bounds its rank, and tightens the cuts accordingly.
  Verdict probe(const Probe& x) {
    const std::size_t own = reps_[x.run][x.rep];
    const Element& e = runs_[x.run].at(own);
    std::size_t rank_lo = own + 1;
    std::size_t rank_hi = own + 1;
    for (std::size_t j = 0; j < runs_.size(); ++j) {
      if (j == x.run || runs_[j].len() == 0) continue;
      const auto& reps = reps_[j];
      std::size_t lo = 0;
      std::size_t hi = reps.size();
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (less(runs_[j].at(reps[mid]), e, ledger_)) {
          lo = mid + 1;
        } else {
          hi = mid;
        }
      }
      counts_[j] = lo;
      bound_lo_[j] = known_below(j, lo);
      bound_hi_[j] = possibly_below(j, lo);
      rank_lo += bound_lo_[j];
      rank_hi += bound_hi_[j];
    }
    bound_lo_[x.run] = own;
    bound_hi_[x.run] = own;
    audit(x, rank_lo, rank_hi);
    if (rank_hi < k_) {
      cut_below(x);
      return Verdict::below;
    }
    if (rank_lo > k_) {
      cut_above(x);
      return Verdict::above;
    }
    return Verdict::straddles;
  }

  // Representative of run i whose offset is closest to fraction * len.
  std::size_t nearest_rep(std::size_t i, double fraction) const {
    const auto& reps = reps_[i];
    const double want = fraction * static_cast<double>(runs_[i].len());
    const auto target = static_cast<std::size_t>(std::max(0.0, std::floor(want)));
    auto it = std::lower_bound(reps.begin(), reps.end(), target);
    if (it == reps.end()) return reps.size() - 1;
    if (it != reps.begin() &&
        want - static_cast<double>(*(it - 1)) < static_cast<double>(*it) - want) {
      --it;
    }
    return static_cast<std::size_t>(it - reps.begin());
  }

  // Pivots aimed a safety margin below and above the target rank: in every
  // array take the representative at the target's proportional position,
  // then the length-weighted median of those candidates.
  void targeted_round(std::size_t n) {
    const std::size_t margin = 2 * uncertainty();
    auto aim = [&](double fraction, bool low) {
      std::vector<detail::Weighted> candidates;
      std::uint64_t weight = 0;
      for (std::size_t i = 0; i < runs_.size(); ++i) {
        if (reps_[i].empty()) continue;
        const Probe p{i, nearest_rep(i, fraction)};
        candidates.push_back({runs_[i].at(reps_[i][p.rep]), runs_[i].len(), pack(p)});
        weight += runs_[i].len();
      }
      if (candidates.empty()) return;
      const std::size_t pos = detail::weighted_select_in_place(
          std::span<detail::Weighted>(candidates), (weight + 1) / 2, ledger_);
      if (probe(unpack(candidates[pos].tag)) == Verdict::straddles) step_away(low);
    };
    if (k_ > margin + 1) aim(static_cast<double>(k_ - 1 - margin) / static_cast<double>(n), true);
    if (k_ + margin < n) aim(static_cast<double>(k_ + margin) / static_cast<double>(n), false);
  }

  // Follows a probe whose rank interval held the target. Every run offers
  // the representative about `factor` blocks past that probe's split point
  // (below it when `low`), weighted by that distance; the weighted median of
  // the offers clears the probe's rank interval unless too few runs can
  // offer one, in which case the distance doubles.
  void step_away(bool low) {
    const std::vector<std::size_t> split_lo = bound_lo_;
    const std::vector<std::size_t> split_hi = bound_hi_;
    std::vector<detail::Weighted> offers;
    for (std::size_t factor = 2; factor <= 16; factor *= 2) {
      offers.clear();
      std::uint64_t weight = 0;
      for (std::size_t j = 0; j < runs_.size(); ++j) {
        const auto& reps = reps_[j];
        if (reps.empty()) continue;
        const std::size_t d = factor * (widest_[j] + 1);
        std::size_t s = 0;
        if (low) {
          if (split_lo[j] < d + 1) continue;
          const auto it = std::upper_bound(reps.begin(), reps.end(), split_lo[j] - 1 - d);
          if (it == reps.begin()) continue;
          s = static_cast<std::size_t>(it - reps.begin()) - 1;
        } else {
          const auto it = std::lower_bound(reps.begin(), reps.end(), split_hi[j] + d);
          if (it == reps.end()) continue;
          s = static_cast<std::size_t>(it - reps.begin());
        }
        offers.push_back({runs_[j].at(reps[s]), d, pack({j, s})});
        weight += d;
      }
      if (offers.empty()) return;
      const std::size_t pos = detail::weighted_select_in_place(std::span<detail::Weighted>(offers),
                                                               (weight + 1) / 2, ledger_);
      if (probe(unpack(offers[pos].tag)) != Verdict::straddles) return;
    }
  }

  // Pooled-sample median; if its rank interval holds the target, the first
  // and third quartiles of the pool instead.
  void quartile_round() {
    std::vector<detail::Weighted> pool;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      for (std::size_t t = 0; t < reps_[i].size(); ++t) {
        pool.push_back({runs_[i].at(reps_[i][t]), 0, pack({i, t})});
      }
    }
    if (pool.empty()) return;
    std::span<detail::Weighted> all(pool);
    const std::size_t mid = (pool.size() - 1) / 2;
    detail::select_in_place(all, mid, ledger_);
    if (probe(unpack(pool[mid].tag)) != Verdict::straddles) return;
    const std::size_t q1 = pool.size() / 4;
    const std::size_t q3 = (3 * pool.size()) / 4;
    std::optional<Probe> low;
    std::optional<Probe> high;
    if (q1 < mid) {
      detail::select_in_place(all.first(mid), q1, ledger_);
      low = unpack(pool[q1].tag);
    }
    if (q3 > mid) {
      detail::select_in_place(all.subspan(mid + 1), q3 - mid - 1, ledger_);
      high = unpack(pool[q3].tag);
    }
    if (low) probe(*low);
    if (high) probe(*high);
  }

  // Merges all representative lists and bounds every representative's rank
  // in one sweep. The last one certainly below the target and the first one
  // certainly above it determine the cuts.
  void merging_round() {
    std::vector<std::vector<Probe>> lists;
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      if (reps_[i].empty()) continue;
      std::vector<Probe> list;
      for (std::size_t t = 0; t < reps_[i].size(); ++t) list.push_back({i, t});
      lists.push_back(std::move(list));
    }
    if (lists.empty()) return;
    auto value = [&](const Probe& p) -> const Element& { return runs_[p.run].at(reps_[p.run][p.rep]); };
    while (lists.size() > 1) {
      std::vector<std::vector<Probe>> next;
      for (std::size_t a = 0; a + 1 < lists.size(); a += 2) {
        const auto& x = lists[a];
        const auto& y = lists[a + 1];
        std::vector<Probe> merged;
        merged.reserve(x.size() + y.size());
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < x.size() && j < y.size()) {
          if (less(value(y[j]), value(x[i]), ledger_)) {
            merged.push_back(y[j++]);
          } else {
            merged.push_back(x[i++]);
          }
        }
        merged.insert(merged.end(), x.begin() + static_cast<std::ptrdiff_t>(i), x.end());
        merged.insert(merged.end(), y.begin() + static_cast<std::ptrdiff_t>(j), y.end());
        next.push_back(std::move(merged));
      }
      if (lists.size() % 2 == 1) next.push_back(std::move(lists.back()));
      lists = std::move(next);
    }
    const std::vector<Probe>& merged = lists.front();

    std::fill(counts_.begin(), counts_.end(), 0);
    std::size_t sum_known = 0;
    std::size_t sum_possible = 0;
    for (std::size_t j = 0; j < runs_.size(); ++j) {
      if (runs_[j].len() > 0) sum_possible += possibly_below(j, 0);
    }
    std::optional<std::size_t> last_below;
    std::optional<std::size_t> first_above;
    for (std::size_t pos = 0; pos < merged.size(); ++pos) {
      const Probe& x = merged[pos];
      const std::size_t own = reps_[x.run][x.rep];
      const std::size_t c = counts_[x.run];  // == x.rep
      const std::size_t rank_lo = 1 + sum_known - known_below(x.run, c) + own;
      const std::size_t rank_hi = 1 + sum_possible;  // own term equals `own`
      audit(x, rank_lo, rank_hi);
      if (rank_hi < k_) last_below = pos;
      if (rank_lo > k_ && !first_above) first_above = pos;
      sum_known += known_below(x.run, c + 1) - known_below(x.run, c);
      sum_possible += possibly_below(x.run, c + 1) - possibly_below(x.run, c);
      counts_[x.run] = c + 1;
    }
    auto counts_before = [&](std::size_t stop) {
      std::fill(counts_.begin(), counts_.end(), 0);
      for (std::size_t pos = 0; pos < stop; ++pos) ++counts_[merged[pos].run];
    };
    if (last_below) {
      counts_before(*last_below);
      cut_below(merged[*last_below]);
    }
    if (first_above) {
      counts_before(*first_above);
      cut_above(merged[*first_above]);
    }
  }

  std::vector<Run> runs_;
  std::size_t k_;
  ComparisonLedger& ledger_;
  const SelectOptions& options_;
  std::vector<std::vector<std::size_t>> reps_;
  std::vector<Cut> cuts_;
  std::vector<std::size_t> counts_;
  // Split of the last probed element in every run: elements at offsets
  // below bound_lo_ are smaller, those at bound_hi_ and beyond are larger.
  std::vector<std::size_t> bound_lo_;
  std::vector<std::size_t> bound_hi_;
  std::vector<std::size_t> widest_;
};

std::vector<Run> runs_from_views(std::span<const SortedView> views, std::size_t rank,
                                 const SelectOptions& options) {
  std::vector<Run> runs;
  std::size_t total = 0;
  for (const SortedView& v : views) {
    if (v.lo > v.hi || v.hi > v.source.size()) {
      throw ContractViolation("select_from_sorted: view range out of bounds");
    }
    if (options.check_sorted) {
      for (std::size_t p = v.lo + 1; p < v.hi; ++p) {
        if (!uncounted_less(v.source[p - 1], v.source[p])) {
          throw ContractViolation("select_from_sorted: view is not sorted");
        }
      }
    }
    runs.push_back(Run{v.source, {}, true, v.lo, v.hi});
    total += v.size();
  }
  if (rank < 1 || rank > total) {
    throw ContractViolation("select_from_sorted: rank " + std::to_string(rank) + " outside [1, " +
                            std::to_string(total) + "]");
  }
  return runs;
}

}  // namespace

Element select_from_sorted(std::span<const SortedView> views, std::size_t rank,
                           ComparisonLedger& ledger, const SelectOptions& options) {
  Pruner pruner(runs_from_views(views, rank, options), rank, ledger, options);
  return pruner.select_exact(Mode::basic);
}

Element select_from_sorted_fast(std::span<const SortedView> views, std::size_t rank,
                                ComparisonLedger& ledger, const SelectOptions& options) {
  Pruner pruner(runs_from_views(views, rank, options), rank, ledger, options);
  return pruner.select_exact(Mode::fast);
}

TrimResult trim_usorted(std::span<const USortedArray* const> arrays, std::size_t rank,
                        ComparisonLedger& ledger, const SelectOptions& options) {
  if (arrays.empty()) throw ContractViolation("trim_usorted: no arrays");
  std::vector<Run> runs;
  std::size_t total = 0;
  const std::size_t u = arrays.front()->u;
  for (const USortedArray* a : arrays) {
    if (a->u != u) throw ContractViolation("trim_usorted: arrays disagree on u");
    runs.push_back(Run{a->data, a->markers, false, 0, a->size()});
    total += a->size();
  }
  if (rank < 1 || rank > total) {
    throw ContractViolation("trim_usorted: rank " + std::to_string(rank) + " outside [1, " +
                            std::to_string(total) + "]");
  }
  Pruner pruner(std::move(runs), rank, ledger, options);
  return pruner.trim();
}

}  // namespace rangemed
