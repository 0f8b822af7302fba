#include "stashplan/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <thread>

namespace stashplan {

namespace {

double gradient_between(const ViableEntry& a, const ViableEntry& b) {
  return (b.benefit - a.benefit) / (b.price - a.price);
}

// The "gradient > 0" test of Algorithm 1/2, with a relative guard against
// sign flips when two benefits are equal up to floating noise.
bool positive_gain(double benefit_from, double benefit_to) {
  return benefit_to - benefit_from >
         kGradientZeroEps * (std::abs(benefit_from) + std::abs(benefit_to));
}

}  // namespace

ViableList::ViableList(std::vector<ViableEntry> entries) : entries_(std::move(entries)) {}

void ViableList::validate() const {
  if (entries_.empty()) throw ValidationError("viable list: must not be empty");
  if (entries_[0].price != 0) throw ValidationError("viable list: entry 0 must have price 0");
  double prev_gradient = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const ViableEntry& a = entries_[i - 1];
    const ViableEntry& b = entries_[i];
    if (!(b.price > a.price)) throw ValidationError("viable list: prices must increase strictly");
    if (!(b.benefit > a.benefit)) {
      throw ValidationError("viable list: benefits must increase strictly");
    }
    const double g = gradient_between(a, b);
    if (!(g < prev_gradient)) {
      throw ValidationError("viable list: gradients must decrease strictly");
    }
    prev_gradient = g;
  }
}

ViableList set_viable_options(std::span<const OptionPoint> points) {
  if (points.empty()) throw std::invalid_argument("set_viable_options: no options");

  // Sort option indices by price; equal prices keep only the highest
  // benefit (ties by lower option index, so the baseline beats a free no-op).
  std::vector<std::uint32_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (points[a].price != points[b].price) return points[a].price < points[b].price;
    if (points[a].benefit != points[b].benefit) return points[a].benefit > points[b].benefit;
    return a < b;
  });

  std::vector<std::uint32_t> kept;
  kept.reserve(order.size());
  for (std::uint32_t idx : order) {
    if (!kept.empty() && points[kept.back()].price == points[idx].price) continue;
    kept.push_back(idx);
  }
  if (points[kept.front()].price != 0) {
    throw std::invalid_argument("set_viable_options: options must include a zero-price baseline");
  }

  // Walk the upper hull: from the current point, hop to the option whose
  // connecting segment has the steepest slope; on equal slopes prefer the
  // farthest option so collinear interior points drop out. Stop when the
  // best slope is no longer positive.
  std::vector<ViableEntry> entries;
  std::size_t curr = 0;
  entries.push_back({kept[0], points[kept[0]].price, points[kept[0]].benefit});
  while (true) {
    double max_gradient = -std::numeric_limits<double>::infinity();
    std::size_t next = curr;
    for (std::size_t j = curr + 1; j < kept.size(); ++j) {
      const double dp = points[kept[j]].price - points[kept[curr]].price;
      const double db = points[kept[j]].benefit - points[kept[curr]].benefit;
      const double g = db / dp;
      if (g >= max_gradient) {
        max_gradient = g;
        next = j;
      }
    }
    if (next == curr ||
        !positive_gain(points[kept[curr]].benefit, points[kept[next]].benefit)) {
      break;
    }
    curr = next;
    entries.push_back({kept[curr], points[kept[curr]].price, points[kept[curr]].benefit});
  }
  return ViableList(std::move(entries));
}

ViableList set_viable_options(const ItemStats& k, const PlacementEvaluator& eval) {
  std::vector<OptionPoint> points(eval.option_count());
  for (std::size_t o = 0; o < points.size(); ++o) {
    points[o] = {eval.price(o, k), eval.benefit(o, k)};
  }
  return set_viable_options(points);
}

double upgrade_gradient(const ViableList& v) {
  if (v.at_end()) return -std::numeric_limits<double>::infinity();
  return gradient_between(v.current(), v.next());
}

std::vector<PlacementOption> enumerate_options(const PolicySet& policy) {
  {
    std::vector<std::string> ids = policy.stash_ids;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw ValidationError("policy: stash_ids must be distinct");
    }
  }

  std::vector<PlacementOption> options;
  switch (policy.kind) {
    case PolicySet::Kind::tiering:
      options.emplace_back();
      for (const auto& id : policy.stash_ids) {
        options.emplace_back(std::vector<std::string>{id});
      }
      break;
    case PolicySet::Kind::optional_replication: {
      if (policy.stash_ids.size() > 16) {
        throw ValidationError("policy: optional_replication supports at most 16 stashes");
      }
      const std::size_t m = policy.stash_ids.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<std::string> ids;
        for (std::size_t b = 0; b < m; ++b) {
          if (mask & (std::size_t{1} << b)) ids.push_back(policy.stash_ids[b]);
        }
        options.emplace_back(std::move(ids));
      }
      break;
    }
    case PolicySet::Kind::forced_replication: {
      if (policy.stash_ids.size() != 2) {
        throw ValidationError(
            "policy: forced_replication takes exactly two stashes (slow first, fast second)");
      }
      const std::string& slow = policy.stash_ids[0];
      const std::string& fast = policy.stash_ids[1];
      options.emplace_back();
      options.emplace_back(std::vector<std::string>{slow});
      options.emplace_back(std::vector<std::string>{slow, fast});
      break;
    }
    case PolicySet::Kind::custom: {
      options = policy.custom_options;
      const bool has_empty =
          std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); });
      if (!has_empty) {
        throw ValidationError("policy: custom option list must include the empty placement");
      }
      break;
    }
  }
  std::sort(options.begin(), options.end(), canonical_less);
  if (std::adjacent_find(options.begin(), options.end()) != options.end()) {
    throw ValidationError("policy: duplicate placement option");
  }
  return options;
}

namespace {

struct HeapEntry {
  double gradient = 0;
  double delta_price = 0;
  std::uint32_t rank = 0;
  std::uint32_t item = 0;
};

// Max-heap on gradient; ties go to the cheaper upgrade, then the lower rank.
struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.gradient != b.gradient) return a.gradient < b.gradient;
    if (a.delta_price != b.delta_price) return a.delta_price > b.delta_price;
    return a.rank > b.rank;
  }
};

}  // namespace

GreedyResult greedy_placement(std::span<const ViableList> lists, double budget,
                              const GreedyOptions& opts) {
  if (budget < 0) throw std::invalid_argument("greedy_placement: budget must be >= 0");
  if (!opts.tie_rank.empty() && opts.tie_rank.size() != lists.size()) {
    throw std::invalid_argument("greedy_placement: tie_rank size mismatch");
  }

  GreedyResult result;
  result.final_entry.assign(lists.size(), 0);

  const auto rank_of = [&](std::size_t i) {
    return opts.tie_rank.empty() ? static_cast<std::uint32_t>(i) : opts.tie_rank[i];
  };
  const auto segment = [&](std::size_t i, std::uint32_t at) {
    const ViableEntry& cur = lists[i].entry(at);
    const ViableEntry& nxt = lists[i].entry(at + 1);
    const double dp = nxt.price - cur.price;
    return HeapEntry{(nxt.benefit - cur.benefit) / dp, dp, rank_of(i),
                     static_cast<std::uint32_t>(i)};
  };

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> queue;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (lists[i].size() > 1) queue.push(segment(i, 0));
  }

  // Each item has at most one live queue entry: its current segment. Popping
  // either applies the upgrade (and enqueues the item's next segment) or
  // terminates the loop, per the literal stop rule.
  while (!queue.empty()) {
    const HeapEntry top = queue.top();
    queue.pop();
    const std::uint32_t at = result.final_entry[top.item];
    const ViableEntry& cur = lists[top.item].entry(at);
    const ViableEntry& nxt = lists[top.item].entry(at + 1);
    if (!positive_gain(cur.benefit, nxt.benefit)) break;
    const double delta_price = nxt.price - cur.price;
    const double delta_benefit = nxt.benefit - cur.benefit;
    if (result.money_spent + delta_price > budget) {
      // First unaffordable upgrade ends the run; its affordable fraction is
      // what the LP optimum would still collect.
      result.stopped_by_budget = true;
      result.rejected_delta_benefit = delta_benefit;
      result.fractional_bound = result.total_benefit +
                                (budget - result.money_spent) / delta_price * delta_benefit;
      return result;
    }
    result.money_spent += delta_price;
    result.total_benefit += delta_benefit;
    result.final_entry[top.item] = at + 1;
    ++result.upgrade_count;
    if (opts.record_upgrades) {
      result.upgrades.push_back(
          {top.item, at, at + 1, top.gradient, delta_price, delta_benefit});
    }
    if (at + 2 < lists[top.item].size()) queue.push(segment(top.item, at + 1));
  }
  result.fractional_bound = result.total_benefit;
  return result;
}

ExactResult exact_mckp(std::span<const std::vector<OptionPoint>> options_per_item, double budget,
                       double price_quantum, std::size_t memory_cap_bytes) {
  if (budget < 0) throw std::invalid_argument("exact_mckp: budget must be >= 0");
  if (!(price_quantum > 0)) throw std::invalid_argument("exact_mckp: price_quantum must be > 0");

  const std::size_t n = options_per_item.size();
  const double buckets = std::floor(budget / price_quantum);
  if (buckets > 1e12) throw CapacityExceeded("exact_mckp: budget/quantum grid too large");
  const std::size_t capacity = static_cast<std::size_t>(buckets);

  const std::size_t table_bytes =
      (capacity + 1) * (2 * sizeof(double) + n * sizeof(std::uint16_t));
  if (table_bytes > memory_cap_bytes) {
    throw CapacityExceeded("exact_mckp: DP table of " + std::to_string(table_bytes) +
                           " bytes exceeds the memory cap");
  }

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  constexpr std::uint16_t kNoChoice = std::numeric_limits<std::uint16_t>::max();
  std::vector<double> prev(capacity + 1, 0.0);
  std::vector<double> cur(capacity + 1);
  std::vector<std::uint16_t> choice((capacity + 1) * n, kNoChoice);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& opts = options_per_item[i];
    if (opts.empty()) throw std::invalid_argument("exact_mckp: item with no options");
    if (opts.size() >= kNoChoice) throw std::invalid_argument("exact_mckp: too many options");
    std::uint16_t* row = choice.data() + i * (capacity + 1);
    std::fill(cur.begin(), cur.end(), kNegInf);
    for (std::size_t o = 0; o < opts.size(); ++o) {
      if (opts[o].price < 0) throw std::invalid_argument("exact_mckp: negative price");
      const double wd = std::floor(opts[o].price / price_quantum);
      if (wd > buckets) continue;  // never affordable
      const std::size_t w = static_cast<std::size_t>(wd);
      for (std::size_t j = w; j <= capacity; ++j) {
        if (prev[j - w] == kNegInf) continue;
        const double value = prev[j - w] + opts[o].benefit;
        if (value > cur[j]) {
          cur[j] = value;
          row[j] = static_cast<std::uint16_t>(o);
        }
      }
    }
    std::swap(prev, cur);
  }

  std::size_t best_j = 0;
  for (std::size_t j = 1; j <= capacity; ++j) {
    if (prev[j] > prev[best_j]) best_j = j;
  }
  if (prev[best_j] == kNegInf) {
    throw std::invalid_argument("exact_mckp: infeasible instance");
  }

  ExactResult result;
  result.chosen.assign(n, 0);
  std::size_t j = best_j;
  for (std::size_t i = n; i-- > 0;) {
    const std::uint16_t o = choice[i * (capacity + 1) + j];
    if (o == kNoChoice) throw std::logic_error("exact_mckp: broken backtrack");
    result.chosen[i] = o;
    const auto& pt = options_per_item[i][o];
    result.money_spent += pt.price;
    result.total_benefit += pt.benefit;
    j -= static_cast<std::size_t>(std::floor(pt.price / price_quantum));
  }
  return result;
}

std::map<std::string, std::uint64_t> stash_sizes(std::span<const std::uint32_t> option_of,
                                                 std::span<const PlacementOption> options,
                                                 std::span<const ItemStats> items) {
  if (option_of.size() != items.size()) {
    throw std::invalid_argument("stash_sizes: assignment/items size mismatch");
  }
  std::map<std::string, std::uint64_t> bytes;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& id : options[option_of[i]].stashes()) bytes[id] += items[i].size_bytes;
  }
  return bytes;
}

std::vector<ViableList> build_viable_lists(std::span<const ItemStats> items,
                                           const PlacementEvaluator& eval, unsigned threads) {
  std::vector<ViableList> lists(items.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(items.size(), 1)));

  const auto worker = [&](std::size_t begin, std::size_t end) {
    std::vector<OptionPoint> points(eval.option_count());
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t o = 0; o < points.size(); ++o) {
        points[o] = {eval.price(o, items[i]), eval.benefit(o, items[i])};
      }
      lists[i] = set_viable_options(points);
    }
  };

  if (threads <= 1) {
    worker(0, items.size());
    return lists;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = items.size() * t / threads;
    const std::size_t end = items.size() * (t + 1) / threads;
    pool.emplace_back([&, t, begin, end] {
      try {
        worker(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return lists;
}

namespace {

std::vector<std::uint32_t> lexicographic_ranks(std::span<const ItemStats> items) {
  std::vector<std::uint32_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return items[a].id < items[b].id; });
  std::vector<std::uint32_t> rank(items.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

Solution assemble_solution(std::span<const ItemStats> items, const PlacementEvaluator& eval,
                           std::vector<std::uint32_t> option_of, double budget) {
  Solution sol;
  sol.options.assign(eval.options().begin(), eval.options().end());
  sol.option_of = std::move(option_of);
  sol.budget = budget;
  long double service = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (sol.options[sol.option_of[i]].empty()) sol.uncached_bytes += items[i].size_bytes;
    service += eval.service_time(sol.option_of[i], items[i]);
  }
  sol.expected_service_time = static_cast<double>(service);
  sol.stash_bytes = stash_sizes(sol.option_of, sol.options, items);
  return sol;
}

}  // namespace

Solution greedy_solution(std::span<const ItemStats> items, const PlacementEvaluator& eval,
                         std::span<const ViableList> lists, double budget,
                         const GreedyOptions& opts) {
  if (items.size() != lists.size()) {
    throw std::invalid_argument("greedy_solution: items/lists size mismatch");
  }

  GreedyOptions run = opts;
  std::vector<std::uint32_t> ranks;
  const bool sorted = std::is_sorted(items.begin(), items.end(),
                                     [](const auto& a, const auto& b) { return a.id < b.id; });
  if (run.tie_rank.empty() && !sorted) {
    ranks = lexicographic_ranks(items);
    run.tie_rank = ranks;
  }

  GreedyResult greedy = greedy_placement(lists, budget, run);

  std::vector<std::uint32_t> option_of(items.size(), 0);
  for (std::size_t i = 0; i < items.size(); ++i) {
    option_of[i] = lists[i].entry(greedy.final_entry[i]).option;
  }
  Solution sol = assemble_solution(items, eval, std::move(option_of), budget);
  sol.money_spent = greedy.money_spent;
  sol.total_benefit = greedy.total_benefit;
  sol.fractional_bound = greedy.fractional_bound;
  sol.upgrade_count = greedy.upgrade_count;
  sol.upgrades = std::move(greedy.upgrades);
  return sol;
}

Solution exact_solution(std::span<const ItemStats> items, const PlacementEvaluator& eval,
                        double budget, double price_quantum, std::size_t memory_cap_bytes) {
  std::vector<std::vector<OptionPoint>> per_item(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    per_item[i].resize(eval.option_count());
    for (std::size_t o = 0; o < per_item[i].size(); ++o) {
      per_item[i][o] = {eval.price(o, items[i]), eval.benefit(o, items[i])};
    }
  }
  ExactResult exact = exact_mckp(per_item, budget, price_quantum, memory_cap_bytes);

  Solution sol = assemble_solution(items, eval, std::move(exact.chosen), budget);
  sol.money_spent = exact.money_spent;
  sol.total_benefit = exact.total_benefit;
  sol.fractional_bound = std::numeric_limits<double>::quiet_NaN();
  return sol;
}

}  // namespace stashplan
