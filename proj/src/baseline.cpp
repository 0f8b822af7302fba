#include "stashplan/baseline.hpp"

#include <algorithm>
#include <limits>

namespace stashplan {

double score(const ItemStats& k, const StashSpec& s, const StashSpec& disk) {
  return k.read_freq * (read_time(disk, k) - read_time(s, k)) +
         k.write_freq * (write_time(disk, k) - write_time(s, k));
}

std::vector<ScoredItem> score_items(std::span<const ItemStats> items,
                                    std::span<const StashSpec> stashes, const StashSpec& disk) {
  std::vector<ScoredItem> scored;
  scored.reserve(items.size());
  for (const ItemStats& k : items) {
    ScoredItem si;
    si.item_id = k.id;
    si.score = -std::numeric_limits<double>::infinity();
    for (const StashSpec& s : stashes) {
      const double v = score(k, s, disk);
      si.score_per_stash[s.id] = v;
      if (v > si.score) {
        si.score = v;
        si.best_stash = s.id;
      }
    }
    scored.push_back(std::move(si));
  }
  return scored;
}

HeuristicAssignment heuristic_place(std::span<const ItemStats> items,
                                    std::span<const StashSpec> stashes, const StashSpec& disk,
                                    const std::map<std::string, std::uint64_t>& capacity_bytes) {
  for (const StashSpec& s : stashes) {
    if (!capacity_bytes.count(s.id)) {
      throw ValidationError("heuristic_place: no capacity given for stash " + s.id);
    }
  }

  std::vector<ScoredItem> scored = score_items(items, stashes, disk);
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].score != scored[b].score) return scored[a].score > scored[b].score;
    return items[a].id < items[b].id;
  });

  HeuristicAssignment result;
  std::map<std::string, std::uint64_t> remaining = capacity_bytes;
  for (std::size_t i : order) {
    // Preference order: stashes by descending score for this item,
    // score ties by the order the stashes were given in.
    std::vector<std::size_t> pref(stashes.size());
    for (std::size_t s = 0; s < pref.size(); ++s) pref[s] = s;
    std::sort(pref.begin(), pref.end(), [&](std::size_t a, std::size_t b) {
      const double sa = scored[i].score_per_stash.at(stashes[a].id);
      const double sb = scored[i].score_per_stash.at(stashes[b].id);
      if (sa != sb) return sa > sb;
      return a < b;
    });
    for (std::size_t s : pref) {
      std::uint64_t& left = remaining[stashes[s].id];
      if (left >= items[i].size_bytes) {
        left -= items[i].size_bytes;
        result.stash_of[items[i].id] = stashes[s].id;
        result.bytes_used[stashes[s].id] += items[i].size_bytes;
        break;
      }
    }
    // No stash fits: the item stays on the permanent store.
  }
  return result;
}

double expected_io_time(const HeuristicAssignment& assignment, std::span<const ItemStats> items,
                        std::span<const StashSpec> stashes, const StashSpec& disk) {
  double total = 0;
  for (const ItemStats& k : items) {
    const StashSpec* where = &disk;
    auto it = assignment.stash_of.find(k.id);
    if (it != assignment.stash_of.end()) {
      for (const StashSpec& s : stashes) {
        if (s.id == it->second) {
          where = &s;
          break;
        }
      }
    }
    total += k.read_freq * read_time(*where, k) + k.write_freq * write_time(*where, k);
  }
  return total;
}

}  // namespace stashplan
