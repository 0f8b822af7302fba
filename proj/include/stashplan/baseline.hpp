#pragma once

// The related-work score heuristic: rank items by how much time a stash
// saves over the permanent store, place best-scoring items first into their
// preferred stash while capacity lasts. Used as a comparison target for the
// optimizer; it is provably non-optimal on some workloads.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stashplan/model.hpp"

namespace stashplan {

/// Per-request time the item saves when served from s instead of disk:
/// f_R * (T_R(disk) - T_R(s)) + f_W * (T_W(disk) - T_W(s)).
double score(const ItemStats& k, const StashSpec& s, const StashSpec& disk);

struct ScoredItem {
  std::string item_id;
  std::map<std::string, double> score_per_stash;
  std::string best_stash;
  double score = 0;  // max over score_per_stash
};

std::vector<ScoredItem> score_items(std::span<const ItemStats> items,
                                    std::span<const StashSpec> stashes, const StashSpec& disk);

struct HeuristicAssignment {
  /// item id -> stash id; items that fit nowhere stay on the permanent
  /// store and are absent from the map.
  std::map<std::string, std::string> stash_of;
  std::map<std::string, std::uint64_t> bytes_used;
};

/// Items in descending score order each take their highest-scoring stash
/// with enough remaining capacity, then the next preference, then fall back
/// to the permanent store.
HeuristicAssignment heuristic_place(std::span<const ItemStats> items,
                                    std::span<const StashSpec> stashes, const StashSpec& disk,
                                    const std::map<std::string, std::uint64_t>& capacity_bytes);

/// Expected per-I/O time of an assignment: reads and writes served by the
/// assigned stash, unassigned items by the permanent store.
double expected_io_time(const HeuristicAssignment& assignment, std::span<const ItemStats> items,
                        std::span<const StashSpec> stashes, const StashSpec& disk);

}  // namespace stashplan
