#pragma once

// MCKP machinery: per-item viable placement lists (upper convex hull of
// (price, benefit) points with positive slopes), the greedy LP-relaxation
// upgrade algorithm, and a pseudo-polynomial dynamic-programming oracle for
// exact solutions on small instances.

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stashplan/model.hpp"

namespace stashplan {

/// (price, benefit) of one placement option for one item.
struct OptionPoint {
  double price = 0;
  double benefit = 0;
};

struct ViableEntry {
  std::uint32_t option = 0;  // index into the option set the points came from
  double price = 0;
  double benefit = 0;
};

/// Per-item list of non-dominated placement options, ordered by price.
/// Entry 0 is the do-nothing baseline (price 0, benefit 0); prices and
/// benefits increase strictly along the list and segment gradients
/// (delta benefit / delta price) decrease strictly. The cursor tracks the
/// item's current placement during greedy optimization.
class ViableList {
 public:
  ViableList() = default;
  explicit ViableList(std::vector<ViableEntry> entries);

  std::size_t size() const { return entries_.size(); }
  const ViableEntry& entry(std::size_t i) const { return entries_[i]; }
  std::span<const ViableEntry> entries() const { return entries_; }

  std::uint32_t cursor() const { return cursor_; }
  const ViableEntry& current() const { return entries_[cursor_]; }
  bool at_end() const { return cursor_ + 1 >= entries_.size(); }
  const ViableEntry& next() const { return entries_[cursor_ + 1]; }
  void advance() { ++cursor_; }
  void reset() { cursor_ = 0; }

  /// Throws ValidationError if the hull invariants do not hold.
  void validate() const;

 private:
  std::vector<ViableEntry> entries_;
  std::uint32_t cursor_ = 0;
};

/// Relative epsilon for the "gradient > 0" termination test: a segment is
/// accepted only when its benefit gain exceeds this fraction of the benefit
/// magnitudes involved. Guards sign flips from the subtraction-heavy hull
/// construction; all other gradient comparisons are exact.
constexpr double kGradientZeroEps = 1e-12;

/// Builds the viable list for one item from the (price, benefit) points of
/// every option, indexed by option id. Points must include a zero-price
/// option (the do-nothing baseline). Among equal-price options only the
/// highest-benefit one survives; dominated and off-hull options are pruned.
ViableList set_viable_options(std::span<const OptionPoint> points);

/// Model-backed variant: scores every option of the evaluator for item k.
ViableList set_viable_options(const ItemStats& k, const PlacementEvaluator& eval);

/// Gradient of the segment from the list's cursor to the next entry;
/// -infinity when the cursor is at the end of the list.
double upgrade_gradient(const ViableList& v);

/// Generates the placement options an experiment allows.
struct PolicySet {
  enum class Kind { tiering, optional_replication, forced_replication, custom };

  Kind kind = Kind::tiering;
  /// Participating stashes. For forced_replication exactly two ids, the
  /// slower (mandatory-copy) stash first.
  std::vector<std::string> stash_ids;
  std::vector<PlacementOption> custom_options;  // kind == custom only
};

/// All placement options of a policy in canonical order (fewer stashes
/// first, then lexicographic). The empty placement is always present.
std::vector<PlacementOption> enumerate_options(const PolicySet& policy);

struct UpgradeStep {
  std::uint32_t item = 0;
  std::uint32_t from_entry = 0;
  std::uint32_t to_entry = 0;
  double gradient = 0;
  double delta_price = 0;
  double delta_benefit = 0;
};

struct GreedyOptions {
  bool record_upgrades = false;
  /// Optional tie-break rank per item (lower wins); item index when empty.
  /// Workload pipelines pass lexicographic ranks of item ids.
  std::span<const std::uint32_t> tie_rank = {};
};

struct GreedyResult {
  std::vector<std::uint32_t> final_entry;  // per item, index into its viable list
  double money_spent = 0;
  double total_benefit = 0;        // GR_int
  double fractional_bound = 0;     // GR_frac = benefit of the LP optimum
  std::uint64_t upgrade_count = 0;
  bool stopped_by_budget = false;      // an upgrade was rejected as unaffordable
  double rejected_delta_benefit = 0;   // benefit of that rejected upgrade
  std::vector<UpgradeStep> upgrades;   // filled only when recording
};

/// Greedy MCKP: repeatedly applies the globally steepest affordable upgrade
/// and stops at the first unaffordable or non-positive one. The input lists
/// are not mutated (cursor state is kept internally), so they can be shared
/// across budgets and threads.
GreedyResult greedy_placement(std::span<const ViableList> lists, double budget,
                              const GreedyOptions& opts = {});

class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactResult {
  std::vector<std::uint32_t> chosen;  // per item, index into its option list
  double money_spent = 0;             // true (unquantized) price sum
  double total_benefit = 0;
};

/// Exact MCKP by dynamic programming over prices rounded down to a quantum
/// grid. Optimal for the quantized instance; exact whenever no two distinct
/// prices collide on the grid (e.g. integer prices with quantum 1). Throws
/// CapacityExceeded when the DP table would not fit memory_cap_bytes.
ExactResult exact_mckp(std::span<const std::vector<OptionPoint>> options_per_item, double budget,
                       double price_quantum,
                       std::size_t memory_cap_bytes = std::size_t{1} << 30);

/// A complete optimizer answer for one workload, policy, and budget.
struct Solution {
  std::vector<std::uint32_t> option_of;  // per item, index into options
  std::vector<PlacementOption> options;
  double budget = 0;
  double money_spent = 0;
  double total_benefit = 0;
  double expected_service_time = 0;  // sum over items of serv(assignment, k)
  double fractional_bound = 0;       // GR_frac benefit; NaN for exact solutions
  std::uint64_t upgrade_count = 0;
  std::map<std::string, std::uint64_t> stash_bytes;
  std::uint64_t uncached_bytes = 0;
  std::vector<UpgradeStep> upgrades;

  const PlacementOption& placement_of(std::size_t item) const { return options[option_of[item]]; }
};

/// Bytes each stash must provide under an assignment: for every item whose
/// option includes the stash, its size counts once.
std::map<std::string, std::uint64_t> stash_sizes(std::span<const std::uint32_t> option_of,
                                                 std::span<const PlacementOption> options,
                                                 std::span<const ItemStats> items);

/// Viable lists for a whole workload; items are scored independently so the
/// work shards across threads (0 = all cores).
std::vector<ViableList> build_viable_lists(std::span<const ItemStats> items,
                                           const PlacementEvaluator& eval, unsigned threads = 1);

/// Runs greedy_placement and assembles the full Solution (service time,
/// stash bytes, spend) for the workload behind the evaluator.
Solution greedy_solution(std::span<const ItemStats> items, const PlacementEvaluator& eval,
                         std::span<const ViableList> lists, double budget,
                         const GreedyOptions& opts = {});

/// exact_mckp over every option of the evaluator, assembled like
/// greedy_solution. Small instances only.
Solution exact_solution(std::span<const ItemStats> items, const PlacementEvaluator& eval,
                        double budget, double price_quantum,
                        std::size_t memory_cap_bytes = std::size_t{1} << 30);

}  // namespace stashplan
