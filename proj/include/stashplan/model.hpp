#pragma once

// Cost model for budget-constrained cache configuration: candidate storage
// media ("stashes"), per-item workload statistics, placement options (a set
// of stashes holding copies of an item), and the expected per-request service
// time of a placement including failure retrieval/restore costs.
//
// Unit conventions, used everywhere in this library:
//   time       nanoseconds (double)
//   sizes      bytes (uint64)
//   bandwidth  bytes per nanosecond
//   money      dollars
// Catalog files speak MB/s with MB = 2^20 bytes and $/GB with GB = 2^30
// bytes; the two converters below are the only place that convention lives.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stashplan {

constexpr double kBytesPerMB = 1024.0 * 1024.0;
constexpr double kBytesPerGB = 1024.0 * 1024.0 * 1024.0;

constexpr double mb_per_sec_to_bytes_per_ns(double mb_per_sec) {
  return mb_per_sec * kBytesPerMB / 1e9;
}

constexpr double dollars_per_gb_to_dollars_per_byte(double dollars_per_gb) {
  return dollars_per_gb / kBytesPerGB;
}

/// Invalid field values or broken cross-references; what() names the field.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One candidate storage medium.
struct StashSpec {
  std::string id;
  std::string name;
  double read_latency_ns = 0;
  double write_latency_ns = 0;
  double read_bw_bytes_per_ns = 0;
  double write_bw_bytes_per_ns = 0;
  double price_per_byte = 0;
  double mtbf_hours = 0;  // MTBF for repairable media, MTTF for replaceable ones
  double mttr_hours = 0;

  void validate() const;
};

/// One data item (key-value pair or disk page) with normalized request
/// frequencies. Across a workload the read and write frequencies of all
/// items sum to 1.
struct ItemStats {
  std::string id;
  std::uint64_t size_bytes = 0;
  double comp_ns = 0;  // time to recompute the item from permanent store
  double read_freq = 0;
  double write_freq = 0;

  void validate() const;
};

/// A subset of stash ids holding copies of an item; empty means "not cached".
class PlacementOption {
 public:
  PlacementOption() = default;
  /// Sorts ids into canonical order; throws ValidationError on duplicates.
  explicit PlacementOption(std::vector<std::string> stash_ids);

  bool empty() const { return stashes_.empty(); }
  std::size_t size() const { return stashes_.size(); }
  std::span<const std::string> stashes() const { return stashes_; }
  bool contains(std::string_view id) const;

  /// "none" for the empty placement, "Flash+DRAM" otherwise.
  std::string label() const;

  bool operator==(const PlacementOption&) const = default;

 private:
  std::vector<std::string> stashes_;  // sorted, unique
};

/// Canonical order: fewer stashes first, then lexicographic ids.
bool canonical_less(const PlacementOption& a, const PlacementOption& b);

/// A set of stashes failing together, with its per-request rate.
struct FailureEvent {
  std::vector<std::string> failed;
  double rate_per_request = 0;  // lambda_F

  void validate() const;
};

enum class WriteMode { sequential, concurrent };
enum class BaselineMode { kvs, host_side };

std::string_view to_string(WriteMode m);
std::string_view to_string(BaselineMode m);

struct CostModelConfig {
  WriteMode write_mode = WriteMode::sequential;
  BaselineMode baseline_mode = BaselineMode::kvs;
  bool count_failures = true;
  // host_side only: the stash whose speed profile stands in for the
  // permanent store. Never purchased; must resolve in the catalog.
  std::optional<std::string> permanent_store;
};

struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

/// The set of known stash specs, indexed by id.
class StashCatalog {
 public:
  StashCatalog() = default;
  explicit StashCatalog(std::vector<StashSpec> stashes);

  std::span<const StashSpec> stashes() const { return stashes_; }
  std::size_t size() const { return stashes_.size(); }
  const StashSpec* find(std::string_view id) const;
  const StashSpec& at(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;

 private:
  std::vector<StashSpec> stashes_;
  std::unordered_map<std::string, std::size_t, TransparentStringHash, std::equal_to<>> index_;
};

// Core time/price formulas. All pure.

/// Time to read item k from stash s: read latency plus transfer time.
double read_time(const StashSpec& s, const ItemStats& k);

/// Time to write item k to stash s: write latency plus transfer time.
double write_time(const StashSpec& s, const ItemStats& k);

/// Fastest read among the stashes of a non-empty placement.
/// Throws std::invalid_argument on the empty placement.
double placement_read_time(const PlacementOption& p, const ItemStats& k,
                           const StashCatalog& stashes);

/// Write cost across all copies: sum over the placement for sequential
/// writes, max for concurrent ones. Throws on the empty placement.
double placement_write_time(const PlacementOption& p, const ItemStats& k,
                            const StashCatalog& stashes, WriteMode mode);

/// Dollars to hold a copy of k on every stash of p. price(none, k) = 0.
double price(const PlacementOption& p, const ItemStats& k, const StashCatalog& stashes);

/// Cost of fetching a surviving copy of k after failure event f.
/// Zero when f does not touch p; when every copy is lost the item is
/// recomputed (kvs) or re-read from the permanent store (host_side).
double retrieval_cost(const FailureEvent& f, const PlacementOption& p, const ItemStats& k,
                      const StashCatalog& stashes, const CostModelConfig& cfg);

/// Cost of rewriting the copies of k lost to failure event f.
double restore_cost(const FailureEvent& f, const PlacementOption& p, const ItemStats& k,
                    const StashCatalog& stashes);

/// Expected service time per request for item k under placement p,
/// including failure terms unless cfg.count_failures is false.
double service_time(const PlacementOption& p, const ItemStats& k,
                    std::span<const FailureEvent> failures, const StashCatalog& stashes,
                    const CostModelConfig& cfg);

/// ben(p, k) = serv(none, k) - serv(p, k). Zero for the empty placement;
/// may be negative.
double benefit(const PlacementOption& p, const ItemStats& k,
               std::span<const FailureEvent> failures, const StashCatalog& stashes,
               const CostModelConfig& cfg);

/// Precompiled evaluator for bulk scoring of one (catalog, options,
/// failures, config) combination across many items. Placements and failure
/// sets become bitmasks over catalog indices, so a catalog is limited to 64
/// stashes. Results agree with the free functions above up to summation
/// order.
class PlacementEvaluator {
 public:
  PlacementEvaluator(const StashCatalog& stashes, std::span<const PlacementOption> options,
                     std::span<const FailureEvent> failures, const CostModelConfig& cfg);

  std::size_t option_count() const { return options_.size(); }
  std::span<const PlacementOption> options() const { return option_views_; }
  const StashCatalog& catalog() const { return *catalog_; }
  const CostModelConfig& config() const { return cfg_; }

  double price(std::size_t option, const ItemStats& k) const;
  double service_time(std::size_t option, const ItemStats& k) const;
  double benefit(std::size_t option, const ItemStats& k) const;
  /// serv(none, k): every read recomputes (kvs) or hits permanent store (host_side).
  double baseline_service_time(const ItemStats& k) const;

 private:
  struct Stash {
    double read_latency = 0;
    double read_inv_bw = 0;
    double write_latency = 0;
    double write_inv_bw = 0;
  };
  struct Option {
    std::uint64_t mask = 0;
    std::vector<std::uint16_t> members;  // catalog indices
    double price_per_byte_sum = 0;
    double write_latency_sum = 0;  // sequential write is affine in size
    double write_inv_bw_sum = 0;
  };
  struct Event {
    std::uint64_t mask = 0;
    double rate = 0;
  };

  double read_of(std::size_t stash, const ItemStats& k) const;
  double write_of(std::size_t stash, const ItemStats& k) const;

  const StashCatalog* catalog_;
  CostModelConfig cfg_;
  std::vector<Stash> stash_;
  std::vector<Option> options_;
  std::vector<PlacementOption> option_views_;
  std::vector<Event> events_;
  std::size_t permanent_index_ = 0;  // valid iff cfg_.baseline_mode == host_side
};

}  // namespace stashplan
