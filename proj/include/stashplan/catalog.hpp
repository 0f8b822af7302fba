#pragma once

// Keyed-text documents: stash catalogs, cost-model configuration, and
// experiment definitions share one grammar.
//
//     # comment
//     [stash DRAM]
//     read_latency_ns = 10
//     write_latency_ns = 10
//     read_bandwidth_mb_per_s = 10240
//     write_bandwidth_mb_per_s = 10240
//     price_per_gb = 8
//     mtbf_hours = 8750
//     mttr_hours = 10
//
//     [model]
//     write_mode = sequential          # or concurrent
//     baseline_mode = kvs              # or host_side
//     count_failures = true
//     permanent_store = Disk           # host_side only
//
//     [experiment tier-sweep]
//     policy = tiering                 # tiering | optional_replication |
//                                      # forced_replication | custom
//     stashes = Flash,NVM2,NVM1        # forced_replication: slow,fast
//     budgets = 0,25,50,100            # or budget_min/budget_max/budget_step
//     options = none Flash Flash+DRAM  # custom policy only
//
// Experiment sections may also restate [model] keys to override them.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stashplan/model.hpp"
#include "stashplan/solver.hpp"
#include "stashplan/trace.hpp"

namespace stashplan {

struct KeyedSection {
  std::string kind;  // "stash", "model", "experiment", ...
  std::string name;  // may be empty
  std::uint64_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(std::string_view key) const;
  /// Missing key raises ParseError pointing at the section header.
  const std::string& get(std::string_view key) const;
};

std::vector<KeyedSection> parse_keyed_text(std::istream& in);

/// Builds a catalog from every [stash <id>] section. Unknown keys and
/// invariant violations raise errors naming the field.
StashCatalog parse_catalog(std::span<const KeyedSection> sections);

/// Applies the [model] section (if present) on top of the given defaults.
CostModelConfig parse_model_config(std::span<const KeyedSection> sections,
                                   CostModelConfig defaults = {});

/// One [experiment] section resolved against the document's [model] config.
struct ExperimentConfig {
  std::string label;
  PolicySet policy;
  std::vector<double> budgets;  // strictly increasing, all >= 0
  CostModelConfig cfg;
};

std::vector<ExperimentConfig> parse_experiments(std::span<const KeyedSection> sections,
                                                const CostModelConfig& base);

PolicySet::Kind parse_policy_kind(std::string_view text);
std::string_view to_string(PolicySet::Kind kind);

/// "none" or "A+B" placement spelling used by custom option lists.
PlacementOption parse_placement(std::string_view text);

}  // namespace stashplan
