#pragma once

// Experiment harness: budget sweeps and policy comparisons over a workload,
// emitted as plot-ready CSV or JSON.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stashplan/model.hpp"
#include "stashplan/solver.hpp"
#include "stashplan/trace.hpp"

namespace stashplan {

struct ExperimentSpec {
  const WorkloadSummary* workload = nullptr;
  const StashCatalog* catalog = nullptr;
  PolicySet policy;
  CostModelConfig cfg;
  /// Explicit failure events; when empty and cfg.count_failures is set,
  /// single-stash events are derived from the catalog and the workload's
  /// request rate.
  std::vector<FailureEvent> failures;
  std::vector<double> budgets;  // non-empty, strictly increasing, all >= 0
  std::string label;

  void validate() const;
};

struct SweepRow {
  double budget = 0;
  double avg_service_ns = 0;   // sum over items of serv(assignment, k)
  double spent_dollars = 0;
  double frac_bound_ns = 0;    // LP lower bound on the achievable service time
  std::vector<std::uint64_t> stash_bytes;  // aligned with SweepResult::stash_ids
  std::uint64_t uncached_bytes = 0;
};

struct SweepResult {
  std::string label;
  std::vector<std::string> stash_ids;  // participating stashes, catalog order
  std::vector<SweepRow> rows;          // one per budget, in budget order
};

/// Builds viable lists once, then runs the greedy solver per budget
/// (budget points run in parallel; threads == 0 means all cores).
SweepResult run_sweep(const ExperimentSpec& spec, unsigned threads = 0);

struct PolicyComparison {
  std::vector<double> budgets;
  std::vector<std::string> labels;
  /// service_ns[spec][budget index]; ratios are relative to the first spec.
  std::vector<std::vector<double>> service_ns;
};

/// Sweeps every spec over a shared workload and budget grid.
/// Throws ValidationError when the grids or workloads are not aligned.
PolicyComparison compare_policies(std::span<const ExperimentSpec> specs, unsigned threads = 0);

enum class EmitFormat { csv, json };

EmitFormat parse_emit_format(std::string_view text);

/// CSV: budget_dollars,avg_service_ns,spent_dollars,frac_bound_ns,
///      <stash>_bytes...,uncached_bytes. JSON mirrors the same fields.
void emit(const SweepResult& result, EmitFormat format, std::ostream& out);
void emit(const PolicyComparison& result, EmitFormat format, std::ostream& out);

/// Shortest round-trip decimal formatting used by every emitter.
std::string format_number(double v);

}  // namespace stashplan
