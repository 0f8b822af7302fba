#include "stashplan/harness.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <set>
#include <thread>

#include "json.hpp"

namespace stashplan {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void ExperimentSpec::validate() const {
  if (!workload) throw ValidationError("experiment: missing workload");
  if (!catalog) throw ValidationError("experiment: missing catalog");
  if (budgets.empty()) throw ValidationError("experiment: budgets must be non-empty");
  if (budgets.front() < 0) throw ValidationError("experiment: budgets must be >= 0");
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (!(budgets[i] > budgets[i - 1])) {
      throw ValidationError("experiment: budgets must be strictly increasing");
    }
  }
  workload->validate();
  for (const FailureEvent& f : failures) f.validate();
}

namespace {

// Stashes that can actually receive bytes under the policy, in catalog order.
std::vector<std::string> participating_stashes(const StashCatalog& catalog,
                                               std::span<const PlacementOption> options) {
  std::set<std::string> used;
  for (const PlacementOption& o : options) {
    for (const auto& id : o.stashes()) used.insert(id);
  }
  std::vector<std::string> ids;
  for (const StashSpec& s : catalog.stashes()) {
    if (used.count(s.id)) ids.push_back(s.id);
  }
  return ids;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec, unsigned threads) {
  spec.validate();
  const std::vector<PlacementOption> options = enumerate_options(spec.policy);

  std::vector<FailureEvent> failures = spec.failures;
  if (failures.empty() && spec.cfg.count_failures) {
    failures = failure_rates(*spec.catalog, spec.workload->requests_per_hour());
  }

  const PlacementEvaluator eval(*spec.catalog, options, failures, spec.cfg);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::vector<ViableList> lists =
      build_viable_lists(spec.workload->items, eval, threads);

  SweepResult result;
  result.label = spec.label;
  result.stash_ids = participating_stashes(*spec.catalog, options);
  result.rows.resize(spec.budgets.size());

  long double baseline = 0;
  for (const ItemStats& item : spec.workload->items) {
    baseline += eval.baseline_service_time(item);
  }
  const double baseline_total = static_cast<double>(baseline);

  const auto solve_point = [&](std::size_t b) {
    const Solution sol =
        greedy_solution(spec.workload->items, eval, lists, spec.budgets[b]);
    SweepRow& row = result.rows[b];
    row.budget = spec.budgets[b];
    row.avg_service_ns = sol.expected_service_time;
    row.spent_dollars = sol.money_spent;
    row.frac_bound_ns = baseline_total - sol.fractional_bound;
    row.uncached_bytes = sol.uncached_bytes;
    row.stash_bytes.reserve(result.stash_ids.size());
    for (const std::string& id : result.stash_ids) {
      auto it = sol.stash_bytes.find(id);
      row.stash_bytes.push_back(it == sol.stash_bytes.end() ? 0 : it->second);
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, spec.budgets.size()));
  if (workers <= 1) {
    for (std::size_t b = 0; b < spec.budgets.size(); ++b) solve_point(b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t b = t; b < spec.budgets.size(); b += workers) solve_point(b);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return result;
}

PolicyComparison compare_policies(std::span<const ExperimentSpec> specs, unsigned threads) {
  if (specs.empty()) throw ValidationError("compare_policies: no experiments");
  for (const ExperimentSpec& spec : specs) {
    if (spec.workload != specs.front().workload) {
      throw ValidationError("compare_policies: experiments must share one workload");
    }
    if (spec.budgets != specs.front().budgets) {
      throw ValidationError("compare_policies: budget grids are not aligned");
    }
  }

  PolicyComparison cmp;
  cmp.budgets = specs.front().budgets;
  for (const ExperimentSpec& spec : specs) {
    const SweepResult sweep = run_sweep(spec, threads);
    cmp.labels.push_back(sweep.label);
    std::vector<double> service;
    service.reserve(sweep.rows.size());
    for (const SweepRow& row : sweep.rows) service.push_back(row.avg_service_ns);
    cmp.service_ns.push_back(std::move(service));
  }
  return cmp;
}

EmitFormat parse_emit_format(std::string_view text) {
  if (text == "csv") return EmitFormat::csv;
  if (text == "json") return EmitFormat::json;
  throw ValidationError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

namespace {

nlohmann::json row_to_json(const SweepResult& result, const SweepRow& row) {
  nlohmann::json j;
  j["budget_dollars"] = row.budget;
  j["avg_service_ns"] = row.avg_service_ns;
  j["spent_dollars"] = row.spent_dollars;
  j["frac_bound_ns"] = row.frac_bound_ns;
  for (std::size_t s = 0; s < result.stash_ids.size(); ++s) {
    j[result.stash_ids[s] + "_bytes"] = row.stash_bytes[s];
  }
  j["uncached_bytes"] = row.uncached_bytes;
  return j;
}

}  // namespace

void emit(const SweepResult& result, EmitFormat format, std::ostream& out) {
  if (format == EmitFormat::csv) {
    out << "budget_dollars,avg_service_ns,spent_dollars,frac_bound_ns";
    for (const std::string& id : result.stash_ids) out << ',' << id << "_bytes";
    out << ",uncached_bytes\n";
    for (const SweepRow& row : result.rows) {
      out << format_number(row.budget) << ',' << format_number(row.avg_service_ns) << ','
          << format_number(row.spent_dollars) << ',' << format_number(row.frac_bound_ns);
      for (std::uint64_t bytes : row.stash_bytes) out << ',' << bytes;
      out << ',' << row.uncached_bytes << '\n';
    }
    return;
  }
  nlohmann::json j;
  j["label"] = result.label;
  j["stashes"] = result.stash_ids;
  j["rows"] = nlohmann::json::array();
  for (const SweepRow& row : result.rows) j["rows"].push_back(row_to_json(result, row));
  out << j.dump(2) << '\n';
}

void emit(const PolicyComparison& result, EmitFormat format, std::ostream& out) {
  if (format == EmitFormat::csv) {
    out << "budget_dollars";
    for (const std::string& label : result.labels) out << ',' << label << "_service_ns";
    for (const std::string& label : result.labels) out << ',' << label << "_ratio";
    out << '\n';
    for (std::size_t b = 0; b < result.budgets.size(); ++b) {
      out << format_number(result.budgets[b]);
      for (const auto& column : result.service_ns) out << ',' << format_number(column[b]);
      for (const auto& column : result.service_ns) {
        out << ',' << format_number(column[b] / result.service_ns[0][b]);
      }
      out << '\n';
    }
    return;
  }
  nlohmann::json j;
  j["budgets"] = result.budgets;
  for (std::size_t c = 0; c < result.labels.size(); ++c) {
    j["service_ns"][result.labels[c]] = result.service_ns[c];
  }
  out << j.dump(2) << '\n';
}

}  // namespace stashplan
