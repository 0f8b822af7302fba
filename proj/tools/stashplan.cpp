// stashplan: trace-driven optimizer for multi-level cache configuration
// under a monetary budget.
//
// Subcommands: optimize, sweep, compare, gen-trace, summarize, baseline,
// validate. Data goes to stdout unless --out is given; diagnostics go to
// stderr. Exit codes: 0 success, 1 input error, 2 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "stashplan/baseline.hpp"
#include "stashplan/catalog.hpp"
#include "stashplan/harness.hpp"
#include "stashplan/model.hpp"
#include "stashplan/solver.hpp"
#include "stashplan/trace.hpp"

namespace sp = stashplan;

namespace {

struct WorkloadArgs {
  std::string trace_path;
  std::string summary_path;
  double hours = 0;
};

void add_workload_flags(CLI::App* cmd, WorkloadArgs& args) {
  auto* trace = cmd->add_option("--trace", args.trace_path, "request trace file");
  auto* summary = cmd->add_option("--summary", args.summary_path, "workload summary file");
  cmd->add_option("--hours", args.hours, "trace duration in hours (required with --trace)");
  trace->excludes(summary);
  summary->excludes(trace);
}

sp::WorkloadSummary load_workload(const WorkloadArgs& args) {
  if (!args.trace_path.empty()) {
    if (!(args.hours > 0)) {
      throw sp::ValidationError("--trace requires --hours > 0 (trace files carry no timestamps)");
    }
    std::ifstream in(args.trace_path);
    if (!in) throw sp::ValidationError("cannot open trace file: " + args.trace_path);
    sp::TraceReader reader(in);
    return sp::build_summary(reader, args.hours);
  }
  if (!args.summary_path.empty()) {
    std::ifstream in(args.summary_path);
    if (!in) throw sp::ValidationError("cannot open summary file: " + args.summary_path);
    return sp::read_summary(in);
  }
  throw sp::ValidationError("exactly one of --trace or --summary is required");
}

std::vector<sp::KeyedSection> load_sections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sp::ValidationError("cannot open file: " + path);
  return sp::parse_keyed_text(in);
}

struct ModelFlags {
  std::string write_mode;
  std::string baseline_mode;
  std::string permanent_store;
  bool no_failures = false;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
  cmd->add_option("--write-mode", flags.write_mode, "sequential|concurrent")
      ->check(CLI::IsMember({"sequential", "concurrent"}));
  cmd->add_option("--baseline-mode", flags.baseline_mode, "kvs|host_side")
      ->check(CLI::IsMember({"kvs", "host_side"}));
  cmd->add_option("--permanent-store", flags.permanent_store,
                  "stash id standing in for the permanent store (host_side)");
  cmd->add_flag("--no-failures", flags.no_failures, "exclude failure costs from service time");
}

sp::CostModelConfig apply_model_flags(sp::CostModelConfig cfg, const ModelFlags& flags) {
  if (flags.write_mode == "sequential") cfg.write_mode = sp::WriteMode::sequential;
  if (flags.write_mode == "concurrent") cfg.write_mode = sp::WriteMode::concurrent;
  if (flags.baseline_mode == "kvs") cfg.baseline_mode = sp::BaselineMode::kvs;
  if (flags.baseline_mode == "host_side") cfg.baseline_mode = sp::BaselineMode::host_side;
  if (!flags.permanent_store.empty()) cfg.permanent_store = flags.permanent_store;
  if (flags.no_failures) cfg.count_failures = false;
  return cfg;
}

struct OutputArgs {
  std::string out_path;
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputArgs& args) {
  cmd->add_option("--out", args.out_path, "write output to a file instead of stdout");
  cmd->add_option("--format", args.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

void write_output(const OutputArgs& args, const std::string& payload) {
  if (args.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) throw sp::ValidationError("cannot open output file: " + args.out_path);
  out << payload;
}

// Default policy participants: every catalog stash except the permanent
// store profile, in catalog order.
std::vector<std::string> default_stashes(const sp::StashCatalog& catalog,
                                         const sp::CostModelConfig& cfg) {
  std::vector<std::string> ids;
  for (const sp::StashSpec& s : catalog.stashes()) {
    if (cfg.permanent_store && *cfg.permanent_store == s.id) continue;
    ids.push_back(s.id);
  }
  return ids;
}

sp::PolicySet make_policy(const std::string& policy_name, std::vector<std::string> stash_ids,
                          const std::string& custom_options) {
  sp::PolicySet policy;
  policy.kind = sp::parse_policy_kind(policy_name);
  if (policy.kind == sp::PolicySet::Kind::custom) {
    std::istringstream in(custom_options);
    std::string token;
    while (in >> token) policy.custom_options.push_back(sp::parse_placement(token));
  } else {
    policy.stash_ids = std::move(stash_ids);
  }
  return policy;
}

std::string solution_csv(const sp::Solution& sol) {
  std::ostringstream out;
  out << "budget_dollars,avg_service_ns,spent_dollars,frac_bound_ns";
  for (const auto& [id, bytes] : sol.stash_bytes) out << ',' << id << "_bytes";
  out << ",uncached_bytes,upgrades";
  std::vector<std::size_t> counts(sol.options.size(), 0);
  for (std::uint32_t o : sol.option_of) counts[o]++;
  for (std::size_t o = 0; o < sol.options.size(); ++o) {
    out << ",items_" << sol.options[o].label();
  }
  out << '\n';
  out << sp::format_number(sol.budget) << ',' << sp::format_number(sol.expected_service_time)
      << ',' << sp::format_number(sol.money_spent) << ','
      << sp::format_number(sol.expected_service_time + sol.total_benefit - sol.fractional_bound);
  for (const auto& [id, bytes] : sol.stash_bytes) out << ',' << bytes;
  out << ',' << sol.uncached_bytes << ',' << sol.upgrade_count;
  for (std::size_t count : counts) out << ',' << count;
  out << '\n';
  return out.str();
}

std::string solution_json(const sp::Solution& sol) {
  nlohmann::json j;
  j["budget_dollars"] = sol.budget;
  j["spent_dollars"] = sol.money_spent;
  j["avg_service_ns"] = sol.expected_service_time;
  j["total_benefit_ns"] = sol.total_benefit;
  j["frac_bound_ns"] = sol.expected_service_time + sol.total_benefit - sol.fractional_bound;
  j["upgrades"] = sol.upgrade_count;
  j["uncached_bytes"] = sol.uncached_bytes;
  for (const auto& [id, bytes] : sol.stash_bytes) j["stash_bytes"][id] = bytes;
  std::vector<std::size_t> counts(sol.options.size(), 0);
  for (std::uint32_t o : sol.option_of) counts[o]++;
  for (std::size_t o = 0; o < sol.options.size(); ++o) {
    j["assignment"][sol.options[o].label()] = counts[o];
  }
  return j.dump(2) + "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"budget-constrained cache configuration optimizer"};
  app.require_subcommand(1);

  // ---- optimize ----
  auto* optimize = app.add_subcommand("optimize", "solve one budget point");
  WorkloadArgs opt_workload;
  ModelFlags opt_model;
  OutputArgs opt_output;
  std::string opt_catalog;
  std::string opt_policy = "tiering";
  std::vector<std::string> opt_stashes;
  std::string opt_options;
  double opt_budget = 0;
  add_workload_flags(optimize, opt_workload);
  optimize->add_option("--catalog", opt_catalog, "stash catalog file")->required();
  optimize->add_option("--policy", opt_policy,
                       "tiering|optional_replication|forced_replication|custom");
  optimize->add_option("--stashes", opt_stashes, "participating stash ids")->delimiter(',');
  optimize->add_option("--options", opt_options,
                       "custom placements, e.g. 'none Flash Flash+DRAM'");
  optimize->add_option("--budget", opt_budget, "budget in dollars")
      ->required()
      ->check(CLI::NonNegativeNumber);
  add_model_flags(optimize, opt_model);
  add_output_flags(optimize, opt_output);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "run a budget sweep");
  WorkloadArgs sweep_workload;
  ModelFlags sweep_model;
  OutputArgs sweep_output;
  std::string sweep_catalog;
  std::string sweep_experiment;
  std::string sweep_label;
  std::string sweep_policy = "tiering";
  std::vector<std::string> sweep_stashes;
  std::string sweep_options;
  std::vector<double> sweep_budgets;
  unsigned sweep_threads = 0;
  add_workload_flags(sweep, sweep_workload);
  sweep->add_option("--catalog", sweep_catalog, "stash catalog file")->required();
  sweep->add_option("--experiment", sweep_experiment, "experiment definition file");
  sweep->add_option("--label", sweep_label, "experiment label to run (with --experiment)");
  sweep->add_option("--policy", sweep_policy,
                    "tiering|optional_replication|forced_replication|custom");
  sweep->add_option("--stashes", sweep_stashes, "participating stash ids")->delimiter(',');
  sweep->add_option("--options", sweep_options, "custom placements");
  sweep->add_option("--budgets", sweep_budgets, "budget grid in dollars")->delimiter(',');
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = all cores)");
  add_model_flags(sweep, sweep_model);
  add_output_flags(sweep, sweep_output);

  // ---- compare ----
  auto* compare = app.add_subcommand("compare", "compare experiments over one budget grid");
  WorkloadArgs cmp_workload;
  OutputArgs cmp_output;
  std::string cmp_catalog;
  std::string cmp_experiment;
  std::vector<std::string> cmp_labels;
  unsigned cmp_threads = 0;
  add_workload_flags(compare, cmp_workload);
  compare->add_option("--catalog", cmp_catalog, "stash catalog file")->required();
  compare->add_option("--experiment", cmp_experiment, "experiment definition file")->required();
  compare->add_option("--labels", cmp_labels, "experiment labels to include")->delimiter(',');
  compare->add_option("--threads", cmp_threads, "worker threads (0 = all cores)");
  add_output_flags(compare, cmp_output);

  // ---- gen-trace ----
  auto* gen = app.add_subcommand("gen-trace", "generate a synthetic workload");
  OutputArgs gen_output;
  std::uint64_t gen_items = 0;
  double gen_zipf = 0.99;
  std::string gen_ratio = "99:1";
  std::string gen_size_dist = "fixed:4096";
  std::string gen_comp_dist = "fixed:1000000";
  std::uint64_t gen_requests = 1'000'000;
  double gen_hours = 1.0;
  std::uint64_t gen_seed = 0;
  std::uint64_t gen_expand = 0;
  gen->add_option("--items", gen_items, "number of items")->required();
  gen->add_option("--zipf", gen_zipf, "Zipf exponent over item rank");
  gen->add_option("--rw-ratio", gen_ratio, "read:write ratio, e.g. 99:1");
  gen->add_option("--size-dist", gen_size_dist, "item size distribution");
  gen->add_option("--comp-dist", gen_comp_dist, "compute-cost distribution");
  gen->add_option("--requests", gen_requests, "nominal request count");
  gen->add_option("--hours", gen_hours, "nominal trace duration in hours");
  gen->add_option("--seed", gen_seed, "PRNG seed")->required();
  gen->add_option("--expand-requests", gen_expand,
                  "emit a concrete trace with this many sampled records instead of a summary");
  gen->add_option("--out", gen_output.out_path, "write output to a file instead of stdout");

  // ---- summarize ----
  auto* summarize = app.add_subcommand("summarize", "turn a trace into a workload summary");
  std::string sum_trace;
  double sum_hours = 0;
  OutputArgs sum_output;
  summarize->add_option("--trace", sum_trace, "request trace file")->required();
  summarize->add_option("--hours", sum_hours, "trace duration in hours")->required();
  summarize->add_option("--out", sum_output.out_path,
                        "write output to a file instead of stdout");

  // ---- baseline ----
  auto* baseline = app.add_subcommand("baseline",
                                      "compare the score heuristic with the optimizer");
  WorkloadArgs base_workload;
  OutputArgs base_output;
  std::string base_catalog;
  std::string base_disk;
  std::vector<std::string> base_stashes;
  std::vector<std::string> base_capacities;
  double base_quantum = 0;
  double base_dp_mem_mb = 1024;
  add_workload_flags(baseline, base_workload);
  baseline->add_option("--catalog", base_catalog, "stash catalog file")->required();
  baseline->add_option("--disk", base_disk, "permanent store stash id")->required();
  baseline->add_option("--stashes", base_stashes, "cache stash ids")->required()->delimiter(',');
  baseline
      ->add_option("--capacity", base_capacities, "per-stash byte capacity, e.g. Flash=4096")
      ->required();
  baseline->add_option("--quantum", base_quantum,
                       "price quantum for the exact solver (default: smallest option price)");
  baseline->add_option("--dp-mem-mb", base_dp_mem_mb, "exact solver memory cap in MB");
  add_output_flags(baseline, base_output);

  // ---- validate ----
  auto* validate = app.add_subcommand("validate", "lint catalogs, traces and summaries");
  std::string val_catalog, val_trace, val_summary, val_experiment;
  validate->add_option("--catalog", val_catalog, "stash catalog file");
  validate->add_option("--trace", val_trace, "request trace file");
  validate->add_option("--summary", val_summary, "workload summary file");
  validate->add_option("--experiment", val_experiment, "experiment definition file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (optimize->parsed()) {
    const sp::WorkloadSummary workload = load_workload(opt_workload);
    const auto sections = load_sections(opt_catalog);
    const sp::StashCatalog catalog = sp::parse_catalog(sections);
    const sp::CostModelConfig cfg =
        apply_model_flags(sp::parse_model_config(sections), opt_model);
    if (opt_stashes.empty()) opt_stashes = default_stashes(catalog, cfg);
    const sp::PolicySet policy = make_policy(opt_policy, opt_stashes, opt_options);
    const auto options = sp::enumerate_options(policy);
    std::vector<sp::FailureEvent> failures;
    if (cfg.count_failures) {
      failures = sp::failure_rates(catalog, workload.requests_per_hour());
    }
    const sp::PlacementEvaluator eval(catalog, options, failures, cfg);
    const auto lists = sp::build_viable_lists(workload.items, eval, 1);
    const sp::Solution sol = sp::greedy_solution(workload.items, eval, lists, opt_budget);
    write_output(opt_output, opt_output.format == "json" ? solution_json(sol)
                                                         : solution_csv(sol));
    return 0;
  }

  if (sweep->parsed()) {
    const sp::WorkloadSummary workload = load_workload(sweep_workload);
    const auto sections = load_sections(sweep_catalog);
    const sp::StashCatalog catalog = sp::parse_catalog(sections);
    sp::CostModelConfig cfg = apply_model_flags(sp::parse_model_config(sections), sweep_model);

    sp::ExperimentSpec spec;
    spec.workload = &workload;
    spec.catalog = &catalog;
    if (!sweep_experiment.empty()) {
      const auto exp_sections = load_sections(sweep_experiment);
      const auto experiments = sp::parse_experiments(exp_sections, cfg);
      if (experiments.empty()) throw sp::ValidationError("no [experiment] sections found");
      const sp::ExperimentConfig* chosen = nullptr;
      if (sweep_label.empty()) {
        if (experiments.size() > 1) {
          std::string labels;
          for (const auto& e : experiments) labels += " " + e.label;
          throw sp::ValidationError("multiple experiments in file; pick one with --label:" +
                                    labels);
        }
        chosen = &experiments.front();
      } else {
        for (const auto& e : experiments) {
          if (e.label == sweep_label) chosen = &e;
        }
        if (!chosen) throw sp::ValidationError("no experiment labelled '" + sweep_label + "'");
      }
      spec.policy = chosen->policy;
      spec.budgets = chosen->budgets;
      spec.cfg = apply_model_flags(chosen->cfg, sweep_model);
      spec.label = chosen->label;
    } else {
      if (sweep_budgets.empty()) {
        throw sp::ValidationError("sweep needs --budgets or --experiment");
      }
      if (sweep_stashes.empty()) sweep_stashes = default_stashes(catalog, cfg);
      spec.policy = make_policy(sweep_policy, sweep_stashes, sweep_options);
      spec.budgets = sweep_budgets;
      spec.cfg = cfg;
      spec.label = sweep_policy;
    }
    const sp::SweepResult result = sp::run_sweep(spec, sweep_threads);
    std::ostringstream out;
    sp::emit(result, sp::parse_emit_format(sweep_output.format), out);
    write_output(sweep_output, out.str());
    return 0;
  }

  if (compare->parsed()) {
    const sp::WorkloadSummary workload = load_workload(cmp_workload);
    const auto sections = load_sections(cmp_catalog);
    const sp::StashCatalog catalog = sp::parse_catalog(sections);
    const sp::CostModelConfig cfg = sp::parse_model_config(sections);
    const auto exp_sections = load_sections(cmp_experiment);
    const auto experiments = sp::parse_experiments(exp_sections, cfg);

    std::vector<sp::ExperimentSpec> specs;
    for (const auto& e : experiments) {
      if (!cmp_labels.empty() &&
          std::find(cmp_labels.begin(), cmp_labels.end(), e.label) == cmp_labels.end()) {
        continue;
      }
      sp::ExperimentSpec spec;
      spec.workload = &workload;
      spec.catalog = &catalog;
      spec.policy = e.policy;
      spec.budgets = e.budgets;
      spec.cfg = e.cfg;
      spec.label = e.label;
      specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw sp::ValidationError("no experiments selected");
    const sp::PolicyComparison cmp = sp::compare_policies(specs, cmp_threads);
    std::ostringstream out;
    sp::emit(cmp, sp::parse_emit_format(cmp_output.format), out);
    write_output(cmp_output, out.str());
    return 0;
  }

  if (gen->parsed()) {
    sp::SynthSpec spec;
    spec.n_items = gen_items;
    spec.zipf_exponent = gen_zipf;
    {
      const std::size_t colon = gen_ratio.find(':');
      if (colon == std::string::npos) {
        throw sp::ValidationError("--rw-ratio must look like 99:1");
      }
      spec.read_weight = std::stod(gen_ratio.substr(0, colon));
      spec.write_weight = std::stod(gen_ratio.substr(colon + 1));
    }
    spec.size_dist = sp::Distribution::parse(gen_size_dist);
    spec.comp_dist = sp::Distribution::parse(gen_comp_dist);
    spec.total_requests = gen_requests;
    spec.duration_hours = gen_hours;
    spec.seed = gen_seed;
    const sp::WorkloadSummary workload = sp::synth_workload(spec);
    std::ostringstream out;
    if (gen_expand > 0) {
      sp::sample_trace(out, workload, gen_expand, gen_seed);
    } else {
      sp::write_summary(out, workload);
    }
    write_output(gen_output, out.str());
    return 0;
  }

  if (summarize->parsed()) {
    std::ifstream in(sum_trace);
    if (!in) throw sp::ValidationError("cannot open trace file: " + sum_trace);
    sp::TraceReader reader(in);
    const sp::WorkloadSummary workload = sp::build_summary(reader, sum_hours);
    std::ostringstream out;
    sp::write_summary(out, workload);
    write_output(sum_output, out.str());
    return 0;
  }

  if (baseline->parsed()) {
    const sp::WorkloadSummary workload = load_workload(base_workload);
    const auto sections = load_sections(base_catalog);
    const sp::StashCatalog catalog = sp::parse_catalog(sections);
    const sp::StashSpec& disk = catalog.at(base_disk);

    std::vector<sp::StashSpec> stashes;
    for (const std::string& id : base_stashes) stashes.push_back(catalog.at(id));
    std::map<std::string, std::uint64_t> capacities;
    for (const std::string& spec : base_capacities) {
      const std::size_t eq = spec.find('=');
      if (eq == std::string::npos) {
        throw sp::ValidationError("--capacity must look like Flash=4096");
      }
      capacities[spec.substr(0, eq)] = std::stoull(spec.substr(eq + 1));
    }

    const sp::HeuristicAssignment heuristic =
        sp::heuristic_place(workload.items, stashes, disk, capacities);
    const double heuristic_time =
        sp::expected_io_time(heuristic, workload.items, stashes, disk);

    // Optimizer side: capacities become a budget at each stash's price.
    sp::CostModelConfig cfg;
    cfg.baseline_mode = sp::BaselineMode::host_side;
    cfg.permanent_store = disk.id;
    cfg.count_failures = false;
    sp::PolicySet policy;
    policy.kind = sp::PolicySet::Kind::tiering;
    policy.stash_ids = base_stashes;
    const auto options = sp::enumerate_options(policy);
    const sp::PlacementEvaluator eval(catalog, options, {}, cfg);

    double budget = 0;
    for (const sp::StashSpec& s : stashes) {
      budget += static_cast<double>(capacities.at(s.id)) * s.price_per_byte;
    }
    double quantum = base_quantum;
    if (quantum <= 0) {
      quantum = std::numeric_limits<double>::infinity();
      for (const sp::ItemStats& k : workload.items) {
        for (std::size_t o = 0; o < options.size(); ++o) {
          const double p = eval.price(o, k);
          if (p > 0) quantum = std::min(quantum, p);
        }
      }
      if (!std::isfinite(quantum)) quantum = 1;
    }
    const sp::Solution exact = sp::exact_solution(
        workload.items, eval, budget, quantum,
        static_cast<std::size_t>(base_dp_mem_mb * 1024.0 * 1024.0));

    const auto lists = sp::build_viable_lists(workload.items, eval, 1);
    const sp::Solution greedy = sp::greedy_solution(workload.items, eval, lists, budget);

    nlohmann::json j;
    j["heuristic"]["expected_io_ns"] = heuristic_time;
    for (const auto& [item, stash] : heuristic.stash_of) j["heuristic"]["assignment"][item] = stash;
    j["exact"]["expected_io_ns"] = exact.expected_service_time;
    j["exact"]["spent_dollars"] = exact.money_spent;
    j["greedy"]["expected_io_ns"] = greedy.expected_service_time;
    j["greedy"]["spent_dollars"] = greedy.money_spent;
    j["budget_dollars"] = budget;
    for (std::size_t i = 0; i < workload.items.size(); ++i) {
      j["exact"]["assignment"][workload.items[i].id] = exact.placement_of(i).label();
      j["greedy"]["assignment"][workload.items[i].id] = greedy.placement_of(i).label();
    }
    std::string payload;
    if (base_output.format == "csv") {
      std::ostringstream out;
      out << "method,expected_io_ns,spent_dollars\n";
      out << "heuristic," << sp::format_number(heuristic_time) << ",\n";
      out << "greedy," << sp::format_number(greedy.expected_service_time) << ','
          << sp::format_number(greedy.money_spent) << '\n';
      out << "exact," << sp::format_number(exact.expected_service_time) << ','
          << sp::format_number(exact.money_spent) << '\n';
      payload = out.str();
    } else {
      payload = j.dump(2) + "\n";
    }
    write_output(base_output, payload);
    return 0;
  }

  if (validate->parsed()) {
    if (val_catalog.empty() && val_trace.empty() && val_summary.empty() &&
        val_experiment.empty()) {
      throw sp::ValidationError("validate needs at least one input to check");
    }
    std::optional<sp::StashCatalog> catalog;
    sp::CostModelConfig cfg;
    if (!val_catalog.empty()) {
      const auto sections = load_sections(val_catalog);
      catalog.emplace(sp::parse_catalog(sections));
      cfg = sp::parse_model_config(sections);
      if (cfg.baseline_mode == sp::BaselineMode::host_side) {
        catalog->at(cfg.permanent_store ? *cfg.permanent_store : "");
      }
      std::cerr << "catalog ok: " << catalog->size() << " stashes\n";
    }
    if (!val_trace.empty()) {
      std::ifstream in(val_trace);
      if (!in) throw sp::ValidationError("cannot open trace file: " + val_trace);
      sp::TraceReader reader(in);
      std::uint64_t count = 0;
      while (reader.next()) ++count;
      std::cerr << "trace ok: " << count << " records\n";
    }
    if (!val_summary.empty()) {
      std::ifstream in(val_summary);
      if (!in) throw sp::ValidationError("cannot open summary file: " + val_summary);
      const sp::WorkloadSummary workload = sp::read_summary(in);
      std::cerr << "summary ok: " << workload.items.size() << " items\n";
    }
    if (!val_experiment.empty()) {
      const auto sections = load_sections(val_experiment);
      const auto experiments = sp::parse_experiments(sections, cfg);
      for (const auto& e : experiments) {
        const auto options = sp::enumerate_options(e.policy);
        if (catalog) {
          for (const auto& option : options) {
            for (const auto& id : option.stashes()) catalog->at(id);
          }
        }
      }
      std::cerr << "experiments ok: " << experiments.size() << " defined\n";
    }
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sp::CapacityExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
