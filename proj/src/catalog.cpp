#include "stashplan/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>

namespace stashplan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(const KeyedSection& section, std::string_view key) {
  const std::string& text = section.get(key);
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError(section.line, "[" + section.kind + " " + section.name + "] " +
                                       std::string(key) + ": bad number '" + text + "'");
  }
  return v;
}

bool parse_bool(const KeyedSection& section, std::string_view key) {
  const std::string& text = section.get(key);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ParseError(section.line, "[" + section.kind + "] " + std::string(key) +
                                     ": expected true/false, got '" + text + "'");
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) pos = text.size();
    const std::string_view field = trim(text.substr(start, pos - start));
    if (!field.empty()) out.emplace_back(field);
    start = pos + 1;
  }
  return out;
}

void reject_unknown_keys(const KeyedSection& section, std::span<const std::string_view> known) {
  for (const auto& [key, value] : section.entries) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(section.line,
                       "[" + section.kind + " " + section.name + "] unknown key '" + key + "'");
    }
  }
}

WriteMode parse_write_mode(const KeyedSection& section) {
  const std::string& text = section.get("write_mode");
  if (text == "sequential") return WriteMode::sequential;
  if (text == "concurrent") return WriteMode::concurrent;
  throw ParseError(section.line, "write_mode: expected sequential or concurrent, got '" +
                                     text + "'");
}

BaselineMode parse_baseline_mode(const KeyedSection& section) {
  const std::string& text = section.get("baseline_mode");
  if (text == "kvs") return BaselineMode::kvs;
  if (text == "host_side") return BaselineMode::host_side;
  throw ParseError(section.line,
                   "baseline_mode: expected kvs or host_side, got '" + text + "'");
}

void apply_model_keys(const KeyedSection& section, CostModelConfig& cfg) {
  if (section.find("write_mode")) cfg.write_mode = parse_write_mode(section);
  if (section.find("baseline_mode")) cfg.baseline_mode = parse_baseline_mode(section);
  if (section.find("count_failures")) cfg.count_failures = parse_bool(section, "count_failures");
  if (const std::string* perm = section.find("permanent_store")) cfg.permanent_store = *perm;
}

constexpr std::string_view kModelKeys[] = {"write_mode", "baseline_mode", "count_failures",
                                           "permanent_store"};

}  // namespace

const std::string* KeyedSection::find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& KeyedSection::get(std::string_view key) const {
  const std::string* v = find(key);
  if (!v) {
    throw ParseError(line, "[" + kind + (name.empty() ? "" : " " + name) + "] missing key '" +
                               std::string(key) + "'");
  }
  return *v;
}

std::vector<KeyedSection> parse_keyed_text(std::istream& in) {
  std::vector<KeyedSection> sections;
  std::string buffer;
  std::uint64_t line = 0;
  while (std::getline(in, buffer)) {
    ++line;
    const std::string_view text = trim(buffer);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(line, "unterminated section header");
      const std::string_view inner = trim(text.substr(1, text.size() - 2));
      if (inner.empty()) throw ParseError(line, "empty section header");
      KeyedSection section;
      section.line = line;
      const std::size_t space = inner.find(' ');
      if (space == std::string_view::npos) {
        section.kind = std::string(inner);
      } else {
        section.kind = std::string(trim(inner.substr(0, space)));
        section.name = std::string(trim(inner.substr(space + 1)));
      }
      sections.push_back(std::move(section));
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
    if (sections.empty()) throw ParseError(line, "key outside of any [section]");
    std::string key(trim(text.substr(0, eq)));
    std::string value(trim(text.substr(eq + 1)));
    if (key.empty()) throw ParseError(line, "empty key");
    if (sections.back().find(key)) {
      throw ParseError(line, "duplicate key '" + key + "' in section [" +
                                 sections.back().kind + "]");
    }
    sections.back().entries.emplace_back(std::move(key), std::move(value));
  }
  return sections;
}

StashCatalog parse_catalog(std::span<const KeyedSection> sections) {
  constexpr std::string_view kKeys[] = {
      "name",          "read_latency_ns",         "write_latency_ns",
      "read_bandwidth_mb_per_s", "write_bandwidth_mb_per_s", "price_per_gb",
      "mtbf_hours",    "mttr_hours"};
  std::vector<StashSpec> specs;
  for (const KeyedSection& section : sections) {
    if (section.kind != "stash") continue;
    if (section.name.empty()) throw ParseError(section.line, "[stash] needs a name: [stash DRAM]");
    reject_unknown_keys(section, kKeys);
    StashSpec s;
    s.id = section.name;
    s.name = section.find("name") ? *section.find("name") : section.name;
    s.read_latency_ns = parse_number(section, "read_latency_ns");
    s.write_latency_ns = parse_number(section, "write_latency_ns");
    s.read_bw_bytes_per_ns = mb_per_sec_to_bytes_per_ns(parse_number(section, "read_bandwidth_mb_per_s"));
    s.write_bw_bytes_per_ns =
        mb_per_sec_to_bytes_per_ns(parse_number(section, "write_bandwidth_mb_per_s"));
    s.price_per_byte = dollars_per_gb_to_dollars_per_byte(parse_number(section, "price_per_gb"));
    s.mtbf_hours = parse_number(section, "mtbf_hours");
    s.mttr_hours = parse_number(section, "mttr_hours");
    specs.push_back(std::move(s));
  }
  if (specs.empty()) throw ParseError(0, "catalog contains no [stash] sections");
  return StashCatalog(std::move(specs));
}

CostModelConfig parse_model_config(std::span<const KeyedSection> sections,
                                   CostModelConfig defaults) {
  for (const KeyedSection& section : sections) {
    if (section.kind != "model") continue;
    reject_unknown_keys(section, kModelKeys);
    apply_model_keys(section, defaults);
  }
  return defaults;
}

PolicySet::Kind parse_policy_kind(std::string_view text) {
  if (text == "tiering") return PolicySet::Kind::tiering;
  if (text == "optional_replication" || text == "optional") {
    return PolicySet::Kind::optional_replication;
  }
  if (text == "forced_replication" || text == "forced") return PolicySet::Kind::forced_replication;
  if (text == "custom") return PolicySet::Kind::custom;
  throw ValidationError("unknown policy '" + std::string(text) +
                        "' (expected tiering, optional_replication, forced_replication or "
                        "custom)");
}

std::string_view to_string(PolicySet::Kind kind) {
  switch (kind) {
    case PolicySet::Kind::tiering:
      return "tiering";
    case PolicySet::Kind::optional_replication:
      return "optional_replication";
    case PolicySet::Kind::forced_replication:
      return "forced_replication";
    case PolicySet::Kind::custom:
      return "custom";
  }
  return "?";
}

PlacementOption parse_placement(std::string_view text) {
  text = trim(text);
  if (text == "none" || text.empty()) return PlacementOption{};
  return PlacementOption(split_list(text, '+'));
}

std::vector<ExperimentConfig> parse_experiments(std::span<const KeyedSection> sections,
                                                const CostModelConfig& base) {
  constexpr std::string_view kKeys[] = {
      "policy",     "stashes",    "options",       "budgets",        "budget_min",
      "budget_max", "budget_step", "write_mode",   "baseline_mode",  "count_failures",
      "permanent_store"};
  std::vector<ExperimentConfig> experiments;
  for (const KeyedSection& section : sections) {
    if (section.kind != "experiment") continue;
    reject_unknown_keys(section, kKeys);
    ExperimentConfig exp;
    exp.label = section.name.empty() ? "experiment" : section.name;
    exp.cfg = base;
    apply_model_keys(section, exp.cfg);

    try {
      exp.policy.kind = parse_policy_kind(section.get("policy"));
    } catch (const ValidationError& e) {
      throw ParseError(section.line, e.what());
    }
    if (exp.policy.kind == PolicySet::Kind::custom) {
      for (const std::string& spec : split_list(section.get("options"), ' ')) {
        exp.policy.custom_options.push_back(parse_placement(spec));
      }
    } else {
      exp.policy.stash_ids = split_list(section.get("stashes"), ',');
    }

    if (const std::string* list = section.find("budgets")) {
      for (const std::string& b : split_list(*list, ',')) {
        double v = 0;
        auto res = std::from_chars(b.data(), b.data() + b.size(), v);
        if (res.ec != std::errc{} || res.ptr != b.data() + b.size()) {
          throw ParseError(section.line, "budgets: bad number '" + b + "'");
        }
        exp.budgets.push_back(v);
      }
    } else if (section.find("budget_min")) {
      const double lo = parse_number(section, "budget_min");
      const double hi = parse_number(section, "budget_max");
      const double step = parse_number(section, "budget_step");
      if (step <= 0 || hi < lo) {
        throw ParseError(section.line, "budget grid: need budget_min <= budget_max, step > 0");
      }
      for (double b = lo; b <= hi + step * 1e-9; b += step) exp.budgets.push_back(b);
    } else {
      throw ParseError(section.line, "[experiment " + exp.label +
                                         "] needs 'budgets' or budget_min/max/step");
    }
    if (exp.budgets.empty() ||
        !std::is_sorted(exp.budgets.begin(), exp.budgets.end(),
                        [](double a, double b) { return a <= b; }) ||
        exp.budgets.front() < 0) {
      throw ParseError(section.line,
                       "budgets must be non-empty, strictly increasing and >= 0");
    }
    experiments.push_back(std::move(exp));
  }
  return experiments;
}

}  // namespace stashplan
