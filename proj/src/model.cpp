#include "stashplan/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace stashplan {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

void StashSpec::validate() const {
  const std::string where = "stash " + (id.empty() ? std::string("<unnamed>") : id) + ": ";
  require(!id.empty(), where + "id must be non-empty");
  require(read_latency_ns >= 0, where + "read_latency_ns must be >= 0");
  require(write_latency_ns >= 0, where + "write_latency_ns must be >= 0");
  require(read_bw_bytes_per_ns > 0, where + "read_bandwidth must be > 0");
  require(write_bw_bytes_per_ns > 0, where + "write_bandwidth must be > 0");
  require(price_per_byte >= 0, where + "price_per_byte must be >= 0");
  require(mtbf_hours > 0, where + "mtbf_hours must be > 0");
  require(mttr_hours >= 0, where + "mttr_hours must be >= 0");
}

void ItemStats::validate() const {
  const std::string where = "item " + (id.empty() ? std::string("<unnamed>") : id) + ": ";
  require(!id.empty(), where + "id must be non-empty");
  require(size_bytes > 0, where + "size_bytes must be > 0");
  require(comp_ns >= 0, where + "comp_ns must be >= 0");
  require(read_freq >= 0, where + "read_freq must be >= 0");
  require(write_freq >= 0, where + "write_freq must be >= 0");
}

PlacementOption::PlacementOption(std::vector<std::string> stash_ids)
    : stashes_(std::move(stash_ids)) {
  std::sort(stashes_.begin(), stashes_.end());
  if (std::adjacent_find(stashes_.begin(), stashes_.end()) != stashes_.end()) {
    throw ValidationError("placement option contains a duplicate stash id");
  }
}

bool PlacementOption::contains(std::string_view id) const {
  return std::binary_search(stashes_.begin(), stashes_.end(), id);
}

std::string PlacementOption::label() const {
  if (stashes_.empty()) return "none";
  std::string out;
  for (const auto& s : stashes_) {
    if (!out.empty()) out += '+';
    out += s;
  }
  return out;
}

bool canonical_less(const PlacementOption& a, const PlacementOption& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.stashes().begin(), a.stashes().end(),
                                      b.stashes().begin(), b.stashes().end());
}

void FailureEvent::validate() const {
  require(!failed.empty(), "failure event: failed set must be non-empty");
  require(rate_per_request >= 0, "failure event: rate must be >= 0");
}

std::string_view to_string(WriteMode m) {
  return m == WriteMode::sequential ? "sequential" : "concurrent";
}

std::string_view to_string(BaselineMode m) {
  return m == BaselineMode::kvs ? "kvs" : "host_side";
}

StashCatalog::StashCatalog(std::vector<StashSpec> stashes) : stashes_(std::move(stashes)) {
  for (std::size_t i = 0; i < stashes_.size(); ++i) {
    stashes_[i].validate();
    if (stashes_[i].name.empty()) stashes_[i].name = stashes_[i].id;
    auto [it, inserted] = index_.emplace(stashes_[i].id, i);
    (void)it;
    if (!inserted) throw ValidationError("duplicate stash id: " + stashes_[i].id);
  }
}

const StashSpec* StashCatalog::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &stashes_[it->second];
}

const StashSpec& StashCatalog::at(std::string_view id) const {
  const StashSpec* s = find(id);
  if (!s) throw ValidationError("unknown stash id: " + std::string(id));
  return *s;
}

std::size_t StashCatalog::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown stash id: " + std::string(id));
  return it->second;
}

double read_time(const StashSpec& s, const ItemStats& k) {
  return s.read_latency_ns + static_cast<double>(k.size_bytes) / s.read_bw_bytes_per_ns;
}

double write_time(const StashSpec& s, const ItemStats& k) {
  return s.write_latency_ns + static_cast<double>(k.size_bytes) / s.write_bw_bytes_per_ns;
}

double placement_read_time(const PlacementOption& p, const ItemStats& k,
                           const StashCatalog& stashes) {
  if (p.empty()) throw std::invalid_argument("placement_read_time: empty placement");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& id : p.stashes()) best = std::min(best, read_time(stashes.at(id), k));
  return best;
}

double placement_write_time(const PlacementOption& p, const ItemStats& k,
                            const StashCatalog& stashes, WriteMode mode) {
  if (p.empty()) throw std::invalid_argument("placement_write_time: empty placement");
  double sum = 0;
  double worst = 0;
  for (const auto& id : p.stashes()) {
    const double t = write_time(stashes.at(id), k);
    sum += t;
    worst = std::max(worst, t);
  }
  return mode == WriteMode::sequential ? sum : worst;
}

double price(const PlacementOption& p, const ItemStats& k, const StashCatalog& stashes) {
  double total = 0;
  for (const auto& id : p.stashes()) {
    total += static_cast<double>(k.size_bytes) * stashes.at(id).price_per_byte;
  }
  return total;
}

namespace {

// The permanent store profile for host_side baselines and retrievals.
const StashSpec& permanent_spec(const StashCatalog& stashes, const CostModelConfig& cfg) {
  if (!cfg.permanent_store) {
    throw ValidationError("host_side mode requires a permanent_store stash id");
  }
  return stashes.at(*cfg.permanent_store);
}

double baseline_service_time(const ItemStats& k, const StashCatalog& stashes,
                             const CostModelConfig& cfg) {
  if (cfg.baseline_mode == BaselineMode::kvs) {
    // Uncached items are recomputed on reads and never refilled on writes.
    return k.read_freq * k.comp_ns;
  }
  const StashSpec& perm = permanent_spec(stashes, cfg);
  return k.read_freq * read_time(perm, k) + k.write_freq * write_time(perm, k);
}

}  // namespace

double retrieval_cost(const FailureEvent& f, const PlacementOption& p, const ItemStats& k,
                      const StashCatalog& stashes, const CostModelConfig& cfg) {
  if (p.empty()) return 0;
  bool any_failed = false;
  bool any_survived = false;
  double best_survivor = std::numeric_limits<double>::infinity();
  for (const auto& id : p.stashes()) {
    const bool failed = std::find(f.failed.begin(), f.failed.end(), id) != f.failed.end();
    if (failed) {
      any_failed = true;
    } else {
      any_survived = true;
      best_survivor = std::min(best_survivor, read_time(stashes.at(id), k));
    }
  }
  if (!any_failed) return 0;
  if (any_survived) return best_survivor;
  // All copies lost: recompute or go back to permanent store.
  if (cfg.baseline_mode == BaselineMode::kvs) return k.comp_ns;
  return read_time(permanent_spec(stashes, cfg), k);
}

double restore_cost(const FailureEvent& f, const PlacementOption& p, const ItemStats& k,
                    const StashCatalog& stashes) {
  double total = 0;
  for (const auto& id : p.stashes()) {
    if (std::find(f.failed.begin(), f.failed.end(), id) != f.failed.end()) {
      total += write_time(stashes.at(id), k);
    }
  }
  return total;
}

double service_time(const PlacementOption& p, const ItemStats& k,
                    std::span<const FailureEvent> failures, const StashCatalog& stashes,
                    const CostModelConfig& cfg) {
  if (p.empty()) return baseline_service_time(k, stashes, cfg);
  double serv = k.read_freq * placement_read_time(p, k, stashes) +
                k.write_freq * placement_write_time(p, k, stashes, cfg.write_mode);
  if (cfg.count_failures) {
    for (const FailureEvent& f : failures) {
      serv += f.rate_per_request *
              (restore_cost(f, p, k, stashes) + retrieval_cost(f, p, k, stashes, cfg));
    }
  }
  return serv;
}

double benefit(const PlacementOption& p, const ItemStats& k,
               std::span<const FailureEvent> failures, const StashCatalog& stashes,
               const CostModelConfig& cfg) {
  return baseline_service_time(k, stashes, cfg) - service_time(p, k, failures, stashes, cfg);
}

PlacementEvaluator::PlacementEvaluator(const StashCatalog& stashes,
                                       std::span<const PlacementOption> options,
                                       std::span<const FailureEvent> failures,
                                       const CostModelConfig& cfg)
    : catalog_(&stashes), cfg_(cfg) {
  if (stashes.size() > 64) {
    throw ValidationError("placement evaluator supports at most 64 stashes");
  }
  stash_.reserve(stashes.size());
  for (const StashSpec& s : stashes.stashes()) {
    stash_.push_back({s.read_latency_ns, 1.0 / s.read_bw_bytes_per_ns, s.write_latency_ns,
                      1.0 / s.write_bw_bytes_per_ns});
  }
  option_views_.assign(options.begin(), options.end());
  options_.reserve(options.size());
  for (const PlacementOption& p : options) {
    Option o;
    for (const auto& id : p.stashes()) {
      const std::size_t idx = stashes.index_of(id);
      o.mask |= std::uint64_t{1} << idx;
      o.members.push_back(static_cast<std::uint16_t>(idx));
      const StashSpec& s = stashes.stashes()[idx];
      o.price_per_byte_sum += s.price_per_byte;
      o.write_latency_sum += s.write_latency_ns;
      o.write_inv_bw_sum += 1.0 / s.write_bw_bytes_per_ns;
    }
    options_.push_back(std::move(o));
  }
  if (cfg_.count_failures) {
    events_.reserve(failures.size());
    for (const FailureEvent& f : failures) {
      f.validate();
      Event e;
      e.rate = f.rate_per_request;
      for (const auto& id : f.failed) e.mask |= std::uint64_t{1} << stashes.index_of(id);
      events_.push_back(e);
    }
  }
  if (cfg_.baseline_mode == BaselineMode::host_side) {
    permanent_index_ = stashes.index_of(permanent_spec(stashes, cfg_).id);
  }
}

double PlacementEvaluator::read_of(std::size_t stash, const ItemStats& k) const {
  const Stash& s = stash_[stash];
  return s.read_latency + static_cast<double>(k.size_bytes) * s.read_inv_bw;
}

double PlacementEvaluator::write_of(std::size_t stash, const ItemStats& k) const {
  const Stash& s = stash_[stash];
  return s.write_latency + static_cast<double>(k.size_bytes) * s.write_inv_bw;
}

double PlacementEvaluator::price(std::size_t option, const ItemStats& k) const {
  return static_cast<double>(k.size_bytes) * options_[option].price_per_byte_sum;
}

double PlacementEvaluator::baseline_service_time(const ItemStats& k) const {
  if (cfg_.baseline_mode == BaselineMode::kvs) return k.read_freq * k.comp_ns;
  return k.read_freq * read_of(permanent_index_, k) + k.write_freq * write_of(permanent_index_, k);
}

double PlacementEvaluator::service_time(std::size_t option, const ItemStats& k) const {
  const Option& o = options_[option];
  if (o.members.empty()) return baseline_service_time(k);

  double read = std::numeric_limits<double>::infinity();
  for (std::uint16_t m : o.members) read = std::min(read, read_of(m, k));

  double write;
  if (cfg_.write_mode == WriteMode::sequential) {
    write = o.write_latency_sum + static_cast<double>(k.size_bytes) * o.write_inv_bw_sum;
  } else {
    write = 0;
    for (std::uint16_t m : o.members) write = std::max(write, write_of(m, k));
  }

  double serv = k.read_freq * read + k.write_freq * write;
  for (const Event& e : events_) {
    const std::uint64_t lost = e.mask & o.mask;
    if (lost == 0) continue;
    double restore = 0;
    for (std::uint64_t bits = lost; bits != 0; bits &= bits - 1) {
      restore += write_of(static_cast<std::size_t>(std::countr_zero(bits)), k);
    }
    double retrieve;
    const std::uint64_t survivors = o.mask & ~e.mask;
    if (survivors == 0) {
      retrieve = cfg_.baseline_mode == BaselineMode::kvs ? k.comp_ns : read_of(permanent_index_, k);
    } else {
      retrieve = std::numeric_limits<double>::infinity();
      for (std::uint64_t bits = survivors; bits != 0; bits &= bits - 1) {
        retrieve =
            std::min(retrieve, read_of(static_cast<std::size_t>(std::countr_zero(bits)), k));
      }
    }
    serv += e.rate * (restore + retrieve);
  }
  return serv;
}

double PlacementEvaluator::benefit(std::size_t option, const ItemStats& k) const {
  return baseline_service_time(k) - service_time(option, k);
}

}  // namespace stashplan
