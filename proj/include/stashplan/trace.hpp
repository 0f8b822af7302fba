#pragma once

// Request-trace ingestion and synthesis.
//
// Trace format, one record per line, LF-terminated ASCII:
//     <op>,<item_id>,<size_bytes>,<comp_ns>        op in {R, W}
// Lines starting with '#' are comments; blank lines are skipped.
//
// Workload summary format: a header line
//     #requests=<N> #hours=<H>
// followed by one line per item and op carrying the op's frequency:
//     <op>,<item_id>,<size_bytes>,<comp_ns>,<freq>
// Frequencies of all lines sum to 1. Numbers use shortest round-trip
// formatting, so write/read cycles are bit-exact.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "stashplan/model.hpp"

namespace stashplan {

/// Malformed input; what() includes the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::uint64_t line, const std::string& message);
  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_;
};

struct TraceRecord {
  enum class Op { read, write };
  Op op = Op::read;
  std::string item_id;
  std::uint64_t size_bytes = 0;
  double comp_ns = 0;
};

/// Streaming line-by-line trace parser; memory use is independent of trace
/// length. Throws ParseError on malformed lines.
class TraceReader {
 public:
  explicit TraceReader(std::istream& in) : in_(&in) {}
  std::optional<TraceRecord> next();
  std::uint64_t line() const { return line_; }

 private:
  std::istream* in_;
  std::uint64_t line_ = 0;
  std::string buffer_;
};

void write_trace_record(std::ostream& out, const TraceRecord& rec);

struct WorkloadSummary {
  std::vector<ItemStats> items;  // sorted by id
  std::uint64_t total_requests = 0;
  double duration_hours = 0;

  double requests_per_hour() const { return static_cast<double>(total_requests) / duration_hours; }
  /// Checks per-item invariants and that frequencies sum to 1 within 1e-9.
  void validate() const;
};

/// Counts reads/writes per item and normalizes by the total request count.
/// Size and comp conflicts across records resolve to the maximum observed.
WorkloadSummary build_summary(TraceReader& reader, double duration_hours);

WorkloadSummary read_summary(std::istream& in);
void write_summary(std::ostream& out, const WorkloadSummary& summary);

/// Single-stash failure events: each stash fails alone at a per-request rate
/// of 1 / (requests_per_hour * (MTBF + MTTR)).
std::vector<FailureEvent> failure_rates(const StashCatalog& stashes, double requests_per_hour);

/// Scalar distribution for synthetic item sizes and compute costs.
/// Spelled "fixed:<v>", "uniform:<lo>:<hi>" or "loguniform:<lo>:<hi>".
struct Distribution {
  enum class Kind { fixed, uniform, loguniform };
  Kind kind = Kind::fixed;
  double a = 0;
  double b = 0;

  static Distribution parse(std::string_view text);
  std::string to_text() const;
  /// Uses explicit arithmetic on raw engine draws, so results are identical
  /// across platforms and standard libraries.
  double sample(std::mt19937_64& rng) const;
};

struct SynthSpec {
  std::size_t n_items = 0;
  double zipf_exponent = 0.99;
  double read_weight = 99;  // read:write ratio, e.g. 99:1
  double write_weight = 1;
  Distribution size_dist{Distribution::Kind::fixed, 4096, 0};
  Distribution comp_dist{Distribution::Kind::fixed, 1e6, 0};
  std::uint64_t total_requests = 1'000'000;
  double duration_hours = 1.0;
  std::uint64_t seed = 0;
};

/// Deterministic synthetic workload: frequencies are Zipfian over item rank,
/// split between reads and writes by the configured ratio.
WorkloadSummary synth_workload(const SynthSpec& spec);

/// Expands a summary into n_requests concrete trace records sampled from the
/// item/op distribution. Deterministic for a given seed.
void sample_trace(std::ostream& out, const WorkloadSummary& summary, std::uint64_t n_requests,
                  std::uint64_t seed);

}  // namespace stashplan
