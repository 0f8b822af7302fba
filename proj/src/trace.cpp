#include "stashplan/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace stashplan {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double_field(std::string_view text, std::uint64_t line, std::string_view what) {
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError(line, "bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_u64_field(std::string_view text, std::uint64_t line, std::string_view what) {
  std::uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(line, "bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// Shared by trace records (4 fields) and summary lines (5 fields).
TraceRecord parse_record_fields(std::span<const std::string_view> fields, std::uint64_t line) {
  TraceRecord rec;
  if (fields[0] == "R") {
    rec.op = TraceRecord::Op::read;
  } else if (fields[0] == "W") {
    rec.op = TraceRecord::Op::write;
  } else {
    throw ParseError(line, "unknown op code: '" + std::string(fields[0]) + "'");
  }
  if (fields[1].empty()) throw ParseError(line, "empty item id");
  rec.item_id = std::string(fields[1]);
  rec.size_bytes = parse_u64_field(fields[2], line, "size");
  if (rec.size_bytes == 0) throw ParseError(line, "size must be > 0");
  rec.comp_ns = parse_double_field(fields[3], line, "comp");
  if (rec.comp_ns < 0) throw ParseError(line, "comp must be >= 0");
  return rec;
}

}  // namespace

ParseError::ParseError(std::uint64_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::optional<TraceRecord> TraceReader::next() {
  while (std::getline(*in_, buffer_)) {
    ++line_;
    std::string_view text = buffer_;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (fields.size() != 4) {
      throw ParseError(line_, "expected 4 comma-separated fields, got " +
                                  std::to_string(fields.size()));
    }
    return parse_record_fields(fields, line_);
  }
  return std::nullopt;
}

void write_trace_record(std::ostream& out, const TraceRecord& rec) {
  out << (rec.op == TraceRecord::Op::read ? 'R' : 'W') << ',' << rec.item_id << ','
      << rec.size_bytes << ',' << format_double(rec.comp_ns) << '\n';
}

void WorkloadSummary::validate() const {
  if (!(duration_hours > 0)) throw ValidationError("workload: duration_hours must be > 0");
  if (total_requests == 0) throw ValidationError("workload: total_requests must be > 0");
  long double sum = 0;
  for (const ItemStats& item : items) {
    item.validate();
    sum += item.read_freq;
    sum += item.write_freq;
  }
  if (std::abs(static_cast<double>(sum) - 1.0) > 1e-9) {
    throw ValidationError("workload: frequencies sum to " +
                          format_double(static_cast<double>(sum)) + ", expected 1");
  }
}

WorkloadSummary build_summary(TraceReader& reader, double duration_hours) {
  if (!(duration_hours > 0)) throw ValidationError("build_summary: duration_hours must be > 0");

  struct Accum {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t size = 0;
    double comp = 0;
  };
  std::unordered_map<std::string, Accum> per_item;
  std::uint64_t total = 0;
  while (auto rec = reader.next()) {
    Accum& a = per_item[rec->item_id];
    (rec->op == TraceRecord::Op::read ? a.reads : a.writes) += 1;
    a.size = std::max(a.size, rec->size_bytes);
    a.comp = std::max(a.comp, rec->comp_ns);
    ++total;
  }
  if (total == 0) throw ValidationError("build_summary: trace contains no requests");

  WorkloadSummary summary;
  summary.total_requests = total;
  summary.duration_hours = duration_hours;
  summary.items.reserve(per_item.size());
  const double n = static_cast<double>(total);
  for (auto& [id, a] : per_item) {
    if (a.reads == 0 && a.writes == 0) continue;
    summary.items.push_back({id, a.size, a.comp, static_cast<double>(a.reads) / n,
                             static_cast<double>(a.writes) / n});
  }
  std::sort(summary.items.begin(), summary.items.end(),
            [](const ItemStats& a, const ItemStats& b) { return a.id < b.id; });
  return summary;
}

WorkloadSummary read_summary(std::istream& in) {
  std::string buffer;
  std::uint64_t line = 0;
  if (!std::getline(in, buffer)) throw ParseError(1, "empty summary");
  ++line;
  std::string_view header = buffer;
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);

  WorkloadSummary summary;
  {
    constexpr std::string_view kPrefix = "#requests=";
    constexpr std::string_view kHours = " #hours=";
    if (!header.starts_with(kPrefix)) {
      throw ParseError(line, "summary must start with '#requests=<N> #hours=<H>'");
    }
    const std::size_t hours_at = header.find(kHours);
    if (hours_at == std::string_view::npos) {
      throw ParseError(line, "summary header missing '#hours='");
    }
    summary.total_requests =
        parse_u64_field(header.substr(kPrefix.size(), hours_at - kPrefix.size()), line,
                        "request count");
    summary.duration_hours =
        parse_double_field(header.substr(hours_at + kHours.size()), line, "hours");
  }

  struct Accum {
    std::uint64_t size = 0;
    double comp = 0;
    double read_freq = 0;
    double write_freq = 0;
  };
  std::unordered_map<std::string, Accum> per_item;
  while (std::getline(in, buffer)) {
    ++line;
    std::string_view text = buffer;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (fields.size() != 5) {
      throw ParseError(line, "expected 5 comma-separated fields, got " +
                                  std::to_string(fields.size()));
    }
    const TraceRecord rec =
        parse_record_fields(std::span<const std::string_view>(fields).first(4), line);
    const double freq = parse_double_field(fields[4], line, "frequency");
    if (freq < 0) throw ParseError(line, "frequency must be >= 0");
    Accum& a = per_item[rec.item_id];
    a.size = std::max(a.size, rec.size_bytes);
    a.comp = std::max(a.comp, rec.comp_ns);
    (rec.op == TraceRecord::Op::read ? a.read_freq : a.write_freq) += freq;
  }

  summary.items.reserve(per_item.size());
  for (auto& [id, a] : per_item) {
    summary.items.push_back({id, a.size, a.comp, a.read_freq, a.write_freq});
  }
  std::sort(summary.items.begin(), summary.items.end(),
            [](const ItemStats& a, const ItemStats& b) { return a.id < b.id; });
  summary.validate();
  return summary;
}

void write_summary(std::ostream& out, const WorkloadSummary& summary) {
  out << "#requests=" << summary.total_requests << " #hours="
      << format_double(summary.duration_hours) << '\n';
  for (const ItemStats& item : summary.items) {
    if (item.read_freq > 0) {
      out << "R," << item.id << ',' << item.size_bytes << ',' << format_double(item.comp_ns)
          << ',' << format_double(item.read_freq) << '\n';
    }
    if (item.write_freq > 0) {
      out << "W," << item.id << ',' << item.size_bytes << ',' << format_double(item.comp_ns)
          << ',' << format_double(item.write_freq) << '\n';
    }
  }
}

std::vector<FailureEvent> failure_rates(const StashCatalog& stashes, double requests_per_hour) {
  if (!(requests_per_hour > 0)) {
    throw ValidationError("failure_rates: requests_per_hour must be > 0");
  }
  std::vector<FailureEvent> events;
  events.reserve(stashes.size());
  for (const StashSpec& s : stashes.stashes()) {
    // requests_per_hour * (MTBF + MTTR) requests pass between two failures
    // of s; the per-request rate is its reciprocal.
    const double requests_between = requests_per_hour * (s.mtbf_hours + s.mttr_hours);
    events.push_back({{s.id}, 1.0 / requests_between});
  }
  return events;
}

Distribution Distribution::parse(std::string_view text) {
  const auto fields = split(text, ':');
  Distribution d;
  if (fields[0] == "fixed" && fields.size() == 2) {
    d.kind = Kind::fixed;
    d.a = parse_double_field(fields[1], 0, "distribution value");
    return d;
  }
  if ((fields[0] == "uniform" || fields[0] == "loguniform") && fields.size() == 3) {
    d.kind = fields[0] == "uniform" ? Kind::uniform : Kind::loguniform;
    d.a = parse_double_field(fields[1], 0, "distribution lower bound");
    d.b = parse_double_field(fields[2], 0, "distribution upper bound");
    if (d.a > d.b) throw ValidationError("distribution: lower bound exceeds upper bound");
    if (d.kind == Kind::loguniform && d.a <= 0) {
      throw ValidationError("distribution: loguniform requires positive bounds");
    }
    return d;
  }
  throw ValidationError("distribution: expected 'fixed:<v>', 'uniform:<lo>:<hi>' or "
                        "'loguniform:<lo>:<hi>', got '" +
                        std::string(text) + "'");
}

std::string Distribution::to_text() const {
  switch (kind) {
    case Kind::fixed:
      return "fixed:" + format_double(a);
    case Kind::uniform:
      return "uniform:" + format_double(a) + ":" + format_double(b);
    case Kind::loguniform:
      return "loguniform:" + format_double(a) + ":" + format_double(b);
  }
  return {};
}

namespace {

// 53-bit mantissa draw in [0, 1); well-defined for a given engine state.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double Distribution::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::fixed:
      return a;
    case Kind::uniform:
      return a + unit_draw(rng) * (b - a);
    case Kind::loguniform:
      return std::exp(std::log(a) + unit_draw(rng) * (std::log(b) - std::log(a)));
  }
  return a;
}

WorkloadSummary synth_workload(const SynthSpec& spec) {
  if (spec.n_items == 0) throw ValidationError("synth_workload: n_items must be >= 1");
  if (spec.zipf_exponent < 0) throw ValidationError("synth_workload: zipf_exponent must be >= 0");
  if (spec.read_weight < 0 || spec.write_weight < 0 ||
      spec.read_weight + spec.write_weight <= 0) {
    throw ValidationError("synth_workload: read/write weights must be >= 0 and not both zero");
  }
  if (spec.total_requests == 0) throw ValidationError("synth_workload: total_requests must be > 0");
  if (!(spec.duration_hours > 0)) throw ValidationError("synth_workload: duration_hours must be > 0");

  std::vector<double> weight(spec.n_items);
  long double weight_sum = 0;
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    weight[i] = std::pow(static_cast<double>(i + 1), -spec.zipf_exponent);
    weight_sum += weight[i];
  }
  const double read_share = spec.read_weight / (spec.read_weight + spec.write_weight);

  int width = 1;
  for (std::size_t v = spec.n_items; v >= 10; v /= 10) ++width;

  std::mt19937_64 rng(spec.seed);
  WorkloadSummary summary;
  summary.total_requests = spec.total_requests;
  summary.duration_hours = spec.duration_hours;
  summary.items.resize(spec.n_items);
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    ItemStats& item = summary.items[i];
    std::string digits = std::to_string(i);
    item.id = "item" + std::string(width - static_cast<int>(digits.size()), '0') + digits;
    const double size = spec.size_dist.sample(rng);
    item.size_bytes = size < 1 ? 1 : static_cast<std::uint64_t>(std::llround(size));
    item.comp_ns = std::max(0.0, spec.comp_dist.sample(rng));
    const double z = static_cast<double>(weight[i] / weight_sum);
    item.read_freq = z * read_share;
    item.write_freq = z * (1.0 - read_share);
  }
  summary.validate();
  return summary;
}

void sample_trace(std::ostream& out, const WorkloadSummary& summary, std::uint64_t n_requests,
                  std::uint64_t seed) {
  if (summary.items.empty()) throw ValidationError("sample_trace: empty workload");
  std::vector<double> cdf(summary.items.size());
  long double acc = 0;
  for (std::size_t i = 0; i < summary.items.size(); ++i) {
    acc += summary.items[i].read_freq + summary.items[i].write_freq;
    cdf[i] = static_cast<double>(acc);
  }
  const double total = cdf.back();

  std::mt19937_64 rng(seed);
  TraceRecord rec;
  for (std::uint64_t r = 0; r < n_requests; ++r) {
    const double u = unit_draw(rng) * total;
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const ItemStats& item = summary.items[std::min(i, summary.items.size() - 1)];
    const double f = item.read_freq + item.write_freq;
    const bool is_read = f > 0 && unit_draw(rng) * f < item.read_freq;
    rec.op = is_read ? TraceRecord::Op::read : TraceRecord::Op::write;
    rec.item_id = item.id;
    rec.size_bytes = item.size_bytes;
    rec.comp_ns = is_read ? item.comp_ns : 0;
    write_trace_record(out, rec);
  }
}

}  // namespace stashplan
