#pragma once

// Shared fixtures: the device catalog used across tests and the two-item
// appendix workload where the score heuristic is provably non-optimal.

#include <limits>
#include <vector>

#include "stashplan/model.hpp"

namespace fixtures {

inline stashplan::StashSpec make_stash(std::string id, double rlat, double wlat, double r_mb_s,
                                       double w_mb_s, double price_gb, double mtbf,
                                       double mttr) {
  stashplan::StashSpec s;
  s.id = std::move(id);
  s.name = s.id;
  s.read_latency_ns = rlat;
  s.write_latency_ns = wlat;
  s.read_bw_bytes_per_ns = stashplan::mb_per_sec_to_bytes_per_ns(r_mb_s);
  s.write_bw_bytes_per_ns = stashplan::mb_per_sec_to_bytes_per_ns(w_mb_s);
  s.price_per_byte = stashplan::dollars_per_gb_to_dollars_per_byte(price_gb);
  s.mtbf_hours = mtbf;
  s.mttr_hours = mttr;
  return s;
}

// Five candidate media: latencies in ns, bandwidths in MB/s, prices in $/GB.
inline stashplan::StashCatalog device_catalog() {
  return stashplan::StashCatalog({
      make_stash("Disk", 2e6, 2e6, 10, 10, 0.1, 87576, 24),
      make_stash("Flash", 25000, 2e5, 200, 100, 1, 87576, 24),
      make_stash("NVM2", 70, 500, 7 * 1024, 1 * 1024, 2, 43776, 24),
      make_stash("NVM1", 30, 95, 10 * 1024, 5 * 1024, 4, 21875, 24),
      make_stash("DRAM", 10, 10, 10 * 1024, 10 * 1024, 8, 8750, 10),
  });
}

inline stashplan::ItemStats make_item(std::string id, std::uint64_t size, double comp,
                                      double read_freq, double write_freq) {
  return {std::move(id), size, comp, read_freq, write_freq};
}

// Appendix fixture: per-4KiB device times entered as pure latency (infinite
// bandwidth makes the transfer term exactly zero), in nanoseconds.
inline stashplan::StashSpec flat_stash(std::string id, double read_ns, double write_ns,
                                       double price_per_byte = 0) {
  stashplan::StashSpec s;
  s.id = std::move(id);
  s.name = s.id;
  s.read_latency_ns = read_ns;
  s.write_latency_ns = write_ns;
  s.read_bw_bytes_per_ns = std::numeric_limits<double>::infinity();
  s.write_bw_bytes_per_ns = std::numeric_limits<double>::infinity();
  s.price_per_byte = price_per_byte;
  s.mtbf_hours = 87600;
  s.mttr_hours = 0;
  return s;
}

struct AppendixFixture {
  stashplan::StashCatalog catalog;
  std::vector<stashplan::ItemStats> items;
  double normalizer;  // N: frequencies 2.4N, 2N, 3.3N, N sum to 1
};

inline AppendixFixture appendix_fixture(double pcm_price_per_item = 2,
                                        double flash_price_per_item = 1) {
  const double n = 1.0 / 8.7;
  AppendixFixture fx{
      stashplan::StashCatalog({
          flat_stash("PCM", 6700, 128300, pcm_price_per_item / 4096),
          flat_stash("Flash", 108000, 37100, flash_price_per_item / 4096),
          flat_stash("Disk15K", 5000000, 5000000),
      }),
      {
          make_item("item1", 4096, 0, 2.4 * n, 2 * n),
          make_item("item2", 4096, 0, 3.3 * n, 1 * n),
      },
      n,
  };
  return fx;
}

}  // namespace fixtures
