#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "stashplan/model.hpp"

using namespace stashplan;
using fixtures::device_catalog;
using fixtures::make_item;

namespace {

PlacementOption opt(std::vector<std::string> ids) { return PlacementOption(std::move(ids)); }

// Independent route for the random-input property checks below: the same
// formulas written directly against the Table parameters, without going
// through StashSpec conversions twice.
double tiny = 1e-12;

}  // namespace

TEST_CASE("read_time is latency plus size over bandwidth") {
  const StashCatalog cat = device_catalog();
  const ItemStats page = make_item("p", 4096, 0, 0, 0);

  // 25000 + 4096 / (200 * 2^20 / 1e9) = 25000 + 19531.25
  CHECK(read_time(cat.at("Flash"), page) == doctest::Approx(44531.25).epsilon(tiny));

  // 2e6 + 2^20 / (10 * 2^20 / 1e9) = 2e6 + 1e8
  const ItemStats big = make_item("b", std::uint64_t{1} << 20, 0, 0, 0);
  CHECK(read_time(cat.at("Disk"), big) == doctest::Approx(1.02e8).epsilon(tiny));

  // Latency dominates as size -> 0.
  const ItemStats byte = make_item("tiny", 1, 0, 0, 0);
  CHECK(read_time(cat.at("DRAM"), byte) == doctest::Approx(10.0).epsilon(1e-2));
  CHECK(read_time(cat.at("DRAM"), byte) >= 10.0);
}

TEST_CASE("write_time is latency plus size over bandwidth") {
  const StashCatalog cat = device_catalog();
  const ItemStats page = make_item("p", 4096, 0, 0, 0);

  CHECK(write_time(cat.at("Flash"), page) == doctest::Approx(239062.5).epsilon(tiny));
  CHECK(write_time(cat.at("NVM2"), page) == doctest::Approx(4314.697265625).epsilon(tiny));
  CHECK(write_time(cat.at("DRAM"), page) == doctest::Approx(391.4697265625).epsilon(tiny));

  const ItemStats byte = make_item("tiny", 1, 0, 0, 0);
  CHECK(write_time(cat.at("DRAM"), byte) == doctest::Approx(10.0).epsilon(1e-2));
}

TEST_CASE("placement_read_time takes the fastest member") {
  const StashCatalog cat = device_catalog();
  const ItemStats page = make_item("p", 4096, 0, 0, 0);

  CHECK(placement_read_time(opt({"DRAM"}), page, cat) == read_time(cat.at("DRAM"), page));
  // DRAM dominates Flash on both latency and bandwidth.
  CHECK(placement_read_time(opt({"Flash", "DRAM"}), page, cat) ==
        read_time(cat.at("DRAM"), page));
  CHECK(placement_read_time(opt({"Flash", "Disk"}), page, cat) ==
        doctest::Approx(44531.25).epsilon(tiny));
  CHECK_THROWS_AS(placement_read_time(PlacementOption{}, page, cat), std::invalid_argument);
}

TEST_CASE("placement_write_time sums sequentially, maxes concurrently") {
  const StashCatalog cat = device_catalog();
  const ItemStats page = make_item("p", 4096, 0, 0, 0);
  const PlacementOption fd = opt({"Flash", "DRAM"});

  for (WriteMode mode : {WriteMode::sequential, WriteMode::concurrent}) {
    CHECK(placement_write_time(opt({"DRAM"}), page, cat, mode) ==
          write_time(cat.at("DRAM"), page));
  }
  CHECK(placement_write_time(fd, page, cat, WriteMode::sequential) ==
        doctest::Approx(239062.5 + 391.4697265625).epsilon(tiny));
  CHECK(placement_write_time(fd, page, cat, WriteMode::concurrent) ==
        doctest::Approx(239062.5).epsilon(tiny));
  CHECK_THROWS_AS(placement_write_time(PlacementOption{}, page, cat, WriteMode::sequential),
                  std::invalid_argument);
}

TEST_CASE("price is additive over the placement") {
  const StashCatalog cat = device_catalog();
  const ItemStats gig = make_item("g", std::uint64_t{1} << 30, 0, 0, 0);

  CHECK(price(PlacementOption{}, gig, cat) == 0.0);
  CHECK(price(opt({"DRAM"}), gig, cat) == doctest::Approx(8.0).epsilon(tiny));
  CHECK(price(opt({"Flash", "DRAM"}), gig, cat) == doctest::Approx(9.0).epsilon(tiny));
}

TEST_CASE("retrieval cost: survivors win, else recompute or permanent store") {
  const StashCatalog cat = device_catalog();
  const ItemStats page = make_item("p", 4096, 1e6, 0, 0);
  const CostModelConfig kvs;
  const FailureEvent dram_fails{{"DRAM"}, 1e-6};

  CHECK(retrieval_cost(dram_fails, opt({"Flash"}), page, cat, kvs) == 0.0);
  CHECK(retrieval_cost(dram_fails, opt({"DRAM"}), page, cat, kvs) == 1e6);
  CHECK(retrieval_cost(dram_fails, opt({"Flash", "DRAM"}), page, cat, kvs) ==
        doctest::Approx(44531.25).epsilon(tiny));

  CostModelConfig host;
  host.baseline_mode = BaselineMode::host_side;
  host.permanent_store = "Disk";
  CHECK(retrieval_cost(dram_fails, opt({"DRAM"}), page, cat, host) ==
        read_time(cat.at("Disk"), page));
}

TEST_CASE("restore cost rewrites exactly the lost copies") {
  const StashCatalog cat = device_catalog();
  const ItemStats page = make_item("p", 4096, 1e6, 0, 0);

  CHECK(restore_cost({{"DRAM"}, 1e-6}, opt({"Flash"}), page, cat) == 0.0);
  CHECK(restore_cost({{"DRAM"}, 1e-6}, opt({"DRAM"}), page, cat) ==
        doctest::Approx(391.4697265625).epsilon(tiny));
  CHECK(restore_cost({{"Flash", "DRAM"}, 1e-6}, opt({"Flash", "DRAM"}), page, cat) ==
        doctest::Approx(239062.5 + 391.4697265625).epsilon(tiny));
}

TEST_CASE("service time assembles read, write and failure components") {
  const StashCatalog cat = device_catalog();
  const CostModelConfig kvs;

  // Uncached item: every read recomputes, writes are free.
  const ItemStats uncached = make_item("u", 4096, 1e6, 0.01, 0.5);
  CHECK(service_time(PlacementOption{}, uncached, {}, cat, kvs) == doctest::Approx(1e4));

  // Appendix item 1 on PCM, zero failures: 2.4N*6700 + 2N*128300 = N*272680 (ns scale).
  const auto fx = fixtures::appendix_fixture();
  CHECK(service_time(opt({"PCM"}), fx.items[0], {}, fx.catalog, kvs) ==
        doctest::Approx(fx.normalizer * 272680.0).epsilon(tiny));

  // Read-free cached item with a single failure event.
  const ItemStats cold = make_item("c", 4096, 1e6, 0, 0);
  const std::vector<FailureEvent> events{{{"DRAM"}, 1e-3}};
  const double expected = 1e-3 * (1e6 + write_time(cat.at("DRAM"), cold));
  CHECK(service_time(opt({"DRAM"}), cold, events, cat, kvs) ==
        doctest::Approx(expected).epsilon(tiny));
}

TEST_CASE("benefit is the service-time saving over the empty placement") {
  const StashCatalog cat = device_catalog();
  const CostModelConfig kvs;

  const ItemStats page = make_item("p", 4096, 1e6, 0.01, 0.001);
  CHECK(benefit(PlacementOption{}, page, {}, cat, kvs) == 0.0);

  // Appendix item 1 against the Disk-resident baseline:
  // 2.4N*(5000000-6700) + 2N*(5000000-128300) = N*21727320 ns.
  CostModelConfig host;
  host.baseline_mode = BaselineMode::host_side;
  host.permanent_store = "Disk15K";
  const auto fx = fixtures::appendix_fixture();
  CHECK(benefit(opt({"PCM"}), fx.items[0], {}, fx.catalog, host) ==
        doctest::Approx(fx.normalizer * 21727320.0).epsilon(tiny));

  // Nothing to gain on reads and writes only cost: negative benefit.
  const ItemStats free_item = make_item("f", 4096, 0, 0.01, 0.01);
  CHECK(benefit(opt({"DRAM"}), free_item, {}, cat, kvs) < 0.0);
}

TEST_CASE("model invariants hold on random instances") {
  const StashCatalog cat = device_catalog();
  std::mt19937_64 rng(7);
  const auto pick_size = [&] { return 1 + rng() % (1 << 20); };
  const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const std::vector<std::string> ids{"Disk", "Flash", "NVM2", "NVM1", "DRAM"};

  for (int iter = 0; iter < 500; ++iter) {
    const ItemStats k =
        make_item("k", pick_size(), 1 + unit() * 1e7, unit() * 0.5, unit() * 0.5);
    // Random non-empty placement and a superset of it.
    std::vector<std::string> base_ids;
    std::vector<std::string> extra_ids;
    for (const auto& id : ids) {
      if (unit() < 0.4) {
        base_ids.push_back(id);
      } else if (unit() < 0.4) {
        extra_ids.push_back(id);
      }
    }
    if (base_ids.empty()) base_ids.push_back(ids[rng() % ids.size()]);
    if (extra_ids.empty()) continue;
    std::vector<std::string> super_ids = base_ids;
    for (const auto& id : extra_ids) {
      if (std::find(super_ids.begin(), super_ids.end(), id) == super_ids.end()) {
        super_ids.push_back(id);
      }
    }
    const PlacementOption p = opt(base_ids);
    const PlacementOption super = opt(super_ids);
    if (super.size() == p.size()) continue;

    // Monotone dominance when a stash is added.
    CHECK(placement_read_time(super, k, cat) <= placement_read_time(p, k, cat));
    CHECK(placement_write_time(super, k, cat, WriteMode::sequential) >=
          placement_write_time(p, k, cat, WriteMode::sequential));
    CHECK(price(super, k, cat) >= price(p, k, cat));

    // Concurrent writes never exceed sequential ones; equality iff singleton.
    const double seq = placement_write_time(p, k, cat, WriteMode::sequential);
    const double conc = placement_write_time(p, k, cat, WriteMode::concurrent);
    CHECK(conc <= seq);
    CHECK((p.size() == 1) == (conc == seq));

    // Failure costs are zero exactly when the failure misses the placement.
    std::vector<std::string> failed;
    for (const auto& id : ids) {
      if (unit() < 0.5) failed.push_back(id);
    }
    if (failed.empty()) failed.push_back(ids[rng() % ids.size()]);
    const FailureEvent f{failed, 1e-6};
    bool disjoint = true;
    for (const auto& id : failed) {
      if (p.contains(id)) disjoint = false;
    }
    const CostModelConfig kvs;
    CHECK((retrieval_cost(f, p, k, cat, kvs) == 0.0) == disjoint);
    CHECK((restore_cost(f, p, k, cat) == 0.0) == disjoint);

    // benefit is exactly the baseline-minus-service subtraction; the
    // rearranged sum can differ by one rounding.
    const std::vector<FailureEvent> events{f};
    const double serv = service_time(p, k, events, cat, kvs);
    const double ben = benefit(p, k, events, cat, kvs);
    const double baseline = service_time(PlacementOption{}, k, {}, cat, kvs);
    CHECK(ben == baseline - serv);
    CHECK(ben + serv == doctest::Approx(baseline).epsilon(1e-12));

    // With failures not counted, the failure list is irrelevant.
    CostModelConfig no_failures;
    no_failures.count_failures = false;
    CHECK(service_time(p, k, events, cat, no_failures) ==
          service_time(p, k, {}, cat, no_failures));

    // Purity: same inputs, bit-identical outputs.
    CHECK(serv == service_time(p, k, events, cat, kvs));
  }
}

TEST_CASE("placement evaluator agrees with the free functions") {
  const StashCatalog cat = device_catalog();
  std::vector<PlacementOption> options{PlacementOption{},          opt({"Flash"}),
                                       opt({"DRAM"}),              opt({"NVM2"}),
                                       opt({"Flash", "DRAM"}),     opt({"NVM2", "DRAM"}),
                                       opt({"Flash", "NVM2", "DRAM"})};
  const std::vector<FailureEvent> events{{{"DRAM"}, 1e-5}, {{"Flash"}, 2e-6}, {{"NVM2", "DRAM"}, 1e-7}};

  for (auto baseline : {BaselineMode::kvs, BaselineMode::host_side}) {
    for (auto mode : {WriteMode::sequential, WriteMode::concurrent}) {
      CostModelConfig cfg;
      cfg.write_mode = mode;
      cfg.baseline_mode = baseline;
      if (baseline == BaselineMode::host_side) cfg.permanent_store = "Disk";
      const PlacementEvaluator eval(cat, options, events, cfg);

      std::mt19937_64 rng(11);
      const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
      for (int iter = 0; iter < 200; ++iter) {
        const ItemStats k = fixtures::make_item("k", 1 + rng() % (1 << 16), unit() * 1e7,
                                                unit() * 0.5, unit() * 0.5);
        for (std::size_t o = 0; o < options.size(); ++o) {
          CHECK(eval.price(o, k) == doctest::Approx(price(options[o], k, cat)).epsilon(1e-12));
          CHECK(eval.service_time(o, k) ==
                doctest::Approx(service_time(options[o], k, events, cat, cfg)).epsilon(1e-9));
          CHECK(eval.benefit(o, k) ==
                doctest::Approx(benefit(options[o], k, events, cat, cfg)).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("validation rejects broken specs") {
  StashSpec s = fixtures::make_stash("X", 10, 10, 100, 100, 1, 1000, 10);
  CHECK_NOTHROW(s.validate());
  s.read_latency_ns = -1;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("read_latency_ns"), ValidationError);

  ItemStats k = make_item("k", 0, 0, 0, 0);
  CHECK_THROWS_WITH_AS(k.validate(), doctest::Contains("size_bytes"), ValidationError);

  CHECK_THROWS_AS(PlacementOption({"A", "A"}), ValidationError);
  const FailureEvent empty_event{{}, 1.0};
  CHECK_THROWS_AS(empty_event.validate(), ValidationError);

  CostModelConfig host;
  host.baseline_mode = BaselineMode::host_side;
  const StashCatalog cat = device_catalog();
  const ItemStats page = make_item("p", 4096, 1e6, 0.5, 0.5);
  CHECK_THROWS_AS(service_time(PlacementOption{}, page, {}, cat, host), ValidationError);
}
