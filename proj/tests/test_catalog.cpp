#include <sstream>

#include "doctest.h"
#include "stashplan/catalog.hpp"

using namespace stashplan;

namespace {

constexpr const char* kCatalogText = R"(# experimental device parameters
[stash Disk]
read_latency_ns = 2e6
write_latency_ns = 2e6
read_bandwidth_mb_per_s = 10
write_bandwidth_mb_per_s = 10
price_per_gb = 0.1
mtbf_hours = 87576
mttr_hours = 24

[stash Flash]
read_latency_ns = 25000
write_latency_ns = 2e5
read_bandwidth_mb_per_s = 200
write_bandwidth_mb_per_s = 100
price_per_gb = 1
mtbf_hours = 87576
mttr_hours = 24

[stash DRAM]
read_latency_ns = 10
write_latency_ns = 10
read_bandwidth_mb_per_s = 10240
write_bandwidth_mb_per_s = 10240
price_per_gb = 8
mtbf_hours = 8750
mttr_hours = 10

[model]
write_mode = concurrent
count_failures = false
)";

std::vector<KeyedSection> sections_of(const std::string& text) {
  std::istringstream in(text);
  return parse_keyed_text(in);
}

}  // namespace

TEST_CASE("keyed text parses sections, keys and comments") {
  const auto sections = sections_of("# top\n[stash A]\nk1 = v1\n k2 =  v 2 \n\n[model]\n");
  REQUIRE(sections.size() == 2);
  CHECK(sections[0].kind == "stash");
  CHECK(sections[0].name == "A");
  CHECK(sections[0].line == 2);
  CHECK(*sections[0].find("k1") == "v1");
  CHECK(*sections[0].find("k2") == "v 2");
  CHECK(sections[1].kind == "model");
  CHECK(sections[1].name.empty());

  CHECK_THROWS_AS(sections_of("[broken\n"), ParseError);
  CHECK_THROWS_AS(sections_of("[]\n"), ParseError);
  CHECK_THROWS_AS(sections_of("key = before any section\n"), ParseError);
  CHECK_THROWS_AS(sections_of("[s x]\nnot a pair\n"), ParseError);
  CHECK_THROWS_AS(sections_of("[s x]\na = 1\na = 2\n"), ParseError);
}

TEST_CASE("catalog parsing converts units") {
  const auto sections = sections_of(kCatalogText);
  const StashCatalog cat = parse_catalog(sections);
  REQUIRE(cat.size() == 3);

  const StashSpec& flash = cat.at("Flash");
  CHECK(flash.read_latency_ns == 25000.0);
  CHECK(flash.read_bw_bytes_per_ns == doctest::Approx(0.2097152).epsilon(1e-15));
  CHECK(flash.write_bw_bytes_per_ns == doctest::Approx(0.1048576).epsilon(1e-15));
  CHECK(flash.price_per_byte == doctest::Approx(1.0 / kBytesPerGB).epsilon(1e-15));

  const StashSpec& dram = cat.at("DRAM");
  CHECK(dram.price_per_byte == doctest::Approx(8.0 / kBytesPerGB).epsilon(1e-15));
  CHECK(dram.mtbf_hours == 8750.0);
  CHECK(cat.index_of("Disk") == 0);
  CHECK(cat.find("PCM") == nullptr);
  CHECK_THROWS_AS(cat.at("PCM"), ValidationError);
}

TEST_CASE("catalog errors name the offending field") {
  const std::string negative = "[stash X]\nread_latency_ns = -5\nwrite_latency_ns = 1\n"
                               "read_bandwidth_mb_per_s = 1\nwrite_bandwidth_mb_per_s = 1\n"
                               "price_per_gb = 1\nmtbf_hours = 1\nmttr_hours = 1\n";
  try {
    parse_catalog(sections_of(negative));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("read_latency_ns") != std::string::npos);
    CHECK(std::string(e.what()).find("X") != std::string::npos);
  }

  const std::string unknown = "[stash X]\nread_latency = 5\n";
  CHECK_THROWS_AS(parse_catalog(sections_of(unknown)), ParseError);

  const std::string missing = "[stash X]\nread_latency_ns = 5\n";
  CHECK_THROWS_AS(parse_catalog(sections_of(missing)), ParseError);

  const std::string unnamed = "[stash]\nread_latency_ns = 5\n";
  CHECK_THROWS_AS(parse_catalog(sections_of(unnamed)), ParseError);

  CHECK_THROWS_AS(parse_catalog(sections_of("[model]\n")), ParseError);  // no stashes

  const std::string bad_number = "[stash X]\nread_latency_ns = fast\nwrite_latency_ns = 1\n"
                                 "read_bandwidth_mb_per_s = 1\nwrite_bandwidth_mb_per_s = 1\n"
                                 "price_per_gb = 1\nmtbf_hours = 1\nmttr_hours = 1\n";
  CHECK_THROWS_AS(parse_catalog(sections_of(bad_number)), ParseError);
}

TEST_CASE("model config applies on top of defaults") {
  const auto sections = sections_of(kCatalogText);
  const CostModelConfig cfg = parse_model_config(sections);
  CHECK(cfg.write_mode == WriteMode::concurrent);
  CHECK(cfg.baseline_mode == BaselineMode::kvs);  // untouched default
  CHECK(!cfg.count_failures);
  CHECK(!cfg.permanent_store.has_value());

  const auto host = sections_of("[model]\nbaseline_mode = host_side\npermanent_store = Disk\n");
  const CostModelConfig hcfg = parse_model_config(host);
  CHECK(hcfg.baseline_mode == BaselineMode::host_side);
  REQUIRE(hcfg.permanent_store.has_value());
  CHECK(*hcfg.permanent_store == "Disk");

  CHECK_THROWS_AS(parse_model_config(sections_of("[model]\nwrite_mode = sometimes\n")),
                  ParseError);
  CHECK_THROWS_AS(parse_model_config(sections_of("[model]\ncount_failures = maybe\n")),
                  ParseError);
}

TEST_CASE("experiment sections resolve policies and budget grids") {
  const std::string text = R"([experiment tier]
policy = tiering
stashes = Flash,NVM2,NVM1
budgets = 0, 10, 25.5

[experiment forced]
policy = forced_replication
stashes = Flash,NVM1
budget_min = 0
budget_max = 20
budget_step = 5
count_failures = false

[experiment handpicked]
policy = custom
options = none Flash Flash+DRAM
budgets = 1
)";
  const auto experiments = parse_experiments(sections_of(text), CostModelConfig{});
  REQUIRE(experiments.size() == 3);

  CHECK(experiments[0].label == "tier");
  CHECK(experiments[0].policy.kind == PolicySet::Kind::tiering);
  CHECK(experiments[0].policy.stash_ids ==
        std::vector<std::string>{"Flash", "NVM2", "NVM1"});
  CHECK(experiments[0].budgets == std::vector<double>{0, 10, 25.5});
  CHECK(experiments[0].cfg.count_failures);

  CHECK(experiments[1].policy.kind == PolicySet::Kind::forced_replication);
  CHECK(experiments[1].budgets == std::vector<double>{0, 5, 10, 15, 20});
  CHECK(!experiments[1].cfg.count_failures);

  CHECK(experiments[2].policy.kind == PolicySet::Kind::custom);
  REQUIRE(experiments[2].policy.custom_options.size() == 3);
  CHECK(experiments[2].policy.custom_options[0].empty());
  CHECK(experiments[2].policy.custom_options[2] == PlacementOption({"DRAM", "Flash"}));

  CHECK_THROWS_AS(
      parse_experiments(sections_of("[experiment x]\npolicy = tiering\nstashes = A\n"),
                        CostModelConfig{}),
      ParseError);  // no budgets
  CHECK_THROWS_AS(
      parse_experiments(
          sections_of("[experiment x]\npolicy = tiering\nstashes = A\nbudgets = 5,5\n"),
          CostModelConfig{}),
      ParseError);  // not strictly increasing
  CHECK_THROWS_AS(
      parse_experiments(
          sections_of("[experiment x]\npolicy = pyramid\nstashes = A\nbudgets = 1\n"),
          CostModelConfig{}),
      ParseError);
}

TEST_CASE("placement spelling parses and round-trips") {
  CHECK(parse_placement("none").empty());
  CHECK(parse_placement("Flash") == PlacementOption({"Flash"}));
  CHECK(parse_placement("DRAM+Flash") == PlacementOption({"Flash", "DRAM"}));
  CHECK(parse_placement("DRAM+Flash").label() == "DRAM+Flash");
  CHECK(PlacementOption{}.label() == "none");
}
