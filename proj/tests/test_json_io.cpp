// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support.hpp"
#include "wpc/json_io.hpp"

using namespace wpc;
using namespace wpc::testing;

TEST_SUITE("json_io") {

TEST_CASE("channels round trip") {
  const SystemConfig cfg = default_config(Mode::Relay, 2, 3, 2, 0.0);
  const ChannelSet ch = generate_scenario(cfg, {}, 8);
  const Json j = to_json(ch);
  CHECK(j["H"][0][1][0].size() == 2);  // complex entries are [re, im]
  CHECK(j["H"][0][1][0][1].get<double>() == ch.H[0](1, 0).imag());
  const ChannelSet back = channels_from_json(Json::parse(j.dump()));
  CHECK(back.seed == 8);
  for (int n = 0; n < 3; ++n) {
    CHECK((back.H[n] - ch.H[n]).norm() == 0.0);
    CHECK((back.G[n] - ch.G[n]).norm() == 0.0);
  }
  CHECK((back.tx_distance - ch.tx_distance).norm() == 0.0);
}

TEST_CASE("designs round trip") {
  for (Mode mode : {Mode::Relay, Mode::ActiveIrs}) {
    const Instance in = random_instance(mode, 2, 2, 3, 5);
    const Design back = design_from_json(Json::parse(to_json(in.d).dump()));
    CHECK(back.mode == mode);
    CHECK(back.tau == in.d.tau);
    for (int n = 0; n < 2; ++n) {
      CHECK((back.s_E[n] - in.d.s_E[n]).norm() == 0.0);
      CHECK((back.p_I[n] - in.d.p_I[n]).norm() == 0.0);
      CHECK((back.var_E(n) - in.d.var_E(n)).norm() == 0.0);
      CHECK((back.var_I(n) - in.d.var_I(n)).norm() == 0.0);
    }
  }
}

TEST_CASE("spec parsing") {
  const Json j = Json::parse(R"({
    "name": "m_sweep", "mode": "irs", "K": 2, "N": 2, "M": 2, "e_min": 1e-9,
    "sweep": {"axis": "M", "values": [2, 4]}, "seeds": [1, 2, 3],
    "emit": "csv", "geometry": {"d3": 5.0},
    "settings": {"eps_outer": 1e-5, "init": "random", "c5_rule": "lemma1"}
  })");
  const ExperimentSpec s = spec_from_json(j);
  CHECK(s.name == "m_sweep");
  CHECK(s.mode == Mode::ActiveIrs);
  CHECK(s.axis == SweepAxis::M);
  CHECK(s.values == std::vector<double>{2, 4});
  CHECK(s.seeds.size() == 3);
  CHECK(s.emit == EmitFormat::Csv);
  CHECK(s.geometry.d3 == 5.0);
  CHECK(s.geometry.d1 == ScenarioGeometry{}.d1);
  CHECK(s.settings.eps_outer == 1e-5);
  CHECK(s.settings.init_strategy == InitStrategy::Random);
  CHECK(s.settings.c5_rule == C5Rule::Lemma1);

  const ExperimentSpec again = spec_from_json(Json::parse(to_json(s).dump()));
  CHECK(again.values == s.values);
  CHECK(again.seeds == s.seeds);
  CHECK(again.settings.c5_rule == C5Rule::Lemma1);
  CHECK(again.e_min == s.e_min);
}

TEST_CASE("unknown fields are rejected") {
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"seeds": [1], "colour": "red"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"settings": {"eps": 1}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"mode": "mirror"})")), std::invalid_argument);
}

TEST_CASE("variant sweep takes names") {
  const ExperimentSpec s = spec_from_json(Json::parse(
      R"({"seeds": [1], "sweep": {"axis": "variant", "values": ["full", "baseline2"]}})"));
  CHECK(s.axis == SweepAxis::Variant);
  CHECK(s.variants == std::vector<Variant>{Variant::Full, Variant::Baseline2});
  CHECK(s.values.empty());
}

TEST_CASE("shipped specs parse and validate") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(WPC_SPEC_DIR)) {
    if (entry.path().extension() != ".json") continue;
    INFO(entry.path().string());
    std::ifstream in(entry.path());
    const ExperimentSpec s = spec_from_json(Json::parse(in));
    CHECK_NOTHROW(s.validate());
    ++count;
  }
  CHECK(count >= 4);
}

}  // TEST_SUITE
