#include <gtest/gtest.h>

#include "adi/errors.hpp"
#include "adi/scenario.hpp"
#include "test_support.hpp"

using namespace adi;

namespace {
ScenarioConfig small_scenario() {
    ScenarioConfig c;
    c.excitation.duration_s = 1.0;
    c.seed = 17;
    const std::size_t site = c.model().node_of(1);
    c.baselines = {{"ref", 4, {}}};
    c.cases = {{"healthy", "ref", {}}, {"hit", "ref", {{site, 0.3}}}};
    return c;
}
}  // namespace

TEST(Scenario, DefaultMatchesCaseStructure) {
    const ScenarioConfig c = default_scenario();
    EXPECT_NO_THROW(c.validate());
    ASSERT_EQ(c.baselines.size(), 2u);
    EXPECT_EQ(c.baselines[0].cycles, 13u);
    ASSERT_EQ(c.cases.size(), 11u);
    EXPECT_TRUE(c.cases[0].damage.empty());
    EXPECT_EQ(c.cases[4].damage, (std::vector<DamageSpec>{{16, 0.30}}));
    EXPECT_EQ(c.cases[7].damage, (std::vector<DamageSpec>{{16, 0.30}, {26, 0.30}}));
    for (std::size_t i = 8; i < 11; ++i) EXPECT_EQ(c.cases[i].baseline_id, "site1-large");
    EXPECT_EQ(c.baselines[1].damage, (std::vector<DamageSpec>{{16, 0.30}}));
}

TEST(Scenario, JsonRoundTrip) {
    ScenarioConfig c = default_scenario();
    c.noise_std = 0.02;
    c.interrogation.band = FrequencyBand{150.0, 1800.0};
    c.transducer_nodes = {{1, 10}, {2, 20}, {3, 30}};
    c.cases.resize(3);
    const std::string text = scenario_to_json(c);
    const ScenarioConfig back = scenario_from_json(text);
    EXPECT_EQ(scenario_to_json(back), text);
    EXPECT_EQ(back.interrogation.band, c.interrogation.band);
    EXPECT_EQ(back.model().node_of(3), 30u);
}

TEST(Scenario, PartialJsonStartsFromDefaults) {
    const ScenarioConfig c = scenario_from_json(R"({"seed": 99, "model": {"alpha": 100.0}})");
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.chain.damping.alpha, 100.0);
    EXPECT_EQ(c.cases.size(), 11u);
}

TEST(Scenario, InvalidConfigs) {
    EXPECT_THROW(scenario_from_json(R"({"cases": [{"label": "a", "baseline": "nope"}]})"), ConfigError);
    EXPECT_THROW(scenario_from_json(R"({"baselines": [{"id": "b", "cycles": 2}], "cases": []})"), ConfigError);
    EXPECT_THROW(scenario_from_json(R"({"excitation": {"kind": "sine"}})"), ParseError);
    EXPECT_THROW(scenario_from_json(R"({"noise_std": "loud"})"), ParseError);
    EXPECT_THROW(scenario_from_json(R"({"interrogation": {"window_bins": 4}})"), ConfigError);
    EXPECT_THROW(scenario_from_json(R"({"cases": [{"label": "a", "baseline": "healthy",
                                         "damage": [{"site_node": 99, "severity": 0.1}]}]})"),
                 ConfigError);
    try {
        scenario_from_json("{\n  \"seed\": 1,\n  \"x\": ]\n}");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Scenario, SeedsAreDistinctPerCycleAndCase) {
    const ScenarioConfig c = default_scenario();
    EXPECT_NE(baseline_cycle_seed(c, 0, 0), baseline_cycle_seed(c, 0, 1));
    EXPECT_NE(baseline_cycle_seed(c, 0, 0), baseline_cycle_seed(c, 1, 0));
    EXPECT_NE(case_seed(c, 0), case_seed(c, 1));
    EXPECT_NE(case_seed(c, 0), baseline_cycle_seed(c, 0, 0));
}

TEST(Scenario, RunIsDeterministicAndOrdered) {
    const ScenarioConfig c = small_scenario();
    const DiagnosisReport a = run_scenario(c, Execution::parallel);
    const DiagnosisReport b = run_scenario(c, Execution::serial);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.rows.size(), 2u);
    EXPECT_EQ(a.rows[0].label, "healthy");
    EXPECT_FALSE(a.rows[0].detected);
    EXPECT_TRUE(a.rows[1].detected);
    EXPECT_EQ(a.rows[1].location_argmax, 1);
    EXPECT_EQ(a.rows[1].baseline_id, "ref");

    ScenarioConfig other = c;
    other.seed = 18;
    EXPECT_NE(run_scenario(other).rows[0].di, a.rows[0].di);
}
