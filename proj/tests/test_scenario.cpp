// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "doa/scenario.hpp"

using namespace doa;

namespace {

const char* kMinimalScenario = R"({
  "sources": [ { "doa_deg": 20.0 } ],
  "noise": { "snr_db": 10.0 }
})";

} // namespace

TEST_CASE("minimal scenario fills the documented defaults") {
    const LoadedScenario loaded = parse_scenario(kMinimalScenario, "test");
    const ScenarioConfig& c = loaded.config;
    CHECK(c.synthesis.geometry.num_elements == 16);
    CHECK(c.synthesis.geometry.carrier_freq_hz == doctest::Approx(2.4e9));
    CHECK(c.synthesis.geometry.spacing_m == doctest::Approx(0.0625));
    CHECK(c.synthesis.sample_rate_hz == doctest::Approx(2e7));
    CHECK(c.synthesis.num_snapshots == 1000);
    CHECK(c.synthesis.sources.size() == 1);
    CHECK(c.synthesis.sources[0].samples_per_bit == 10);
    CHECK(c.grid.step_deg == doctest::Approx(0.1));
    CHECK(c.arms.size() == 1);
    CHECK(c.arms[0].estimator == EstimatorKind::music);
    CHECK(c.cyclic.alpha_hz == doctest::Approx(1e6)); // SOI symbol rate
    CHECK(c.montecarlo.num_runs == 1000);
    CHECK(!loaded.normalized.empty());
}

TEST_CASE("unknown keys are rejected with their path") {
    const char* text = R"({
      "sources": [ { "doa_deg": 20.0 } ],
      "noise": { "snr_db": 10.0 },
      "array": { "num_elements": 16, "spacing_cm": 6.25 }
    })";
    CHECK_THROWS_WITH_AS(parse_scenario(text, "test"),
                         doctest::Contains("spacing_cm"), ScenarioParseError);
}

TEST_CASE("syntax errors carry line and column") {
    const char* text = "{\n  \"sources\": [,\n}";
    try {
        parse_scenario(text, "test");
        FAIL("expected a parse error");
    } catch (const ScenarioParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("test:2:") != std::string::npos);
    }
}

TEST_CASE("validation failures surface as config errors") {
    // Odd cyclic lag.
    const char* odd_lag = R"({
      "sources": [ { "doa_deg": 20.0 } ],
      "noise": { "snr_db": 10.0 },
      "estimators": [ { "estimator": "cyclic_music" } ],
      "cyclic": { "lag_samples": 3 }
    })";
    CHECK_THROWS_AS(parse_scenario(odd_lag, "test"), ConfigError);

    // As many sources as elements.
    const char* too_many = R"({
      "array": { "num_elements": 2 },
      "sources": [ { "doa_deg": 20.0 }, { "doa_deg": 5.0 } ],
      "noise": { "snr_db": 10.0 }
    })";
    CHECK_THROWS_AS(parse_scenario(too_many, "test"), ModelError);

    // Beta out of range.
    const char* bad_beta = R"({
      "sources": [ { "doa_deg": 20.0 } ],
      "noise": { "snr_db": 10.0 },
      "preprocess": { "beta": 1.5 }
    })";
    CHECK_THROWS_AS(parse_scenario(bad_beta, "test"), ConfigError);

    // Bit rate that does not divide the sample rate.
    const char* bad_rate = R"({
      "sources": [ { "doa_deg": 20.0, "bit_rate_bps": 3.0e6 } ],
      "noise": { "snr_db": 10.0 }
    })";
    CHECK_THROWS_AS(parse_scenario(bad_rate, "test"), ConfigError);
}

TEST_CASE("noise block accepts exactly one form") {
    const char* both = R"({
      "sources": [ { "doa_deg": 20.0 } ],
      "noise": { "snr_db": 10.0, "noise_power_linear": 1.0 }
    })";
    CHECK_THROWS_AS(parse_scenario(both, "test"), ScenarioParseError);

    const char* disabled = R"({
      "sources": [ { "doa_deg": 20.0 } ],
      "noise": { "disabled": true }
    })";
    const LoadedScenario loaded = parse_scenario(disabled, "test");
    CHECK(!loaded.config.synthesis.noise.enabled);

    const char* sweep = R"({
      "sources": [ { "doa_deg": 20.0 } ],
      "noise": { "snr_db_sweep": [0.0, 10.0, 20.0] }
    })";
    const LoadedScenario swept = parse_scenario(sweep, "test");
    CHECK(swept.config.snr_db_sweep.size() == 3);
}

TEST_CASE("normalized echo is stable and re-parseable") {
    const LoadedScenario loaded = parse_scenario(kMinimalScenario, "test");
    const LoadedScenario again = parse_scenario(loaded.normalized, "echo");
    CHECK(again.normalized == loaded.normalized);
}
