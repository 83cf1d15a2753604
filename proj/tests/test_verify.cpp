// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/core.hpp"
#include "noonbounds/verify.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

using namespace noonbounds;

TEST_SUITE("verify") {

TEST_CASE("default suite passes within tolerance") {
  const auto r = run_verify(VerifyConfig{});
  CHECK(r.passed);
  CHECK(r.scenarios_checked > 0);
  CHECK(r.max_qfim_residual <= kQfimTolerance);
  CHECK(r.max_qcrb_residual <= kQcrbTolerance);
  CHECK(r.max_attainability <= kAttainabilityTolerance);
  CHECK(r.max_sld_residual <= kSldTolerance);
  CHECK_FALSE(r.offending_scenario.has_value());
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("passed").get<bool>());
}

TEST_CASE("an injected fault is reported with the offending scenario") {
  VerifyConfig c;
  c.max_n = 2;
  c.max_d = 2;
  c.random_draws = 2;
  c.inject_fault = true;
  const auto r = run_verify(c);
  CHECK_FALSE(r.passed);
  REQUIRE(r.offending_scenario.has_value());
  const auto s = scenario_from_json(*r.offending_scenario);
  CHECK(s.n_photons >= 1);
  REQUIRE(r.failure.has_value());
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK_FALSE(j.at("passed").get<bool>());
}

TEST_CASE("oversized Fock spaces are refused before any work") {
  VerifyConfig c;
  c.max_n = 4;
  c.max_d = 6;
  try {
    run_verify(c);
    FAIL("expected BasisOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BasisOverflow);
  }
  c.max_dimension = 400;
  CHECK_NOTHROW(validate_verify_config(c));
}

TEST_CASE("invalid sizes are rejected") {
  VerifyConfig c;
  c.max_n = 0;
  CHECK_THROWS_AS(validate_verify_config(c), Error);
  c = VerifyConfig{};
  c.grid_points = 0;
  CHECK_THROWS_AS(validate_verify_config(c), Error);
}

}  // TEST_SUITE
