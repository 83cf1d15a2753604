// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "noonbounds/core.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace noonbounds {

struct VerifyConfig {
  int max_n = 3;
  int max_d = 3;
  int grid_points = 5;     // per-axis loss grid on [0, 0.8]
  int random_draws = 50;   // random weight vectors per (N, d)
  std::uint64_t seed = 1;
  /// Largest Fock-space dimension the suite will build.
  int max_dimension = 256;
  /// Flips the sign of the closed-form QCRB before comparison. Used to
  /// confirm the suite can fail.
  bool inject_fault = false;
};

struct VerifyReport {
  bool passed = true;
  int scenarios_checked = 0;
  double max_qfim_residual = 0.0;   // oracle vs closed form, entrywise
  double max_qcrb_residual = 0.0;   // closed form vs trace of inverse, relative
  double max_attainability = 0.0;   // max |Tr(rho [L_a, L_b])|
  double max_sld_residual = 0.0;    // ||d rho - (L rho + rho L)/2||_F
  std::optional<std::string> offending_scenario;  // JSON of the first failure
  std::optional<std::string> failure;             // which tolerance broke

  std::string to_json() const;
};

inline constexpr double kQfimTolerance = 1e-8;
inline constexpr double kQcrbTolerance = 1e-10;
inline constexpr double kAttainabilityTolerance = 1e-8;
inline constexpr double kSldTolerance = 1e-8;

/// Throws BasisOverflow if any requested (N, d) exceeds max_dimension, before
/// any work is done.
void validate_verify_config(const VerifyConfig& cfg);

VerifyReport run_verify(const VerifyConfig& cfg);

}  // namespace noonbounds
