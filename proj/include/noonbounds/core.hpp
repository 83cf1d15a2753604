// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noonbounds {

/// Failure categories shared by every module. The C API maps these one-to-one
/// onto its integer status codes.
enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  OutOfRange,
  SingularModel,
  UnidentifiablePhase,
  DegenerateEnvironment,
  BasisOverflow,
  Numerical,
  SingularMeasurement,
  OptimizationFailed,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Per-mode loss rates. Index 0 is the reference mode.
class LossProfile {
 public:
  LossProfile() = default;
  explicit LossProfile(std::vector<double> gamma);

  std::span<const double> gamma() const noexcept { return gamma_; }
  double operator[](std::size_t j) const { return gamma_[j]; }
  std::size_t size() const noexcept { return gamma_.size(); }
  double reference() const { return gamma_.at(0); }

  /// gamma_ref for mode 0, gamma for the d signal modes.
  static LossProfile reference_and_signal(int n_phases, double gamma_ref, double gamma);
  static LossProfile uniform(int n_phases, double gamma);

  bool operator==(const LossProfile&) const = default;

 private:
  std::vector<double> gamma_;
};

/// Probe weights on the probability simplex (also used for coherent-state
/// photon-number fractions).
class WeightVector {
 public:
  WeightVector() = default;

  /// Normalizes arbitrary non-negative values onto the simplex.
  static WeightVector from_raw(std::span<const double> raw);
  /// Accepts values that already lie on the simplex (sum within 1e-12).
  static WeightVector from_simplex(std::span<const double> p);

  std::span<const double> values() const noexcept { return p_; }
  double operator[](std::size_t j) const { return p_[j]; }
  std::size_t size() const noexcept { return p_.size(); }

  bool operator==(const WeightVector&) const = default;

 private:
  explicit WeightVector(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

/// Relative phases phi_j = phi~_j - phi~_0 for j = 1..d, stored zero-based.
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> phi);

  /// Generic evaluation point 0.3 + 0.2 k for k = 0..d-1.
  static PhaseVector default_for(int n_phases);

  std::span<const double> values() const noexcept { return phi_; }
  double operator[](std::size_t k) const { return phi_[k]; }
  std::size_t size() const noexcept { return phi_.size(); }

  bool operator==(const PhaseVector&) const = default;

 private:
  std::vector<double> phi_;
};

struct Scenario {
  int n_photons = 1;
  int n_phases = 1;
  LossProfile loss;
  PhaseVector phases;
  int repetitions = 1;

  int n_modes() const noexcept { return n_phases + 1; }
  bool operator==(const Scenario&) const = default;
};

/// Returns `s` unchanged when every invariant holds, throws Error otherwise.
Scenario validate_scenario(Scenario s);

/// Convenience builder; phases default to PhaseVector::default_for(d).
Scenario make_scenario(int n_photons, int n_phases, std::vector<double> gamma,
                       std::vector<double> phases = {}, int repetitions = 1);

/// Scenario JSON: {"n_photons", "n_phases", "gamma", "phases", "repetitions"}.
/// "phases" and "repetitions" are optional on input.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(std::string_view text);

enum class FisherKind { Quantum, Classical };

struct FisherMatrix {
  Eigen::MatrixXd entries;
  FisherKind kind = FisherKind::Quantum;

  Eigen::Index dim() const noexcept { return entries.rows(); }
};

/// Symmetric within 1e-10 and no eigenvalue below -1e-10.
bool is_valid_fisher(const FisherMatrix& f, double tol = 1e-10);

/// Binomial coefficient as a double; exact for the small arguments used here.
double binomial(int n, int k);

}  // namespace noonbounds
