// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "noonbounds/core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace noonbounds {

/// One two-mode block acting on adjacent modes (mode, mode + 1).
struct MeshLayer {
  int mode = 0;
  double theta = 0.0;  // canonical range [0, pi/2]
  double chi = 0.0;    // canonical range [0, 2 pi)

  bool operator==(const MeshLayer&) const = default;
};

/// Clements-style mesh of (d+1)d/2 blocks. The trailing diagonal phase screen
/// is fixed to the identity: it never changes photon-counting statistics.
struct MeshParams {
  int n_modes = 2;
  std::vector<MeshLayer> layers;

  /// Mode indices of the rectangular Clements layout, in the order light
  /// traverses the blocks.
  static std::vector<int> clements_modes(int n_modes);
  /// Clements layout with every block set to (theta, chi).
  static MeshParams uniform(int n_modes, double theta, double chi);
  /// theta ~ U[0, pi/2], chi ~ U[0, 2 pi).
  static MeshParams random(int n_modes, std::mt19937_64& rng);

  bool operator==(const MeshParams&) const = default;
};

/// Throws unless every block index is within [0, n_modes - 2].
void validate_mesh(const MeshParams& mesh);

/// Wraps theta into [0, pi/2] and chi into [0, 2 pi) without changing the
/// assembled unitary beyond output phases (which photon counting ignores).
MeshParams canonicalize(const MeshParams& mesh);

/// Mesh JSON: {"layers": [{"mode": int, "theta": float, "chi": float}]}.
/// n_modes is inferred as max(mode) + 2 unless `n_modes` is given.
std::string mesh_to_json(const MeshParams& mesh);
MeshParams mesh_from_json(std::string_view text, int n_modes = 0);

using ScatteringMatrix = Eigen::MatrixXcd;

/// U = V_K ... V_2 V_1 with V_i embedding [[e^{i chi} cos t, -sin t],
/// [e^{i chi} sin t, cos t]] on modes (m, m+1).
ScatteringMatrix assemble_unitary(const MeshParams& mesh);

struct Outcome {
  std::vector<int> counts;
  double probability = 0.0;
  Eigen::VectorXd gradient;  // dP/dphi_j, j = 1..d
};

struct OutcomeDistribution {
  int n_phases = 0;
  std::vector<Outcome> outcomes;  // every tuple with sum = N
  double residual_mass = 0.0;     // outcomes with fewer than N photons
};

/// All photon-count tuples over `n_modes` modes summing to `total`.
std::vector<std::vector<int>> enumerate_outcomes(int n_modes, int total);

/// Photon-counting statistics of the lossy NOON probe after the mesh. Input
/// mode j feeds sum_k U(k,j) a_k^dag, so rows of U index the detectors.
OutcomeDistribution outcome_distribution(const Scenario& s, const WeightVector& p,
                                         const ScatteringMatrix& u);

/// Outcomes with probability below this are left out of the FIM sum.
inline constexpr double kOutcomeFloor = 1e-12;

FisherMatrix classical_fim(const OutcomeDistribution& dist);

/// Trace of the inverse classical FIM. Throws SingularMeasurement when the
/// FIM's condition number reaches 1e12.
double crb(const OutcomeDistribution& dist);

}  // namespace noonbounds
