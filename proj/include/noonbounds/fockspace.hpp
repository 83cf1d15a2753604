// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "noonbounds/core.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace noonbounds {

// Brute-force model of the lossy NOON output in a truncated Fock space. Every
// routine here works on dense matrices built from first principles and serves
// as the independent check of the closed forms in bounds.hpp.

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// All occupation tuples (n_0..n_{M-1}) with sum <= max_total, in
/// lexicographic order.
class FockBasis {
 public:
  FockBasis(int n_modes, int max_total);

  int n_modes() const noexcept { return n_modes_; }
  int max_total() const noexcept { return max_total_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::span<const int> state(std::size_t i) const;
  int total(std::size_t i) const;
  std::optional<std::size_t> index_of(std::span<const int> occupation) const;

  /// C(max_total + n_modes, n_modes), without building anything.
  static double dimension(int n_modes, int max_total);

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
  };
  int n_modes_;
  int max_total_;
  std::vector<std::vector<int>> states_;
  std::unordered_map<std::vector<int>, std::size_t, Hash> lookup_;
};

struct FockOptions {
  /// Upper bound on dim^2 for any dense matrix built here.
  double max_entries = 1e6;
};

struct DensityMatrix {
  std::shared_ptr<const FockBasis> basis;
  ComplexMatrix rho;
};

struct SldOperator {
  ComplexMatrix op;
  int phase_index = 0;  // zero-based: 0 differentiates phi_1
};

/// Basis for the scenario's d+1 modes truncated at N photons; throws
/// BasisOverflow when dim^2 exceeds the cap.
std::shared_ptr<const FockBasis> scenario_basis(const Scenario& s, const FockOptions& opts = {});

/// Lossy output state: surviving N-photon coherent block plus the
/// phase-independent diagonal mixture of lower photon numbers.
DensityMatrix build_lossy_state(const Scenario& s, const WeightVector& p,
                                const FockOptions& opts = {});

/// Analytic derivative of build_lossy_state with respect to phi_{a+1}.
ComplexMatrix lossy_state_derivative(const Scenario& s, const WeightVector& p,
                                     const FockBasis& basis, int phase_index);

/// QFIM from the eigendecomposition of the lossy state (eigenvalue,
/// eigenvector and cross terms).
FisherMatrix qfim_oracle(const Scenario& s, const WeightVector& p, const FockOptions& opts = {});

std::vector<SldOperator> sld_operators(const Scenario& s, const WeightVector& p,
                                       const FockOptions& opts = {});

/// F(a,b) = Re Tr(rho {L_a, L_b}) / 2.
FisherMatrix qfim_from_sld(const ComplexMatrix& rho, std::span<const SldOperator> slds);

/// max_{a,b} |Tr(rho [L_a, L_b])|; zero iff the QCRB is attainable.
double attainability_check(const Scenario& s, const WeightVector& p, const FockOptions& opts = {});

// Independent state-preparation route (Kraus operators, explicit phase
// shifts, multi-mode linear optics) used for cross-checks.

/// Pure probe sum_j sqrt(p_j) |N>_j over the basis, before phases and loss.
ComplexVector noon_probe(const FockBasis& basis, int n_photons, const WeightVector& p);

/// exp(i sum_j phi~_j n_j) applied to both sides; phi~_0 = 0 and phi~_j = phi_j.
ComplexMatrix apply_phase_shifts(const FockBasis& basis, const ComplexMatrix& rho,
                                 std::span<const double> relative_phases);

/// Single-mode loss channel sum_k K_k rho K_k^dagger with
/// K_k = sum_n sqrt(C(n,k) (1-g)^{n-k} g^k) |n-k><n|.
ComplexMatrix apply_loss_channel(const FockBasis& basis, const ComplexMatrix& rho, int mode,
                                 double gamma);

/// Fock-space representation of the linear-optical map a_j^dag ->
/// sum_k U(k,j) a_k^dag (rows of U are output modes).
ComplexMatrix fock_unitary(const FockBasis& basis, const ComplexMatrix& scattering);

}  // namespace noonbounds
