// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "noonbounds/core.hpp"

#include <optional>

namespace noonbounds {

// Closed-form precision bounds for weighted multi-mode NOON probes and for
// optimally weighted coherent probes under per-mode photon loss. All bounds
// are per shot (repetitions = 1); divide by Scenario::repetitions for mu shots.

enum class WeightSchemeKind { Optimal, Humphreys, Balanced, Custom };

struct WeightScheme {
  WeightSchemeKind kind = WeightSchemeKind::Optimal;
  std::optional<WeightVector> custom;

  static WeightScheme optimal() { return {WeightSchemeKind::Optimal, std::nullopt}; }
  static WeightScheme humphreys() { return {WeightSchemeKind::Humphreys, std::nullopt}; }
  static WeightScheme balanced() { return {WeightSchemeKind::Balanced, std::nullopt}; }
  static WeightScheme with(WeightVector p) { return {WeightSchemeKind::Custom, std::move(p)}; }
};

struct BoundReport {
  double qcrb_noon = 0.0;
  double sql_coherent = 0.0;
  double advantage = 0.0;  // 1 - qcrb_noon / sql_coherent
  WeightVector weights_used;
};

/// p0 = sqrt(d)/(sqrt(d)+d), pj = 1/(sqrt(d)+d): optimal only for equal losses.
WeightVector humphreys_weights(int n_phases);
WeightVector balanced_weights(int n_phases);

/// Expands a scheme into concrete weights for `s`.
WeightVector resolve_weights(const Scenario& s, const WeightScheme& scheme);

/// The d x d QFIM of the lossy NOON output. Phase-independent.
FisherMatrix qfim_noon(const Scenario& s, const WeightVector& p);

/// Trace of the inverse QFIM, in closed form.
double qcrb_noon(const Scenario& s, const WeightVector& p);

/// Weights minimizing qcrb_noon for the scenario's loss profile.
WeightVector optimal_weights(const Scenario& s);

/// Minimum of qcrb_noon over the simplex.
double min_qcrb_noon(const Scenario& s);

/// Photon-number fractions q minimizing the coherent-state bound.
WeightVector optimal_coherent_weights(const Scenario& s);

/// Standard quantum limit: coherent bound minimized over q.
double sql_coherent(const Scenario& s);
/// Coherent-state bound for explicit photon-number fractions q.
double sql_coherent(const Scenario& s, const WeightVector& q);

/// 1 - qcrb_noon(scheme) / sql_coherent(optimal q).
double advantage_ratio(const Scenario& s, const WeightScheme& scheme = WeightScheme::optimal());

BoundReport quantum_advantage(const Scenario& s);

/// Largest signal-mode loss gamma (all d signal modes equal) up to which the
/// advantage ratio stays non-negative, for a fixed reference-mode loss.
/// Returns 0 when there is no advantage even at gamma = 0.
double critical_loss(int n_photons, int n_phases, double gamma_ref,
                     WeightSchemeKind scheme = WeightSchemeKind::Optimal);

}  // namespace noonbounds
