// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/bounds.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace noonbounds {

namespace {

// Surviving N-photon amplitude weight (1 - gamma_j)^N of mode j.
double transmission(const Scenario& s, std::size_t j) {
  return std::pow(1.0 - s.loss[j], s.n_photons);
}

void require_weights(const Scenario& s, const WeightVector& p) {
  if (p.size() != static_cast<std::size_t>(s.n_modes())) {
    std::ostringstream os;
    os << "expected d+1=" << s.n_modes() << " weights, got " << p.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void require_lossless_somewhere(const Scenario& s, const char* what) {
  for (std::size_t j = 0; j < s.loss.size(); ++j) {
    if (s.loss[j] >= 1.0) {
      std::ostringstream os;
      os << what << ": mode " << j << " has gamma = 1 (all photons lost)";
      throw Error(ErrorCode::DegenerateEnvironment, os.str());
    }
  }
}

[[noreturn]] void unidentifiable(std::size_t j, double weight, double gamma) {
  std::ostringstream os;
  os << "phase unidentifiable: mode " << j << " carries no surviving probe (weight " << weight
     << ", gamma " << gamma << ")";
  throw Error(ErrorCode::UnidentifiablePhase, os.str());
}

}  // namespace

WeightVector humphreys_weights(int n_phases) {
  const double d = n_phases;
  const double rd = std::sqrt(d);
  std::vector<double> p(static_cast<std::size_t>(n_phases) + 1, 1.0 / (rd + d));
  p[0] = rd / (rd + d);
  return WeightVector::from_raw(p);
}

WeightVector balanced_weights(int n_phases) {
  std::vector<double> p(static_cast<std::size_t>(n_phases) + 1, 1.0);
  return WeightVector::from_raw(p);
}

WeightVector resolve_weights(const Scenario& s, const WeightScheme& scheme) {
  switch (scheme.kind) {
    case WeightSchemeKind::Optimal:
      return optimal_weights(s);
    case WeightSchemeKind::Humphreys:
      return humphreys_weights(s.n_phases);
    case WeightSchemeKind::Balanced:
      return balanced_weights(s.n_phases);
    case WeightSchemeKind::Custom:
      if (!scheme.custom) throw Error(ErrorCode::InvalidArgument, "custom scheme without weights");
      require_weights(s, *scheme.custom);
      return *scheme.custom;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown weight scheme");
}

FisherMatrix qfim_noon(const Scenario& s, const WeightVector& p) {
  require_weights(s, p);
  const std::size_t modes = static_cast<std::size_t>(s.n_modes());
  std::vector<double> w(modes);
  double total = 0.0;
  for (std::size_t j = 0; j < modes; ++j) {
    w[j] = p[j] * transmission(s, j);
    total += w[j];
  }
  if (total <= 0.0)
    throw Error(ErrorCode::SingularModel, "probe fully lost: no surviving N-photon component");

  // 4N^2 { diag(w) - w w^T / W } restricted to the signal modes 1..d.
  const double scale = 4.0 * s.n_photons * s.n_photons;
  FisherMatrix f;
  f.kind = FisherKind::Quantum;
  f.entries.resize(s.n_phases, s.n_phases);
  for (int a = 0; a < s.n_phases; ++a) {
    for (int b = 0; b < s.n_phases; ++b) {
      const double wa = w[static_cast<std::size_t>(a) + 1];
      const double wb = w[static_cast<std::size_t>(b) + 1];
      f.entries(a, b) = scale * ((a == b ? std::sqrt(wa * wb) : 0.0) - wa * wb / total);
    }
  }
  return f;
}

double qcrb_noon(const Scenario& s, const WeightVector& p) {
  require_weights(s, p);
  const double d = s.n_phases;
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double w = p[j] * transmission(s, j);
    if (!(w > 0.0)) unidentifiable(j, p[j], s.loss[j]);
    sum += (j == 0 ? d : 1.0) / w;
  }
  return sum / (4.0 * s.n_photons * s.n_photons);
}

WeightVector optimal_weights(const Scenario& s) {
  require_lossless_somewhere(s, "optimal weights undefined");
  // p_j proportional to lambda_j^N with lambda_j = prod_{l != j} (1-gamma_l)^{1/2};
  // dividing by the common prod_l (1-gamma_l)^{N/2} leaves (1-gamma_j)^{-N/2}.
  const double half_n = 0.5 * s.n_photons;
  std::vector<double> raw(static_cast<std::size_t>(s.n_modes()));
  for (std::size_t j = 0; j < raw.size(); ++j) raw[j] = std::pow(1.0 - s.loss[j], -half_n);
  raw[0] *= std::sqrt(static_cast<double>(s.n_phases));
  return WeightVector::from_raw(raw);
}

double min_qcrb_noon(const Scenario& s) {
  require_lossless_somewhere(s, "minimum QCRB undefined");
  const double half_n = 0.5 * s.n_photons;
  double sum = std::sqrt(static_cast<double>(s.n_phases)) * std::pow(1.0 - s.loss[0], -half_n);
  for (std::size_t j = 1; j < s.loss.size(); ++j) sum += std::pow(1.0 - s.loss[j], -half_n);
  return sum * sum / (4.0 * s.n_photons * s.n_photons);
}

WeightVector optimal_coherent_weights(const Scenario& s) {
  require_lossless_somewhere(s, "optimal coherent weights undefined");
  std::vector<double> raw(static_cast<std::size_t>(s.n_modes()));
  for (std::size_t j = 0; j < raw.size(); ++j) raw[j] = 1.0 / std::sqrt(1.0 - s.loss[j]);
  raw[0] *= std::sqrt(static_cast<double>(s.n_phases));
  return WeightVector::from_raw(raw);
}

double sql_coherent(const Scenario& s) {
  for (std::size_t j = 0; j < s.loss.size(); ++j)
    if (s.loss[j] >= 1.0) unidentifiable(j, 0.0, s.loss[j]);
  double sum = std::sqrt(static_cast<double>(s.n_phases) / (1.0 - s.loss[0]));
  for (std::size_t j = 1; j < s.loss.size(); ++j) sum += 1.0 / std::sqrt(1.0 - s.loss[j]);
  return sum * sum / (4.0 * s.n_photons);
}

double sql_coherent(const Scenario& s, const WeightVector& q) {
  require_weights(s, q);
  const double d = s.n_phases;
  double sum = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double w = q[j] * (1.0 - s.loss[j]);
    if (!(w > 0.0)) unidentifiable(j, q[j], s.loss[j]);
    sum += (j == 0 ? d : 1.0) / w;
  }
  return sum / (4.0 * s.n_photons);
}

double advantage_ratio(const Scenario& s, const WeightScheme& scheme) {
  const double qcrb = scheme.kind == WeightSchemeKind::Optimal
                          ? min_qcrb_noon(s)
                          : qcrb_noon(s, resolve_weights(s, scheme));
  return 1.0 - qcrb / sql_coherent(s);
}

BoundReport quantum_advantage(const Scenario& s) {
  BoundReport r;
  r.weights_used = optimal_weights(s);
  r.qcrb_noon = qcrb_noon(s, r.weights_used);
  r.sql_coherent = sql_coherent(s);
  r.advantage = 1.0 - r.qcrb_noon / r.sql_coherent;
  return r;
}

double critical_loss(int n_photons, int n_phases, double gamma_ref, WeightSchemeKind scheme) {
  if (n_photons < 1 || n_phases < 1)
    throw Error(ErrorCode::InvalidArgument, "critical_loss needs N >= 1 and d >= 1");
  if (!(gamma_ref >= 0.0 && gamma_ref < 1.0))
    throw Error(ErrorCode::OutOfRange, "critical_loss needs 0 <= gamma_ref < 1");
  if (scheme == WeightSchemeKind::Custom)
    throw Error(ErrorCode::InvalidArgument, "critical_loss needs a named weight scheme");

  constexpr double kUpper = 1.0 - 1e-9;
  constexpr int kGrid = 100;
  constexpr double kTol = 1e-10;
  // Relative slack for r = 0 identities that only hold up to rounding (N = 1).
  constexpr double kZero = 1e-12;

  Scenario s;
  s.n_photons = n_photons;
  s.n_phases = n_phases;
  s.phases = PhaseVector::default_for(n_phases);
  const WeightScheme ws{scheme, std::nullopt};
  auto ratio = [&](double gamma) {
    s.loss = LossProfile::reference_and_signal(n_phases, gamma_ref, gamma);
    return advantage_ratio(s, ws);
  };

  if (ratio(0.0) < -kZero) return 0.0;
  // r is not monotone in gamma for every scheme, so bracket the first
  // downward crossing on a grid before bisecting.
  double lo = 0.0;
  double hi = -1.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double g = kUpper * static_cast<double>(i) / kGrid;
    if (ratio(g) < -kZero) {
      hi = g;
      break;
    }
    lo = g;
  }
  if (hi < 0.0) return kUpper;
  while (hi - lo > kTol) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) < 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace noonbounds
