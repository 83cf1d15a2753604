// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/verify.hpp"

#include "noonbounds/bounds.hpp"
#include "noonbounds/fockspace.hpp"
#include "noonbounds/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace noonbounds {

namespace {

constexpr double kGridMax = 0.8;
constexpr double kRandomLossMax = 0.9;

struct Case {
  Scenario scenario;
  WeightVector weights;
  bool full_checks = false;  // attainability and SLD residual as well
};

struct Outcome {
  double qfim = 0.0;
  double qcrb = 0.0;
  double attain = 0.0;
  double sld = 0.0;
};

// Cartesian grid over all d+1 loss rates.
void add_grid(int n, int d, int points, std::vector<Case>& cases) {
  const int modes = d + 1;
  std::vector<int> idx(static_cast<std::size_t>(modes), 0);
  while (true) {
    std::vector<double> gamma(static_cast<std::size_t>(modes));
    for (int j = 0; j < modes; ++j)
      gamma[static_cast<std::size_t>(j)] =
          points == 1 ? 0.0 : kGridMax * idx[static_cast<std::size_t>(j)] / (points - 1);
    Scenario s = make_scenario(n, d, gamma);
    cases.push_back({s, optimal_weights(s), false});
    cases.push_back({s, balanced_weights(d), false});
    int j = 0;
    while (j < modes && ++idx[static_cast<std::size_t>(j)] == points) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == modes) break;
  }
}

void add_random(int n, int d, int draws, std::uint64_t seed, std::vector<Case>& cases) {
  std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(100 * n + d)));
  std::uniform_real_distribution<double> loss(0.0, kRandomLossMax);
  std::exponential_distribution<double> expo(1.0);
  for (int r = 0; r < draws; ++r) {
    std::vector<double> gamma(static_cast<std::size_t>(d) + 1);
    for (double& g : gamma) g = loss(rng);
    std::vector<double> raw(gamma.size());
    for (double& x : raw) x = expo(rng) + 1e-3;
    std::vector<double> phases(static_cast<std::size_t>(d));
    for (double& ph : phases) ph = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    cases.push_back({make_scenario(n, d, gamma, phases), WeightVector::from_raw(raw), true});
  }
}

Outcome check(const Case& c, bool inject_fault) {
  const Scenario& s = c.scenario;
  Outcome o;
  const FisherMatrix closed = qfim_noon(s, c.weights);
  const FisherMatrix oracle = qfim_oracle(s, c.weights);
  o.qfim = (closed.entries - oracle.entries).cwiseAbs().maxCoeff();

  double q = qcrb_noon(s, c.weights);
  if (inject_fault) q = -q;
  const double trace_inv = closed.entries.inverse().trace();
  o.qcrb = std::abs(q - trace_inv) / std::abs(trace_inv);

  if (c.full_checks) {
    o.attain = attainability_check(s, c.weights);
    const auto slds = sld_operators(s, c.weights);
    const DensityMatrix rho = build_lossy_state(s, c.weights);
    for (const auto& l : slds) {
      const ComplexMatrix d = lossy_state_derivative(s, c.weights, *rho.basis, l.phase_index);
      const ComplexMatrix r = d - 0.5 * (l.op * rho.rho + rho.rho * l.op);
      o.sld = std::max(o.sld, r.norm());
    }
  }
  return o;
}

}  // namespace

void validate_verify_config(const VerifyConfig& cfg) {
  if (cfg.max_n < 1 || cfg.max_d < 1)
    throw Error(ErrorCode::InvalidArgument, "verify needs max N >= 1 and max d >= 1");
  if (cfg.grid_points < 1 || cfg.random_draws < 0)
    throw Error(ErrorCode::InvalidArgument, "verify needs grid points >= 1 and draws >= 0");
  const double dim = FockBasis::dimension(cfg.max_d + 1, cfg.max_n);
  if (dim > cfg.max_dimension) {
    std::ostringstream os;
    os << "Fock dimension " << dim << " for N=" << cfg.max_n << ", d=" << cfg.max_d
       << " exceeds the verify cap of " << cfg.max_dimension;
    throw Error(ErrorCode::BasisOverflow, os.str());
  }
}

VerifyReport run_verify(const VerifyConfig& cfg) {
  validate_verify_config(cfg);
  std::vector<Case> cases;
  for (int n = 1; n <= cfg.max_n; ++n) {
    for (int d = 1; d <= cfg.max_d; ++d) {
      add_grid(n, d, cfg.grid_points, cases);
      add_random(n, d, cfg.random_draws, cfg.seed, cases);
    }
  }

  std::vector<Outcome> results(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) { results[i] = check(cases[i], cfg.inject_fault); });

  VerifyReport report;
  report.scenarios_checked = static_cast<int>(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Outcome& o = results[i];
    report.max_qfim_residual = std::max(report.max_qfim_residual, o.qfim);
    report.max_qcrb_residual = std::max(report.max_qcrb_residual, o.qcrb);
    report.max_attainability = std::max(report.max_attainability, o.attain);
    report.max_sld_residual = std::max(report.max_sld_residual, o.sld);
    if (!report.passed) continue;
    const char* broken = nullptr;
    if (!(o.qfim <= kQfimTolerance)) broken = "qfim oracle mismatch";
    else if (!(o.qcrb <= kQcrbTolerance)) broken = "qcrb closed form disagrees with trace of inverse";
    else if (!(o.attain <= kAttainabilityTolerance)) broken = "attainability commutator nonzero";
    else if (!(o.sld <= kSldTolerance)) broken = "sld defining equation residual";
    if (broken) {
      report.passed = false;
      report.failure = broken;
      auto j = nlohmann::json::parse(scenario_to_json(cases[i].scenario));
      j["weights"] = std::vector<double>(cases[i].weights.values().begin(), cases[i].weights.values().end());
      report.offending_scenario = j.dump();
    }
  }
  return report;
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed;
  j["scenarios_checked"] = scenarios_checked;
  j["max_qfim_residual"] = max_qfim_residual;
  j["max_qcrb_residual"] = max_qcrb_residual;
  j["max_attainability"] = max_attainability;
  j["max_sld_residual"] = max_sld_residual;
  j["failure"] = failure ? nlohmann::json(*failure) : nlohmann::json(nullptr);
  j["offending_scenario"] =
      offending_scenario ? nlohmann::json::parse(*offending_scenario) : nlohmann::json(nullptr);
  return j.dump(2);
}

}  // namespace noonbounds
