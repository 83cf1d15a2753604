// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/core.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace noonbounds {

namespace {

std::string join(std::span<const double> v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

LossProfile::LossProfile(std::vector<double> gamma) : gamma_(std::move(gamma)) {
  for (std::size_t j = 0; j < gamma_.size(); ++j) {
    const double g = gamma_[j];
    if (!std::isfinite(g) || g < 0.0 || g > 1.0) {
      std::ostringstream os;
      os << "loss rate out of range: gamma[" << j << "] = " << g << " not in [0,1]";
      throw Error(ErrorCode::OutOfRange, os.str());
    }
  }
}

LossProfile LossProfile::reference_and_signal(int n_phases, double gamma_ref, double gamma) {
  std::vector<double> g(static_cast<std::size_t>(n_phases) + 1, gamma);
  g[0] = gamma_ref;
  return LossProfile(std::move(g));
}

LossProfile LossProfile::uniform(int n_phases, double gamma) {
  return reference_and_signal(n_phases, gamma, gamma);
}

WeightVector WeightVector::from_raw(std::span<const double> raw) {
  if (raw.empty()) throw Error(ErrorCode::InvalidArgument, "weight vector is empty");
  double total = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x) || x < 0.0)
      throw Error(ErrorCode::OutOfRange, "weights must be finite and non-negative");
    total += x;
  }
  if (total <= 0.0) throw Error(ErrorCode::InvalidArgument, "weights sum to zero");
  std::vector<double> p(raw.begin(), raw.end());
  for (double& x : p) x /= total;
  // Fold the rounding residue into the largest entry so the sum is 1 to the ulp.
  const double residue = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  auto largest = std::max_element(p.begin(), p.end());
  *largest += residue;
  return WeightVector(std::move(p));
}

WeightVector WeightVector::from_simplex(std::span<const double> p) {
  if (p.empty()) throw Error(ErrorCode::InvalidArgument, "weight vector is empty");
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0)
      throw Error(ErrorCode::OutOfRange, "weights must be finite and non-negative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "weights must sum to 1 (got " << total << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  return WeightVector(std::vector<double>(p.begin(), p.end()));
}

PhaseVector::PhaseVector(std::vector<double> phi) : phi_(std::move(phi)) {
  for (double x : phi_)
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "phases must be finite");
}

PhaseVector PhaseVector::default_for(int n_phases) {
  std::vector<double> phi(static_cast<std::size_t>(std::max(n_phases, 0)));
  for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = 0.3 + 0.2 * static_cast<double>(k);
  return PhaseVector(std::move(phi));
}

Scenario validate_scenario(Scenario s) {
  if (s.n_photons < 1) throw Error(ErrorCode::InvalidArgument, "n_photons must be >= 1");
  if (s.n_phases < 1) throw Error(ErrorCode::InvalidArgument, "n_phases must be >= 1");
  if (s.repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  const std::size_t modes = static_cast<std::size_t>(s.n_phases) + 1;
  if (s.loss.size() != modes) {
    std::ostringstream os;
    os << "expected d+1=" << modes << " loss entries, got " << s.loss.size() << " ("
       << join(s.loss.gamma()) << ")";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  // Re-run the range check; a default-constructed profile skips it.
  LossProfile check(std::vector<double>(s.loss.gamma().begin(), s.loss.gamma().end()));
  if (s.phases.size() != static_cast<std::size_t>(s.n_phases)) {
    std::ostringstream os;
    os << "expected d=" << s.n_phases << " phases, got " << s.phases.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  return s;
}

Scenario make_scenario(int n_photons, int n_phases, std::vector<double> gamma,
                       std::vector<double> phases, int repetitions) {
  Scenario s;
  s.n_photons = n_photons;
  s.n_phases = n_phases;
  s.loss = LossProfile(std::move(gamma));
  s.phases = phases.empty() ? PhaseVector::default_for(n_phases) : PhaseVector(std::move(phases));
  s.repetitions = repetitions;
  return validate_scenario(std::move(s));
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["n_photons"] = s.n_photons;
  j["n_phases"] = s.n_phases;
  j["gamma"] = std::vector<double>(s.loss.gamma().begin(), s.loss.gamma().end());
  j["phases"] = std::vector<double>(s.phases.values().begin(), s.phases.values().end());
  j["repetitions"] = s.repetitions;
  return j.dump();
}

Scenario scenario_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("scenario JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Parse, "scenario JSON must be an object");
  try {
    const int n = j.at("n_photons").get<int>();
    const int d = j.at("n_phases").get<int>();
    auto gamma = j.at("gamma").get<std::vector<double>>();
    std::vector<double> phases;
    if (j.contains("phases")) phases = j.at("phases").get<std::vector<double>>();
    const int reps = j.value("repetitions", 1);
    Scenario s;
    s.n_photons = n;
    s.n_phases = d;
    s.loss = LossProfile(std::move(gamma));
    s.phases = phases.empty() ? PhaseVector::default_for(d) : PhaseVector(std::move(phases));
    s.repetitions = reps;
    return validate_scenario(std::move(s));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("scenario JSON: ") + e.what());
  }
}

bool is_valid_fisher(const FisherMatrix& f, double tol) {
  const auto& m = f.entries;
  if (m.rows() != m.cols()) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= -tol;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

}  // namespace noonbounds
