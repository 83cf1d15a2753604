// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/interferometer.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace noonbounds {

namespace {

using Complex = std::complex<double>;

constexpr double kMaxCondition = 1e12;

void compositions(int modes, int remaining, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == modes - 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    cur.push_back(n);
    compositions(modes, remaining - n, cur, out);
    cur.pop_back();
  }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace

std::vector<int> MeshParams::clements_modes(int n_modes) {
  std::vector<int> modes;
  for (int layer = 0; layer < n_modes; ++layer)
    for (int m = layer % 2; m + 1 < n_modes; m += 2) modes.push_back(m);
  return modes;
}

MeshParams MeshParams::uniform(int n_modes, double theta, double chi) {
  MeshParams mesh;
  mesh.n_modes = n_modes;
  for (int m : clements_modes(n_modes)) mesh.layers.push_back({m, theta, chi});
  return mesh;
}

MeshParams MeshParams::random(int n_modes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi / 2);
  std::uniform_real_distribution<double> chi(0.0, 2 * std::numbers::pi);
  MeshParams mesh;
  mesh.n_modes = n_modes;
  for (int m : clements_modes(n_modes)) {
    const double t = theta(rng);
    mesh.layers.push_back({m, t, chi(rng)});
  }
  return mesh;
}

void validate_mesh(const MeshParams& mesh) {
  if (mesh.n_modes < 2) throw Error(ErrorCode::InvalidArgument, "a mesh needs at least 2 modes");
  for (std::size_t i = 0; i < mesh.layers.size(); ++i) {
    const auto& l = mesh.layers[i];
    if (l.mode < 0 || l.mode > mesh.n_modes - 2) {
      std::ostringstream os;
      os << "mesh block " << i << " acts on mode " << l.mode << ", valid range is [0, "
         << mesh.n_modes - 2 << "]";
      throw Error(ErrorCode::OutOfRange, os.str());
    }
    if (!std::isfinite(l.theta) || !std::isfinite(l.chi))
      throw Error(ErrorCode::InvalidArgument, "mesh angles must be finite");
  }
}

MeshParams canonicalize(const MeshParams& mesh) {
  // Identities used, with T = T(theta, chi) on modes (m, m+1):
  //   T diag(a, b)          = b T(theta, chi + arg a - arg b)
  //   T(theta + pi, chi)    = -T(theta, chi)
  //   T(pi - theta, chi)    = diag(1, -1) T(theta, chi + pi)
  // Left-over diagonal phases are pushed through later blocks and end up as
  // output phases, which photon counting cannot see.
  using std::numbers::pi;
  validate_mesh(mesh);
  MeshParams out = mesh;
  std::vector<double> pending(static_cast<std::size_t>(mesh.n_modes), 0.0);
  for (auto& l : out.layers) {
    const auto m = static_cast<std::size_t>(l.mode);
    l.chi += pending[m] - pending[m + 1];
    pending[m] = pending[m + 1];
    l.theta = wrap(l.theta, 2 * pi);
    if (l.theta >= pi) {
      l.theta -= pi;
      pending[m] += pi;
      pending[m + 1] += pi;
    }
    if (l.theta > pi / 2) {
      l.theta = pi - l.theta;
      l.chi += pi;
      pending[m + 1] += pi;
    }
    l.chi = wrap(l.chi, 2 * pi);
  }
  return out;
}

std::string mesh_to_json(const MeshParams& mesh) {
  nlohmann::json j;
  j["n_modes"] = mesh.n_modes;
  j["layers"] = nlohmann::json::array();
  for (const auto& l : mesh.layers) j["layers"].push_back({{"mode", l.mode}, {"theta", l.theta}, {"chi", l.chi}});
  return j.dump();
}

MeshParams mesh_from_json(std::string_view text, int n_modes) {
  try {
    const auto j = nlohmann::json::parse(text);
    MeshParams mesh;
    int max_mode = -1;
    for (const auto& l : j.at("layers")) {
      MeshLayer layer{l.at("mode").get<int>(), l.at("theta").get<double>(), l.at("chi").get<double>()};
      max_mode = std::max(max_mode, layer.mode);
      mesh.layers.push_back(layer);
    }
    mesh.n_modes = n_modes > 0 ? n_modes : j.value("n_modes", max_mode + 2);
    validate_mesh(mesh);
    return mesh;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("mesh JSON: ") + e.what());
  }
}

ScatteringMatrix assemble_unitary(const MeshParams& mesh) {
  validate_mesh(mesh);
  ScatteringMatrix u = ScatteringMatrix::Identity(mesh.n_modes, mesh.n_modes);
  for (const auto& l : mesh.layers) {
    const Complex e = std::polar(1.0, l.chi);
    const double c = std::cos(l.theta);
    const double s = std::sin(l.theta);
    // Left-multiply by the embedded block: rows m and m+1 mix.
    const Eigen::RowVectorXcd r0 = u.row(l.mode);
    const Eigen::RowVectorXcd r1 = u.row(l.mode + 1);
    u.row(l.mode) = e * c * r0 - s * r1;
    u.row(l.mode + 1) = e * s * r0 + c * r1;
  }
  return u;
}

std::vector<std::vector<int>> enumerate_outcomes(int n_modes, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (n_modes == 1) return {{total}};
  compositions(n_modes, total, cur, out);
  return out;
}

OutcomeDistribution outcome_distribution(const Scenario& s, const WeightVector& p,
                                         const ScatteringMatrix& u) {
  const int modes = s.n_modes();
  const int n = s.n_photons;
  if (p.size() != static_cast<std::size_t>(modes))
    throw Error(ErrorCode::DimensionMismatch, "weights must have d+1 entries");
  if (u.rows() != modes || u.cols() != modes)
    throw Error(ErrorCode::DimensionMismatch, "scattering matrix must be (d+1)x(d+1)");

  // Per input mode j: sqrt(p_j (1-g_j)^N) e^{i N phi_j}, phi_0 = 0.
  std::vector<Complex> source(static_cast<std::size_t>(modes));
  double surviving = 0.0;
  for (int j = 0; j < modes; ++j) {
    const double w = p[static_cast<std::size_t>(j)] * std::pow(1.0 - s.loss[static_cast<std::size_t>(j)], n);
    surviving += w;
    const double phase = j == 0 ? 0.0 : n * s.phases[static_cast<std::size_t>(j) - 1];
    source[static_cast<std::size_t>(j)] = std::polar(std::sqrt(w), phase);
  }

  OutcomeDistribution dist;
  dist.n_phases = s.n_phases;
  dist.residual_mass = std::max(0.0, 1.0 - surviving);
  const double log_n_fact = log_factorial(n);
  std::vector<Complex> term(static_cast<std::size_t>(modes));
  for (auto& counts : enumerate_outcomes(modes, n)) {
    double log_norm = log_n_fact;
    for (int c : counts) log_norm -= log_factorial(c);
    const double norm = std::exp(0.5 * log_norm);

    Complex amplitude = 0.0;
    for (int j = 0; j < modes; ++j) {
      Complex prod = 1.0;
      for (int k = 0; k < modes; ++k) {
        const int c = counts[static_cast<std::size_t>(k)];
        if (c > 0) prod *= std::pow(u(k, j), c);
      }
      term[static_cast<std::size_t>(j)] = norm * source[static_cast<std::size_t>(j)] * prod;
      amplitude += term[static_cast<std::size_t>(j)];
    }

    Outcome o;
    o.counts = std::move(counts);
    o.probability = std::norm(amplitude);
    o.gradient.resize(s.n_phases);
    // d amplitude / d phi_a = i N term_a, so dP/dphi_a = 2 Re(conj(A) i N term_a).
    for (int a = 0; a < s.n_phases; ++a) {
      const Complex dA = Complex(0.0, n) * term[static_cast<std::size_t>(a) + 1];
      o.gradient(a) = 2.0 * (std::conj(amplitude) * dA).real();
    }
    dist.outcomes.push_back(std::move(o));
  }
  return dist;
}

FisherMatrix classical_fim(const OutcomeDistribution& dist) {
  FisherMatrix f;
  f.kind = FisherKind::Classical;
  f.entries = Eigen::MatrixXd::Zero(dist.n_phases, dist.n_phases);
  for (const auto& o : dist.outcomes) {
    if (o.probability < kOutcomeFloor) continue;
    f.entries.noalias() += o.gradient * o.gradient.transpose() / o.probability;
  }
  return f;
}

double crb(const OutcomeDistribution& dist) {
  const FisherMatrix f = classical_fim(dist);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.entries);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "FIM eigen-solver failed");
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 0.0) || hi / lo >= kMaxCondition)
    throw Error(ErrorCode::SingularMeasurement, "measurement cannot identify all phases (singular FIM)");
  // Trace of the inverse from the spectrum.
  return es.eigenvalues().cwiseInverse().sum();
}

}  // namespace noonbounds
