// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/fockspace.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace noonbounds {

namespace {

constexpr double kSupportCutoff = 1e-12;   // on lambda_j + lambda_k
constexpr double kDegenerateGap = 1e-10;   // |lambda_j - lambda_k| treated as equal

void enumerate(int modes, int remaining, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == modes) {
    out.push_back(cur);
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    cur.push_back(n);
    enumerate(modes, remaining - n, cur, out);
    cur.pop_back();
  }
}

std::size_t single_mode_index(const FockBasis& basis, int mode, int photons) {
  std::vector<int> occ(static_cast<std::size_t>(basis.n_modes()), 0);
  occ[static_cast<std::size_t>(mode)] = photons;
  return *basis.index_of(occ);
}

// Unnormalized amplitudes sqrt(p_j (1-g_j)^N) e^{i N phi_j} of the surviving
// N-photon block, one per mode.
std::vector<Complex> surviving_amplitudes(const Scenario& s, const WeightVector& p) {
  const int n = s.n_photons;
  std::vector<Complex> amp(static_cast<std::size_t>(s.n_modes()));
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const double mag = std::sqrt(p[j] * std::pow(1.0 - s.loss[j], n));
    const double phase = j == 0 ? 0.0 : n * s.phases[j - 1];
    amp[j] = std::polar(mag, phase);
  }
  return amp;
}

void require_weights(const Scenario& s, const WeightVector& p) {
  if (p.size() != static_cast<std::size_t>(s.n_modes())) {
    std::ostringstream os;
    os << "expected d+1=" << s.n_modes() << " weights, got " << p.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

struct Spectrum {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

Spectrum diagonalize_full(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()));
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::Numerical, "eigen-decomposition of the density matrix failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

// Eigendecomposition sector by sector in total photon number. Accidental
// degeneracies between sectors then cannot rotate eigenvectors across them.
// Falls back to the full matrix if rho couples different sectors.
Spectrum diagonalize(const FockBasis& basis, const ComplexMatrix& rho) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::vector<std::vector<Eigen::Index>> sectors(static_cast<std::size_t>(basis.max_total()) + 1);
  for (Eigen::Index i = 0; i < dim; ++i)
    sectors[static_cast<std::size_t>(basis.total(static_cast<std::size_t>(i)))].push_back(i);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index k = 0; k < dim; ++k)
      if (basis.total(static_cast<std::size_t>(i)) != basis.total(static_cast<std::size_t>(k)) &&
          std::abs(rho(i, k)) > 1e-14)
        return diagonalize_full(rho);

  Spectrum out{Eigen::VectorXd(dim), ComplexMatrix::Zero(dim, dim)};
  Eigen::Index col = 0;
  for (const auto& idx : sectors) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    ComplexMatrix block(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) block(i, k) = rho(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(k)]);
    const Spectrum sub = diagonalize_full(block);
    for (Eigen::Index c = 0; c < n; ++c, ++col) {
      out.values(col) = sub.values(c);
      for (Eigen::Index i = 0; i < n; ++i) out.vectors(idx[static_cast<std::size_t>(i)], col) = sub.vectors(i, c);
    }
  }
  return out;
}

// Derivatives of rho expressed in its eigenbasis, one per phase.
std::vector<ComplexMatrix> derivatives_in_eigenbasis(const Scenario& s, const WeightVector& p,
                                                     const FockBasis& basis,
                                                     const ComplexMatrix& vectors) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(s.n_phases));
  for (int a = 0; a < s.n_phases; ++a)
    out.push_back(vectors.adjoint() * lossy_state_derivative(s, p, basis, a) * vectors);
  return out;
}

}  // namespace

std::size_t FockBasis::Hash::operator()(const std::vector<int>& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

FockBasis::FockBasis(int n_modes, int max_total) : n_modes_(n_modes), max_total_(max_total) {
  if (n_modes < 1 || max_total < 0)
    throw Error(ErrorCode::InvalidArgument, "Fock basis needs >= 1 mode and max_total >= 0");
  std::vector<int> cur;
  enumerate(n_modes, max_total, cur, states_);
  lookup_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) lookup_.emplace(states_[i], i);
}

std::span<const int> FockBasis::state(std::size_t i) const { return states_.at(i); }

int FockBasis::total(std::size_t i) const {
  const auto& s = states_.at(i);
  return std::accumulate(s.begin(), s.end(), 0);
}

std::optional<std::size_t> FockBasis::index_of(std::span<const int> occupation) const {
  auto it = lookup_.find(std::vector<int>(occupation.begin(), occupation.end()));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

double FockBasis::dimension(int n_modes, int max_total) {
  return binomial(max_total + n_modes, n_modes);
}

std::shared_ptr<const FockBasis> scenario_basis(const Scenario& s, const FockOptions& opts) {
  const double dim = FockBasis::dimension(s.n_modes(), s.n_photons);
  if (dim * dim > opts.max_entries) {
    std::ostringstream os;
    os << "Fock basis overflow: dimension " << dim << " for N=" << s.n_photons
       << ", d=" << s.n_phases << " exceeds the cap of " << opts.max_entries << " matrix entries";
    throw Error(ErrorCode::BasisOverflow, os.str());
  }
  return std::make_shared<const FockBasis>(s.n_modes(), s.n_photons);
}

DensityMatrix build_lossy_state(const Scenario& s, const WeightVector& p, const FockOptions& opts) {
  require_weights(s, p);
  auto basis = scenario_basis(s, opts);
  const std::size_t dim = basis->size();
  const int n = s.n_photons;

  DensityMatrix out{basis, ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                               static_cast<Eigen::Index>(dim))};
  const auto amp = surviving_amplitudes(s, p);
  std::vector<std::size_t> top(amp.size());
  for (std::size_t j = 0; j < amp.size(); ++j) top[j] = single_mode_index(*basis, static_cast<int>(j), n);
  for (std::size_t j = 0; j < amp.size(); ++j)
    for (std::size_t k = 0; k < amp.size(); ++k)
      out.rho(static_cast<Eigen::Index>(top[j]), static_cast<Eigen::Index>(top[k])) +=
          amp[j] * std::conj(amp[k]);

  // sigma_N: r >= 1 photons lost from mode j leaves |N-r>_j with binomial weight.
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const double g = s.loss[j];
    for (int r = 1; r <= n; ++r) {
      const double w = p[j] * binomial(n, r) * std::pow(1.0 - g, n - r) * std::pow(g, r);
      const auto idx = static_cast<Eigen::Index>(single_mode_index(*basis, static_cast<int>(j), n - r));
      out.rho(idx, idx) += w;
    }
  }
  return out;
}

ComplexMatrix lossy_state_derivative(const Scenario& s, const WeightVector& p,
                                     const FockBasis& basis, int phase_index) {
  require_weights(s, p);
  if (phase_index < 0 || phase_index >= s.n_phases)
    throw Error(ErrorCode::OutOfRange, "phase index out of range");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const int n = s.n_photons;
  const auto amp = surviving_amplitudes(s, p);

  // Only mode a = phase_index + 1 carries phi_a: d/dphi_a amp_a = i N amp_a.
  ComplexVector v = ComplexVector::Zero(dim);
  ComplexVector dv = ComplexVector::Zero(dim);
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const auto idx = static_cast<Eigen::Index>(single_mode_index(basis, static_cast<int>(j), n));
    v(idx) = amp[j];
    if (j == static_cast<std::size_t>(phase_index) + 1) dv(idx) = Complex(0.0, n) * amp[j];
  }
  return dv * v.adjoint() + v * dv.adjoint();
}

FisherMatrix qfim_oracle(const Scenario& s, const WeightVector& p, const FockOptions& opts) {
  const DensityMatrix state = build_lossy_state(s, p, opts);
  const Spectrum sp = diagonalize(*state.basis, state.rho);
  const auto deriv = derivatives_in_eigenbasis(s, p, *state.basis, sp.vectors);
  const Eigen::VectorXd& lam = sp.values;
  const Eigen::Index dim = lam.size();

  // Eigenvector derivative coefficients c_kj = <lambda_k|d lambda_j>, taken
  // from first-order perturbation theory with the gauge <lambda_j|d lambda_j> = 0.
  auto vector_derivative = [&](const ComplexMatrix& d) {
    ComplexMatrix c = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index k = 0; k < dim; ++k)
        if (k != j && std::abs(lam(j) - lam(k)) > kDegenerateGap) c(k, j) = d(k, j) / (lam(j) - lam(k));
    return c;
  };
  std::vector<ComplexMatrix> coeff;
  coeff.reserve(deriv.size());
  for (const auto& d : deriv) coeff.push_back(vector_derivative(d));

  FisherMatrix f;
  f.kind = FisherKind::Quantum;
  f.entries = Eigen::MatrixXd::Zero(s.n_phases, s.n_phases);
  for (int a = 0; a < s.n_phases; ++a) {
    for (int b = a; b < s.n_phases; ++b) {
      const auto& da = deriv[static_cast<std::size_t>(a)];
      const auto& db = deriv[static_cast<std::size_t>(b)];
      const auto& ca = coeff[static_cast<std::size_t>(a)];
      const auto& cb = coeff[static_cast<std::size_t>(b)];
      double eigenvalue_term = 0.0;
      double vector_term = 0.0;
      double cross_term = 0.0;
      double degenerate_term = 0.0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (lam(j) > kSupportCutoff)
          eigenvalue_term += (da(j, j) * db(j, j)).real() / lam(j);
        vector_term += lam(j) * (ca.col(j).adjoint() * cb.col(j))(0, 0).real();
        for (Eigen::Index k = 0; k < dim; ++k) {
          const double sum = lam(j) + lam(k);
          if (sum <= kSupportCutoff) continue;
          cross_term += lam(j) * lam(k) / sum * (std::conj(ca(k, j)) * cb(k, j)).real();
          // Within a degenerate eigenspace the eigenvalue derivatives mix;
          // their off-diagonal part enters like a first-order eigenvalue term.
          if (k != j && std::abs(lam(j) - lam(k)) <= kDegenerateGap)
            degenerate_term += 2.0 * (da(j, k) * db(k, j)).real() / sum;
        }
      }
      f.entries(a, b) = eigenvalue_term + 4.0 * vector_term - 8.0 * cross_term + degenerate_term;
      f.entries(b, a) = f.entries(a, b);
    }
  }
  return f;
}

std::vector<SldOperator> sld_operators(const Scenario& s, const WeightVector& p,
                                       const FockOptions& opts) {
  const DensityMatrix state = build_lossy_state(s, p, opts);
  const Spectrum sp = diagonalize(*state.basis, state.rho);
  const auto deriv = derivatives_in_eigenbasis(s, p, *state.basis, sp.vectors);
  const Eigen::VectorXd& lam = sp.values;
  const Eigen::Index dim = lam.size();

  std::vector<SldOperator> out;
  out.reserve(deriv.size());
  for (std::size_t a = 0; a < deriv.size(); ++a) {
    ComplexMatrix l = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double sum = lam(j) + lam(k);
        if (sum > kSupportCutoff) l(j, k) = 2.0 * deriv[a](j, k) / sum;
      }
    out.push_back({sp.vectors * l * sp.vectors.adjoint(), static_cast<int>(a)});
  }
  return out;
}

FisherMatrix qfim_from_sld(const ComplexMatrix& rho, std::span<const SldOperator> slds) {
  const auto d = static_cast<Eigen::Index>(slds.size());
  FisherMatrix f;
  f.kind = FisherKind::Quantum;
  f.entries.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const auto& la = slds[static_cast<std::size_t>(a)].op;
      const auto& lb = slds[static_cast<std::size_t>(b)].op;
      f.entries(a, b) = 0.5 * (rho * (la * lb + lb * la)).trace().real();
    }
  return f;
}

double attainability_check(const Scenario& s, const WeightVector& p, const FockOptions& opts) {
  const DensityMatrix state = build_lossy_state(s, p, opts);
  const auto slds = sld_operators(s, p, opts);
  double worst = 0.0;
  for (std::size_t a = 0; a < slds.size(); ++a)
    for (std::size_t b = a + 1; b < slds.size(); ++b) {
      const ComplexMatrix comm = slds[a].op * slds[b].op - slds[b].op * slds[a].op;
      worst = std::max(worst, std::abs((state.rho * comm).trace()));
    }
  return worst;
}

ComplexVector noon_probe(const FockBasis& basis, int n_photons, const WeightVector& p) {
  if (p.size() != static_cast<std::size_t>(basis.n_modes()))
    throw Error(ErrorCode::DimensionMismatch, "probe weights must match the number of modes");
  if (n_photons > basis.max_total())
    throw Error(ErrorCode::OutOfRange, "probe photon number exceeds the basis truncation");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < p.size(); ++j)
    v(static_cast<Eigen::Index>(single_mode_index(basis, static_cast<int>(j), n_photons))) =
        std::sqrt(p[j]);
  return v;
}

ComplexMatrix apply_phase_shifts(const FockBasis& basis, const ComplexMatrix& rho,
                                 std::span<const double> relative_phases) {
  if (relative_phases.size() + 1 != static_cast<std::size_t>(basis.n_modes()))
    throw Error(ErrorCode::DimensionMismatch, "need one phase per non-reference mode");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  std::vector<double> theta(basis.size(), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto occ = basis.state(i);
    for (std::size_t j = 1; j < occ.size(); ++j) theta[i] += relative_phases[j - 1] * occ[j];
  }
  ComplexMatrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index k = 0; k < dim; ++k)
      out(i, k) = rho(i, k) * std::polar(1.0, theta[static_cast<std::size_t>(i)] -
                                                  theta[static_cast<std::size_t>(k)]);
  return out;
}

ComplexMatrix apply_loss_channel(const FockBasis& basis, const ComplexMatrix& rho, int mode,
                                 double gamma) {
  if (mode < 0 || mode >= basis.n_modes()) throw Error(ErrorCode::OutOfRange, "mode out of range");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::OutOfRange, "loss rate out of range");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const auto m = static_cast<std::size_t>(mode);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  std::vector<Eigen::Index> target(basis.size());
  std::vector<double> coeff(basis.size());
  for (int k = 0; k <= basis.max_total(); ++k) {
    // K_k maps |n> -> sqrt(C(n,k) (1-g)^{n-k} g^k) |n-k> on the chosen mode.
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto occ = basis.state(i);
      if (occ[m] < k) {
        target[i] = -1;
        continue;
      }
      std::vector<int> lowered(occ.begin(), occ.end());
      lowered[m] -= k;
      target[i] = static_cast<Eigen::Index>(*basis.index_of(lowered));
      coeff[i] = std::sqrt(binomial(occ[m], k) * std::pow(1.0 - gamma, occ[m] - k) * std::pow(gamma, k));
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (target[static_cast<std::size_t>(i)] < 0) continue;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (target[static_cast<std::size_t>(j)] < 0) continue;
        out(target[static_cast<std::size_t>(i)], target[static_cast<std::size_t>(j)]) +=
            coeff[static_cast<std::size_t>(i)] * coeff[static_cast<std::size_t>(j)] * rho(i, j);
      }
    }
  }
  return out;
}

ComplexMatrix fock_unitary(const FockBasis& basis, const ComplexMatrix& scattering) {
  const int modes = basis.n_modes();
  if (scattering.rows() != modes || scattering.cols() != modes)
    throw Error(ErrorCode::DimensionMismatch, "scattering matrix must be (d+1)x(d+1)");
  const auto dim = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  std::vector<int> vac(static_cast<std::size_t>(modes), 0);
  const std::size_t vacuum = *basis.index_of(vac);

  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto occ = basis.state(col);
    ComplexVector psi = ComplexVector::Zero(dim);
    psi(static_cast<Eigen::Index>(vacuum)) = 1.0;
    for (int j = 0; j < modes; ++j) {
      for (int rep = 0; rep < occ[static_cast<std::size_t>(j)]; ++rep) {
        // Apply sum_k U(k,j) a_k^dag.
        ComplexVector next = ComplexVector::Zero(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
          if (psi(i) == Complex(0.0)) continue;
          std::vector<int> raised(basis.state(static_cast<std::size_t>(i)).begin(),
                                  basis.state(static_cast<std::size_t>(i)).end());
          for (int k = 0; k < modes; ++k) {
            const double boson = std::sqrt(raised[static_cast<std::size_t>(k)] + 1.0);
            raised[static_cast<std::size_t>(k)] += 1;
            const auto idx = basis.index_of(raised);
            raised[static_cast<std::size_t>(k)] -= 1;
            next(static_cast<Eigen::Index>(*idx)) += scattering(k, j) * boson * psi(i);
          }
        }
        psi = std::move(next);
      }
      double fact = 1.0;
      for (int r = 2; r <= occ[static_cast<std::size_t>(j)]; ++r) fact *= r;
      psi /= std::sqrt(fact);
    }
    out.col(static_cast<Eigen::Index>(col)) = psi;
  }
  return out;
}

}  // namespace noonbounds
