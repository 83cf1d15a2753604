// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/bounds.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace noonbounds;

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Weights written with the product coefficients lambda_j = prod_{l != j}
// sqrt(1 - gamma_l); algebraically equal to the library's form but computed
// along a different route.
std::vector<double> lambda_weights(int n, int d, const std::vector<double>& g) {
  std::vector<double> lam(g.size(), 1.0);
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t l = 0; l < g.size(); ++l)
      if (l != j) lam[j] *= std::sqrt(1.0 - g[l]);
  std::vector<double> p(g.size());
  double total = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    p[j] = std::pow(lam[j], n) * (j == 0 ? std::sqrt(static_cast<double>(d)) : 1.0);
    total += p[j];
  }
  for (double& x : p) x /= total;
  return p;
}

// Direct evaluation of the closed-form QCRB sum.
double qcrb_literal(int n, int d, const std::vector<double>& g, const std::vector<double>& p) {
  double s = d / (p[0] * std::pow(1.0 - g[0], n));
  for (std::size_t j = 1; j < g.size(); ++j) s += 1.0 / (p[j] * std::pow(1.0 - g[j], n));
  return s / (4.0 * n * n);
}

// Equal signal loss: minimum NOON bound and SQL.
double rqa_equal_signal(int n, int d, double gref, double g) {
  const double q = std::pow(std::sqrt(d) * std::pow(1.0 - gref, -0.5 * n) + d * std::pow(1.0 - g, -0.5 * n), 2) /
                   (4.0 * n * n);
  const double c = std::pow(std::sqrt(d / (1.0 - gref)) + d / std::sqrt(1.0 - g), 2) / (4.0 * n);
  return 1.0 - q / c;
}

// Dense grid plus bisection on the explicit formula.
double crit_oracle(int n, int d, double gref) {
  if (rqa_equal_signal(n, d, gref, 0.0) < 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0 - 1e-9;
  const int grid = 2000;
  for (int i = 1; i <= grid; ++i) {
    const double g = hi * i / grid;
    if (rqa_equal_signal(n, d, gref, g) < 0.0) {
      hi = g;
      lo = hi * (i - 1) / grid;
      break;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rqa_equal_signal(n, d, gref, mid) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double t = 0.0;
  for (double& x : v) t += (x = e(rng));
  for (double& x : v) x /= t;
  return v;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Numerical;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("weight schemes expand as documented") {
  const auto h = humphreys_weights(4);
  CHECK(h[0] == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
  CHECK(h[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  const auto b = balanced_weights(3);
  for (double x : b.values()) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("single-photon QFIM") {
  const auto p = WeightVector::from_raw(std::vector<double>{1, 1});
  CHECK(qfim_noon(make_scenario(1, 1, {0, 0}), p).entries(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double g : {0.1, 0.37, 0.8}) {
    const auto f = qfim_noon(make_scenario(1, 1, {g, g}), p);
    CHECK(f.entries(0, 0) == doctest::Approx(1.0 - g).epsilon(1e-13));
    CHECK(f.kind == FisherKind::Quantum);
  }
}

TEST_CASE("Humphreys weights, lossless N=2 d=2: trace of inverse") {
  const Scenario s = make_scenario(2, 2, {0, 0, 0});
  const auto f = qfim_noon(s, humphreys_weights(2));
  const double expected = std::pow(kSqrt2 + 2.0, 2) / 16.0;
  CHECK(std::abs(f.entries.inverse().trace() - expected) <= 1e-12);
}

TEST_CASE("QCRB spot values") {
  CHECK(qcrb_noon(make_scenario(1, 1, {0, 0}), balanced_weights(1)) == doctest::Approx(1.0).epsilon(1e-14));
  const Scenario s = make_scenario(2, 2, {0.5, 0, 0});
  const double expected = std::pow(kSqrt2 + 1.0, 2) / 4.0;
  CHECK(std::abs(qcrb_noon(s, optimal_weights(s)) - expected) <= 1e-12);
  CHECK(std::abs(min_qcrb_noon(s) - expected) <= 1e-12);
  CHECK(std::abs(qfim_noon(s, optimal_weights(s)).entries.inverse().trace() - expected) <= 1e-12);
  // Balanced weights, lossless: (6 + 3 + 3) / 16.
  CHECK(std::abs(qcrb_noon(make_scenario(2, 2, {0, 0, 0}), balanced_weights(2)) - 0.75) <= 1e-14);
}

TEST_CASE("optimal weights match the product-coefficient form") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const int d = 1 + trial % 6;
    std::vector<double> g(static_cast<std::size_t>(d) + 1);
    for (double& x : g) x = u(rng);
    const auto p = optimal_weights(make_scenario(n, d, g));
    const auto q = lambda_weights(n, d, g);
    for (std::size_t j = 0; j < q.size(); ++j) CHECK(std::abs(p[j] - q[j]) <= 1e-12);
  }
}

TEST_CASE("optimal weights, spot values") {
  for (double g : {0.0, 0.3, 0.7}) {
    const auto p = optimal_weights(make_scenario(2, 2, {g, g, g}));
    CHECK(p[0] == doctest::Approx(kSqrt2 / (kSqrt2 + 2)).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(1.0 / (kSqrt2 + 2)).epsilon(1e-12));
  }
  const auto p = optimal_weights(make_scenario(2, 2, {0.5, 0, 0}));
  CHECK(p[0] == doctest::Approx(0.5857864376).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(0.2071067812).epsilon(1e-9));
  CHECK(p[2] == doctest::Approx(0.2071067812).epsilon(1e-9));
  const auto m = optimal_weights(make_scenario(1, 1, {0, 0}));
  CHECK(m[0] == doctest::Approx(0.5));
}

TEST_CASE("optimal weights agree with a simplex grid search") {
  const std::vector<double> g{0.5, 0.0, 0.0};
  const Scenario s = make_scenario(2, 2, g);
  const int steps = 1000;
  double best = 1e300;
  std::vector<double> arg;
  for (int i = 1; i < steps; ++i) {
    for (int j = 1; i + j < steps; ++j) {
      const std::vector<double> p{double(i) / steps, double(j) / steps, double(steps - i - j) / steps};
      const double v = qcrb_literal(2, 2, g, p);
      if (v < best) {
        best = v;
        arg = p;
      }
    }
  }
  const auto p = optimal_weights(s);
  CHECK(qcrb_noon(s, p) <= best + 1e-12);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(p[j] - arg[j]) <= 2.0 / steps);
}

TEST_CASE("gradient of the QCRB vanishes on the simplex at the optimum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const int d = 2 + trial % 3;
    std::vector<double> g(static_cast<std::size_t>(d) + 1);
    for (double& x : g) x = u(rng);
    const auto p = optimal_weights(make_scenario(n, d, g));
    // d/dp_j of the QCRB sum, projected onto the simplex tangent space.
    std::vector<double> grad(g.size());
    double mean = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double c = j == 0 ? d : 1.0;
      grad[j] = -c / (p[j] * p[j] * std::pow(1.0 - g[j], n));
      mean += grad[j] / static_cast<double>(g.size());
    }
    for (double x : grad) CHECK(std::abs(x - mean) <= 1e-8 * std::abs(mean));
  }
}

TEST_CASE("trace-inverse consistency on random scenarios") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    const int d = 1 + trial % 4;
    std::vector<double> g(static_cast<std::size_t>(d) + 1);
    for (double& x : g) x = u(rng);
    const Scenario s = make_scenario(n, d, g);
    const auto p = WeightVector::from_raw(random_simplex(rng, g.size()));
    const auto f = qfim_noon(s, p);
    CHECK(is_valid_fisher(f));
    const double closed = qcrb_noon(s, p);
    CHECK(std::abs(f.entries.inverse().trace() - closed) <= 1e-10 * closed);
    CHECK(std::abs(qcrb_literal(n, d, g, {p.values().begin(), p.values().end()}) - closed) <= 1e-12 * closed);
  }
}

TEST_CASE("optimal weights beat random simplex points") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const int d = 1 + trial % 5;
    std::vector<double> g(static_cast<std::size_t>(d) + 1);
    for (double& x : g) x = u(rng);
    const Scenario s = make_scenario(n, d, g);
    const double best = qcrb_noon(s, optimal_weights(s));
    bool ok = true;
    for (int k = 0; k < 1000; ++k)
      ok = ok && best <= qcrb_noon(s, WeightVector::from_raw(random_simplex(rng, g.size())));
    CHECK(ok);
  }
}

TEST_CASE("QCRB is convex in the weights") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 4;
    std::vector<double> g(static_cast<std::size_t>(d) + 1);
    for (double& x : g) x = u(rng);
    const Scenario s = make_scenario(1 + trial % 3, d, g);
    const auto a = random_simplex(rng, g.size());
    const auto b = random_simplex(rng, g.size());
    const double l = lam(rng);
    std::vector<double> mix(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) mix[j] = l * a[j] + (1 - l) * b[j];
    const double lhs = qcrb_noon(s, WeightVector::from_raw(mix));
    const double rhs = l * qcrb_noon(s, WeightVector::from_raw(a)) + (1 - l) * qcrb_noon(s, WeightVector::from_raw(b));
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("equal losses: optimal weights are the Humphreys weights") {
  for (int n = 1; n <= 3; ++n)
    for (int d = 1; d <= 5; ++d)
      for (double g : {0.0, 0.25, 0.6, 0.9}) {
        const auto p = optimal_weights(make_scenario(n, d, std::vector<double>(d + 1, g)));
        const auto h = humphreys_weights(d);
        for (std::size_t j = 0; j < p.size(); ++j) CHECK(std::abs(p[j] - h[j]) <= 1e-12);
      }
}

TEST_CASE("coherent SQL spot values") {
  CHECK(std::abs(sql_coherent(make_scenario(2, 2, {0, 0, 0})) - std::pow(kSqrt2 + 2, 2) / 8.0) <= 1e-12);
  CHECK(std::abs(sql_coherent(make_scenario(2, 2, {0.5, 0, 0})) - 2.0) <= 1e-12);
  CHECK(std::abs(sql_coherent(make_scenario(1, 1, {0, 0})) - 1.0) <= 1e-12);
}

TEST_CASE("SQL equals the explicit-q bound at the optimal coherent weights") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const int d = 1 + trial % 6;
    std::vector<double> g(static_cast<std::size_t>(d) + 1);
    for (double& x : g) x = u(rng);
    const Scenario s = make_scenario(n, d, g);
    // q_0 ~ sqrt(d / (1 - g_0)), q_j ~ 1 / sqrt(1 - g_j)
    std::vector<double> q(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) q[j] = (j == 0 ? std::sqrt(d) : 1.0) / std::sqrt(1.0 - g[j]);
    const auto qv = WeightVector::from_raw(q);
    const double opt = sql_coherent(s);
    CHECK(std::abs(sql_coherent(s, qv) - opt) <= 1e-12 * opt);
    for (std::size_t j = 0; j < q.size(); ++j) CHECK(std::abs(optimal_coherent_weights(s)[j] - qv[j]) <= 1e-12);
    CHECK(sql_coherent(s, WeightVector::from_raw(random_simplex(rng, g.size()))) >= opt * (1 - 1e-12));
  }
}

TEST_CASE("advantage ratio") {
  for (int d : {1, 2, 5, 10}) {
    CHECK(std::abs(quantum_advantage(make_scenario(2, d, std::vector<double>(d + 1, 0.0))).advantage - 0.5) <= 1e-12);
    CHECK(std::abs(quantum_advantage(make_scenario(2, d, std::vector<double>(d + 1, 0.5))).advantage) <= 1e-12);
  }
  const auto r = quantum_advantage(make_scenario(2, 2, {0.5, 0, 0}));
  CHECK(r.advantage == doctest::Approx(1.0 - std::pow(kSqrt2 + 1, 2) / 8.0).epsilon(1e-12));
  CHECK(r.advantage == doctest::Approx(0.2714).epsilon(1e-3));
  CHECK(std::abs(r.advantage - (1.0 - r.qcrb_noon / r.sql_coherent)) <= 1e-12);
  CHECK(r.qcrb_noon > 0.0);
  CHECK(r.sql_coherent > 0.0);
}

TEST_CASE("equal-loss advantage closed form") {
  for (int n = 1; n <= 6; ++n)
    for (int d = 1; d <= 6; ++d)
      for (double g : {0.0, 0.1, 0.4, 0.8}) {
        const double r = quantum_advantage(make_scenario(n, d, std::vector<double>(d + 1, g))).advantage;
        CHECK(std::abs(r - (1.0 - std::pow(1.0 - g, 1 - n) / n)) <= 1e-12);
      }
}

TEST_CASE("large-d limit of the advantage") {
  const int n = 2;
  const double gref = 0.5;
  const double g = 0.2;
  const double limit = 1.0 - std::pow(1.0 - g, 1 - n) / n;
  double prev = -1.0;
  double gap_at_100 = 0.0;
  for (int d : {1, 3, 10, 100, 1000, 10000}) {
    const double r = advantage_ratio(make_scenario(n, d, [&] {
      std::vector<double> v(d + 1, g);
      v[0] = gref;
      return v;
    }()));
    CHECK(r > prev);
    CHECK(r < limit);
    if (d == 100) gap_at_100 = limit - r;
    prev = r;
  }
  // The reference mode's share fades like 1/sqrt(d).
  CHECK(limit - prev <= 1e-2);
  CHECK(limit - prev <= gap_at_100 / 5.0);
}

TEST_CASE("ordering of weight schemes") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 5;
    std::vector<double> g(static_cast<std::size_t>(d) + 1);
    for (double& x : g) x = u(rng);
    const Scenario s = make_scenario(1 + trial % 3, d, g);
    CHECK(min_qcrb_noon(s) <= qcrb_noon(s, humphreys_weights(d)) * (1 + 1e-12));
    const Scenario e = make_scenario(1 + trial % 3, d, std::vector<double>(d + 1, g[0]));
    CHECK(qcrb_noon(e, humphreys_weights(d)) <= qcrb_noon(e, balanced_weights(d)) * (1 + 1e-12));
  }
}

TEST_CASE("critical loss: equal-loss root at N = 2") {
  CHECK(std::abs(critical_loss(2, 1, 0.5) - 0.5) <= 1e-9);
}

TEST_CASE("critical loss matches an independent grid-and-bisection root") {
  for (int n = 2; n <= 6; ++n)
    for (int d = 1; d <= 6; ++d) {
      const double ours = critical_loss(n, d, 0.5);
      const double oracle = crit_oracle(n, d, 0.5);
      CHECK(std::abs(ours - oracle) <= 1e-9);
    }
  CHECK(std::abs(critical_loss(3, 2, 0.5) - 0.33963) <= 1e-5);
}

TEST_CASE("critical loss grows with d") {
  // At N = 2 the root is gamma_ref for every d, so the comparison there holds
  // with equality; N = 3 shows the strict increase.
  CHECK(critical_loss(2, 10, 0.5) >= critical_loss(2, 2, 0.5) - 1e-9);
  CHECK(critical_loss(3, 10, 0.5) > critical_loss(3, 2, 0.5));
}

TEST_CASE("critical loss is zero without advantage at gamma = 0") {
  CHECK(critical_loss(6, 2, 0.5) == 0.0);
  CHECK(critical_loss(6, 2, 0.5, WeightSchemeKind::Humphreys) == 0.0);
}

TEST_CASE("Humphreys critical loss handles a non-monotone advantage curve") {
  const double c = critical_loss(3, 2, 0.5, WeightSchemeKind::Humphreys);
  CHECK(std::abs(c - 0.28086) <= 1e-5);
  const Scenario at = make_scenario(3, 2, {0.5, c, c});
  CHECK(std::abs(advantage_ratio(at, WeightScheme::humphreys())) <= 1e-8);
}

TEST_CASE("identifiability errors") {
  CHECK(code_of([] { qcrb_noon(make_scenario(2, 2, {0, 0, 0}), WeightVector::from_simplex(std::vector<double>{0.5, 0.5, 0.0})); }) ==
        ErrorCode::UnidentifiablePhase);
  CHECK(code_of([] { qcrb_noon(make_scenario(2, 2, {0, 1, 0}), balanced_weights(2)); }) ==
        ErrorCode::UnidentifiablePhase);
  CHECK(code_of([] { optimal_weights(make_scenario(2, 2, {0, 1, 0})); }) == ErrorCode::DegenerateEnvironment);
  CHECK(code_of([] { qfim_noon(make_scenario(2, 1, {1, 1}), balanced_weights(1)); }) == ErrorCode::SingularModel);
  CHECK(code_of([] { qcrb_noon(make_scenario(2, 2, {0, 0, 0}), balanced_weights(3)); }) ==
        ErrorCode::DimensionMismatch);
}

}  // TEST_SUITE
