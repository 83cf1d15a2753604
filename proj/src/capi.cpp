// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/noonbounds.h"

#include "noonbounds/bounds.hpp"
#include "noonbounds/core.hpp"
#include "noonbounds/fockspace.hpp"
#include "noonbounds/interferometer.hpp"
#include "noonbounds/montecarlo.hpp"
#include "noonbounds/optimize.hpp"
#include "noonbounds/parallel.hpp"
#include "noonbounds/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace noonbounds;

thread_local std::string g_last_error;

// Every handle starts with a tag so a handle of the wrong type, or one that
// was already destroyed, is rejected instead of dereferenced.
template <typename T, std::uint32_t Magic>
struct Handle {
  static constexpr std::uint32_t kMagic = Magic;
  explicit Handle(T v) : value(std::move(v)) {}
  ~Handle() { magic = 0; }
  std::uint32_t magic = Magic;
  T value;
};

}  // namespace

struct nb_scenario_struct : Handle<Scenario, 0x53434e31> {
  using Handle::Handle;
};
struct nb_mesh_struct : Handle<MeshParams, 0x4d455348> {
  using Handle::Handle;
};
struct nb_optresult_struct : Handle<OptimizationResult, 0x4f505452> {
  using Handle::Handle;
};
struct nb_sweep_struct : Handle<SweepResult, 0x53574550> {
  using Handle::Handle;
};

namespace {

struct BadHandle {};
struct NullPointer {
  const char* what;
};
struct ShortBuffer {};

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return NB_ERROR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return NB_ERROR_DIMENSION_MISMATCH;
    case ErrorCode::OutOfRange: return NB_ERROR_OUT_OF_RANGE;
    case ErrorCode::SingularModel: return NB_ERROR_SINGULAR_MODEL;
    case ErrorCode::UnidentifiablePhase: return NB_ERROR_UNIDENTIFIABLE_PHASE;
    case ErrorCode::DegenerateEnvironment: return NB_ERROR_DEGENERATE_ENVIRONMENT;
    case ErrorCode::BasisOverflow: return NB_ERROR_BASIS_OVERFLOW;
    case ErrorCode::Numerical: return NB_ERROR_NUMERICAL;
    case ErrorCode::SingularMeasurement: return NB_ERROR_SINGULAR_MEASUREMENT;
    case ErrorCode::OptimizationFailed: return NB_ERROR_OPTIMIZATION_FAILED;
    case ErrorCode::Parse: return NB_ERROR_PARSE;
  }
  return NB_ERROR_UNKNOWN;
}

template <typename F>
int guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return NB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const NullPointer& e) {
    g_last_error = std::string("null pointer argument: ") + e.what;
    return NB_ERROR_NULL_POINTER;
  } catch (const BadHandle&) {
    g_last_error = "invalid or destroyed handle";
    return NB_ERROR_INVALID_HANDLE;
  } catch (const ShortBuffer&) {
    g_last_error = "output buffer too small";
    return NB_ERROR_INSUFFICIENT_BUFFER;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NB_ERROR_UNKNOWN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NB_ERROR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown exception";
    return NB_ERROR_UNKNOWN;
  }
}

template <typename H>
auto& get(H* h) {
  if (h == nullptr) throw NullPointer{"handle"};
  if (h->magic != H::kMagic) throw BadHandle{};
  return h->value;
}

template <typename T>
T* need(T* p, const char* name) {
  if (p == nullptr) throw NullPointer{name};
  return p;
}

void write_string(const std::string& s, char* out, std::size_t* out_len) {
  need(out_len, "out_len");
  const std::size_t cap = *out_len;
  *out_len = s.size() + 1;
  if (out == nullptr || cap < s.size() + 1) throw ShortBuffer{};
  std::memcpy(out, s.c_str(), s.size() + 1);
}

void write_doubles(std::span<const double> v, double* out, std::size_t* out_len) {
  need(out_len, "out_len");
  const std::size_t cap = *out_len;
  *out_len = v.size();
  if (out == nullptr || cap < v.size()) throw ShortBuffer{};
  std::copy(v.begin(), v.end(), out);
}

std::vector<double> to_vector(const double* p, std::size_t n, const char* name) {
  if (n > 0) need(p, name);
  return std::vector<double>(p, p + n);
}

WeightScheme scheme_of(nb_weight_scheme scheme, const double* custom, std::size_t custom_len) {
  switch (scheme) {
    case NB_WEIGHTS_OPTIMAL: return WeightScheme::optimal();
    case NB_WEIGHTS_HUMPHREYS: return WeightScheme::humphreys();
    case NB_WEIGHTS_BALANCED: return WeightScheme::balanced();
    case NB_WEIGHTS_CUSTOM:
      return WeightScheme::with(WeightVector::from_simplex(to_vector(custom, custom_len, "custom")));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown weight scheme");
}

WeightSchemeKind scheme_kind(nb_weight_scheme scheme) {
  switch (scheme) {
    case NB_WEIGHTS_OPTIMAL: return WeightSchemeKind::Optimal;
    case NB_WEIGHTS_HUMPHREYS: return WeightSchemeKind::Humphreys;
    case NB_WEIGHTS_BALANCED: return WeightSchemeKind::Balanced;
    case NB_WEIGHTS_CUSTOM: break;
  }
  throw Error(ErrorCode::InvalidArgument, "critical loss needs a fixed weight scheme");
}

// NULL weights mean the QCRB-optimal ones.
WeightVector weights_or_optimal(const Scenario& s, const double* w, std::size_t n) {
  if (w == nullptr) return optimal_weights(s);
  return WeightVector::from_simplex(std::vector<double>(w, w + n));
}

Series series_of(nb_series s) {
  switch (s) {
    case NB_SERIES_OPTIMAL: return Series::Optimal;
    case NB_SERIES_HUMPHREYS: return Series::Humphreys;
    case NB_SERIES_COHERENT: return Series::Coherent;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown series");
}

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  return v;
}

template <typename H, typename T>
void emit(H** out, T value) {
  *out = new H(std::move(value));
}

}  // namespace

extern "C" {

const char* nb_version_string(void) { return NOONBOUNDS_VERSION; }

const char* nb_last_error(void) { return g_last_error.c_str(); }

const char* nb_status_name(int status) {
  switch (status) {
    case NB_OK: return "ok";
    case NB_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case NB_ERROR_DIMENSION_MISMATCH: return "dimension mismatch";
    case NB_ERROR_OUT_OF_RANGE: return "out of range";
    case NB_ERROR_SINGULAR_MODEL: return "singular model";
    case NB_ERROR_UNIDENTIFIABLE_PHASE: return "unidentifiable phase";
    case NB_ERROR_DEGENERATE_ENVIRONMENT: return "degenerate environment";
    case NB_ERROR_BASIS_OVERFLOW: return "basis overflow";
    case NB_ERROR_NUMERICAL: return "numerical failure";
    case NB_ERROR_SINGULAR_MEASUREMENT: return "singular measurement";
    case NB_ERROR_OPTIMIZATION_FAILED: return "optimization failed";
    case NB_ERROR_PARSE: return "parse error";
    case NB_ERROR_NULL_POINTER: return "null pointer";
    case NB_ERROR_INSUFFICIENT_BUFFER: return "insufficient buffer";
    case NB_ERROR_INVALID_HANDLE: return "invalid handle";
    default: return "unknown error";
  }
}

unsigned nb_thread_count(void) { return thread_count(); }

// ---- scenario

int nb_scenario_create(nb_scenario_t* out, int n_photons, int n_phases, const double* gamma,
                       size_t gamma_len, const double* phases, size_t phases_len,
                       int repetitions) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    auto g = to_vector(gamma, gamma_len, "gamma");
    std::vector<double> ph;
    if (phases != nullptr) ph.assign(phases, phases + phases_len);
    emit(out, make_scenario(n_photons, n_phases, std::move(g), std::move(ph), repetitions));
  });
}

int nb_scenario_from_json(nb_scenario_t* out, const char* json) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    emit(out, scenario_from_json(need(json, "json")));
  });
}

int nb_scenario_destroy(nb_scenario_t s) {
  return guard([&] {
    if (s == nullptr) return;
    get(s);
    delete s;
  });
}

int nb_scenario_to_json(nb_scenario_t s, char* out, size_t* out_len) {
  return guard([&] { write_string(scenario_to_json(get(s)), out, out_len); });
}

int nb_scenario_n_photons(nb_scenario_t s, int* out) {
  return guard([&] { *need(out, "out") = get(s).n_photons; });
}

int nb_scenario_n_phases(nb_scenario_t s, int* out) {
  return guard([&] { *need(out, "out") = get(s).n_phases; });
}

// ---- bounds

int nb_weights(nb_scenario_t s, nb_weight_scheme scheme, const double* custom, size_t custom_len,
               double* out, size_t* out_len) {
  return guard([&] {
    const auto& sc = get(s);
    const WeightVector p = resolve_weights(sc, scheme_of(scheme, custom, custom_len));
    write_doubles(p.values(), out, out_len);
  });
}

int nb_qfim(nb_scenario_t s, nb_weight_scheme scheme, const double* custom, size_t custom_len,
            double* out, size_t* out_len) {
  return guard([&] {
    const auto& sc = get(s);
    const auto f = qfim_noon(sc, resolve_weights(sc, scheme_of(scheme, custom, custom_len)));
    write_doubles(row_major(f.entries), out, out_len);
  });
}

int nb_qcrb(nb_scenario_t s, nb_weight_scheme scheme, const double* custom, size_t custom_len,
            double* out) {
  return guard([&] {
    need(out, "out");
    const auto& sc = get(s);
    *out = scheme == NB_WEIGHTS_OPTIMAL
               ? min_qcrb_noon(sc)
               : qcrb_noon(sc, resolve_weights(sc, scheme_of(scheme, custom, custom_len)));
  });
}

int nb_sql(nb_scenario_t s, const double* q, size_t q_len, double* out) {
  return guard([&] {
    need(out, "out");
    const auto& sc = get(s);
    *out = q == nullptr ? sql_coherent(sc)
                        : sql_coherent(sc, WeightVector::from_simplex(to_vector(q, q_len, "q")));
  });
}

int nb_advantage(nb_scenario_t s, nb_weight_scheme scheme, const double* custom, size_t custom_len,
                 double* out) {
  return guard([&] {
    need(out, "out");
    *out = advantage_ratio(get(s), scheme_of(scheme, custom, custom_len));
  });
}

int nb_critical_loss(int n_photons, int n_phases, double gamma_ref, nb_weight_scheme scheme,
                     double* out) {
  return guard([&] {
    need(out, "out");
    *out = critical_loss(n_photons, n_phases, gamma_ref, scheme_kind(scheme));
  });
}

// ---- Fock-space oracle

int nb_qfim_oracle(nb_scenario_t s, const double* weights, size_t weights_len, double* out,
                   size_t* out_len) {
  return guard([&] {
    const auto& sc = get(s);
    const auto f = qfim_oracle(sc, weights_or_optimal(sc, weights, weights_len));
    write_doubles(row_major(f.entries), out, out_len);
  });
}

int nb_attainability(nb_scenario_t s, const double* weights, size_t weights_len, double* out) {
  return guard([&] {
    need(out, "out");
    const auto& sc = get(s);
    *out = attainability_check(sc, weights_or_optimal(sc, weights, weights_len));
  });
}

// ---- interferometer

int nb_mesh_create_uniform(nb_mesh_t* out, int n_modes, double theta, double chi) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    auto mesh = MeshParams::uniform(n_modes, theta, chi);
    validate_mesh(mesh);
    emit(out, std::move(mesh));
  });
}

int nb_mesh_create_random(nb_mesh_t* out, int n_modes, uint64_t seed) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    std::mt19937_64 rng(seed);
    auto mesh = MeshParams::random(n_modes, rng);
    validate_mesh(mesh);
    emit(out, std::move(mesh));
  });
}

int nb_mesh_from_json(nb_mesh_t* out, const char* json, int n_modes) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    emit(out, mesh_from_json(need(json, "json"), n_modes));
  });
}

int nb_mesh_destroy(nb_mesh_t m) {
  return guard([&] {
    if (m == nullptr) return;
    get(m);
    delete m;
  });
}

int nb_mesh_to_json(nb_mesh_t m, char* out, size_t* out_len) {
  return guard([&] { write_string(mesh_to_json(get(m)), out, out_len); });
}

int nb_mesh_unitary(nb_mesh_t m, double* out, size_t* out_len) {
  return guard([&] {
    const auto u = assemble_unitary(get(m));
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(2 * u.size()));
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      for (Eigen::Index c = 0; c < u.cols(); ++c) {
        v.push_back(u(r, c).real());
        v.push_back(u(r, c).imag());
      }
    }
    write_doubles(v, out, out_len);
  });
}

int nb_mesh_crb(nb_scenario_t s, const double* weights, size_t weights_len, nb_mesh_t m,
                double* out) {
  return guard([&] {
    need(out, "out");
    const auto& sc = get(s);
    const auto& mesh = get(m);
    if (mesh.n_modes != sc.n_modes())
      throw Error(ErrorCode::DimensionMismatch, "mesh and scenario mode counts differ");
    *out = crb(outcome_distribution(sc, weights_or_optimal(sc, weights, weights_len),
                                    assemble_unitary(mesh)));
  });
}

// ---- optimization

int nb_optimize_mesh(nb_optresult_t* out, nb_scenario_t s, const double* weights,
                     size_t weights_len, int restarts, uint64_t seed) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    const auto& sc = get(s);
    OptimizeOptions opts;
    opts.restarts = restarts;
    opts.seed = seed;
    emit(out, optimize_mesh_for_state(sc, weights_or_optimal(sc, weights, weights_len), opts));
  });
}

int nb_optimize_joint(nb_optresult_t* out, nb_scenario_t s, int restarts, uint64_t seed) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    OptimizeOptions opts;
    opts.restarts = restarts;
    opts.seed = seed;
    emit(out, optimize_joint(get(s), opts));
  });
}

int nb_optresult_destroy(nb_optresult_t r) {
  return guard([&] {
    if (r == nullptr) return;
    get(r);
    delete r;
  });
}

int nb_optresult_crb(nb_optresult_t r, double* out) {
  return guard([&] { *need(out, "out") = get(r).best_crb; });
}

int nb_optresult_weights(nb_optresult_t r, double* out, size_t* out_len) {
  return guard([&] { write_doubles(get(r).best_weights.values(), out, out_len); });
}

int nb_optresult_mesh(nb_optresult_t r, nb_mesh_t* out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    emit(out, get(r).best_mesh);
  });
}

int nb_optresult_restarts(nb_optresult_t r, int* out) {
  return guard([&] { *need(out, "out") = get(r).restarts_used; });
}

int nb_optresult_converged(nb_optresult_t r, int* out) {
  return guard([&] { *need(out, "out") = get(r).converged ? 1 : 0; });
}

int nb_optresult_history_csv(nb_optresult_t r, char* out, size_t* out_len) {
  return guard([&] { write_string(history_csv(get(r).history), out, out_len); });
}

// ---- Monte-Carlo sweep

void nb_sweep_config_default(nb_sweep_config* cfg) {
  if (cfg == nullptr) return;
  const SweepConfig d;
  cfg->n_instances = d.n_instances;
  cfg->gamma_min = d.gamma_min;
  cfg->gamma_max = d.gamma_max;
  cfg->n_photons = d.n_photons;
  cfg->n_phases = d.n_phases;
  cfg->seed = d.seed;
  cfg->pin_gamma_ref = 0;
  cfg->gamma_ref = 0.0;
}

int nb_sweep_run(nb_sweep_t* out, const nb_sweep_config* cfg) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    need(cfg, "cfg");
    SweepConfig c;
    c.n_instances = cfg->n_instances;
    c.gamma_min = cfg->gamma_min;
    c.gamma_max = cfg->gamma_max;
    c.n_photons = cfg->n_photons;
    c.n_phases = cfg->n_phases;
    c.seed = cfg->seed;
    if (cfg->pin_gamma_ref) c.pinned_gamma_ref = cfg->gamma_ref;
    emit(out, run_sweep(c));
  });
}

int nb_sweep_destroy(nb_sweep_t sw) {
  return guard([&] {
    if (sw == nullptr) return;
    get(sw);
    delete sw;
  });
}

int nb_sweep_size(nb_sweep_t sw, size_t* out) {
  return guard([&] { *need(out, "out") = get(sw).rows.size(); });
}

int nb_sweep_row(nb_sweep_t sw, size_t index, double out[3]) {
  return guard([&] {
    need(out, "out");
    const auto& rows = get(sw).rows;
    if (index >= rows.size()) throw Error(ErrorCode::OutOfRange, "sweep row index out of range");
    out[0] = rows[index].qcrb_optimal;
    out[1] = rows[index].qcrb_humphreys;
    out[2] = rows[index].qcrb_coherent;
  });
}

int nb_sweep_csv(nb_sweep_t sw, char* out, size_t* out_len) {
  return guard([&] { write_string(sweep_csv(get(sw)), out, out_len); });
}

int nb_sweep_summary_json(nb_sweep_t sw, char* out, size_t* out_len) {
  return guard([&] { write_string(sweep_summary_json(get(sw)), out, out_len); });
}

int nb_sweep_histogram_csv(nb_sweep_t sw, nb_series series, int bins, char* out,
                           size_t* out_len) {
  return guard([&] {
    const Histogram h = histogram(get(sw), series_of(series), bins);
    std::ostringstream os;
    os.precision(17);
    os << "bin,lo,hi,count\n";
    const double w = h.bin_width();
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const double lo = h.lo + w * static_cast<double>(b);
      const double hi = b + 1 == h.counts.size() ? h.hi : lo + w;
      os << b << ',' << lo << ',' << hi << ',' << h.counts[b] << '\n';
    }
    write_string(os.str(), out, out_len);
  });
}

// ---- verification suite

void nb_verify_config_default(nb_verify_config* cfg) {
  if (cfg == nullptr) return;
  const VerifyConfig d;
  cfg->max_n = d.max_n;
  cfg->max_d = d.max_d;
  cfg->grid_points = d.grid_points;
  cfg->random_draws = d.random_draws;
  cfg->seed = d.seed;
  cfg->max_dimension = d.max_dimension;
  cfg->inject_fault = 0;
}

int nb_verify(const nb_verify_config* cfg, int* passed, char* report, size_t* report_len) {
  return guard([&] {
    need(cfg, "cfg");
    need(passed, "passed");
    need(report_len, "report_len");
    VerifyConfig c;
    c.max_n = cfg->max_n;
    c.max_d = cfg->max_d;
    c.grid_points = cfg->grid_points;
    c.random_draws = cfg->random_draws;
    c.seed = cfg->seed;
    c.max_dimension = cfg->max_dimension;
    c.inject_fault = cfg->inject_fault != 0;
    const VerifyReport r = run_verify(c);
    *passed = r.passed ? 1 : 0;
    write_string(r.to_json(), report, report_len);
  });
}

}  // extern "C"
