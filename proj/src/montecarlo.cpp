// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#include "noonbounds/montecarlo.hpp"

#include "noonbounds/bounds.hpp"
#include "noonbounds/core.hpp"
#include "noonbounds/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace noonbounds {

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::uint64_t digest(std::span<const double> values) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace

void validate_sweep_config(const SweepConfig& cfg) {
  if (cfg.n_instances < 1) throw Error(ErrorCode::InvalidArgument, "n_instances must be >= 1");
  if (cfg.n_photons < 1 || cfg.n_phases < 1)
    throw Error(ErrorCode::InvalidArgument, "sweep needs N >= 1 and d >= 1");
  if (!(cfg.gamma_min >= 0.0 && cfg.gamma_max < 1.0 && cfg.gamma_min <= cfg.gamma_max))
    throw Error(ErrorCode::OutOfRange, "sweep needs 0 <= gamma_min <= gamma_max < 1");
  if (cfg.pinned_gamma_ref && !(*cfg.pinned_gamma_ref >= 0.0 && *cfg.pinned_gamma_ref < 1.0))
    throw Error(ErrorCode::OutOfRange, "pinned gamma_ref must lie in [0, 1)");
}

std::vector<double> draw_instance_losses(const SweepConfig& cfg, std::uint64_t instance) {
  const std::size_t modes = static_cast<std::size_t>(cfg.n_phases) + 1;
  std::vector<double> gamma(modes);
  const std::uint64_t key = mix_seed(cfg.seed, instance);
  for (std::size_t j = 0; j < modes; ++j) {
    const double u = unit_interval(mix_seed(key, j));
    gamma[j] = cfg.gamma_min + (cfg.gamma_max - cfg.gamma_min) * u;
  }
  if (cfg.pinned_gamma_ref) gamma[0] = *cfg.pinned_gamma_ref;
  return gamma;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate_sweep_config(cfg);
  SweepResult result;
  result.config = cfg;
  result.rows.resize(static_cast<std::size_t>(cfg.n_instances));
  const WeightVector humphreys = humphreys_weights(cfg.n_phases);

  parallel_for(result.rows.size(), [&](std::size_t i) {
    Scenario s;
    s.n_photons = cfg.n_photons;
    s.n_phases = cfg.n_phases;
    s.phases = PhaseVector::default_for(cfg.n_phases);
    const auto gamma = draw_instance_losses(cfg, i);
    s.loss = LossProfile(gamma);
    auto& row = result.rows[i];
    row.gamma_digest = digest(gamma);
    row.qcrb_optimal = qcrb_noon(s, optimal_weights(s));
    row.qcrb_humphreys = qcrb_noon(s, humphreys);
    row.qcrb_coherent = sql_coherent(s);
  });

  result.optimal = summarize(result.series(Series::Optimal));
  result.humphreys = summarize(result.series(Series::Humphreys));
  result.coherent = summarize(result.series(Series::Coherent));
  return result;
}

std::vector<double> SweepResult::series(Series which) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    switch (which) {
      case Series::Optimal: out.push_back(r.qcrb_optimal); break;
      case Series::Humphreys: out.push_back(r.qcrb_humphreys); break;
      case Series::Coherent: out.push_back(r.qcrb_coherent); break;
    }
  }
  return out;
}

const SeriesSummary& SweepResult::summary(Series which) const {
  switch (which) {
    case Series::Optimal: return optimal;
    case Series::Humphreys: return humphreys;
    case Series::Coherent: return coherent;
  }
  return optimal;
}

SeriesSummary summarize(std::span<const double> values) {
  SeriesSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double dv = v - s.mean;
    m2 += dv * dv;
    m3 += dv * dv * dv;
  }
  m2 /= n;
  m3 /= n;
  // Population (biased) sample skewness g1.
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return s;
}

Histogram histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be >= 1");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  if (values.empty()) return h;
  h.lo = *std::min_element(values.begin(), values.end());
  h.hi = *std::max_element(values.begin(), values.end());
  const double width = (h.hi - h.lo) / bins;
  for (double v : values) {
    std::size_t b = 0;
    if (width > 0.0) b = static_cast<std::size_t>(std::min<double>(std::floor((v - h.lo) / width), bins - 1));
    ++h.counts[b];
  }
  return h;
}

Histogram histogram(const SweepResult& result, Series which, int bins) {
  return histogram(result.series(which), bins);
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os.precision(17);
  os << "instance,qcrb_optimal,qcrb_humphreys,qcrb_coherent\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    os << i << ',' << r.qcrb_optimal << ',' << r.qcrb_humphreys << ',' << r.qcrb_coherent << '\n';
  }
  return os.str();
}

const char* series_name(Series which) {
  switch (which) {
    case Series::Optimal: return "qcrb_optimal";
    case Series::Humphreys: return "qcrb_humphreys";
    case Series::Coherent: return "qcrb_coherent";
  }
  return "unknown";
}

std::string sweep_summary_json(const SweepResult& result) {
  const auto& c = result.config;
  nlohmann::json j;
  j["config"] = {{"n_instances", c.n_instances}, {"gamma_min", c.gamma_min},
                 {"gamma_max", c.gamma_max},     {"n_photons", c.n_photons},
                 {"n_phases", c.n_phases},       {"seed", c.seed}};
  j["config"]["pinned_gamma_ref"] =
      c.pinned_gamma_ref ? nlohmann::json(*c.pinned_gamma_ref) : nlohmann::json(nullptr);
  for (Series s : {Series::Optimal, Series::Humphreys, Series::Coherent}) {
    const auto& m = result.summary(s);
    j["summary"][series_name(s)] = {{"min", m.min},   {"max", m.max},
                                    {"mean", m.mean}, {"skewness", m.skewness},
                                    {"relative_spread", m.relative_spread()}};
  }
  return j.dump(2);
}

}  // namespace noonbounds
