// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace noonbounds {

struct SweepConfig {
  int n_instances = 10000;
  double gamma_min = 0.2;
  double gamma_max = 0.6;
  int n_photons = 2;
  int n_phases = 10;
  std::uint64_t seed = 1;
  /// When set, the reference-mode loss is held at this value instead of
  /// being drawn with the signal modes.
  std::optional<double> pinned_gamma_ref;
};

void validate_sweep_config(const SweepConfig& cfg);

struct SweepRow {
  std::uint64_t gamma_digest = 0;  // FNV-1a over the drawn loss rates' bits
  double qcrb_optimal = 0.0;
  double qcrb_humphreys = 0.0;
  double qcrb_coherent = 0.0;
};

struct SeriesSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double skewness = 0.0;

  /// (max - min) / mean.
  double relative_spread() const { return (max - min) / mean; }
};

enum class Series { Optimal, Humphreys, Coherent };

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  SeriesSummary optimal;
  SeriesSummary humphreys;
  SeriesSummary coherent;

  std::vector<double> series(Series which) const;
  const SeriesSummary& summary(Series which) const;
};

/// Loss rates of one instance. Counter-based: depends only on (seed, index).
std::vector<double> draw_instance_losses(const SweepConfig& cfg, std::uint64_t instance);

SweepResult run_sweep(const SweepConfig& cfg);

SeriesSummary summarize(std::span<const double> values);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;

  double bin_width() const { return counts.empty() ? 0.0 : (hi - lo) / static_cast<double>(counts.size()); }
};

/// Equal-width bins spanning [min, max] of the values; the maximum falls in
/// the last bin.
Histogram histogram(std::span<const double> values, int bins);
Histogram histogram(const SweepResult& result, Series which, int bins);

/// "instance,qcrb_optimal,qcrb_humphreys,qcrb_coherent" rows.
std::string sweep_csv(const SweepResult& result);
/// JSON summary block (config plus min/max/mean/skewness per series).
std::string sweep_summary_json(const SweepResult& result);

const char* series_name(Series which);

}  // namespace noonbounds
