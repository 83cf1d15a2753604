// Copyright 2026 The noonbounds Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.

#include "noonbounds/noonbounds.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int exit_code;
  std::string message;
};

void check(int status) {
  if (status != NB_OK) {
    std::string msg = nb_last_error();
    if (msg.empty()) msg = nb_status_name(status);
    throw CliError{kExitUsage, msg};
  }
}

// Handle ownership for the C API objects.
struct ScenarioDeleter {
  void operator()(nb_scenario_struct* p) const { nb_scenario_destroy(p); }
};
struct MeshDeleter {
  void operator()(nb_mesh_struct* p) const { nb_mesh_destroy(p); }
};
struct OptDeleter {
  void operator()(nb_optresult_struct* p) const { nb_optresult_destroy(p); }
};
struct SweepDeleter {
  void operator()(nb_sweep_struct* p) const { nb_sweep_destroy(p); }
};
using ScenarioPtr = std::unique_ptr<nb_scenario_struct, ScenarioDeleter>;
using MeshPtr = std::unique_ptr<nb_mesh_struct, MeshDeleter>;
using OptPtr = std::unique_ptr<nb_optresult_struct, OptDeleter>;
using SweepPtr = std::unique_ptr<nb_sweep_struct, SweepDeleter>;

template <typename F>
std::string fetch_string(F&& f) {
  std::size_t len = 0;
  const int rc = f(nullptr, &len);
  if (rc != NB_ERROR_INSUFFICIENT_BUFFER) check(rc);
  std::string s(len, '\0');
  check(f(s.data(), &len));
  s.resize(len - 1);
  return s;
}

template <typename F>
std::vector<double> fetch_doubles(F&& f) {
  std::size_t len = 0;
  const int rc = f(nullptr, &len);
  if (rc != NB_ERROR_INSUFFICIENT_BUFFER) check(rc);
  std::vector<double> v(len);
  check(f(v.data(), &len));
  return v;
}

ScenarioPtr scenario_from(const json& j) {
  nb_scenario_t s = nullptr;
  check(nb_scenario_from_json(&s, j.dump().c_str()));
  return ScenarioPtr(s);
}

ScenarioPtr scenario_of(int n, int d, const std::vector<double>& gamma) {
  nb_scenario_t s = nullptr;
  check(nb_scenario_create(&s, n, d, gamma.data(), gamma.size(), nullptr, 0, 1));
  return ScenarioPtr(s);
}

std::vector<double> ref_and_signal(int d, double gamma_ref, double gamma) {
  std::vector<double> g(static_cast<std::size_t>(d) + 1, gamma);
  g[0] = gamma_ref;
  return g;
}

double qcrb(nb_scenario_t s, nb_weight_scheme scheme, const std::vector<double>& custom = {}) {
  double v = 0.0;
  check(nb_qcrb(s, scheme, custom.empty() ? nullptr : custom.data(), custom.size(), &v));
  return v;
}

double sql(nb_scenario_t s) {
  double v = 0.0;
  check(nb_sql(s, nullptr, 0, &v));
  return v;
}

double advantage(nb_scenario_t s, nb_weight_scheme scheme) {
  double v = 0.0;
  check(nb_advantage(s, scheme, nullptr, 0, &v));
  return v;
}

std::vector<double> weights(nb_scenario_t s, nb_weight_scheme scheme) {
  return fetch_doubles([&](double* out, std::size_t* len) {
    return nb_weights(s, scheme, nullptr, 0, out, len);
  });
}

double critical(int n, int d, double gamma_ref, nb_weight_scheme scheme) {
  double v = 0.0;
  check(nb_critical_loss(n, d, gamma_ref, scheme, &v));
  return v;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw CliError{kExitUsage, "--points must be >= 1"};
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    v[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return v;
}

// Evaluates rows in parallel; row i depends only on i.
template <typename F>
std::vector<std::string> parallel_rows(std::size_t count, F&& row) {
  std::vector<std::string> out(count);
  std::vector<std::optional<CliError>> errors(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(nb_thread_count(), count));
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          out[i] = row(i);
        } catch (const CliError& e) {
          errors[i] = e;
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) throw *e;
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw CliError{kExitUsage, "cannot create output directory " + dir_.string() + ": " + ec.message()};
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream f(p, std::ios::binary);
    f << content;
    if (!f) throw CliError{kExitUsage, "cannot write " + p.string()};
    files_.push_back(name);
  }

  void manifest(const std::string& subcommand, const std::vector<std::string>& argv,
                const json& config, std::optional<std::uint64_t> seed) {
    json m;
    m["tool"] = "noonbounds";
    m["version"] = nb_version_string();
    m["subcommand"] = subcommand;
    m["argv"] = argv;
    m["config"] = config;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["outputs"] = files_;
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << m.dump(2) << '\n';
    if (!f) throw CliError{kExitUsage, "cannot write manifest"};
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

// ---- scenario flags

struct ScenarioFlags {
  std::string file;
  std::optional<int> n;
  std::optional<int> d;
  std::optional<std::vector<double>> gamma;
  std::optional<std::vector<double>> phases;
  std::optional<int> repetitions;

  void attach(CLI::App* app) {
    app->add_option("--scenario", file, "Scenario JSON file (wins over flags)")->check(CLI::ExistingFile);
    app->add_option("--n", n, "Photon number N");
    app->add_option("--d", d, "Number of phases d (defaults to gamma length - 1)");
    app->add_option("--gamma", gamma, "Loss rates gamma_0..gamma_d, comma separated")->delimiter(',');
    app->add_option("--phases", phases, "Evaluation phases phi_1..phi_d, comma separated")->delimiter(',');
    app->add_option("--reps", repetitions, "Repetitions mu");
  }

  // Resolved scenario JSON. On conflict the file value is kept.
  json resolve() const {
    json j;
    if (!file.empty()) {
      std::ifstream f(file);
      std::stringstream ss;
      ss << f.rdbuf();
      try {
        j = json::parse(ss.str());
      } catch (const json::exception& e) {
        throw CliError{kExitUsage, "scenario file " + file + ": " + e.what()};
      }
    }
    merge(j, "n_photons", "--n", n);
    std::optional<int> dd = d;
    if (!dd && gamma && !j.contains("n_phases")) dd = static_cast<int>(gamma->size()) - 1;
    merge(j, "n_phases", "--d", dd);
    merge(j, "gamma", "--gamma", gamma);
    merge(j, "phases", "--phases", phases);
    merge(j, "repetitions", "--reps", repetitions);
    if (!j.contains("n_photons")) throw CliError{kExitUsage, "missing --n (or a scenario file)"};
    if (!j.contains("gamma")) throw CliError{kExitUsage, "missing --gamma (or a scenario file)"};
    if (!j.contains("n_phases")) throw CliError{kExitUsage, "missing --d (or a scenario file)"};
    return j;
  }

 private:
  template <typename T>
  static void merge(json& j, const char* key, const char* flag, const std::optional<T>& v) {
    if (!v) return;
    if (j.contains(key)) {
      if (j[key] != json(*v))
        std::cerr << "warning: " << flag << " conflicts with the scenario file; using the file's "
                  << key << "\n";
      return;
    }
    j[key] = *v;
  }
};

// ---- subcommands

struct Context {
  std::vector<std::string> argv;  // subcommand and its arguments, minus --out
  std::string out_dir;
};

int cmd_bounds(const Context& ctx, const ScenarioFlags& flags,
               const std::optional<std::vector<double>>& custom) {
  const json cfg = flags.resolve();
  const ScenarioPtr s = scenario_from(cfg);
  json r;
  r["scenario"] = json::parse(fetch_string([&](char* o, std::size_t* l) {
    return nb_scenario_to_json(s.get(), o, l);
  }));
  r["qcrb_optimal"] = qcrb(s.get(), NB_WEIGHTS_OPTIMAL);
  r["qcrb_humphreys"] = qcrb(s.get(), NB_WEIGHTS_HUMPHREYS);
  r["qcrb_balanced"] = qcrb(s.get(), NB_WEIGHTS_BALANCED);
  if (custom) r["qcrb_custom"] = qcrb(s.get(), NB_WEIGHTS_CUSTOM, *custom);
  r["sql"] = sql(s.get());
  r["r_qa"] = advantage(s.get(), NB_WEIGHTS_OPTIMAL);
  r["r_qa_humphreys"] = advantage(s.get(), NB_WEIGHTS_HUMPHREYS);
  r["optimal_weights"] = weights(s.get(), NB_WEIGHTS_OPTIMAL);
  const std::string text = r.dump(2);
  std::cout << text << '\n';
  if (!ctx.out_dir.empty()) {
    Output out(ctx.out_dir);
    out.write("bounds.json", text + "\n");
    json c = cfg;
    if (custom) c["weights"] = *custom;
    out.manifest("bounds", ctx.argv, c, std::nullopt);
  }
  return kExitOk;
}

int cmd_crit(const Context& ctx, int n, int d, double gamma_ref) {
  json r;
  r["n_photons"] = n;
  r["n_phases"] = d;
  r["gamma_ref"] = gamma_ref;
  r["gamma_crit_optimal"] = critical(n, d, gamma_ref, NB_WEIGHTS_OPTIMAL);
  r["gamma_crit_humphreys"] = critical(n, d, gamma_ref, NB_WEIGHTS_HUMPHREYS);
  const std::string text = r.dump(2);
  std::cout << text << '\n';
  if (!ctx.out_dir.empty()) {
    Output out(ctx.out_dir);
    out.write("crit.json", text + "\n");
    out.manifest("crit", ctx.argv, {{"n_photons", n}, {"n_phases", d}, {"gamma_ref", gamma_ref}},
                 std::nullopt);
  }
  return kExitOk;
}

json optresult_json(nb_optresult_t r) {
  json j;
  double v = 0.0;
  int k = 0;
  check(nb_optresult_crb(r, &v));
  j["best_crb"] = v;
  j["best_weights"] = fetch_doubles([&](double* o, std::size_t* l) { return nb_optresult_weights(r, o, l); });
  nb_mesh_t m = nullptr;
  check(nb_optresult_mesh(r, &m));
  const MeshPtr mesh(m);
  j["best_mesh"] = json::parse(fetch_string([&](char* o, std::size_t* l) {
    return nb_mesh_to_json(mesh.get(), o, l);
  }));
  check(nb_optresult_restarts(r, &k));
  j["restarts_used"] = k;
  check(nb_optresult_converged(r, &k));
  j["converged"] = k != 0;
  return j;
}

int cmd_optimize(const Context& ctx, const ScenarioFlags& flags, const std::string& mode,
                 int restarts, std::uint64_t seed, const std::optional<std::vector<double>>& custom) {
  const json cfg = flags.resolve();
  const ScenarioPtr s = scenario_from(cfg);
  nb_optresult_t raw = nullptr;
  if (mode == "joint") {
    check(nb_optimize_joint(&raw, s.get(), restarts, seed));
  } else {
    const double* w = custom ? custom->data() : nullptr;
    check(nb_optimize_mesh(&raw, s.get(), w, custom ? custom->size() : 0, restarts, seed));
  }
  const OptPtr r(raw);
  json j = optresult_json(r.get());
  j["mode"] = mode;
  j["qcrb_optimal"] = qcrb(s.get(), NB_WEIGHTS_OPTIMAL);
  j["sql"] = sql(s.get());
  const std::string text = j.dump(2);
  std::cout << text << '\n';
  if (!ctx.out_dir.empty()) {
    Output out(ctx.out_dir);
    out.write("result.json", text + "\n");
    out.write("history.csv", fetch_string([&](char* o, std::size_t* l) {
      return nb_optresult_history_csv(r.get(), o, l);
    }));
    json c = cfg;
    c["mode"] = mode;
    c["restarts"] = restarts;
    if (custom) c["weights"] = *custom;
    out.manifest("optimize", ctx.argv, c, seed);
  }
  return kExitOk;
}

struct SweepFlags {
  int instances = 10000;
  bool full_scale = false;
  double gamma_min = 0.2;
  double gamma_max = 0.6;
  int n = 2;
  int d = 10;
  std::uint64_t seed = 1;
  std::optional<double> pin_gamma_ref;
  int bins = 50;

  void attach(CLI::App* app) {
    app->add_option("--instances", instances, "Number of random loss profiles");
    app->add_flag("--full-scale", full_scale, "Use 100000 instances");
    app->add_option("--gamma-min", gamma_min, "Lower end of the loss range");
    app->add_option("--gamma-max", gamma_max, "Upper end of the loss range");
    app->add_option("--n", n, "Photon number N");
    app->add_option("--d", d, "Number of phases d");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--pin-gamma-ref", pin_gamma_ref, "Hold the reference-mode loss fixed");
    app->add_option("--bins", bins, "Histogram bins");
  }

  nb_sweep_config config() const {
    nb_sweep_config c;
    nb_sweep_config_default(&c);
    c.n_instances = full_scale ? 100000 : instances;
    c.gamma_min = gamma_min;
    c.gamma_max = gamma_max;
    c.n_photons = n;
    c.n_phases = d;
    c.seed = seed;
    c.pin_gamma_ref = pin_gamma_ref ? 1 : 0;
    c.gamma_ref = pin_gamma_ref.value_or(0.0);
    return c;
  }

  json to_json() const {
    const nb_sweep_config c = config();
    return {{"n_instances", c.n_instances}, {"gamma_min", c.gamma_min}, {"gamma_max", c.gamma_max},
            {"n_photons", c.n_photons},     {"n_phases", c.n_phases},   {"seed", c.seed},
            {"pin_gamma_ref", pin_gamma_ref ? json(*pin_gamma_ref) : json(nullptr)},
            {"bins", bins}};
  }
};

std::string histogram_long(nb_sweep_t sw, int bins) {
  std::string out = "series,bin,lo,hi,count\n";
  const std::pair<nb_series, const char*> series[] = {
      {NB_SERIES_OPTIMAL, "qcrb_optimal"},
      {NB_SERIES_HUMPHREYS, "qcrb_humphreys"},
      {NB_SERIES_COHERENT, "qcrb_coherent"}};
  for (const auto& [which, name] : series) {
    const std::string csv = fetch_string([&](char* o, std::size_t* l) {
      return nb_sweep_histogram_csv(sw, which, bins, o, l);
    });
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line))
      if (!line.empty()) out += std::string(name) + "," + line + "\n";
  }
  return out;
}

SweepPtr run_sweep(const SweepFlags& f) {
  const nb_sweep_config c = f.config();
  nb_sweep_t raw = nullptr;
  check(nb_sweep_run(&raw, &c));
  return SweepPtr(raw);
}

int cmd_montecarlo(const Context& ctx, const SweepFlags& f) {
  const SweepPtr sw = run_sweep(f);
  const std::string summary = fetch_string([&](char* o, std::size_t* l) {
    return nb_sweep_summary_json(sw.get(), o, l);
  });
  std::cout << summary << '\n';
  Output out(ctx.out_dir);
  out.write("sweep.csv", fetch_string([&](char* o, std::size_t* l) { return nb_sweep_csv(sw.get(), o, l); }));
  out.write("summary.json", summary + "\n");
  out.write("histogram.csv", histogram_long(sw.get(), f.bins));
  out.manifest("montecarlo", ctx.argv, f.to_json(), f.seed);
  return kExitOk;
}

int cmd_verify(const Context& ctx, const nb_verify_config& cfg) {
  int passed = 0;
  std::string report(1 << 16, '\0');
  std::size_t len = report.size();
  check(nb_verify(&cfg, &passed, report.data(), &len));
  report.resize(len - 1);
  std::cout << report << '\n';
  if (!ctx.out_dir.empty()) {
    Output out(ctx.out_dir);
    out.write("verify.json", report + "\n");
    out.manifest("verify", ctx.argv,
                 {{"max_n", cfg.max_n},
                  {"max_d", cfg.max_d},
                  {"grid_points", cfg.grid_points},
                  {"random_draws", cfg.random_draws},
                  {"max_dimension", cfg.max_dimension},
                  {"inject_fault", cfg.inject_fault != 0}},
                 cfg.seed);
  }
  if (!passed) {
    std::cerr << "verification failed\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

// ---- figures

struct FigureFlags {
  std::string name;
  std::optional<int> n;
  std::optional<int> d;
  std::optional<double> gamma_ref;
  std::optional<double> gamma_max;
  std::optional<int> points;
  int n_max = 6;
  int d_max = 6;
  int restarts = 32;
  std::uint64_t seed = 1;
  SweepFlags sweep;

  void attach(CLI::App* app) {
    app->add_option("name", name, "fig2, fig3, fig4, fig6 or fig7")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig6", "fig7"}));
    app->add_option("--n", n, "Photon number N");
    app->add_option("--d", d, "Number of phases d");
    app->add_option("--gamma-ref", gamma_ref, "Reference-mode loss rate");
    app->add_option("--gamma-max", gamma_max, "Upper end of the signal-loss grid");
    app->add_option("--points", points, "Grid points per axis");
    app->add_option("--n-max", n_max, "fig4: largest N");
    app->add_option("--d-max", d_max, "fig4: largest d");
    app->add_option("--restarts", restarts, "fig6: optimizer restarts");
    app->add_option("--seed", seed, "fig6/fig7: random seed");
    app->add_option("--instances", sweep.instances, "fig7: number of random loss profiles");
    app->add_flag("--full-scale", sweep.full_scale, "fig7: use 100000 instances");
    app->add_option("--gamma-min", sweep.gamma_min, "fig7: lower end of the loss range");
    app->add_option("--bins", sweep.bins, "fig7: histogram bins");
  }
};

int fig2(const FigureFlags& f, Output& out, json& cfg) {
  const int n = f.n.value_or(2);
  const int d = f.d.value_or(2);
  const auto grid = linspace(0.0, f.gamma_max.value_or(0.95), f.points.value_or(20));
  cfg.update({{"n_photons", n}, {"n_phases", d}, {"gamma_grid", grid}});
  const auto rows = parallel_rows(grid.size() * grid.size(), [&](std::size_t i) {
    const double gr = grid[i / grid.size()];
    const double g = grid[i % grid.size()];
    const ScenarioPtr s = scenario_of(n, d, ref_and_signal(d, gr, g));
    return num(gr) + "," + num(g) + "," + num(advantage(s.get(), NB_WEIGHTS_HUMPHREYS)) + "," +
           num(advantage(s.get(), NB_WEIGHTS_OPTIMAL)) + "\n";
  });
  std::string csv = "gamma_ref,gamma,rqa_humphreys,rqa_optimal\n";
  for (const auto& r : rows) csv += r;
  out.write("fig2.csv", csv);
  return kExitOk;
}

std::string fig3_table(int n, int d, const std::vector<double>& grid, std::optional<double> gamma_ref) {
  const auto rows = parallel_rows(grid.size(), [&](std::size_t i) {
    const double g = grid[i];
    const ScenarioPtr s = scenario_of(n, d, ref_and_signal(d, gamma_ref.value_or(g), g));
    return num(g) + "," + num(qcrb(s.get(), NB_WEIGHTS_OPTIMAL)) + "," +
           num(qcrb(s.get(), NB_WEIGHTS_HUMPHREYS)) + "," + num(qcrb(s.get(), NB_WEIGHTS_BALANCED)) +
           "," + num(sql(s.get())) + "\n";
  });
  std::string csv = "gamma,qcrb_optimal,qcrb_humphreys,qcrb_balanced,sql\n";
  for (const auto& r : rows) csv += r;
  return csv;
}

int fig3(const FigureFlags& f, Output& out, json& cfg) {
  const int n = f.n.value_or(2);
  const int d = f.d.value_or(2);
  const double gr = f.gamma_ref.value_or(0.5);
  const auto grid = linspace(0.0, f.gamma_max.value_or(0.9), f.points.value_or(19));
  cfg.update({{"n_photons", n}, {"n_phases", d}, {"gamma_ref", gr}, {"gamma_grid", grid}});
  out.write("fig3a.csv", fig3_table(n, d, grid, std::nullopt));  // gamma_ref = gamma
  out.write("fig3b.csv", fig3_table(n, d, grid, gr));
  return kExitOk;
}

int fig4(const FigureFlags& f, Output& out, json& cfg) {
  const double gr = f.gamma_ref.value_or(0.5);
  if (f.n_max < 2 || f.d_max < 2) throw CliError{kExitUsage, "--n-max and --d-max must be >= 2"};
  cfg.update({{"gamma_ref", gr}, {"n_range", {2, f.n_max}}, {"d_range", {2, f.d_max}}});
  const auto nd = static_cast<std::size_t>(f.d_max - 1);
  const auto rows = parallel_rows(static_cast<std::size_t>(f.n_max - 1) * nd, [&](std::size_t i) {
    const int n = 2 + static_cast<int>(i / nd);
    const int d = 2 + static_cast<int>(i % nd);
    return std::to_string(n) + "," + std::to_string(d) + "," +
           num(critical(n, d, gr, NB_WEIGHTS_HUMPHREYS)) + "," +
           num(critical(n, d, gr, NB_WEIGHTS_OPTIMAL)) + "\n";
  });
  std::string csv = "N,d,gamma_crit_humphreys,gamma_crit_optimal\n";
  for (const auto& r : rows) csv += r;
  out.write("fig4.csv", csv);
  return kExitOk;
}

int fig6(const FigureFlags& f, Output& out, json& cfg) {
  const int n = f.n.value_or(2);
  const double gr = f.gamma_ref.value_or(0.5);
  const auto grid = linspace(0.0, f.gamma_max.value_or(0.4), f.points.value_or(5));
  std::vector<int> ds;
  if (f.d) ds = {*f.d};
  else ds = {2, 3};
  cfg.update({{"n_photons", n}, {"n_phases", ds}, {"gamma_ref", gr}, {"gamma_grid", grid},
              {"restarts", f.restarts}});
  for (int d : ds) {
    // Restarts already run in parallel inside the optimizer; grid points go in order.
    std::string csv = "gamma,crb_mesh_for_qcrb_state,crb_joint,qcrb,sql\n";
    for (double g : grid) {
      const ScenarioPtr s = scenario_of(n, d, ref_and_signal(d, gr, g));
      nb_optresult_t mesh_raw = nullptr;
      check(nb_optimize_mesh(&mesh_raw, s.get(), nullptr, 0, f.restarts, f.seed));
      const OptPtr mesh_only(mesh_raw);
      nb_optresult_t joint_raw = nullptr;
      check(nb_optimize_joint(&joint_raw, s.get(), f.restarts, f.seed));
      const OptPtr joint(joint_raw);
      double c_mesh = 0.0;
      double c_joint = 0.0;
      check(nb_optresult_crb(mesh_only.get(), &c_mesh));
      check(nb_optresult_crb(joint.get(), &c_joint));
      csv += num(g) + "," + num(c_mesh) + "," + num(c_joint) + "," +
             num(qcrb(s.get(), NB_WEIGHTS_OPTIMAL)) + "," + num(sql(s.get())) + "\n";
    }
    out.write(ds.size() == 1 ? "fig6.csv" : "fig6_d" + std::to_string(d) + ".csv", csv);
  }
  return kExitOk;
}

int fig7(const FigureFlags& f, Output& out, json& cfg) {
  SweepFlags sf = f.sweep;
  sf.seed = f.seed;
  if (f.n) sf.n = *f.n;
  if (f.d) sf.d = *f.d;
  if (f.gamma_max) sf.gamma_max = *f.gamma_max;
  if (f.gamma_ref) sf.pin_gamma_ref = f.gamma_ref;
  cfg.update(sf.to_json());
  const SweepPtr sw = run_sweep(sf);
  out.write("fig7.csv", histogram_long(sw.get(), sf.bins));
  out.write("fig7_sweep.csv", fetch_string([&](char* o, std::size_t* l) { return nb_sweep_csv(sw.get(), o, l); }));
  out.write("fig7_summary.json", fetch_string([&](char* o, std::size_t* l) {
    return nb_sweep_summary_json(sw.get(), o, l);
  }) + "\n");
  return kExitOk;
}

int cmd_figure(const Context& ctx, const FigureFlags& f) {
  Output out(ctx.out_dir);
  json cfg = {{"figure", f.name}};
  int rc = kExitOk;
  if (f.name == "fig2") rc = fig2(f, out, cfg);
  else if (f.name == "fig3") rc = fig3(f, out, cfg);
  else if (f.name == "fig4") rc = fig4(f, out, cfg);
  else if (f.name == "fig6") rc = fig6(f, out, cfg);
  else rc = fig7(f, out, cfg);
  const bool seeded = f.name == "fig6" || f.name == "fig7";
  out.manifest("figure", ctx.argv, cfg, seeded ? std::optional<std::uint64_t>(f.seed) : std::nullopt);
  std::cout << "wrote " << f.name << " data to " << ctx.out_dir << '\n';
  return rc;
}

// ---- dispatch

// Drops "--out X" / "--out=X" so a manifest can be replayed into any directory.
std::vector<std::string> strip_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

int run(std::vector<std::string> args);

int cmd_rerun(const std::string& manifest_path, std::string out_dir) {
  std::ifstream f(manifest_path);
  if (!f) throw CliError{kExitUsage, "cannot read manifest " + manifest_path};
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw CliError{kExitUsage, std::string("manifest: ") + e.what()};
  }
  if (!m.contains("argv") || !m["argv"].is_array() || m["argv"].empty())
    throw CliError{kExitUsage, "manifest has no argv"};
  auto args = m["argv"].get<std::vector<std::string>>();
  if (args.front() == "rerun") throw CliError{kExitUsage, "manifest cannot point at rerun"};
  if (out_dir.empty()) out_dir = fs::path(manifest_path).parent_path().string();
  if (out_dir.empty()) out_dir = ".";
  args.push_back("--out");
  args.push_back(out_dir);
  return run(std::move(args));
}

int run(std::vector<std::string> args) {
  CLI::App app{"Precision bounds for weighted multi-mode NOON states under photon loss"};
  app.set_version_flag("--version", std::string(nb_version_string()));
  app.require_subcommand(1);

  Context ctx;
  int rc = kExitOk;

  // bounds
  auto* bounds = app.add_subcommand("bounds", "QCRB, SQL and quantum advantage for one scenario");
  ScenarioFlags bounds_flags;
  bounds_flags.attach(bounds);
  std::optional<std::vector<double>> bounds_weights;
  bounds->add_option("--weights", bounds_weights, "Custom weights p_0..p_d")->delimiter(',');
  bounds->add_option("--out", ctx.out_dir, "Also write bounds.json and a manifest here");

  // figure
  auto* figure = app.add_subcommand("figure", "Write figure data as CSV");
  FigureFlags figure_flags;
  figure_flags.attach(figure);
  figure->add_option("--out", ctx.out_dir, "Output directory");

  // crit
  auto* crit = app.add_subcommand("crit", "Critical signal-mode loss rate");
  int crit_n = 2;
  int crit_d = 2;
  double crit_gr = 0.5;
  crit->add_option("--n", crit_n, "Photon number N");
  crit->add_option("--d", crit_d, "Number of phases d");
  crit->add_option("--gamma-ref", crit_gr, "Reference-mode loss rate");
  crit->add_option("--out", ctx.out_dir, "Also write crit.json and a manifest here");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Minimize the photon-counting CRB over the mesh");
  ScenarioFlags opt_flags;
  opt_flags.attach(optimize);
  std::string opt_mode = "joint";
  int opt_restarts = 32;
  std::uint64_t opt_seed = 1;
  std::optional<std::vector<double>> opt_weights;
  optimize->add_option("--mode", opt_mode, "mesh (weights fixed) or joint")
      ->check(CLI::IsMember({"mesh", "joint"}));
  optimize->add_option("--restarts", opt_restarts, "Random restarts");
  optimize->add_option("--seed", opt_seed, "Random seed");
  optimize->add_option("--weights", opt_weights, "mesh mode: fixed weights (default optimal)")
      ->delimiter(',');
  optimize->add_option("--out", ctx.out_dir, "Also write result.json, history.csv and a manifest");

  // montecarlo
  auto* montecarlo = app.add_subcommand("montecarlo", "Random-loss sweep of the three bounds");
  SweepFlags sweep_flags;
  sweep_flags.attach(montecarlo);
  montecarlo->add_option("--out", ctx.out_dir, "Output directory");

  // verify
  auto* verify = app.add_subcommand("verify", "Cross-check closed forms against the Fock-space oracle");
  nb_verify_config vcfg;
  nb_verify_config_default(&vcfg);
  bool inject = false;
  verify->add_option("--max-n", vcfg.max_n, "Largest photon number");
  verify->add_option("--max-d", vcfg.max_d, "Largest number of phases");
  verify->add_option("--grid", vcfg.grid_points, "Loss grid points per mode");
  verify->add_option("--draws", vcfg.random_draws, "Random scenarios per (N, d)");
  verify->add_option("--seed", vcfg.seed, "Random seed");
  verify->add_option("--max-dim", vcfg.max_dimension, "Largest Fock dimension allowed");
  verify->add_flag("--inject-fault", inject, "Corrupt the closed-form QCRB (self-test)");
  verify->add_option("--out", ctx.out_dir, "Also write verify.json and a manifest here");

  // rerun
  auto* rerun = app.add_subcommand("rerun", "Re-execute the run recorded in a manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  rerun->add_option("--out", ctx.out_dir, "Output directory (default: the manifest's)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  ctx.argv = strip_out(args);
  if (*bounds) rc = cmd_bounds(ctx, bounds_flags, bounds_weights);
  else if (*figure) {
    if (ctx.out_dir.empty()) ctx.out_dir = "noonbounds-out/" + figure_flags.name;
    rc = cmd_figure(ctx, figure_flags);
  } else if (*crit) rc = cmd_crit(ctx, crit_n, crit_d, crit_gr);
  else if (*optimize) rc = cmd_optimize(ctx, opt_flags, opt_mode, opt_restarts, opt_seed, opt_weights);
  else if (*montecarlo) {
    if (ctx.out_dir.empty()) ctx.out_dir = "noonbounds-out/montecarlo";
    rc = cmd_montecarlo(ctx, sweep_flags);
  } else if (*verify) {
    vcfg.inject_fault = inject ? 1 : 0;
    rc = cmd_verify(ctx, vcfg);
  } else if (*rerun) rc = cmd_rerun(manifest_path, ctx.out_dir);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(std::move(args));
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
