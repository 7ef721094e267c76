#pragma once

// Monte-Carlo experiments: single demo runs, success-rate sweeps over
// (delta, R) and (delta, m), the GMM demo and the exact-recovery suite.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superres/gmm.hpp"
#include "superres/model.hpp"
#include "superres/recovery.hpp"

namespace superres::harness {

enum class Experiment { demo2d, sweep_cutoff, sweep_measurements, gmm_demo, exactness_suite };

std::string_view experiment_name(Experiment e) noexcept;
Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
    Experiment kind = Experiment::demo2d;
    int d = 2;
    int k = 8;
    double delta = 0.05;
    double eps_z = 0.1;
    double R = 200.0;
    int m = 30;
    int trials = 20;
    double threshold = 0.1;
    std::uint64_t seed = 1;
    int slices = 2;
    std::filesystem::path out_dir;
    int threads = 0;  ///< 0: hardware concurrency

    std::vector<double> delta_grid;
    std::vector<double> R_grid;
    std::vector<int> m_grid;
    /// sweep-measurements uses R = R_times_delta / delta per column.
    double R_times_delta = 0.26;

    // gmm-demo
    double sigma = 0.01;
    double delta_G = 50.0;
    std::size_t samples = 100000;
    std::vector<double> sigma_grid;  ///< empty: {sigma}

    /// Throws DomainError when grids are empty, trials < 1 or threshold <= 0.
    void validate() const;
};

/// Paper-scale defaults for an experiment kind. The output directory
/// defaults to $SUPERRES_OUT_DIR, else "out".
ExperimentConfig default_config(Experiment kind);

/// Seed of trial `trial` in the cell (delta, R, m): depends only on these
/// values and the master seed, so reordering cells changes nothing.
std::uint64_t trial_seed(std::uint64_t master, double delta, double R, int m, int trial);

struct TrialSpec {
    int d = 2;
    int k = 8;
    double delta = 0.05;
    double eps_z = 0.0;
    double R = 1.0;
    int m = 30;
    int slices = 2;
    double threshold = 0.1;
    std::uint64_t seed = 0;
};

struct TrialOutcome {
    std::optional<SourceSet> truth;  ///< empty if no instance could be placed
    std::optional<RecoveryResult> result;
    std::string error;         ///< pipeline error message when result is empty
    double sum_error = 0.0;    ///< success statistic (inf on failure)
    bool success = false;
    double seconds = 0.0;
};

/// One random instance (min separation in [delta, 2 delta]), measured with
/// uniform-disk noise eps_z, recovered with the given R and m.
TrialOutcome run_trial(const TrialSpec& spec);

struct CellResult {
    double delta = 0.0;
    double R = 0.0;
    int m = 0;
    int trials = 0;
    int successes = 0;
    double rate = 0.0;
    double mean_error = 0.0;  ///< mean success statistic over trials that returned estimates
    std::uint64_t seed = 0;
};

struct SweepResult {
    Experiment kind = Experiment::sweep_cutoff;
    std::vector<double> deltas;  ///< heatmap columns
    std::vector<double> rows;    ///< R values or m values
    /// cells[row * deltas.size() + col]
    std::vector<CellResult> cells;
    /// sweep-measurements: smallest m with rate >= 0.5 per delta column.
    std::vector<std::optional<int>> threshold_m;

    const CellResult& at(std::size_t row, std::size_t col) const {
        return cells[row * deltas.size() + col];
    }
};

SweepResult run_sweep_cutoff(const ExperimentConfig& cfg);
SweepResult run_sweep_measurements(const ExperimentConfig& cfg);

/// Coefficient of variation (population std / mean) of the defined
/// per-column thresholds; nullopt if any column never reaches 50%.
std::optional<double> threshold_cv(const SweepResult& sweep);

struct RateGrid {
    std::vector<double> x;  ///< column labels
    std::vector<double> y;  ///< row labels
    std::vector<double> rates;  ///< row-major, y.size() x x.size(), in [0, 1]
    std::string x_label = "1/delta";
    std::string y_label = "R";
};

RateGrid rate_grid(const SweepResult& sweep);

/// Grayscale SVG (0 black, 1 white); byte-identical for identical grids.
std::string render_heatmap_svg(const RateGrid& grid);
void render_heatmap(const RateGrid& grid, const std::filesystem::path& path);

std::string sweep_csv(const SweepResult& sweep);

struct DemoResult {
    TrialOutcome outcome;
    TrialSpec spec;
};

DemoResult run_demo2d(const ExperimentConfig& cfg);

/// Locations/weights table: `role,index,w_re,w_im,x1..xd`.
std::string demo_points_csv(const DemoResult& demo);

struct GmmDemoResult {
    GmmModel truth;
    std::optional<GmmFit> fit;
    std::string error;
    double max_coordinate_error = 0.0;  ///< inf on failure
    std::vector<int> permutation;
};

/// Draws a k-component mixture with mean separation sigma * delta_G, samples
/// it and learns it back.
GmmDemoResult run_gmm_trial(const ExperimentConfig& cfg, std::uint64_t seed);

struct ExactnessResult {
    int runs = 0;
    int exact = 0;  ///< matched_error <= 1e-6
    double worst_error = 0.0;
    double seconds = 0.0;
    std::vector<std::string> failures;
};

/// Noiseless recovery of `runs` seeded instances with d in {1, 2, 4},
/// k in 2..8, delta in {0.05, 0.1, 0.2}; R and m from the theorem.
ExactnessResult run_exactness_suite(int runs, std::uint64_t seed, int threads = 0);

/// Run report: {locations, weights, matched_error, diagnostics, ...}.
std::string report_json(const RecoveryResult& result, const SourceSet* truth = nullptr);

/// Runs the configured experiment and writes its artifacts into out_dir.
/// Returns a one-paragraph human-readable summary.
std::string run_experiment(const ExperimentConfig& cfg);

/// Parallel map over [0, n) with deterministic result placement.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn);

}  // namespace superres::harness

#include "superres/detail/parallel.hpp"
