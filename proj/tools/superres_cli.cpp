// superres: experiment runner.
//
//   superres demo2d [--eps-z 0.05] [--trials 20]
//   superres sweep-cutoff --delta-grid 0.005,0.01,0.1 --R-grid 1,5,25 --trials 10
//   superres sweep-measurements --config sweep.cfg
//
// Options may also come from a `key = value` file given with --config
// (keys are the long option names without dashes). Command-line values win.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superres/harness.hpp"
#include "superres/kernels.hpp"

using superres::harness::Experiment;
using superres::harness::ExperimentConfig;

namespace {

struct Overrides {
    std::optional<int> d, k, m, trials, slices, threads;
    std::optional<double> delta, eps_z, R, threshold, sigma, delta_G, R_times_delta;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::string> out_dir;
    std::vector<double> delta_grid, R_grid, sigma_grid;
    std::vector<int> m_grid;
    std::string isa;
};

void apply(const Overrides& o, ExperimentConfig& c) {
    const auto set = [](auto& dst, const auto& src) {
        if (src) dst = *src;
    };
    set(c.d, o.d);
    set(c.k, o.k);
    set(c.m, o.m);
    set(c.trials, o.trials);
    set(c.slices, o.slices);
    set(c.threads, o.threads);
    set(c.delta, o.delta);
    set(c.eps_z, o.eps_z);
    set(c.R, o.R);
    set(c.threshold, o.threshold);
    set(c.sigma, o.sigma);
    set(c.delta_G, o.delta_G);
    set(c.R_times_delta, o.R_times_delta);
    set(c.seed, o.seed);
    set(c.samples, o.samples);
    if (o.out_dir) c.out_dir = *o.out_dir;
    if (!o.delta_grid.empty()) c.delta_grid = o.delta_grid;
    if (!o.R_grid.empty()) c.R_grid = o.R_grid;
    if (!o.m_grid.empty()) c.m_grid = o.m_grid;
    if (!o.sigma_grid.empty()) c.sigma_grid = o.sigma_grid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-source super-resolution from random Fourier measurements"};
    app.set_config("--config", "", "key = value file with option defaults");
    app.require_subcommand(1);

    Overrides o;
    app.add_option("--d", o.d, "dimension");
    app.add_option("--k", o.k, "number of sources");
    app.add_option("--delta", o.delta, "minimal separation (demo2d)");
    app.add_option("--eps-z", o.eps_z, "noise level");
    app.add_option("--R", o.R, "cutoff scale (demo2d)");
    app.add_option("--m", o.m, "Gaussian sample count");
    app.add_option("--trials", o.trials, "trials per cell / number of seeds");
    app.add_option("--threshold", o.threshold, "success threshold");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--out-dir", o.out_dir, "output directory (default $SUPERRES_OUT_DIR or ./out)");
    app.add_option("--slices", o.slices, "tensor slices: 2 (v, 2v) or 3 (adds 0)")
        ->check(CLI::IsMember({2, 3}));
    app.add_option("--threads", o.threads, "worker threads (0: all cores)");
    app.add_option("--delta-grid", o.delta_grid, "separations of a sweep")->delimiter(',');
    app.add_option("--R-grid", o.R_grid, "cutoff scales of the cutoff sweep")->delimiter(',');
    app.add_option("--m-grid", o.m_grid, "sample counts of the measurement sweep")->delimiter(',');
    app.add_option("--R-times-delta", o.R_times_delta, "measurement sweep uses R = this / delta");
    app.add_option("--sigma", o.sigma, "GMM component deviation");
    app.add_option("--sigma-grid", o.sigma_grid, "GMM sigma candidates")->delimiter(',');
    app.add_option("--delta-G", o.delta_G, "GMM separation in units of sigma");
    app.add_option("--samples", o.samples, "GMM sample count");
    app.add_option("--kernel-isa", o.isa, "force the kernel variant")
        ->check(CLI::IsMember({"scalar", "avx2"}));

    for (Experiment e : {Experiment::demo2d, Experiment::sweep_cutoff,
                         Experiment::sweep_measurements, Experiment::gmm_demo,
                         Experiment::exactness_suite})
        app.add_subcommand(std::string(superres::harness::experiment_name(e)))->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!o.isa.empty())
            superres::kernels::force_isa(o.isa == "avx2" ? superres::kernels::Isa::avx2
                                                         : superres::kernels::Isa::scalar);
        const Experiment kind =
            superres::harness::parse_experiment(app.get_subcommands().front()->get_name());
        ExperimentConfig cfg = superres::harness::default_config(kind);
        apply(o, cfg);
        std::cout << superres::harness::run_experiment(cfg) << "\n"
                  << "outputs in " << cfg.out_dir.string() << " (kernels: "
                  << superres::kernels::isa_name(superres::kernels::active_isa()) << ")\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
