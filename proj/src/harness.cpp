#include "superres/harness.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "superres/io.hpp"

namespace superres::harness {

namespace {

using Clock = std::chrono::steady_clock;
using io::format_double;
using nlohmann::ordered_json;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

std::string short_label(double x) {
    std::array<char, 32> buf;
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 4);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("?");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + path.string());
}

ordered_json matrix_json(const MatrixXd& M) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json complex_json(const VectorXcd& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
    return out;
}

// JSON has no infinities; emit them as null.
ordered_json finite_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(); }

}  // namespace

std::string_view experiment_name(Experiment e) noexcept {
    switch (e) {
        case Experiment::demo2d: return "demo2d";
        case Experiment::sweep_cutoff: return "sweep-cutoff";
        case Experiment::sweep_measurements: return "sweep-measurements";
        case Experiment::gmm_demo: return "gmm-demo";
        case Experiment::exactness_suite: return "exactness-suite";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (Experiment e : {Experiment::demo2d, Experiment::sweep_cutoff,
                         Experiment::sweep_measurements, Experiment::gmm_demo,
                         Experiment::exactness_suite})
        if (experiment_name(e) == name) return e;
    throw DomainError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (!(threshold > 0.0)) throw DomainError("threshold must be > 0");
    if (d < 1 || k < 1) throw DomainError("d and k must be >= 1");
    if (slices != 2 && slices != 3) throw DomainError("slices must be 2 or 3");
    switch (kind) {
        case Experiment::sweep_cutoff:
            if (delta_grid.empty() || R_grid.empty())
                throw DomainError("sweep-cutoff needs nonempty delta and R grids");
            if (std::any_of(R_grid.begin(), R_grid.end(), [](double r) { return !(r > 0.0); }))
                throw DomainError("R grid values must be > 0");
            break;
        case Experiment::sweep_measurements:
            if (delta_grid.empty() || m_grid.empty())
                throw DomainError("sweep-measurements needs nonempty delta and m grids");
            break;
        default:
            break;
    }
    if (std::any_of(delta_grid.begin(), delta_grid.end(), [](double x) { return !(x > 0.0); }))
        throw DomainError("delta grid values must be > 0");
}

ExperimentConfig default_config(Experiment kind) {
    ExperimentConfig c;
    c.kind = kind;
    const char* env = std::getenv("SUPERRES_OUT_DIR");
    c.out_dir = env && *env ? env : "out";
    switch (kind) {
        case Experiment::demo2d:
            break;  // struct defaults are the demo parameters
        case Experiment::sweep_cutoff: {
            c.d = 4;
            c.k = 8;
            c.m = 64;
            c.eps_z = 0.02;
            c.trials = 50;
            // 1/delta evenly spaced over [10, 200]
            for (double inv : linspace(10.0, 200.0, 20)) c.delta_grid.push_back(1.0 / inv);
            c.R_grid = linspace(1.25, 25.0, 20);
            break;
        }
        case Experiment::sweep_measurements:
            c.d = 4;
            c.k = 8;
            c.eps_z = 0.03;
            c.trials = 50;
            c.delta_grid = linspace(0.01, 0.2, 20);
            for (int m = 4; m <= 64; m += 4) c.m_grid.push_back(m);
            break;
        case Experiment::gmm_demo:
            c.d = 2;
            c.k = 2;
            c.trials = 20;
            c.threshold = 0.02;
            break;
        case Experiment::exactness_suite:
            c.trials = 100;
            c.eps_z = 0.0;
            break;
    }
    return c;
}

namespace {

std::string csv_quoted(const std::string& text) {
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    return out + '"';
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, double delta, double R, int m, int trial) {
    const std::uint64_t cell =
        splitmix64(splitmix64(std::bit_cast<std::uint64_t>(delta)) ^
                   std::bit_cast<std::uint64_t>(R)) ^
        static_cast<std::uint64_t>(m);
    return derive_seed(master, cell, static_cast<std::uint64_t>(trial));
}

TrialOutcome run_trial(const TrialSpec& spec) {
    const auto t0 = Clock::now();
    TrialOutcome out;
    out.sum_error = std::numeric_limits<double>::infinity();
    Rng rng(spec.seed);
    try {
        out.truth.emplace(random_instance(spec.d, spec.k, spec.delta, rng));
    } catch (const Error& e) {
        out.error = std::string("instance: ") + e.what();
        out.seconds = seconds_since(t0);
        return out;
    }
    const auto source = std::make_shared<const SourceSet>(*out.truth);
    PointSourceOracle oracle(source, spec.eps_z,
                             spec.eps_z > 0.0 ? NoiseMode::uniform_disk : NoiseMode::none, rng());
    RecoveryOptions opts;
    opts.R = spec.R;
    opts.m = spec.m;
    opts.slice_count = spec.slices;
    try {
        RecoveryResult r = recover(oracle, spec.d, spec.k, spec.delta, opts, rng);
        score_against(r, *out.truth);
        out.sum_error = sum_matched_error(out.truth->locations(), r.locations).value;
        out.success = out.sum_error <= spec.threshold;
        out.result = std::move(r);
    } catch (const Error& e) {
        out.error = e.what();
    }
    out.seconds = seconds_since(t0);
    return out;
}

namespace {

struct CellSpec {
    double delta;
    double R;
    int m;
};

SweepResult run_grid(const ExperimentConfig& cfg, std::vector<CellSpec> cells,
                     std::vector<double> rows, Experiment kind) {
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    std::vector<TrialOutcome> outcomes(cells.size() * trials);
    parallel_for(outcomes.size(), cfg.threads, [&](std::size_t idx) {
        const CellSpec& c = cells[idx / trials];
        const int t = static_cast<int>(idx % trials);
        TrialSpec spec{cfg.d, cfg.k, c.delta, cfg.eps_z, c.R, c.m, cfg.slices, cfg.threshold,
                       trial_seed(cfg.seed, c.delta, c.R, c.m, t)};
        TrialOutcome o = run_trial(spec);
        o.result.reset();  // keep only the statistics
        outcomes[idx] = std::move(o);
    });

    SweepResult out;
    out.kind = kind;
    out.deltas = cfg.delta_grid;
    out.rows = std::move(rows);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        CellResult r;
        r.delta = cells[ci].delta;
        r.R = cells[ci].R;
        r.m = cells[ci].m;
        r.trials = cfg.trials;
        r.seed = cfg.seed;
        double err_sum = 0.0;
        int finished = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialOutcome& o = outcomes[ci * trials + t];
            r.successes += o.success ? 1 : 0;
            if (std::isfinite(o.sum_error)) {
                err_sum += o.sum_error;
                ++finished;
            }
        }
        r.rate = static_cast<double>(r.successes) / cfg.trials;
        r.mean_error = finished ? err_sum / finished : std::numeric_limits<double>::quiet_NaN();
        out.cells.push_back(r);
    }
    return out;
}

}  // namespace

SweepResult run_sweep_cutoff(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.kind = Experiment::sweep_cutoff;
    c.validate();
    std::vector<CellSpec> cells;
    for (double R : c.R_grid)
        for (double delta : c.delta_grid) cells.push_back({delta, R, c.m});
    return run_grid(c, std::move(cells), c.R_grid, Experiment::sweep_cutoff);
}

SweepResult run_sweep_measurements(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.kind = Experiment::sweep_measurements;
    c.validate();
    std::vector<CellSpec> cells;
    std::vector<double> rows;
    for (int m : c.m_grid) {
        rows.push_back(m);
        for (double delta : c.delta_grid) cells.push_back({delta, c.R_times_delta / delta, m});
    }
    SweepResult out = run_grid(c, std::move(cells), std::move(rows), Experiment::sweep_measurements);

    // rows are visited in ascending m regardless of the grid's order
    std::vector<std::size_t> order(c.m_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return c.m_grid[a] < c.m_grid[b]; });
    for (std::size_t col = 0; col < out.deltas.size(); ++col) {
        std::optional<int> first;
        for (std::size_t row : order)
            if (out.at(row, col).rate >= 0.5) {
                first = c.m_grid[row];
                break;
            }
        out.threshold_m.push_back(first);
    }
    return out;
}

std::optional<double> threshold_cv(const SweepResult& sweep) {
    if (sweep.threshold_m.empty()) return std::nullopt;
    std::vector<double> t;
    for (const auto& x : sweep.threshold_m) {
        if (!x) return std::nullopt;
        t.push_back(*x);
    }
    const double mean = std::accumulate(t.begin(), t.end(), 0.0) / t.size();
    double var = 0.0;
    for (double x : t) var += (x - mean) * (x - mean);
    var /= t.size();
    return std::sqrt(var) / mean;
}

RateGrid rate_grid(const SweepResult& sweep) {
    RateGrid g;
    if (sweep.kind == Experiment::sweep_cutoff) {
        for (double d : sweep.deltas) g.x.push_back(1.0 / d);
        g.x_label = "1/delta";
        g.y_label = "R";
    } else {
        g.x = sweep.deltas;
        g.x_label = "delta";
        g.y_label = "m";
    }
    g.y = sweep.rows;
    for (const auto& c : sweep.cells) g.rates.push_back(c.rate);
    return g;
}

std::string render_heatmap_svg(const RateGrid& grid) {
    const std::size_t nx = grid.x.size();
    const std::size_t ny = grid.y.size();
    if (grid.rates.size() != nx * ny) throw DomainError("render_heatmap: grid is not rectangular");
    constexpr int cell = 24, left = 70, top = 20, bottom = 70, right = 20;
    const int width = left + static_cast<int>(nx) * cell + right;
    const int height = top + static_cast<int>(ny) * cell + bottom;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"rgb(128,160,192)\"/>\n";
    // row 0 of the grid is drawn at the bottom so y grows upward
    for (std::size_t r = 0; r < ny; ++r) {
        const int y = top + static_cast<int>(ny - 1 - r) * cell;
        for (std::size_t c = 0; c < nx; ++c) {
            const double rate = std::clamp(grid.rates[r * nx + c], 0.0, 1.0);
            const int g = static_cast<int>(std::lround(255.0 * rate));
            s << "<rect data-row=\"" << r << "\" data-col=\"" << c << "\" x=\""
              << left + static_cast<int>(c) * cell << "\" y=\"" << y << "\" width=\"" << cell
              << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g
              << ")\"/>\n";
        }
        s << "<text x=\"" << left - 4 << "\" y=\"" << y + cell / 2 + 3
          << "\" text-anchor=\"end\">" << short_label(grid.y[r]) << "</text>\n";
    }
    const int axis_y = top + static_cast<int>(ny) * cell;
    for (std::size_t c = 0; c < nx; ++c) {
        const int x = left + static_cast<int>(c) * cell + cell / 2;
        s << "<text x=\"" << x << "\" y=\"" << axis_y + 10 << "\" text-anchor=\"end\" transform=\"rotate(-60 "
          << x << ' ' << axis_y + 10 << ")\">" << short_label(grid.x[c]) << "</text>\n";
    }
    s << "<text x=\"" << left + static_cast<int>(nx) * cell / 2 << "\" y=\"" << height - 6
      << "\" text-anchor=\"middle\" font-size=\"11\">" << grid.x_label << "</text>\n";
    s << "<text x=\"12\" y=\"" << top + static_cast<int>(ny) * cell / 2
      << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 12 "
      << top + static_cast<int>(ny) * cell / 2 << ")\">" << grid.y_label << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

void render_heatmap(const RateGrid& grid, const std::filesystem::path& path) {
    write_file(path, render_heatmap_svg(grid));
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream s;
    s << "delta,R,m,trials,successes,rate,mean_error,seed\n";
    for (const auto& c : sweep.cells)
        s << format_double(c.delta) << ',' << format_double(c.R) << ',' << c.m << ',' << c.trials
          << ',' << c.successes << ',' << format_double(c.rate) << ','
          << (std::isnan(c.mean_error) ? std::string("nan") : format_double(c.mean_error)) << ','
          << c.seed << '\n';
    return s.str();
}

DemoResult run_demo2d(const ExperimentConfig& cfg) {
    DemoResult demo;
    demo.spec = TrialSpec{cfg.d, cfg.k, cfg.delta, cfg.eps_z, cfg.R, cfg.m, cfg.slices,
                          cfg.threshold, derive_seed(cfg.seed, 0xde30)};
    demo.outcome = run_trial(demo.spec);
    return demo;
}

std::string demo_points_csv(const DemoResult& demo) {
    std::ostringstream s;
    const int d = demo.spec.d;
    s << "role,index,w_re,w_im";
    for (int c = 0; c < d; ++c) s << ",x" << c + 1;
    s << '\n';
    const auto rows = [&](const char* role, const MatrixXd& loc, const VectorXcd& w) {
        for (Eigen::Index j = 0; j < loc.rows(); ++j) {
            s << role << ',' << j << ',' << format_double(w[j].real()) << ','
              << format_double(w[j].imag());
            for (int c = 0; c < d; ++c) s << ',' << format_double(loc(j, c));
            s << '\n';
        }
    };
    if (demo.outcome.truth) rows("truth", demo.outcome.truth->locations(), demo.outcome.truth->weights());
    if (demo.outcome.result) rows("estimate", demo.outcome.result->locations, demo.outcome.result->weights);
    return s.str();
}

GmmDemoResult run_gmm_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
    GmmDemoResult out;
    out.max_coordinate_error = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    const SourceSet placement = random_instance(cfg.d, cfg.k, cfg.sigma * cfg.delta_G, rng);
    out.truth.means = placement.locations();
    out.truth.sigma = cfg.sigma;
    out.truth.weights = VectorXd::Constant(cfg.k, 1.0 / cfg.k);
    const PointMatrix x = sample_gmm(out.truth, cfg.samples, rng);
    const std::vector<double> grid = cfg.sigma_grid.empty() ? std::vector<double>{cfg.sigma}
                                                            : cfg.sigma_grid;
    try {
        out.fit = learn_gmm(x, cfg.k, grid, cfg.delta_G, rng);
        const MatrixXd& est = out.fit->model.means;
        // match by Euclidean bottleneck, then report the worst coordinate gap
        const Assignment a = matched_error(out.truth.means, est);
        out.permutation = a.perm;
        double worst = 0.0;
        for (std::size_t j = 0; j < a.perm.size(); ++j)
            worst = std::max(worst, (est.row(static_cast<Eigen::Index>(j)) -
                                     out.truth.means.row(a.perm[j]))
                                        .cwiseAbs()
                                        .maxCoeff());
        out.max_coordinate_error = worst;
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

ExactnessResult run_exactness_suite(int runs, std::uint64_t seed, int threads) {
    const auto t0 = Clock::now();
    constexpr std::array<int, 3> dims{1, 2, 4};
    constexpr std::array<double, 3> seps{0.05, 0.1, 0.2};
    std::vector<double> errors(static_cast<std::size_t>(runs));
    std::vector<std::string> messages(static_cast<std::size_t>(runs));
    parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t i) {
        const int d = dims[i % 3];
        const int k = 2 + static_cast<int>((i / 3) % 7);
        const double delta = seps[(i / 21) % 3];
        Rng rng(derive_seed(seed, 0xe8ac7, i));
        errors[i] = std::numeric_limits<double>::infinity();
        try {
            const auto source = std::make_shared<const SourceSet>(random_instance(d, k, delta, rng));
            PointSourceOracle oracle(source);
            RecoveryResult r = recover(oracle, d, k, delta, RecoveryOptions{}, rng);
            score_against(r, *source);
            errors[i] = *r.matched_error;
        } catch (const Error& e) {
            messages[i] = e.what();
        }
        if (!(errors[i] <= 1e-6) && messages[i].empty())
            messages[i] = "matched_error " + format_double(errors[i]);
        if (!messages[i].empty())
            messages[i] = "run " + std::to_string(i) + " (d=" + std::to_string(d) +
                          ", k=" + std::to_string(k) + ", delta=" + format_double(delta) +
                          "): " + messages[i];
    });
    ExactnessResult out;
    out.runs = runs;
    for (int i = 0; i < runs; ++i) {
        if (errors[i] <= 1e-6) ++out.exact;
        out.worst_error = std::max(out.worst_error, errors[i]);
        if (!messages[i].empty()) out.failures.push_back(messages[i]);
    }
    out.seconds = seconds_since(t0);
    return out;
}

std::string report_json(const RecoveryResult& result, const SourceSet* truth) {
    ordered_json j;
    j["locations"] = matrix_json(result.locations);
    j["weights"] = complex_json(result.weights);
    j["matched_error"] = result.matched_error ? finite_or_null(*result.matched_error) : ordered_json();
    j["weight_error"] = result.weight_error ? finite_or_null(*result.weight_error) : ordered_json();
    j["permutation"] = result.permutation;

    const auto& dg = result.diagnostics;
    const auto& dd = dg.decomposition;
    j["diagnostics"] = {
        {"R", dg.R},
        {"m", dg.m},
        {"m_prime", dg.m_prime},
        {"slice_count", dg.slice_count},
        {"plan_seed", dg.plan_seed},
        {"distinct_measurements", dg.distinct_measurements},
        {"per_coordinate_cutoff", dg.per_coordinate_cutoff},
        {"sep_tol", dg.sep_tol},
        {"v_redraws", dg.v_redraws},
        {"max_modulus_deviation", dg.max_modulus_deviation},
        {"weight_residual", dg.weight_residual},
        {"weight_relative_residual", dg.weight_relative_residual},
        {"weight_normal_cond", finite_or_null(dg.weight_normal_cond)},
        {"weight_ill_conditioned", dg.weight_ill_conditioned},
        {"sigma_k", dd.sigma_k},
        {"sigma_k1", dd.sigma_k1},
        {"whitening_residual", dd.whitening_residual},
        {"whitening", dd.whitening},
        {"pencil_sigma_min", dd.pencil_sigma_min},
        {"sep_D", finite_or_null(dd.sep_D)},
        {"eig_residual", dd.eig_residual},
        {"cond_V", finite_or_null(dd.cond_V)},
        {"ill_separated", dd.ill_separated},
        {"eig_flagged", dd.eig_flagged},
    };
    if (truth) {
        j["truth"] = {{"locations", matrix_json(truth->locations())},
                      {"weights", complex_json(truth->weights())},
                      {"min_separation", finite_or_null(min_separation(*truth))}};
    }
    return j.dump(2) + "\n";
}

std::string run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& dir = cfg.out_dir;
    std::filesystem::create_directories(dir);
    std::ostringstream summary;

    switch (cfg.kind) {
        case Experiment::demo2d: {
            std::ostringstream trials;
            trials << "seed,sum_error,matched_error,success,seconds,error\n";
            int ok = 0;
            for (int t = 0; t < cfg.trials; ++t) {
                ExperimentConfig c = cfg;
                c.seed = cfg.seed + static_cast<std::uint64_t>(t);
                const DemoResult demo = run_demo2d(c);
                const auto& o = demo.outcome;
                ok += o.success ? 1 : 0;
                trials << c.seed << ','
                       << (std::isfinite(o.sum_error) ? format_double(o.sum_error) : "inf") << ','
                       << (o.result ? format_double(*o.result->matched_error) : "inf") << ','
                       << (o.success ? 1 : 0) << ',' << format_double(o.seconds) << ','
                       << csv_quoted(o.error) << '\n';
                if (t == 0) {
                    write_file(dir / "demo2d_points.csv", demo_points_csv(demo));
                    if (o.result)
                        write_file(dir / "demo2d_report.json",
                                   report_json(*o.result, o.truth ? &*o.truth : nullptr));
                }
            }
            write_file(dir / "demo2d_trials.csv", trials.str());
            summary << "demo2d: " << ok << '/' << cfg.trials
                    << " runs with success statistic <= " << format_double(cfg.threshold);
            break;
        }
        case Experiment::sweep_cutoff:
        case Experiment::sweep_measurements: {
            const bool cutoff = cfg.kind == Experiment::sweep_cutoff;
            const SweepResult sweep = cutoff ? run_sweep_cutoff(cfg) : run_sweep_measurements(cfg);
            const std::string stem = cutoff ? "sweep_cutoff" : "sweep_measurements";
            write_file(dir / (stem + ".csv"), sweep_csv(sweep));
            render_heatmap(rate_grid(sweep), dir / (stem + ".svg"));
            summary << experiment_name(cfg.kind) << ": " << sweep.cells.size() << " cells x "
                    << cfg.trials << " trials";
            if (!cutoff) {
                std::ostringstream t;
                t << "delta,threshold_m\n";
                for (std::size_t c = 0; c < sweep.deltas.size(); ++c)
                    t << format_double(sweep.deltas[c]) << ','
                      << (sweep.threshold_m[c] ? std::to_string(*sweep.threshold_m[c]) : "none")
                      << '\n';
                write_file(dir / "threshold_m.csv", t.str());
                const auto cv = threshold_cv(sweep);
                summary << "; threshold-m coefficient of variation "
                        << (cv ? format_double(*cv) : std::string("undefined"));
            }
            break;
        }
        case Experiment::gmm_demo: {
            std::ostringstream t;
            t << "seed,max_coordinate_error,selected_sigma,success,error\n";
            int ok = 0;
            for (int i = 0; i < cfg.trials; ++i) {
                const std::uint64_t seed = derive_seed(cfg.seed, 0x9330, i);
                const GmmDemoResult r = run_gmm_trial(cfg, seed);
                const bool success = r.max_coordinate_error <= cfg.threshold;
                ok += success ? 1 : 0;
                t << seed << ','
                  << (std::isfinite(r.max_coordinate_error) ? format_double(r.max_coordinate_error)
                                                            : "inf")
                  << ',' << (r.fit ? format_double(r.fit->model.sigma) : "nan") << ','
                  << (success ? 1 : 0) << ',' << csv_quoted(r.error) << '\n';
            }
            write_file(dir / "gmm_trials.csv", t.str());
            summary << "gmm-demo: " << ok << '/' << cfg.trials
                    << " runs with max coordinate error <= " << format_double(cfg.threshold);
            break;
        }
        case Experiment::exactness_suite: {
            const ExactnessResult r = run_exactness_suite(cfg.trials, cfg.seed, cfg.threads);
            ordered_json j = {{"runs", r.runs},
                              {"exact", r.exact},
                              {"worst_error", finite_or_null(r.worst_error)},
                              {"seconds", r.seconds},
                              {"failures", r.failures}};
            write_file(dir / "exactness.json", j.dump(2) + "\n");
            summary << "exactness-suite: " << r.exact << '/' << r.runs
                    << " runs with matched_error <= 1e-6 in " << format_double(r.seconds) << " s";
            break;
        }
    }
    return summary.str();
}

}  // namespace superres::harness
