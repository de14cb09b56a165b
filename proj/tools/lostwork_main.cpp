#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "lostwork/io.hpp"
#include "lostwork/microdyn.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitWarnings = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lw::Error("file_not_found", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct FileResult {
    int exit_code = kExitOk;
    std::string output;  // report text or error line
};

FileResult analyze_one(const std::string& path, lw::io::Format format) {
    FileResult fr;
    try {
        std::string text = read_file(path);
        lw::io::AnalysisConfig cfg = lw::io::parse_config(text);
        lw::io::Report rep = lw::io::analyze(cfg, text);
        fr.output = lw::io::emit_report(rep, format);
        fr.exit_code = rep.warnings.empty() ? kExitOk : kExitWarnings;
    } catch (const lw::Error& e) {
        fr.output = std::string("error [") + e.code() + "] " + e.what() + "\n";
        fr.exit_code = kExitInputError;
    }
    return fr;
}

int run_analyze(const std::vector<std::string>& files, const std::string& format_name,
                const std::string& out_path, int jobs) {
    lw::io::Format format =
        format_name == "json" ? lw::io::Format::json : lw::io::Format::table;
    if (!out_path.empty() && files.size() != 1) {
        std::cerr << "error [invalid_arguments] --out needs exactly one input file\n";
        return kExitInputError;
    }

    // results are buffered and emitted in input order, so any --jobs value
    // produces output identical to a sequential run
    std::vector<FileResult> results(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < files.size();
             i = next.fetch_add(1))
            results[i] = analyze_one(files[i], format);
    };
    int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    int exit_code = kExitOk;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const FileResult& fr = results[i];
        exit_code = std::max(exit_code, fr.exit_code);
        if (fr.exit_code == kExitInputError) {
            std::cerr << (files.size() > 1 ? files[i] + ": " : "") << fr.output;
            continue;
        }
        if (!out_path.empty()) {
            std::ofstream out(out_path, std::ios::binary);
            out << fr.output;
        } else {
            if (files.size() > 1) std::cout << "== " << files[i] << " ==\n";
            std::cout << fr.output;
        }
    }
    return exit_code;
}

int run_simulate_map(const std::string& map_name,
                     const std::vector<std::string>& params, long long steps,
                     long long burn_in, unsigned seed, double step_duration) {
    double linear_a = 0.5, r1 = 0.3, r2 = 0.2;
    for (const std::string& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos)
            throw lw::Error("invalid_arguments", "--param expects name=value, got '" + p + "'");
        std::string key = p.substr(0, eq);
        double val = std::strtod(p.c_str() + eq + 1, nullptr);
        if (key == "a")
            linear_a = val;
        else if (key == "r1")
            r1 = val;
        else if (key == "r2")
            r2 = val;
        else
            throw lw::Error("unknown_param", "unknown map parameter '" + key + "'");
    }

    lw::dyn::MapSystem m;
    if (map_name == "cat")
        m = lw::dyn::cat_map();
    else if (map_name == "linear")
        m = lw::dyn::linear_map(linear_a);
    else if (map_name == "baker")
        m = lw::dyn::baker_map(r1, r2);
    else
        throw lw::Error("unknown_map", "map must be cat, linear or baker");

    std::mt19937_64 rng(seed);
    lw::dyn::Vec sigma0 = lw::dyn::random_point(m, rng);
    lw::dyn::OrbitStats stats = lw::dyn::birkhoff_average(
        m, sigma0,
        [&m](const lw::dyn::Vec& p) { return lw::dyn::phase_contraction(m, p); },
        steps, burn_in);

    char line[160];
    std::printf("map %s  dim %d\n", m.name.c_str(), m.dim);
    std::string s0 = "(";
    for (int i = 0; i < m.dim; ++i) {
        std::snprintf(line, sizeof line, "%s%.17g", i ? ", " : "", sigma0[i]);
        s0 += line;
    }
    std::printf("sigma0 [seed %u]: %s)\n", seed, s0.c_str());
    std::printf("steps %lld  burn-in %lld\n", stats.T, stats.burn_in);
    std::printf("mean contraction: %.17g per step\n", stats.mean);
    std::printf("half means: %.17g / %.17g  (delta %.3e)\n", stats.halves.first,
                stats.halves.second,
                std::abs(stats.halves.first - stats.halves.second));
    std::printf("std error of mean: %.3e\n", stats.std_error);
    if (step_duration > 0)
        std::printf("contraction rate: %.17g per second (step duration %.17g s)\n",
                    stats.mean / step_duration, step_duration);
    return kExitOk;
}

int run_optimize(const std::string& path, int budget, double tol) {
    std::string text = read_file(path);
    lw::io::DesignConfig dc = lw::io::parse_design(text);
    lw::design::DesignSpace ds = lw::io::build_design_space(dc);
    lw::design::SearchOptions opts;
    opts.viewpoint = dc.viewpoint;

    lw::design::ExtremumResult res = lw::design::minimize_lost_work(ds, budget, tol, opts);

    std::printf("template %s  (%zu parameter%s)\n", dc.template_name.c_str(),
                dc.params.size(), dc.params.size() == 1 ? "" : "s");
    std::printf("viewpoint %s\n",
                dc.viewpoint == lw::design::Viewpoint::system ? "system" : "environment");
    for (std::size_t i = 0; i < dc.params.size(); ++i)
        std::printf("%s* = %.17g\n", dc.params[i].name.c_str(), res.params_star[i]);
    std::printf("W_lambda* = %.17g J\n", res.W_lambda_star);
    std::printf("stationarity = %.3e J per unit parameter\n", res.stationarity);
    std::printf("evaluations = %d (%d failed)\n", res.evaluations,
                res.failed_evaluations);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"second-law audit: entropy generation, lost work and "
                 "entropy-generation minimization for open systems"};
    app.set_version_flag("--version", std::string(lw::io::kToolName) + " " +
                                          lw::io::kToolVersion);
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand(
        "analyze", "run the Gouy-Stodola audit over a process timeline");
    std::vector<std::string> files;
    std::string format = "table", out_path;
    int jobs = 1;
    analyze->add_option("config", files, "analysis config file(s), schema v1")
        ->required();
    analyze->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    analyze->add_option("--out", out_path, "write the report to FILE");
    analyze->add_option("--jobs", jobs, "worker threads across input files")
        ->check(CLI::PositiveNumber);

    auto* sim = app.add_subcommand(
        "simulate-map", "orbit statistics of the phase-space contraction");
    std::string map_name;
    std::vector<std::string> map_params;
    long long steps = 0, burn_in = 1000;
    unsigned seed = 1;
    double step_duration = 0;
    sim->add_option("--map", map_name, "cat | linear | baker")->required();
    sim->add_option("--param", map_params, "map parameter name=value");
    sim->add_option("--steps", steps, "orbit length T")->required();
    sim->add_option("--burn-in", burn_in, "discarded leading steps");
    sim->add_option("--seed", seed, "seed for the initial point");
    sim->add_option("--step-duration", step_duration,
                    "seconds per step, converts the per-step mean to a rate");

    auto* opt = app.add_subcommand(
        "optimize", "minimize lost work over a parametrized design");
    std::string design_path;
    int budget = 200;
    double tol = 1e-6;
    opt->add_option("design", design_path, "design document, schema v1")->required();
    opt->add_option("--budget", budget, "max objective evaluations");
    opt->add_option("--tol", tol, "parameter tolerance of the search");

    for (auto* sub : {analyze, sim, opt})
        sub->set_version_flag("--version", std::string(lw::io::kToolName) + " " +
                                               lw::io::kToolVersion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*analyze) return run_analyze(files, format, out_path, jobs);
        if (*sim)
            return run_simulate_map(map_name, map_params, steps, burn_in, seed,
                                    step_duration);
        if (*opt) return run_optimize(design_path, budget, tol);
    } catch (const lw::Error& e) {
        std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
