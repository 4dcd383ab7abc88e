// Command-line front end: generate traces, run simulations, sweep buffer
// parameters and evaluate forecasters.

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "shapesim/config.hpp"
#include "shapesim/engine.hpp"
#include "shapesim/forecast/evaluate.hpp"
#include "shapesim/io_util.hpp"
#include "shapesim/sweep.hpp"
#include "shapesim/trace_io.hpp"

namespace fs = std::filesystem;
using namespace shapesim;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

// Bad arguments or unusable inputs; reported with exit status 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& list) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = list.find(',', start);
        out.push_back(list.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (const auto& s : out)
        if (s.empty()) throw UsageError("empty entry in list '" + list + "'");
    return out;
}

std::vector<double> real_list(const std::string& list, const char* flag) {
    std::vector<double> out;
    for (const auto& s : split(list)) {
        try {
            out.push_back(parse_real(s));
        } catch (const std::invalid_argument&) {
            throw UsageError(std::string(flag) + ": not a number: " + s);
        }
    }
    return out;
}

std::vector<int> int_list(const std::string& list, const char* flag) {
    std::vector<int> out;
    for (const auto& s : split(list)) {
        long long v = 0;
        try {
            v = parse_integer(s);
        } catch (const std::invalid_argument&) {
            throw UsageError(std::string(flag) + ": not an integer: " + s);
        }
        if (v < 1 || v > 1000) throw UsageError(std::string(flag) + ": out of range: " + s);
        out.push_back(static_cast<int>(v));
    }
    return out;
}

ExperimentConfig read_config(const std::string& path) {
    if (!fs::is_regular_file(path)) throw UsageError("config file not found: " + path);
    try {
        return load_config(path);
    } catch (const InvalidConfig& e) {
        throw UsageError(e.what());
    }
}

WorkloadTrace read_trace(const std::string& dir) {
    if (!fs::is_directory(dir)) throw UsageError("trace directory not found: " + dir);
    return load_trace(dir);
}

void require_parent(const std::string& out) {
    const fs::path parent = fs::absolute(out).parent_path();
    if (!fs::is_directory(parent)) throw UsageError("output directory does not exist: " + parent.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-driven cluster simulator with dynamic resource shaping"};
    app.require_subcommand(1);

    std::string config_path, trace_dir, out_path, csv_dir, k1_list, k2_list, kinds_list, h_list;
    unsigned jobs = 1;
    std::size_t max_series = 100;

    auto* gen = app.add_subcommand("gen", "Generate a synthetic workload trace");
    gen->add_option("--config", config_path, "Config file (JSON)")->required();
    gen->add_option("--out", out_path, "Output trace directory")->required();

    auto* run_cmd = app.add_subcommand("run", "Simulate one configuration");
    run_cmd->add_option("--trace", trace_dir, "Trace directory")->required();
    run_cmd->add_option("--config", config_path, "Config file (JSON)")->required();
    run_cmd->add_option("--out", out_path, "report.json path")->required();
    run_cmd->add_option("--csv", csv_dir, "Also write ticks.csv and apps.csv here");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a (K1, K2) grid against the baseline");
    sweep_cmd->add_option("--trace", trace_dir, "Trace directory")->required();
    sweep_cmd->add_option("--config", config_path, "Config file (JSON)")->required();
    sweep_cmd->add_option("--k1", k1_list, "Comma-separated K1 values")->required();
    sweep_cmd->add_option("--k2", k2_list, "Comma-separated K2 values")->required();
    sweep_cmd->add_option("--out", out_path, "sweep.csv path")->required();
    sweep_cmd->add_option("--jobs", jobs, "Worker threads, 0 for one per core")->capture_default_str();

    auto* eval = app.add_subcommand("eval-forecast", "One-step-ahead forecaster errors on trace memory series");
    eval->set_help_flag("--help", "Print this help message and exit");
    eval->add_option("--trace", trace_dir, "Trace directory")->required();
    eval->add_option("--kinds", kinds_list, "oracle, ari, gp-exp, gp-rbf (comma-separated)")->required();
    eval->add_option("--h", h_list, "History lengths (comma-separated)")->required();
    eval->add_option("--out", out_path, "forecast_eval.csv path")->required();
    eval->add_option("--max-series", max_series, "Series to evaluate, 0 for all")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) {
            const auto config = read_config(config_path);
            require_parent(out_path);
            write_trace(generate(config.workload), out_path);
        } else if (run_cmd->parsed()) {
            const auto config = read_config(config_path);
            require_parent(out_path);
            if (!csv_dir.empty()) require_parent(csv_dir);
            const auto trace = read_trace(trace_dir);
            const auto report = run(trace, config.sim);
            if (!csv_dir.empty()) {
                atomic_write_dir(
                    csv_dir,
                    [&](const fs::path& tmp) {
                        atomic_write_file(tmp / "ticks.csv", ticks_csv(report));
                        atomic_write_file(tmp / "apps.csv", apps_csv(report));
                    },
                    [](const fs::path& p) { return fs::exists(p / "ticks.csv"); });
            }
            atomic_write_file(out_path, report_json(report));
        } else if (sweep_cmd->parsed()) {
            const auto config = read_config(config_path);
            const auto k1s = real_list(k1_list, "--k1");
            const auto k2s = real_list(k2_list, "--k2");
            require_parent(out_path);
            const auto trace = read_trace(trace_dir);
            if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
            atomic_write_file(out_path, sweep_csv(sweep(trace, config.sim, k1s, k2s, jobs)));
        } else if (eval->parsed()) {
            const auto kinds = split(kinds_list);
            const auto hs = int_list(h_list, "--h");
            for (const auto& k : kinds) {
                try {
                    forecast::parse_eval_kind(k, hs.front());
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
            require_parent(out_path);
            const auto trace = read_trace(trace_dir);
            const auto corpus = forecast::memory_corpus(trace, max_series);
            atomic_write_file(out_path, forecast::eval_csv(forecast::evaluate_forecasters(corpus, kinds, hs)));
        }
    } catch (const UsageError& e) {
        std::cerr << "shapesim: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "shapesim: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
