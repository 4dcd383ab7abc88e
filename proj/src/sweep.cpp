#include "shapesim/sweep.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "shapesim/io_util.hpp"

namespace shapesim {

namespace {

double mean_or_zero(const Aggregates& a) { return a.completed > 0 ? a.mean_turnaround_s : 0.0; }

}  // namespace

SweepResult sweep(const WorkloadTrace& trace, const SimConfig& base, const std::vector<double>& k1s,
                  const std::vector<double>& k2s, unsigned jobs) {
    struct Task {
        SimConfig config;
        std::string label;
    };
    std::vector<Task> tasks;
    SimConfig baseline = base;
    baseline.policy = Policy::baseline;
    tasks.push_back({baseline, "baseline"});
    for (double k1 : k1s) {
        for (double k2 : k2s) {
            SimConfig c = base;
            c.buffer = {k1, k2};
            tasks.push_back({c, "k1=" + format_real(k1) + " k2=" + format_real(k2)});
        }
    }
    // Configs are checked up front so a bad grid point fails before any work starts.
    for (const auto& t : tasks) {
        try {
            validate(t.config);
        } catch (const std::exception& e) {
            throw SweepError("sweep point " + t.label + ": " + e.what());
        }
    }

    std::vector<std::optional<Aggregates>> results(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            try {
                results[i] = run(trace, tasks[i].config).aggregates;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (!results[i]) throw SweepError("sweep point " + tasks[i].label + ": " + errors[i]);

    SweepResult out;
    out.baseline = *results[0];
    const double base_mean = mean_or_zero(out.baseline);
    std::size_t i = 1;
    for (double k1 : k1s) {
        for (double k2 : k2s) {
            const Aggregates& a = *results[i++];
            const double mean = mean_or_zero(a);
            out.cells.push_back({k1, k2, mean > 0.0 ? base_mean / mean : 0.0, a.mem_slack, a.cpu_slack, a.failure_pct});
        }
    }
    return out;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "k1,k2,turnaround_ratio,mem_slack,cpu_slack,failure_pct\n";
    const auto& b = result.baseline;
    out << "baseline,baseline," << format_real(b.completed > 0 ? 1.0 : 0.0) << ',' << format_real(b.mem_slack) << ','
        << format_real(b.cpu_slack) << ',' << format_real(b.failure_pct) << '\n';
    for (const auto& c : result.cells)
        out << format_real(c.k1) << ',' << format_real(c.k2) << ',' << format_real(c.turnaround_ratio) << ','
            << format_real(c.mem_slack) << ',' << format_real(c.cpu_slack) << ',' << format_real(c.failure_pct)
            << '\n';
    return out.str();
}

}  // namespace shapesim
