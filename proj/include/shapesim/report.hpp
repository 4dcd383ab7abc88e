#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapesim/sim_config.hpp"

namespace shapesim {

struct AppRecord {
    AppId id = 0;
    AppKind kind = AppKind::rigid;
    double runtime_s = 0.0;  // nominal runtime with every component running
    SimTime first_submission = 0;
    std::optional<SimTime> first_start;
    std::optional<SimTime> completion;
    int failure_count = 0;     // crashes: memory above allocation, or an overload kill of a core component
    int preemption_count = 0;  // full preemptions chosen by the shaper
    int component_losses = 0;  // elastic components preempted or crashed
    double total_work = 0.0;
    double work_ledger = 0.0;  // cumulative work of all components
    double lost_work = 0.0;
    bool permanently_failed = false;
    // Per-resource sums over monitor ticks of the app's running components.
    ResourceVector allocated_sum;
    ResourceVector used_sum;

    std::optional<SimTime> turnaround() const {
        if (!completion) return std::nullopt;
        return *completion - first_submission;
    }
    std::optional<SimTime> queue_wait() const {
        if (!first_start) return std::nullopt;
        return *first_start - first_submission;
    }
};

struct TickSample {
    SimTime t = 0;
    ResourceVector allocated;
    ResourceVector used;
};

struct Aggregates {
    double mean_turnaround_s = 0.0;
    double median_turnaround_s = 0.0;
    double mem_slack = 0.0;
    double cpu_slack = 0.0;
    double failure_pct = 0.0;
    double preempted_pct = 0.0;
    double lost_work = 0.0;
    int completed = 0;
    int permanently_failed = 0;
};

struct SimulationReport {
    SimConfig config;
    std::vector<AppRecord> apps;
    std::vector<TickSample> ticks;
    Aggregates aggregates;
};

class NoCompletedApps : public std::runtime_error {
public:
    NoCompletedApps() : std::runtime_error("no completed applications") {}
};

struct TurnaroundStats {
    double mean = 0, median = 0, q1 = 0, q3 = 0, max = 0;
    std::size_t count = 0;
};

/// Turnaround spans all resubmissions: completion minus first submission.
TurnaroundStats turnaround_stats(const SimulationReport& report);

struct SlackStats {
    std::vector<std::pair<AppId, ResourceVector>> per_app;  // (cpu slack, memory slack)
    std::size_t exclusions = 0;                             // apps never allocated anything
    ResourceVector cluster;                                 // time aggregate over tick samples
};

/// Slack = sum(allocated - used) / sum(allocated) per resource.
SlackStats slack_stats(const SimulationReport& report);

struct FailureStats {
    double failure_pct = 0.0;    // apps with at least one crash
    double preempted_pct = 0.0;  // apps fully preempted at least once
    double lost_work = 0.0;
};

FailureStats failure_stats(const SimulationReport& report);

/// Recomputes the aggregate block from the raw records.
Aggregates compute_aggregates(const SimulationReport& report);

std::string report_json(const SimulationReport& report);

/// Same as report_json without the config echo: used to compare runs of different policies.
std::string report_body_json(const SimulationReport& report);

std::string ticks_csv(const SimulationReport& report);
std::string apps_csv(const SimulationReport& report);

}  // namespace shapesim
