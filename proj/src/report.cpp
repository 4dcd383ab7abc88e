#include "shapesim/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "shapesim/config.hpp"
#include "shapesim/io_util.hpp"

namespace shapesim {

using nlohmann::json;

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::vector<double> turnarounds(const SimulationReport& report) {
    std::vector<double> out;
    for (const auto& a : report.apps)
        if (!a.permanently_failed)
            if (const auto t = a.turnaround()) out.push_back(static_cast<double>(*t));
    return out;
}

json resources_json(const ResourceVector& r) { return {{"cpus", r.cpus}, {"memory_mb", r.memory}}; }

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json app_json(const AppRecord& a) {
    return {
        {"id", a.id},
        {"kind", a.kind == AppKind::rigid ? "rigid" : "elastic"},
        {"runtime_s", a.runtime_s},
        {"first_submission", a.first_submission},
        {"first_start", optional_json(a.first_start)},
        {"completion", optional_json(a.completion)},
        {"turnaround", optional_json(a.turnaround())},
        {"queue_wait", optional_json(a.queue_wait())},
        {"failure_count", a.failure_count},
        {"preemption_count", a.preemption_count},
        {"component_losses", a.component_losses},
        {"total_work", a.total_work},
        {"work_ledger", a.work_ledger},
        {"lost_work", a.lost_work},
        {"permanently_failed", a.permanently_failed},
        {"allocated_sum", resources_json(a.allocated_sum)},
        {"used_sum", resources_json(a.used_sum)},
    };
}

json body_json(const SimulationReport& report) {
    json apps = json::array();
    for (const auto& a : report.apps) apps.push_back(app_json(a));
    json ticks = json::array();
    for (const auto& t : report.ticks)
        ticks.push_back({{"t", t.t}, {"allocated", resources_json(t.allocated)}, {"used", resources_json(t.used)}});
    const auto& g = report.aggregates;
    json aggregates = {
        {"mean_turnaround_s", g.mean_turnaround_s},
        {"median_turnaround_s", g.median_turnaround_s},
        {"mem_slack", g.mem_slack},
        {"cpu_slack", g.cpu_slack},
        {"failure_pct", g.failure_pct},
        {"preempted_pct", g.preempted_pct},
        {"lost_work", g.lost_work},
        {"completed", g.completed},
        {"permanently_failed", g.permanently_failed},
    };
    return {{"apps", std::move(apps)}, {"ticks", std::move(ticks)}, {"aggregates", std::move(aggregates)}};
}

}  // namespace

TurnaroundStats turnaround_stats(const SimulationReport& report) {
    auto v = turnarounds(report);
    if (v.empty()) throw NoCompletedApps();
    std::sort(v.begin(), v.end());
    TurnaroundStats s;
    s.count = v.size();
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.q1 = quantile_sorted(v, 0.25);
    s.median = quantile_sorted(v, 0.5);
    s.q3 = quantile_sorted(v, 0.75);
    s.max = v.back();
    return s;
}

SlackStats slack_stats(const SimulationReport& report) {
    SlackStats s;
    for (const auto& a : report.apps) {
        if (a.allocated_sum.cpus <= 0.0 || a.allocated_sum.memory <= 0.0) {
            ++s.exclusions;
            continue;
        }
        s.per_app.emplace_back(a.id, ResourceVector{1.0 - a.used_sum.cpus / a.allocated_sum.cpus,
                                                    1.0 - a.used_sum.memory / a.allocated_sum.memory});
    }
    ResourceVector alloc, used;
    for (const auto& t : report.ticks) {
        alloc += t.allocated;
        used += t.used;
    }
    for (Dimension d : kDimensions) s.cluster[d] = ratio_or_zero(alloc[d] - used[d], alloc[d]);
    return s;
}

FailureStats failure_stats(const SimulationReport& report) {
    FailureStats s;
    std::size_t failed = 0, preempted = 0;
    for (const auto& a : report.apps) {
        if (a.failure_count > 0 || a.permanently_failed) ++failed;
        if (a.preemption_count > 0) ++preempted;
        s.lost_work += a.lost_work;
    }
    if (!report.apps.empty()) {
        const double n = static_cast<double>(report.apps.size());
        s.failure_pct = 100.0 * static_cast<double>(failed) / n;
        s.preempted_pct = 100.0 * static_cast<double>(preempted) / n;
    }
    return s;
}

Aggregates compute_aggregates(const SimulationReport& report) {
    Aggregates g;
    if (!turnarounds(report).empty()) {
        const auto t = turnaround_stats(report);
        g.mean_turnaround_s = t.mean;
        g.median_turnaround_s = t.median;
        g.completed = static_cast<int>(t.count);
    }
    const auto slack = slack_stats(report);
    g.cpu_slack = slack.cluster.cpus;
    g.mem_slack = slack.cluster.memory;
    const auto f = failure_stats(report);
    g.failure_pct = f.failure_pct;
    g.preempted_pct = f.preempted_pct;
    g.lost_work = f.lost_work;
    g.permanently_failed = static_cast<int>(
        std::count_if(report.apps.begin(), report.apps.end(), [](const AppRecord& a) { return a.permanently_failed; }));
    return g;
}

std::string report_json(const SimulationReport& report) {
    json j = body_json(report);
    j["config"] = to_json(report.config);
    return j.dump(1) + "\n";
}

std::string report_body_json(const SimulationReport& report) { return body_json(report).dump(1) + "\n"; }

std::string ticks_csv(const SimulationReport& report) {
    std::ostringstream out;
    out << "t,allocated_cpus,allocated_mem_mb,used_cpus,used_mem_mb\n";
    for (const auto& t : report.ticks)
        out << t.t << ',' << format_real(t.allocated.cpus) << ',' << format_real(t.allocated.memory) << ','
            << format_real(t.used.cpus) << ',' << format_real(t.used.memory) << '\n';
    return out.str();
}

std::string apps_csv(const SimulationReport& report) {
    std::ostringstream out;
    out << "id,kind,first_submission,first_start,completion,turnaround,failure_count,preemption_count,"
           "lost_work,permanently_failed,cpu_slack,mem_slack\n";
    auto opt = [](const std::optional<SimTime>& v) { return v ? std::to_string(*v) : std::string(); };
    const auto slack = slack_stats(report);
    std::size_t si = 0;
    for (const auto& a : report.apps) {
        std::string cpu, mem;
        if (si < slack.per_app.size() && slack.per_app[si].first == a.id) {
            cpu = format_real(slack.per_app[si].second.cpus);
            mem = format_real(slack.per_app[si].second.memory);
            ++si;
        }
        out << a.id << ',' << (a.kind == AppKind::rigid ? "rigid" : "elastic") << ',' << a.first_submission << ','
            << opt(a.first_start) << ',' << opt(a.completion) << ',' << opt(a.turnaround()) << ',' << a.failure_count
            << ',' << a.preemption_count << ',' << format_real(a.lost_work) << ',' << (a.permanently_failed ? 1 : 0)
            << ',' << cpu << ',' << mem << '\n';
    }
    return out.str();
}

}  // namespace shapesim
