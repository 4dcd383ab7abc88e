#pragma once

// Small builders shared by the unit tests.

#include <filesystem>
#include <random>
#include <string>

#include "shapesim/domain.hpp"
#include "shapesim/workload.hpp"

namespace shapesim::testing {

// Application with `cores` core and `elastics` elastic components, all with `res`.
// Component ids continue from `next_component`.
inline ApplicationSpec make_app(AppId id, int cores, int elastics, ResourceVector res, SimTime submit,
                                ComponentId& next_component, double runtime = 600.0) {
    ApplicationSpec a;
    a.id = id;
    a.kind = elastics > 0 ? AppKind::elastic : AppKind::rigid;
    a.submission_time = submit;
    a.priority_key = submit;
    a.total_work = runtime * (cores + elastics);
    for (int i = 0; i < cores; ++i) {
        a.core_components.push_back({next_component, id, ComponentKind::core, res, next_component});
        ++next_component;
    }
    for (int i = 0; i < elastics; ++i) {
        a.elastic_components.push_back({next_component, id, ComponentKind::elastic, res, next_component});
        ++next_component;
    }
    return a;
}

// Places every component of app `id` on `host` as running with allocation = reservation.
inline void run_on(ClusterState& s, AppId id, HostId host, SimTime start = 0) {
    auto& app = s.app(id);
    s.queue.erase({app.spec.priority_key, id});
    app.status = AppStatus::running;
    s.running.insert(id);
    for (auto& c : app.components) {
        c.host = host;
        c.status = ComponentStatus::running;
        c.start_time = start;
        c.allocated = c.spec.reservation;
    }
}

// Trace whose usage is a constant fraction of each component's reservation.
inline WorkloadTrace constant_trace(std::vector<ApplicationSpec> apps, double fraction) {
    WorkloadTrace t;
    t.applications = std::move(apps);
    for (const auto& a : t.applications) {
        const auto runtime = static_cast<SimTime>(a.total_work / static_cast<double>(a.component_count()));
        for (const auto* list : {&a.core_components, &a.elastic_components})
            for (const auto& c : *list) {
                UsageSeries s{c.id, {}};
                s.samples.assign(ticks_for_runtime(runtime), fraction * c.reservation);
                t.usage.push_back(s);
            }
    }
    return t;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    static std::mt19937_64 rng(std::random_device{}());
    auto p = std::filesystem::temp_directory_path() / ("shapesim-" + name + "-" + std::to_string(rng() % 1000000000));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace shapesim::testing
