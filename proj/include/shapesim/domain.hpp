#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "shapesim/resources.hpp"

namespace shapesim {

using AppId = std::int64_t;
using ComponentId = std::int64_t;
using HostId = int;
using SimTime = std::int64_t;  // seconds of simulated time

enum class ComponentKind { core, elastic };
enum class AppKind { rigid, elastic };

struct ComponentSpec {
    ComponentId id = 0;
    AppId application_id = 0;
    ComponentKind kind = ComponentKind::core;
    ResourceVector reservation;
    ComponentId usage_profile_id = 0;

    friend bool operator==(const ComponentSpec&, const ComponentSpec&) = default;
};

struct ApplicationSpec {
    AppId id = 0;
    AppKind kind = AppKind::rigid;
    std::vector<ComponentSpec> core_components;
    std::vector<ComponentSpec> elastic_components;
    double total_work = 0.0;  // work-units; one per running component per second
    SimTime submission_time = 0;
    SimTime priority_key = 0;  // original submission time, kept across resubmissions

    std::size_t component_count() const { return core_components.size() + elastic_components.size(); }

    friend bool operator==(const ApplicationSpec&, const ApplicationSpec&) = default;
};

enum class ComponentStatus { pending, running, preempted, finished };

struct ComponentState {
    ComponentSpec spec;
    std::optional<HostId> host;
    SimTime start_time = 0;
    ResourceVector allocated;
    ResourceVector used;
    ComponentStatus status = ComponentStatus::pending;
    double ledger = 0.0;               // cumulative work contributed, never reset
    double work_since_placement = 0.0;  // what a preemption of this component can lose

    bool running() const { return status == ComponentStatus::running; }
    SimTime time_alive(SimTime now) const { return now - start_time; }
};

enum class AppStatus { queued, running, finished, failed };

struct ApplicationState {
    ApplicationSpec spec;
    AppStatus status = AppStatus::queued;
    std::vector<ComponentState> components;  // core components first, then elastic
    double lost_work = 0.0;
    int failure_count = 0;
    int preemption_count = 0;
    SimTime first_submission = 0;
    std::optional<SimTime> first_start;
    std::optional<SimTime> completion_time;

    explicit ApplicationState(ApplicationSpec s);

    double work_ledger() const;
    double accrued_work() const { return work_ledger() - lost_work; }
    int running_components() const;
    int resubmissions() const { return failure_count + preemption_count; }
};

struct Host {
    HostId id = 0;
    ResourceVector capacity;
    ResourceVector allocated;
    ResourceVector used;
};

struct ClusterState {
    std::vector<Host> hosts;
    std::vector<ApplicationState> apps;  // indexed by AppId
    std::set<AppId> running;
    std::set<std::pair<SimTime, AppId>> queue;  // (priority_key, id)
    SimTime clock = 0;

    ApplicationState& app(AppId id) { return apps.at(static_cast<std::size_t>(id)); }
    const ApplicationState& app(AppId id) const { return apps.at(static_cast<std::size_t>(id)); }

    void enqueue(AppId id);

    /// Recomputes per-host allocated/used sums from the placed components.
    void refresh_hosts();

    /// Running apps in scheduling order: FIFO on priority_key, ties by id.
    std::vector<AppId> scheduling_order() const;
};

ClusterState make_cluster(int host_count, const ResourceVector& capacity);

}  // namespace shapesim
