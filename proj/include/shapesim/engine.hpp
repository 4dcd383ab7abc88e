#pragma once

#include <functional>
#include <vector>

#include "shapesim/report.hpp"
#include "shapesim/sim_config.hpp"
#include "shapesim/workload.hpp"

namespace shapesim {

struct Placement {
    AppId app = 0;
    ComponentId component = 0;
    HostId host = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

/// Strict FIFO admission over the queue (priority_key order). The head application
/// is admitted only if all of its core components fit at full reservation, first-fit
/// over hosts in id order; otherwise admission stops. Elastic components of admitted
/// applications are placed greedily; the rest stay dormant. Once the whole queue has
/// been admitted, dormant elastic components of running applications are retried.
std::vector<Placement> schedule_pending(const ClusterState& state);

/// Optimistic policy only. For each host whose summed memory usage exceeds its
/// capacity, picks victims by descending (used - allocated) memory, ties broken by
/// the most recent start, until the host fits. Killing a core component takes all of
/// its application's components down with it.
std::vector<ComponentId> overload_check(const ClusterState& state);

/// Advances work by `dt` seconds: each running component contributes one work-unit
/// per second, capped so no application exceeds its total work. Returns the
/// applications that have now accrued all of their work.
std::vector<AppId> accrue_work(ClusterState& state, SimTime dt);

struct RunHooks {
    /// Called for each running component at every monitor tick (shaping policies only).
    std::function<void(SimTime, ComponentId, const ResourceVector& observed)> on_observe;
    /// Called with the predictions used for shaping at every shape tick.
    std::function<void(SimTime, ComponentId, const ResourcePrediction&)> on_predict;
};

/// Deterministic discrete-event run of `trace` under `config`.
SimulationReport run(const WorkloadTrace& trace, const SimConfig& config, const RunHooks& hooks = {});

}  // namespace shapesim
