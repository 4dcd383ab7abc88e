#pragma once

#include <unordered_map>
#include <vector>

#include "shapesim/domain.hpp"
#include "shapesim/forecast/gp.hpp"

namespace shapesim {

/// Safe-guard buffer: beta = k1 * reservation + k2 * predictive standard deviation.
struct BufferParams {
    double k1 = 0.05;  // fraction of the reservation, in [0, 1]
    double k2 = 3.0;   // sigma multiplier, >= 0

    friend bool operator==(const BufferParams&, const BufferParams&) = default;
};

void validate(const BufferParams& params);

struct ResourcePrediction {
    forecast::PredictiveDistribution cpus;
    forecast::PredictiveDistribution memory;

    const forecast::PredictiveDistribution& operator[](Dimension d) const {
        return d == Dimension::cpus ? cpus : memory;
    }
};

/// Per-dimension buffer.
ResourceVector compute_buffer(const ResourceVector& reservation, const ResourcePrediction& prediction,
                              const BufferParams& params);

/// Predicted mean plus buffer, clamped to [k1 * reservation, reservation].
ResourceVector shaped_demand(const ResourceVector& reservation, const ResourcePrediction& prediction,
                             const BufferParams& params);

struct Allocation {
    ComponentId component = 0;
    ResourceVector resources;

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct ShapingPlan {
    std::vector<Allocation> new_allocations;  // surviving components, sorted by id
    std::vector<AppId> preempted_apps;        // fully preempted, in scheduling order
    std::vector<ComponentId> preempted_elastic;

    friend bool operator==(const ShapingPlan&, const ShapingPlan&) = default;
};

using DemandMap = std::unordered_map<ComponentId, ResourceVector>;

/// Pessimistic preemption. Walks running applications in FIFO order and places
/// each one's core components on working copies of the per-host free capacity;
/// an application whose core components do not all fit is fully preempted and
/// its tentative subtractions are discarded. Elastic components of surviving
/// applications are then placed oldest first; those that do not fit are preempted.
/// The result never exceeds any host's capacity.
ShapingPlan plan_pessimistic(const ClusterState& state, const DemandMap& demands);

/// Optimistic policy: every component gets its demand, no feasibility check.
ShapingPlan resolve_optimistic(const ClusterState& state, const DemandMap& demands);

}  // namespace shapesim
