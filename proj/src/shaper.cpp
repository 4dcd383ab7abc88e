#include "shapesim/shaper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shapesim {

void validate(const BufferParams& params) {
    if (!(params.k1 >= 0.0 && params.k1 <= 1.0)) throw std::invalid_argument("buffer k1 must be in [0,1]");
    if (!(params.k2 >= 0.0 && std::isfinite(params.k2))) throw std::invalid_argument("buffer k2 must be >= 0");
}

ResourceVector compute_buffer(const ResourceVector& reservation, const ResourcePrediction& prediction,
                              const BufferParams& params) {
    ResourceVector beta;
    for (Dimension d : kDimensions)
        beta[d] = params.k1 * reservation[d] + params.k2 * std::sqrt(std::max(0.0, prediction[d].variance));
    return beta;
}

ResourceVector shaped_demand(const ResourceVector& reservation, const ResourcePrediction& prediction,
                             const BufferParams& params) {
    const ResourceVector beta = compute_buffer(reservation, prediction, params);
    ResourceVector demand;
    for (Dimension d : kDimensions) {
        const double floor = params.k1 * reservation[d];
        demand[d] = std::clamp(prediction[d].mean + beta[d], floor, reservation[d]);
    }
    return demand;
}

namespace {

// Absorbs rounding when the same reservations are summed in a different order
// than admission did; far below any real resource quantity.
constexpr double kSlackTolerance = 1e-9;

const ResourceVector& demand_of(const DemandMap& demands, ComponentId id) {
    const auto it = demands.find(id);
    if (it == demands.end()) throw std::invalid_argument("no demand for running component " + std::to_string(id));
    return it->second;
}

void sort_plan(ShapingPlan& plan) {
    std::sort(plan.new_allocations.begin(), plan.new_allocations.end(),
              [](const Allocation& a, const Allocation& b) { return a.component < b.component; });
}

}  // namespace

ShapingPlan plan_pessimistic(const ClusterState& state, const DemandMap& demands) {
    std::vector<double> cpus_free, mem_free;
    for (const auto& h : state.hosts) {
        cpus_free.push_back(h.capacity.cpus);
        mem_free.push_back(h.capacity.memory);
    }

    ShapingPlan plan;
    std::vector<const ComponentState*> elastic;
    for (AppId id : state.scheduling_order()) {
        const auto& app = state.app(id);

        auto cpus = cpus_free;
        auto mem = mem_free;
        bool remove = false;
        for (const auto& c : app.components) {
            if (c.spec.kind != ComponentKind::core || !c.running()) continue;
            const auto& d = demand_of(demands, c.spec.id);
            const auto h = static_cast<std::size_t>(*c.host);
            cpus[h] -= d.cpus;
            if (cpus[h] < -kSlackTolerance) {
                remove = true;
                break;
            }
            mem[h] -= d.memory;
            if (mem[h] < -kSlackTolerance) {
                remove = true;
                break;
            }
        }
        if (remove) {
            plan.preempted_apps.push_back(id);
            continue;
        }
        cpus_free = std::move(cpus);
        mem_free = std::move(mem);
        for (const auto& c : app.components)
            if (c.spec.kind == ComponentKind::core && c.running())
                plan.new_allocations.push_back({c.spec.id, demand_of(demands, c.spec.id)});

        // oldest first; equal age keeps the lower id
        elastic.clear();
        for (const auto& c : app.components)
            if (c.spec.kind == ComponentKind::elastic && c.running()) elastic.push_back(&c);
        std::sort(elastic.begin(), elastic.end(), [](const ComponentState* a, const ComponentState* b) {
            return a->start_time != b->start_time ? a->start_time < b->start_time : a->spec.id < b->spec.id;
        });
        for (const ComponentState* e : elastic) {
            const auto& d = demand_of(demands, e->spec.id);
            const auto h = static_cast<std::size_t>(*e->host);
            const double c_left = cpus_free[h] - d.cpus;
            const double m_left = mem_free[h] - d.memory;
            if (c_left < -kSlackTolerance || m_left < -kSlackTolerance) {
                plan.preempted_elastic.push_back(e->spec.id);
            } else {
                cpus_free[h] = c_left;
                mem_free[h] = m_left;
                plan.new_allocations.push_back({e->spec.id, d});
            }
        }
    }
    sort_plan(plan);
    return plan;
}

ShapingPlan resolve_optimistic(const ClusterState& state, const DemandMap& demands) {
    ShapingPlan plan;
    for (AppId id : state.running)
        for (const auto& c : state.app(id).components)
            if (c.running()) plan.new_allocations.push_back({c.spec.id, demand_of(demands, c.spec.id)});
    sort_plan(plan);
    return plan;
}

}  // namespace shapesim
