#include "shapesim/domain.hpp"

#include <algorithm>

namespace shapesim {

ApplicationState::ApplicationState(ApplicationSpec s) : spec(std::move(s)) {
    components.reserve(spec.component_count());
    for (const auto& c : spec.core_components) components.push_back(ComponentState{.spec = c});
    for (const auto& c : spec.elastic_components) components.push_back(ComponentState{.spec = c});
    first_submission = spec.submission_time;
}

double ApplicationState::work_ledger() const {
    double sum = 0.0;
    for (const auto& c : components) sum += c.ledger;
    return sum;
}

int ApplicationState::running_components() const {
    return static_cast<int>(std::count_if(components.begin(), components.end(),
                                          [](const ComponentState& c) { return c.running(); }));
}

void ClusterState::enqueue(AppId id) {
    auto& a = app(id);
    a.status = AppStatus::queued;
    queue.emplace(a.spec.priority_key, id);
}

void ClusterState::refresh_hosts() {
    for (auto& h : hosts) {
        h.allocated = {};
        h.used = {};
    }
    for (AppId id : running) {
        for (const auto& c : app(id).components) {
            if (!c.running()) continue;
            auto& h = hosts.at(static_cast<std::size_t>(*c.host));
            h.allocated += c.allocated;
            h.used += c.used;
        }
    }
}

std::vector<AppId> ClusterState::scheduling_order() const {
    std::vector<AppId> order(running.begin(), running.end());
    std::sort(order.begin(), order.end(), [this](AppId a, AppId b) {
        const auto ka = app(a).spec.priority_key;
        const auto kb = app(b).spec.priority_key;
        return ka != kb ? ka < kb : a < b;
    });
    return order;
}

ClusterState make_cluster(int host_count, const ResourceVector& capacity) {
    ClusterState state;
    state.hosts.reserve(static_cast<std::size_t>(host_count));
    for (int i = 0; i < host_count; ++i) state.hosts.push_back(Host{.id = i, .capacity = capacity});
    return state;
}

}  // namespace shapesim
