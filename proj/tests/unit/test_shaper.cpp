#include <doctest.h>

#include <map>
#include <random>

#include "shapesim/shaper.hpp"
#include "../support.hpp"

using namespace shapesim;
using namespace shapesim::testing;
using forecast::PredictiveDistribution;

namespace {

ResourcePrediction predict(double cpu_mean, double cpu_var, double mem_mean, double mem_var) {
    return {PredictiveDistribution{cpu_mean, cpu_var}, PredictiveDistribution{mem_mean, mem_var}};
}

// Cluster with one app per entry of `apps`; each app runs on the hosts listed for its components.
struct Scenario {
    ClusterState state;
    ComponentId next = 0;
    DemandMap demands;

    Scenario(int hosts, ResourceVector cap) : state(make_cluster(hosts, cap)) {}

    // Adds a running app; `core_hosts`/`elastic_hosts` give one host per component.
    AppId add(std::vector<HostId> core_hosts, std::vector<HostId> elastic_hosts, ResourceVector demand,
              SimTime start = 0) {
        const auto id = static_cast<AppId>(state.apps.size());
        auto spec = make_app(id, static_cast<int>(core_hosts.size()), static_cast<int>(elastic_hosts.size()),
                             {100.0, 100000.0}, id, next);
        state.apps.emplace_back(spec);
        state.enqueue(id);
        run_on(state, id, 0, start);
        auto& app = state.app(id);
        for (std::size_t i = 0; i < app.components.size(); ++i) {
            auto& c = app.components[i];
            c.host = i < core_hosts.size() ? core_hosts[i] : elastic_hosts[i - core_hosts.size()];
            demands[c.spec.id] = demand;
        }
        return id;
    }
};

}  // namespace

TEST_CASE("buffer combines the reservation share and the predictive spread") {
    const ResourceVector res{4.0, 1000.0};
    const auto beta = compute_buffer(res, predict(1.0, 0.25, 300.0, 400.0), {0.1, 2.0});
    CHECK(beta.cpus == doctest::Approx(0.4 + 2.0 * 0.5));
    CHECK(beta.memory == doctest::Approx(100.0 + 2.0 * 20.0));
    // negative variance from rounding counts as zero
    CHECK(compute_buffer(res, predict(1.0, -1e-18, 1.0, 0.0), {0.0, 3.0}).cpus == 0.0);
}

TEST_CASE("shaped demand is clamped between the floor and the reservation") {
    const ResourceVector res{4.0, 1000.0};
    auto d = shaped_demand(res, predict(1.0, 0.0, 300.0, 0.0), {0.05, 3.0});
    CHECK(d.cpus == doctest::Approx(1.0 + 0.2));
    CHECK(d.memory == doctest::Approx(350.0));
    d = shaped_demand(res, predict(10.0, 0.0, 5000.0, 0.0), {0.05, 0.0});
    CHECK(d == res);
    d = shaped_demand(res, predict(-1.0, 0.0, 0.0, 0.0), {0.0, 0.0});
    CHECK(d == ResourceVector{0.0, 0.0});
    d = shaped_demand(res, predict(0.0, 0.0, 0.0, 0.0), {0.25, 0.0});
    CHECK(d == ResourceVector{1.0, 250.0});
    // k1 = 1 always yields the reservation
    CHECK(shaped_demand(res, predict(0.1, 9.0, 1.0, 9.0), {1.0, 3.0}) == res);
}

TEST_CASE("buffer parameter validation") {
    CHECK_NOTHROW(validate(BufferParams{0.0, 0.0}));
    CHECK_NOTHROW(validate(BufferParams{1.0, 10.0}));
    CHECK_THROWS_AS(validate(BufferParams{1.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(BufferParams{-0.1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(BufferParams{0.1, -1.0}), std::invalid_argument);
}

TEST_CASE("pessimistic: a later application that does not fit is preempted, later ones still fit") {
    Scenario s(1, {10.0, 100.0});
    s.add({0}, {}, {6.0, 60.0});
    s.add({0}, {}, {5.0, 50.0});
    s.add({0}, {}, {4.0, 40.0});
    const auto plan = plan_pessimistic(s.state, s.demands);
    CHECK(plan.preempted_apps == std::vector<AppId>{1});
    CHECK(plan.preempted_elastic.empty());
    REQUIRE(plan.new_allocations.size() == 2);
    CHECK(plan.new_allocations[0] == Allocation{0, {6.0, 60.0}});
    CHECK(plan.new_allocations[1] == Allocation{2, {4.0, 40.0}});
}

TEST_CASE("pessimistic: a partial fit of an application's core components is rolled back") {
    Scenario s(2, {10.0, 100.0});
    s.add({1}, {}, {8.0, 10.0});       // fills host 1
    s.add({0, 1}, {}, {5.0, 10.0});    // first core fits host 0, second does not fit host 1
    s.add({0}, {}, {10.0, 100.0});     // needs all of host 0
    const auto plan = plan_pessimistic(s.state, s.demands);
    CHECK(plan.preempted_apps == std::vector<AppId>{1});
    REQUIRE(plan.new_allocations.size() == 2);
    CHECK(plan.new_allocations[1] == Allocation{3, {10.0, 100.0}});
}

TEST_CASE("pessimistic: memory alone triggers preemption") {
    Scenario s(1, {10.0, 100.0});
    s.add({0}, {}, {1.0, 70.0});
    s.add({0}, {}, {1.0, 31.0});
    CHECK(plan_pessimistic(s.state, s.demands).preempted_apps == std::vector<AppId>{1});
}

TEST_CASE("pessimistic: elastic components are kept oldest first and only dropped individually") {
    Scenario s(1, {10.0, 100.0});
    const AppId a = s.add({0}, {0, 0, 0}, {3.0, 10.0});
    auto& comps = s.state.app(a).components;
    comps[1].start_time = 50;  // youngest
    comps[2].start_time = 10;
    comps[3].start_time = 10;
    const auto plan = plan_pessimistic(s.state, s.demands);
    CHECK(plan.preempted_apps.empty());
    // core 3 + two elastics 6 = 9; the third elastic would need 12
    CHECK(plan.preempted_elastic == std::vector<ComponentId>{comps[1].spec.id});
    CHECK(plan.new_allocations.size() == 3);
}

TEST_CASE("pessimistic: an earlier application's elastics are placed before later core components") {
    Scenario s(1, {10.0, 100.0});
    s.add({0}, {0}, {5.0, 50.0});
    s.add({0}, {}, {1.0, 1.0});
    const auto plan = plan_pessimistic(s.state, s.demands);
    CHECK(plan.preempted_apps == std::vector<AppId>{1});
}

TEST_CASE("pessimistic: exact fit is accepted") {
    Scenario s(1, {1.0, 1.0});
    for (int i = 0; i < 10; ++i) s.add({0}, {}, {0.1, 0.1});
    const auto plan = plan_pessimistic(s.state, s.demands);
    CHECK(plan.preempted_apps.empty());
    CHECK(plan.new_allocations.size() == 10);
}

TEST_CASE("pessimistic: non-running components are ignored and missing demands are an error") {
    Scenario s(1, {10.0, 100.0});
    const AppId a = s.add({0}, {0}, {4.0, 40.0});
    auto& e = s.state.app(a).components[1];
    e.status = ComponentStatus::preempted;
    e.host.reset();
    s.demands.erase(e.spec.id);
    CHECK(plan_pessimistic(s.state, s.demands).new_allocations.size() == 1);
    s.demands.clear();
    CHECK_THROWS_AS(plan_pessimistic(s.state, s.demands), std::invalid_argument);
    CHECK_THROWS_AS(resolve_optimistic(s.state, s.demands), std::invalid_argument);
}

TEST_CASE("optimistic: every running component receives its demand") {
    Scenario s(1, {10.0, 100.0});
    s.add({0}, {0}, {8.0, 80.0});
    s.add({0}, {}, {8.0, 80.0});
    const auto plan = resolve_optimistic(s.state, s.demands);
    CHECK(plan.preempted_apps.empty());
    CHECK(plan.preempted_elastic.empty());
    CHECK(plan.new_allocations.size() == 3);
}

TEST_CASE("property: pessimistic plans never exceed any host's capacity") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_hosts(1, 4), n_apps(1, 12), n_core(1, 3), n_elastic(0, 4);
    std::uniform_real_distribution<double> cpu(0.1, 6.0), mem(50.0, 4000.0), start(0.0, 1000.0);
    const ResourceVector cap{16.0, 16000.0};
    for (int trial = 0; trial < 1000; ++trial) {
        const int hosts = n_hosts(rng);
        Scenario s(hosts, cap);
        std::uniform_int_distribution<int> host(0, hosts - 1);
        const int apps = n_apps(rng);
        for (int i = 0; i < apps; ++i) {
            std::vector<HostId> ch, eh;
            for (int k = n_core(rng); k > 0; --k) ch.push_back(host(rng));
            for (int k = n_elastic(rng); k > 0; --k) eh.push_back(host(rng));
            const AppId id = s.add(ch, eh, {});
            for (auto& c : s.state.app(id).components) {
                c.start_time = static_cast<SimTime>(start(rng));
                s.demands[c.spec.id] = {cpu(rng), mem(rng)};
            }
        }
        const auto plan = plan_pessimistic(s.state, s.demands);

        std::map<ComponentId, HostId> where;
        std::map<ComponentId, AppId> owner;
        for (const auto& app : s.state.apps)
            for (const auto& c : app.components) {
                where[c.spec.id] = *c.host;
                owner[c.spec.id] = app.spec.id;
            }
        std::vector<ResourceVector> used(static_cast<std::size_t>(hosts));
        std::set<AppId> preempted(plan.preempted_apps.begin(), plan.preempted_apps.end());
        std::size_t accounted = plan.preempted_elastic.size();
        for (const auto& a : plan.new_allocations) {
            CHECK(a.resources == s.demands.at(a.component));
            CHECK(preempted.count(owner.at(a.component)) == 0);
            used[static_cast<std::size_t>(where.at(a.component))] += a.resources;
            ++accounted;
        }
        for (AppId id : plan.preempted_apps) accounted += s.state.app(id).components.size();
        CHECK(accounted == where.size());
        for (const auto& u : used) {
            CHECK(u.cpus <= cap.cpus + 1e-9);
            CHECK(u.memory <= cap.memory + 1e-9);
        }
        // an app that fits an empty cluster on its own is never preempted when it is first in line
        const auto& first = s.state.app(s.state.scheduling_order().front());
        std::vector<ResourceVector> alone(static_cast<std::size_t>(hosts));
        bool fits_alone = true;
        for (const auto& c : first.components) {
            if (c.spec.kind != ComponentKind::core) continue;
            auto& u = alone[static_cast<std::size_t>(*c.host)];
            u += s.demands.at(c.spec.id);
            fits_alone = fits_alone && u.cpus <= cap.cpus && u.memory <= cap.memory;
        }
        if (fits_alone) CHECK(preempted.count(first.spec.id) == 0);
    }
}
