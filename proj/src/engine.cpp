#include "shapesim/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace shapesim {

using forecast::Forecaster;
using forecast::ForecasterTag;
using forecast::OracleTruth;

std::string to_string(Policy policy) {
    switch (policy) {
        case Policy::baseline: return "baseline";
        case Policy::optimistic: return "optimistic";
        case Policy::pessimistic: return "pessimistic";
    }
    return "?";
}

Policy policy_from_string(const std::string& name) {
    if (name == "baseline") return Policy::baseline;
    if (name == "optimistic") return Policy::optimistic;
    if (name == "pessimistic") return Policy::pessimistic;
    throw std::invalid_argument("unknown policy: " + name);
}

void validate(const SimConfig& c) {
    validate(c.buffer);
    if (c.monitor_interval <= 0) throw std::invalid_argument("monitor_interval must be > 0");
    if (c.grace_period < 0) throw std::invalid_argument("grace_period must be >= 0");
    if (c.max_failures_before_exempt < 0) throw std::invalid_argument("max_failures_before_exempt must be >= 0");
    if (c.max_resubmissions < 0) throw std::invalid_argument("max_resubmissions must be >= 0");
    if (!(c.elastic_loss_fraction >= 0.0 && c.elastic_loss_fraction <= 1.0))
        throw std::invalid_argument("elastic_loss_fraction must be in [0,1]");
    if (c.host_count < 1) throw std::invalid_argument("host_count must be >= 1");
    if (!is_valid(c.host_capacity) || c.host_capacity.cpus <= 0 || c.host_capacity.memory <= 0)
        throw std::invalid_argument("host capacity must be positive");
}

namespace {

std::optional<HostId> first_fit(const ResourceVector& request, const std::vector<std::optional<ResourceVector>>& free) {
    for (std::size_t h = 0; h < free.size(); ++h)
        if (free[h] && fits(request, *free[h])) return static_cast<HostId>(h);
    return std::nullopt;
}

}  // namespace

std::vector<Placement> schedule_pending(const ClusterState& state) {
    // Hosts already allocated beyond capacity (optimistic policy) have no room at all.
    std::vector<std::optional<ResourceVector>> free;
    free.reserve(state.hosts.size());
    for (const auto& h : state.hosts) {
        if (fits(h.allocated, h.capacity))
            free.emplace_back(sub_checked(h.capacity, h.allocated));
        else
            free.emplace_back(std::nullopt);
    }

    std::vector<Placement> placements;
    bool queue_drained = true;
    for (const auto& [key, id] : state.queue) {
        const auto& app = state.app(id);
        auto trial = free;
        std::vector<Placement> cores;
        bool admitted = true;
        for (const auto& c : app.components) {
            if (c.spec.kind != ComponentKind::core) continue;
            const auto h = first_fit(c.spec.reservation, trial);
            if (!h) {
                admitted = false;
                break;
            }
            *trial[static_cast<std::size_t>(*h)] = sub_checked(*trial[static_cast<std::size_t>(*h)], c.spec.reservation);
            cores.push_back({id, c.spec.id, *h});
        }
        if (!admitted) {
            queue_drained = false;
            break;
        }
        free = std::move(trial);
        placements.insert(placements.end(), cores.begin(), cores.end());
        for (const auto& c : app.components) {
            if (c.spec.kind != ComponentKind::elastic) continue;
            if (const auto h = first_fit(c.spec.reservation, free)) {
                *free[static_cast<std::size_t>(*h)] = sub_checked(*free[static_cast<std::size_t>(*h)], c.spec.reservation);
                placements.push_back({id, c.spec.id, *h});
            }
        }
    }

    if (queue_drained) {
        for (AppId id : state.scheduling_order()) {
            for (const auto& c : state.app(id).components) {
                if (c.spec.kind != ComponentKind::elastic || c.running()) continue;
                if (const auto h = first_fit(c.spec.reservation, free)) {
                    *free[static_cast<std::size_t>(*h)] =
                        sub_checked(*free[static_cast<std::size_t>(*h)], c.spec.reservation);
                    placements.push_back({id, c.spec.id, *h});
                }
            }
        }
    }
    return placements;
}

std::vector<ComponentId> overload_check(const ClusterState& state) {
    struct Candidate {
        const ComponentState* component;
        AppId app;
    };
    std::vector<double> used(state.hosts.size(), 0.0);
    std::vector<std::vector<Candidate>> on_host(state.hosts.size());
    for (AppId id : state.running) {
        for (const auto& c : state.app(id).components) {
            if (!c.running()) continue;
            const auto h = static_cast<std::size_t>(*c.host);
            used[h] += c.used.memory;
            on_host[h].push_back({&c, id});
        }
    }

    std::vector<ComponentId> kills;
    std::set<ComponentId> dead;
    for (std::size_t h = 0; h < state.hosts.size(); ++h) {
        if (used[h] <= state.hosts[h].capacity.memory) continue;
        auto& cands = on_host[h];
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            const double oa = a.component->used.memory - a.component->allocated.memory;
            const double ob = b.component->used.memory - b.component->allocated.memory;
            if (oa != ob) return oa > ob;
            if (a.component->start_time != b.component->start_time)
                return a.component->start_time > b.component->start_time;
            return a.component->spec.id > b.component->spec.id;
        });
        for (const auto& cand : cands) {
            if (used[h] <= state.hosts[h].capacity.memory) break;
            if (dead.contains(cand.component->spec.id)) continue;
            kills.push_back(cand.component->spec.id);
            if (cand.component->spec.kind == ComponentKind::core) {
                for (const auto& c : state.app(cand.app).components) {
                    if (!c.running() || dead.contains(c.spec.id)) continue;
                    dead.insert(c.spec.id);
                    used[static_cast<std::size_t>(*c.host)] -= c.used.memory;
                }
            } else {
                dead.insert(cand.component->spec.id);
                used[h] -= cand.component->used.memory;
            }
        }
    }
    return kills;
}

std::vector<AppId> accrue_work(ClusterState& state, SimTime dt) {
    std::vector<AppId> done;
    if (dt < 0) throw std::invalid_argument("accrue_work: negative dt");
    for (AppId id : state.running) {
        auto& app = state.app(id);
        const int rate = app.running_components();
        const double remaining = app.spec.total_work - app.accrued_work();
        if (rate > 0 && dt > 0 && remaining > 0.0) {
            const double gained = std::min(static_cast<double>(rate) * static_cast<double>(dt), remaining);
            const double share = gained / rate;
            for (auto& c : app.components) {
                if (!c.running()) continue;
                c.ledger += share;
                c.work_since_placement += share;
            }
        }
        if (app.accrued_work() >= app.spec.total_work - 1e-9) done.push_back(id);
    }
    return done;
}

namespace {

enum class EventKind : int { monitor_tick = 0, shape_tick = 1, app_complete = 2, resubmit = 3, submit = 4 };

struct Event {
    SimTime time;
    EventKind kind;
    std::int64_t id;
    std::uint64_t version;

    bool operator>(const Event& o) const {
        if (time != o.time) return time > o.time;
        if (kind != o.kind) return static_cast<int>(kind) > static_cast<int>(o.kind);
        if (id != o.id) return id > o.id;
        return version > o.version;
    }
};

enum class KillReason { crash, preemption };

class Simulation {
public:
    Simulation(const WorkloadTrace& trace, const SimConfig& config, const RunHooks& hooks)
        : trace_(trace), cfg_(config), hooks_(hooks) {
        validate(cfg_);
        state_ = make_cluster(cfg_.host_count, cfg_.host_capacity);
        state_.apps.reserve(trace.applications.size());
        owner_.resize(trace.component_count());
        for (const auto& spec : trace.applications) {
            if (spec.id != static_cast<AppId>(state_.apps.size()))
                throw std::invalid_argument("trace application ids must be dense and ordered");
            state_.apps.emplace_back(spec);
            const auto& comps = state_.apps.back().components;
            for (std::size_t i = 0; i < comps.size(); ++i)
                owner_.at(static_cast<std::size_t>(comps[i].spec.id)) = {spec.id, i};
        }
        version_.assign(state_.apps.size(), 0);
        forecasters_.resize(trace.component_count());
        alloc_sum_.assign(state_.apps.size(), {});
        used_sum_.assign(state_.apps.size(), {});
    }

    SimulationReport run() {
        SimTime first = 0;
        for (const auto& app : state_.apps) {
            push({app.spec.submission_time, EventKind::submit, app.spec.id, 0});
            first = live_ == 0 ? app.spec.submission_time : std::min(first, app.spec.submission_time);
            ++live_;
        }
        if (live_ > 0) {
            const SimTime interval = cfg_.monitor_interval;
            push({((first + interval - 1) / interval) * interval, EventKind::monitor_tick, 0, 0});
        }

        while (!events_.empty()) {
            const Event ev = events_.top();
            events_.pop();
            if (ev.time > state_.clock) {
                accrue_work(state_, ev.time - state_.clock);
                state_.clock = ev.time;
            }
            switch (ev.kind) {
                case EventKind::submit:
                case EventKind::resubmit:
                    state_.enqueue(ev.id);
                    scheduling_pass();
                    break;
                case EventKind::app_complete: on_complete(ev.id, ev.version); break;
                case EventKind::monitor_tick: on_monitor_tick(); break;
                case EventKind::shape_tick: on_shape_tick(); break;
            }
            flush_completions();
            if (cfg_.check_invariants) check_invariants();
        }
        return build_report();
    }

private:
    void push(const Event& e) { events_.push(e); }

    ComponentState& component(ComponentId id) {
        const auto& [app, idx] = owner_.at(static_cast<std::size_t>(id));
        return state_.app(app).components[idx];
    }

    bool shaping() const { return cfg_.policy != Policy::baseline; }

    void mark(AppId id) { dirty_.insert(id); }

    // Completion events are predicted from the current rate and re-issued whenever it changes.
    void flush_completions() {
        for (AppId id : dirty_) {
            ++version_[static_cast<std::size_t>(id)];
            const auto& app = state_.app(id);
            if (app.status != AppStatus::running) continue;
            const int rate = app.running_components();
            if (rate == 0) continue;
            const double remaining = std::max(0.0, app.spec.total_work - app.accrued_work());
            const auto dt = static_cast<SimTime>(std::ceil(remaining / rate - 1e-9));
            push({state_.clock + std::max<SimTime>(dt, 0), EventKind::app_complete, id,
                  version_[static_cast<std::size_t>(id)]});
        }
        dirty_.clear();
    }

    void on_complete(AppId id, std::uint64_t version) {
        if (version != version_[static_cast<std::size_t>(id)]) return;
        auto& app = state_.app(id);
        if (app.status != AppStatus::running) return;
        if (app.accrued_work() < app.spec.total_work - 1e-6) {
            mark(id);
            return;
        }
        for (auto& c : app.components) {
            if (c.running()) unplace(c);
            c.status = ComponentStatus::finished;
        }
        app.status = AppStatus::finished;
        app.completion_time = state_.clock;
        state_.running.erase(id);
        --live_;
        ++version_[static_cast<std::size_t>(id)];
        scheduling_pass();
    }

    void on_monitor_tick() {
        if (live_ == 0) return;
        const SimTime now = state_.clock;
        std::vector<std::pair<ComponentId, ResourceVector>> observed;
        for (AppId id : state_.running) {
            for (auto& c : state_.app(id).components) {
                if (!c.running()) continue;
                const auto tick = (now - c.start_time) / kUsageResolution;
                const ResourceVector& sample = trace_.usage_for(c.spec.usage_profile_id).at(tick);
                // CPU is time-shared: demand above the allocation is throttled, never fatal.
                c.used = {std::min(sample.cpus, c.allocated.cpus), sample.memory};
                observed.emplace_back(c.spec.id, sample);
            }
        }

        if (shaping()) {
            // memory above allocation kills the component
            std::vector<ComponentId> crashed;
            for (AppId id : state_.scheduling_order())
                for (const auto& c : state_.app(id).components)
                    if (c.running() && c.used.memory > c.allocated.memory) crashed.push_back(c.spec.id);
            for (ComponentId cid : crashed) kill_component(cid);

            if (cfg_.policy == Policy::optimistic) {
                state_.refresh_hosts();
                for (ComponentId cid : overload_check(state_)) kill_component(cid);
            }

            for (const auto& [cid, sample] : observed) {
                const auto& c = component(cid);
                if (!c.running()) continue;
                auto& f = forecasters_[static_cast<std::size_t>(cid)];
                if (!f) continue;
                (*f)[0].observe(now, sample.cpus);
                (*f)[1].observe(now, sample.memory);
                if (hooks_.on_observe) hooks_.on_observe(now, cid, sample);
            }
        }

        state_.refresh_hosts();
        TickSample sample{now, {}, {}};
        for (const auto& h : state_.hosts) {
            sample.allocated += h.allocated;
            sample.used += h.used;
        }
        ticks_.push_back(sample);
        for (AppId id : state_.running) {
            for (const auto& c : state_.app(id).components) {
                if (!c.running()) continue;
                alloc_sum_[static_cast<std::size_t>(id)] += c.allocated;
                used_sum_[static_cast<std::size_t>(id)] += c.used;
            }
        }
        push({now, EventKind::shape_tick, 0, 0});
    }

    void on_shape_tick() {
        const SimTime now = state_.clock;
        if (shaping()) {
            DemandMap demands;
            for (AppId id : state_.running) {
                const auto& app = state_.app(id);
                const bool exempt = app.failure_count >= cfg_.max_failures_before_exempt;
                for (const auto& c : app.components) {
                    if (!c.running()) continue;
                    if (exempt || c.time_alive(now) < cfg_.grace_period) {
                        demands.emplace(c.spec.id, c.spec.reservation);
                        continue;
                    }
                    const auto& f = *forecasters_[static_cast<std::size_t>(c.spec.id)];
                    const ResourcePrediction p{f[0].predict(), f[1].predict()};
                    if (hooks_.on_predict) hooks_.on_predict(now, c.spec.id, p);
                    demands.emplace(c.spec.id, shaped_demand(c.spec.reservation, p, cfg_.buffer));
                }
            }
            const ShapingPlan plan = cfg_.policy == Policy::pessimistic ? plan_pessimistic(state_, demands)
                                                                        : resolve_optimistic(state_, demands);
            for (AppId id : plan.preempted_apps) kill_app(id, KillReason::preemption);
            for (ComponentId cid : plan.preempted_elastic) drop_elastic(cid);
            for (const auto& a : plan.new_allocations) component(a.component).allocated = a.resources;
            state_.refresh_hosts();
        }
        scheduling_pass();
        if (live_ > 0) push({now + cfg_.monitor_interval, EventKind::monitor_tick, 0, 0});
    }

    void scheduling_pass() {
        state_.refresh_hosts();
        const auto placements = schedule_pending(state_);
        if (placements.empty()) return;
        for (const auto& p : placements) {
            auto& app = state_.app(p.app);
            if (app.status == AppStatus::queued) {
                state_.queue.erase({app.spec.priority_key, p.app});
                state_.running.insert(p.app);
                app.status = AppStatus::running;
                if (!app.first_start) app.first_start = state_.clock;
            }
            place(component(p.component), p.host);
            mark(p.app);
        }
        state_.refresh_hosts();
    }

    void place(ComponentState& c, HostId host) {
        c.host = host;
        c.start_time = state_.clock;
        c.status = ComponentStatus::running;
        c.allocated = c.spec.reservation;
        const auto& first = trace_.usage_for(c.spec.usage_profile_id).at(0);
        c.used = {std::min(first.cpus, c.allocated.cpus), first.memory};
        c.work_since_placement = 0.0;
        if (shaping()) {
            // a new container starts with no history
            auto make = [&](Dimension d) {
                std::optional<OracleTruth> truth;
                if (cfg_.forecaster.tag == ForecasterTag::oracle)
                    truth = OracleTruth{trace_.usage_for(c.spec.usage_profile_id).samples, d, c.start_time};
                return Forecaster(cfg_.forecaster, c.spec.reservation[d], cfg_.monitor_interval, truth);
            };
            forecasters_[static_cast<std::size_t>(c.spec.id)] =
                std::array<Forecaster, 2>{make(Dimension::cpus), make(Dimension::memory)};
        }
    }

    void unplace(ComponentState& c) {
        c.host.reset();
        c.allocated = {};
        c.used = {};
        c.work_since_placement = 0.0;
        forecasters_[static_cast<std::size_t>(c.spec.id)].reset();
    }

    void kill_component(ComponentId cid) {
        const auto& c = component(cid);
        if (!c.running()) return;
        if (c.spec.kind == ComponentKind::core)
            kill_app(c.spec.application_id, KillReason::crash);
        else
            drop_elastic(cid);
    }

    // Partial preemption: the application keeps running without this component.
    void drop_elastic(ComponentId cid) {
        auto& c = component(cid);
        if (!c.running()) return;
        auto& app = state_.app(c.spec.application_id);
        app.lost_work += cfg_.elastic_loss_fraction * c.work_since_placement;
        unplace(c);
        c.status = ComponentStatus::preempted;
        ++component_losses_[c.spec.application_id];
        mark(app.spec.id);
    }

    void kill_app(AppId id, KillReason reason) {
        auto& app = state_.app(id);
        if (app.status != AppStatus::running) return;
        app.lost_work = app.work_ledger();
        for (auto& c : app.components) {
            if (c.running()) unplace(c);
            c.status = ComponentStatus::pending;
            c.work_since_placement = 0.0;
        }
        if (reason == KillReason::crash)
            ++app.failure_count;
        else
            ++app.preemption_count;
        state_.running.erase(id);
        ++version_[static_cast<std::size_t>(id)];
        // Shaper preemptions are not capped: the oldest running application is never
        // preempted, so every application eventually completes.
        if (app.failure_count > cfg_.max_resubmissions) {
            app.status = AppStatus::failed;
            --live_;
        } else {
            // not in the queue until the resubmit event fires
            app.status = AppStatus::queued;
            push({state_.clock, EventKind::resubmit, id, 0});
        }
    }

    void check_invariants() const {
        std::vector<ResourceVector> alloc(state_.hosts.size());
        for (AppId id : state_.running) {
            const auto& app = state_.app(id);
            if (app.status != AppStatus::running) throw std::logic_error("non-running app in running set");
            if (app.accrued_work() < -1e-9 || app.accrued_work() > app.spec.total_work + 1e-6)
                throw std::logic_error("accrued work out of range for app " + std::to_string(id));
            for (const auto& c : app.components) {
                if (!c.running()) continue;
                if (!c.host || *c.host < 0 || *c.host >= static_cast<HostId>(state_.hosts.size()))
                    throw std::logic_error("running component without a valid host");
                alloc[static_cast<std::size_t>(*c.host)] += c.allocated;
                if (cfg_.policy == Policy::baseline && !(c.allocated == c.spec.reservation))
                    throw std::logic_error("baseline allocation differs from reservation");
            }
        }
        for (const auto& [key, id] : state_.queue)
            if (state_.app(id).status != AppStatus::queued) throw std::logic_error("non-queued app in queue");
        for (std::size_t h = 0; h < state_.hosts.size(); ++h) {
            const auto& host = state_.hosts[h];
            for (Dimension d : kDimensions) {
                const double tol = 1e-6 * std::max(1.0, host.capacity[d]);
                if (std::abs(alloc[h][d] - host.allocated[d]) > tol)
                    throw std::logic_error("host " + std::to_string(h) + " allocation does not reconcile");
                if (cfg_.policy != Policy::optimistic && host.allocated[d] > host.capacity[d] + tol)
                    throw std::logic_error("host " + std::to_string(h) + " allocated beyond capacity in " +
                                           to_string(d));
            }
        }
    }

    SimulationReport build_report() const {
        SimulationReport report;
        report.config = cfg_;
        report.ticks = ticks_;
        report.apps.reserve(state_.apps.size());
        for (const auto& app : state_.apps) {
            AppRecord r;
            r.id = app.spec.id;
            r.kind = app.spec.kind;
            r.runtime_s = app.spec.total_work / static_cast<double>(app.spec.component_count());
            r.first_submission = app.first_submission;
            r.first_start = app.first_start;
            r.completion = app.completion_time;
            r.failure_count = app.failure_count;
            r.preemption_count = app.preemption_count;
            const auto it = component_losses_.find(app.spec.id);
            r.component_losses = it == component_losses_.end() ? 0 : it->second;
            r.total_work = app.spec.total_work;
            r.work_ledger = app.work_ledger();
            r.lost_work = app.lost_work;
            r.permanently_failed = app.status == AppStatus::failed;
            r.allocated_sum = alloc_sum_[static_cast<std::size_t>(app.spec.id)];
            r.used_sum = used_sum_[static_cast<std::size_t>(app.spec.id)];
            report.apps.push_back(r);
        }
        report.aggregates = compute_aggregates(report);
        return report;
    }

    const WorkloadTrace& trace_;
    SimConfig cfg_;
    RunHooks hooks_;
    ClusterState state_;
    std::vector<std::pair<AppId, std::size_t>> owner_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::vector<std::uint64_t> version_;
    std::set<AppId> dirty_;
    std::vector<std::optional<std::array<Forecaster, 2>>> forecasters_;
    std::map<AppId, int> component_losses_;
    std::vector<ResourceVector> alloc_sum_;
    std::vector<ResourceVector> used_sum_;
    std::vector<TickSample> ticks_;
    std::size_t live_ = 0;
};

}  // namespace

SimulationReport run(const WorkloadTrace& trace, const SimConfig& config, const RunHooks& hooks) {
    return Simulation(trace, config, hooks).run();
}

}  // namespace shapesim
