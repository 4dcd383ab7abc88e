#pragma once

#include <string>

#include "shapesim/forecast/forecaster.hpp"
#include "shapesim/shaper.hpp"

namespace shapesim {

enum class Policy { baseline, optimistic, pessimistic };

std::string to_string(Policy policy);
Policy policy_from_string(const std::string& name);

struct SimConfig {
    Policy policy = Policy::baseline;
    forecast::ForecasterKind forecaster{};
    BufferParams buffer{};
    SimTime monitor_interval = 60;
    SimTime grace_period = 600;
    int max_failures_before_exempt = 3;
    int max_resubmissions = 10;  // crash resubmissions before an app is permanently failed
    double elastic_loss_fraction = 1.0;  // lambda: share of a preempted elastic component's work that is lost
    int host_count = 20;
    ResourceVector host_capacity{32.0, 131072.0};
    bool check_invariants = false;  // reconcile cluster state after every event (tests)

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

void validate(const SimConfig& config);

}  // namespace shapesim
