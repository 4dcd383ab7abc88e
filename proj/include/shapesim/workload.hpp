#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "shapesim/domain.hpp"

namespace shapesim {

inline constexpr SimTime kUsageResolution = 60;  // seconds per usage sample

struct GaussianSpec {
    double mu = 120.0;
    double sigma = 40.0;
    friend bool operator==(const GaussianSpec&, const GaussianSpec&) = default;
};

// Fast-paced bursts mixed with longer gaps between submissions.
struct BimodalSpec {
    double burst_mu = 10.0;
    double burst_sigma = 5.0;
    double gap_mu = 300.0;
    double gap_sigma = 100.0;
    double burst_prob = 0.5;
    friend bool operator==(const BimodalSpec&, const BimodalSpec&) = default;
};

using InterArrivalSpec = std::variant<GaussianSpec, BimodalSpec>;

double mean_of(const InterArrivalSpec& spec);

struct IntRange {
    int min = 1;
    int max = 1;
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RealRange {
    double min = 0.0;
    double max = 0.0;
    friend bool operator==(const RealRange&, const RealRange&) = default;
};

// Log-normal runtime clamped to [min_s, max_s].
struct RuntimeSpec {
    double median_s = 2700.0;
    double sigma = 0.8;
    double min_s = 600.0;
    double max_s = 14400.0;
    friend bool operator==(const RuntimeSpec&, const RuntimeSpec&) = default;
};

struct PatternWeights {
    double constant = 1.0;
    double ramp = 1.0;
    double periodic = 1.0;
    double spiky = 1.0;
    friend bool operator==(const PatternWeights&, const PatternWeights&) = default;
};

struct WorkloadConfig {
    int n_applications = 100;
    double elastic_fraction = 0.6;
    InterArrivalSpec inter_arrival = GaussianSpec{};
    IntRange core_count{1, 3};
    IntRange elastic_count{1, 6};
    RealRange cpus{0.5, 6.0};
    RealRange memory_mb{1024.0, 16384.0};
    RuntimeSpec runtime{};
    RealRange usage_level{0.15, 0.55};  // mean usage as a fraction of reservation
    double usage_noise = 0.03;          // per-tick noise, fraction of reservation
    PatternWeights pattern_weights{};
    std::uint64_t rng_seed = 1;

    friend bool operator==(const WorkloadConfig&, const WorkloadConfig&) = default;
};

class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void validate(const WorkloadConfig& config);

struct UsageSeries {
    ComponentId component_id = 0;
    std::vector<ResourceVector> samples;  // one per kUsageResolution tick

    /// Sample at `tick`, holding the last sample once the series is exhausted.
    const ResourceVector& at(std::int64_t tick) const;

    friend bool operator==(const UsageSeries&, const UsageSeries&) = default;
};

struct WorkloadTrace {
    WorkloadConfig config;
    std::vector<ApplicationSpec> applications;  // ids 0..n-1, sorted by submission
    std::vector<UsageSeries> usage;             // indexed by ComponentId

    std::size_t component_count() const { return usage.size(); }
    const UsageSeries& usage_for(ComponentId id) const { return usage.at(static_cast<std::size_t>(id)); }

    friend bool operator==(const WorkloadTrace&, const WorkloadTrace&) = default;
};

struct ConstantPattern {
    double level = 0.4;
};

struct RampPattern {
    double start = 0.2;
    double end = 0.8;
    double noise = 0.0;
};

struct PeriodicPattern {
    double base = 0.5;
    double amplitude = 0.3;
    double period_ticks = 30.0;
    double phase = 0.0;
    double noise = 0.0;
};

// Low base load with occasional bursts close to the reservation. At least one
// burst reaches `spike_level` so the reservation is peak-justified.
struct SpikyPattern {
    double base = 0.3;
    double spike_prob = 0.05;
    double spike_level = 0.95;
    double noise = 0.0;
};

using UsagePattern = std::variant<ConstantPattern, RampPattern, PeriodicPattern, SpikyPattern>;

/// Usage fractions are clamped into (0, 1] of the reservation.
inline constexpr double kMinUsageFraction = 0.01;

UsageSeries synth_usage(const ComponentSpec& spec, const UsagePattern& pattern, std::size_t n_ticks,
                        std::mt19937_64& rng);

WorkloadTrace generate(const WorkloadConfig& config);

/// Number of usage ticks covering a runtime of `runtime_s` seconds.
std::size_t ticks_for_runtime(SimTime runtime_s);

}  // namespace shapesim
