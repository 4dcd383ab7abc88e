#include "shapesim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace shapesim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidConfig("invalid workload config: " + what);
}

void require_range(const RealRange& r, const std::string& name) {
    require(std::isfinite(r.min) && std::isfinite(r.max) && r.min > 0.0 && r.min <= r.max,
            name + " must satisfy 0 < min <= max");
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
}

SimTime sample_inter_arrival(const InterArrivalSpec& spec, std::mt19937_64& rng) {
    double x = std::visit(
        [&rng](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                return std::normal_distribution<double>(s.mu, s.sigma)(rng);
            } else {
                const bool burst = std::bernoulli_distribution(s.burst_prob)(rng);
                return burst ? std::normal_distribution<double>(s.burst_mu, s.burst_sigma)(rng)
                             : std::normal_distribution<double>(s.gap_mu, s.gap_sigma)(rng);
            }
        },
        spec);
    return std::max<SimTime>(1, static_cast<SimTime>(std::llround(x)));
}

SimTime sample_runtime(const RuntimeSpec& spec, std::mt19937_64& rng) {
    const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
    const double x = std::exp(std::log(spec.median_s) + spec.sigma * z);
    return static_cast<SimTime>(std::llround(std::clamp(x, spec.min_s, spec.max_s)));
}

ResourceVector sample_reservation(const WorkloadConfig& config, std::mt19937_64& rng) {
    // cores in tenths, memory in whole MB
    double cpus = std::round(uniform(rng, config.cpus.min, config.cpus.max) * 10.0) / 10.0;
    double mem = std::round(uniform(rng, config.memory_mb.min, config.memory_mb.max));
    cpus = std::clamp(cpus, config.cpus.min, config.cpus.max);
    mem = std::clamp(mem, config.memory_mb.min, config.memory_mb.max);
    return {cpus, mem};
}

UsagePattern sample_pattern(const WorkloadConfig& config, std::mt19937_64& rng) {
    const auto& w = config.pattern_weights;
    std::discrete_distribution<int> pick({w.constant, w.ramp, w.periodic, w.spiky});
    const int which = pick(rng);
    const double level = uniform(rng, config.usage_level.min, config.usage_level.max);
    const double noise = config.usage_noise;
    switch (which) {
        case 0:
            return ConstantPattern{level};
        case 1: {
            const double lo = 0.5 * level;
            const double hi = std::min(1.0, 1.5 * level);
            const bool up = std::bernoulli_distribution(0.5)(rng);
            return RampPattern{up ? lo : hi, up ? hi : lo, noise};
        }
        case 2: {
            const double room = std::max(0.0, std::min(level - 0.02, 1.0 - level));
            return PeriodicPattern{level, uniform(rng, 0.3, 0.9) * room, uniform(rng, 10.0, 60.0),
                                   uniform(rng, 0.0, 2.0 * std::numbers::pi), noise};
        }
        default:
            return SpikyPattern{0.8 * level, uniform(rng, 0.02, 0.08), uniform(rng, 0.9, 1.0), noise};
    }
}

std::mt19937_64 component_rng(std::uint64_t seed, ComponentId id) {
    const auto uid = static_cast<std::uint64_t>(id);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(uid), static_cast<std::uint32_t>(uid >> 32), 0x5eedu};
    return std::mt19937_64(seq);
}

}  // namespace

double mean_of(const InterArrivalSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                return s.mu;
            } else {
                return s.burst_prob * s.burst_mu + (1.0 - s.burst_prob) * s.gap_mu;
            }
        },
        spec);
}

void validate(const WorkloadConfig& c) {
    require(c.n_applications >= 0, "n_applications must be >= 0");
    require(c.elastic_fraction >= 0.0 && c.elastic_fraction <= 1.0, "elastic_fraction must be in [0,1]");
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpec>) {
                require(s.mu > 0.0 && s.sigma > 0.0, "gaussian inter_arrival needs mu, sigma > 0");
            } else {
                require(s.burst_mu > 0.0 && s.burst_sigma > 0.0 && s.gap_mu > 0.0 && s.gap_sigma > 0.0,
                        "bimodal inter_arrival parameters must be > 0");
                require(s.burst_prob >= 0.0 && s.burst_prob <= 1.0, "burst_prob must be in [0,1]");
            }
        },
        c.inter_arrival);
    require(c.core_count.min >= 1 && c.core_count.min <= c.core_count.max, "core_count must satisfy 1 <= min <= max");
    require(c.elastic_count.min >= 1 && c.elastic_count.min <= c.elastic_count.max,
            "elastic_count must satisfy 1 <= min <= max");
    require_range(c.cpus, "cpus");
    require(c.cpus.max <= 6.0, "cpus reservation is capped at 6 cores");
    require_range(c.memory_mb, "memory_mb");
    require(c.runtime.median_s > 0.0 && c.runtime.sigma > 0.0, "runtime median_s and sigma must be > 0");
    require(c.runtime.min_s >= 1.0 && c.runtime.min_s <= c.runtime.max_s, "runtime must satisfy 1 <= min_s <= max_s");
    require_range(c.usage_level, "usage_level");
    require(c.usage_level.max <= 1.0, "usage_level must lie in (0,1]");
    require(c.usage_noise >= 0.0 && std::isfinite(c.usage_noise), "usage_noise must be >= 0");
    const auto& w = c.pattern_weights;
    require(w.constant >= 0 && w.ramp >= 0 && w.periodic >= 0 && w.spiky >= 0, "pattern weights must be >= 0");
    require(w.constant + w.ramp + w.periodic + w.spiky > 0, "at least one pattern weight must be positive");
}

const ResourceVector& UsageSeries::at(std::int64_t tick) const {
    const auto last = static_cast<std::int64_t>(samples.size()) - 1;
    return samples.at(static_cast<std::size_t>(std::clamp<std::int64_t>(tick, 0, last)));
}

std::size_t ticks_for_runtime(SimTime runtime_s) {
    return static_cast<std::size_t>((runtime_s + kUsageResolution - 1) / kUsageResolution) + 1;
}

UsageSeries synth_usage(const ComponentSpec& spec, const UsagePattern& pattern, std::size_t n_ticks,
                        std::mt19937_64& rng) {
    // Noise-free shape shared by both dimensions; noise is drawn per dimension.
    std::vector<double> shape(n_ticks);
    std::vector<bool> pinned(n_ticks, false);
    double noise = 0.0;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantPattern>) {
                std::fill(shape.begin(), shape.end(), p.level);
                std::fill(pinned.begin(), pinned.end(), true);
            } else if constexpr (std::is_same_v<T, RampPattern>) {
                noise = p.noise;
                const double span = n_ticks > 1 ? static_cast<double>(n_ticks - 1) : 1.0;
                for (std::size_t t = 0; t < n_ticks; ++t)
                    shape[t] = p.start + (p.end - p.start) * static_cast<double>(t) / span;
            } else if constexpr (std::is_same_v<T, PeriodicPattern>) {
                noise = p.noise;
                for (std::size_t t = 0; t < n_ticks; ++t)
                    shape[t] = p.base + p.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) /
                                                                   p.period_ticks +
                                                               p.phase);
            } else {
                noise = p.noise;
                std::bernoulli_distribution spike(p.spike_prob);
                for (std::size_t t = 0; t < n_ticks; ++t) {
                    const bool s = spike(rng);
                    shape[t] = s ? p.spike_level : p.base;
                    pinned[t] = s;
                }
                const auto forced = std::uniform_int_distribution<std::size_t>(0, n_ticks - 1)(rng);
                shape[forced] = p.spike_level;
                pinned[forced] = true;
            }
        },
        pattern);

    UsageSeries series{spec.id, std::vector<ResourceVector>(n_ticks)};
    std::normal_distribution<double> jitter(0.0, 1.0);
    for (Dimension d : kDimensions) {
        const double reservation = spec.reservation[d];
        for (std::size_t t = 0; t < n_ticks; ++t) {
            double f = shape[t];
            if (!pinned[t] && noise > 0.0) f += noise * jitter(rng);
            f = std::clamp(f, kMinUsageFraction, 1.0);
            series.samples[t][d] = f * reservation;
        }
    }
    return series;
}

WorkloadTrace generate(const WorkloadConfig& config) {
    validate(config);
    WorkloadTrace trace;
    trace.config = config;
    trace.applications.reserve(static_cast<std::size_t>(config.n_applications));

    std::mt19937_64 rng(config.rng_seed);
    SimTime clock = 0;
    ComponentId next_component = 0;
    for (int i = 0; i < config.n_applications; ++i) {
        clock += sample_inter_arrival(config.inter_arrival, rng);
        ApplicationSpec app;
        app.id = i;
        app.kind = std::bernoulli_distribution(config.elastic_fraction)(rng) ? AppKind::elastic : AppKind::rigid;
        app.submission_time = clock;
        app.priority_key = clock;

        const int cores = std::uniform_int_distribution<int>(config.core_count.min, config.core_count.max)(rng);
        const int elastics =
            app.kind == AppKind::elastic
                ? std::uniform_int_distribution<int>(config.elastic_count.min, config.elastic_count.max)(rng)
                : 0;
        const ResourceVector core_res = sample_reservation(config, rng);
        const ResourceVector elastic_res = app.kind == AppKind::elastic ? sample_reservation(config, rng) : core_res;
        const SimTime runtime = sample_runtime(config.runtime, rng);
        app.total_work = static_cast<double>(runtime) * static_cast<double>(cores + elastics);

        auto add = [&](ComponentKind kind, const ResourceVector& res, std::vector<ComponentSpec>& into) {
            ComponentSpec c{next_component, app.id, kind, res, next_component};
            ++next_component;
            into.push_back(c);
            auto crng = component_rng(config.rng_seed, c.id);
            const UsagePattern pattern = sample_pattern(config, crng);
            trace.usage.push_back(synth_usage(c, pattern, ticks_for_runtime(runtime), crng));
        };
        for (int k = 0; k < cores; ++k) add(ComponentKind::core, core_res, app.core_components);
        for (int k = 0; k < elastics; ++k) add(ComponentKind::elastic, elastic_res, app.elastic_components);
        trace.applications.push_back(std::move(app));
    }
    return trace;
}

}  // namespace shapesim
