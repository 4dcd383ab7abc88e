#include "shapesim/config.hpp"

#include <cstdlib>
#include <set>
#include <string>

#include "shapesim/io_util.hpp"

namespace shapesim {

using nlohmann::json;

namespace {

// Reads fields out of one JSON object and rejects whatever was not consumed.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw InvalidConfig(path_ + ": expected an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw InvalidConfig(path_ + "." + key + ": wrong type");
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string path(const char* key) const { return path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.contains(key)) throw InvalidConfig(path_ + ": unknown key '" + key + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json range_json(const IntRange& r) { return {{"min", r.min}, {"max", r.max}}; }
json range_json(const RealRange& r) { return {{"min", r.min}, {"max", r.max}}; }

template <typename Range>
void read_range(ObjectReader& parent, const char* key, Range& out) {
    if (const json* j = parent.child(key)) {
        ObjectReader r(*j, parent.path(key));
        r.read("min", out.min);
        r.read("max", out.max);
        r.finish();
    }
}

template <typename Fn>
auto wrap_invalid(Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidConfig&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw InvalidConfig(e.what());
    }
}

}  // namespace

json to_json(const WorkloadConfig& c) {
    json arrival = std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianSpec>)
                return {{"kind", "gaussian"}, {"mu", s.mu}, {"sigma", s.sigma}};
            else
                return {{"kind", "bimodal"},       {"burst_mu", s.burst_mu},   {"burst_sigma", s.burst_sigma},
                        {"gap_mu", s.gap_mu},      {"gap_sigma", s.gap_sigma}, {"burst_prob", s.burst_prob}};
        },
        c.inter_arrival);
    return {
        {"n_applications", c.n_applications},
        {"elastic_fraction", c.elastic_fraction},
        {"inter_arrival", arrival},
        {"core_count", range_json(c.core_count)},
        {"elastic_count", range_json(c.elastic_count)},
        {"cpus", range_json(c.cpus)},
        {"memory_mb", range_json(c.memory_mb)},
        {"runtime",
         {{"median_s", c.runtime.median_s},
          {"sigma", c.runtime.sigma},
          {"min_s", c.runtime.min_s},
          {"max_s", c.runtime.max_s}}},
        {"usage_level", range_json(c.usage_level)},
        {"usage_noise", c.usage_noise},
        {"pattern_weights",
         {{"constant", c.pattern_weights.constant},
          {"ramp", c.pattern_weights.ramp},
          {"periodic", c.pattern_weights.periodic},
          {"spiky", c.pattern_weights.spiky}}},
        {"rng_seed", c.rng_seed},
    };
}

json to_json(const SimConfig& c) {
    const auto& f = c.forecaster;
    return {
        {"policy", to_string(c.policy)},
        {"forecaster",
         {{"kind", forecast::to_string(f.tag)},
          {"kernel", std::string(forecast::to_string(f.kernel))},
          {"history", f.history},
          {"window", f.window},
          {"reselect_every", f.reselect_every},
          {"ari_window", f.ari_window}}},
        {"k1", c.buffer.k1},
        {"k2", c.buffer.k2},
        {"monitor_interval", c.monitor_interval},
        {"grace_period", c.grace_period},
        {"max_failures_before_exempt", c.max_failures_before_exempt},
        {"max_resubmissions", c.max_resubmissions},
        {"elastic_loss_fraction", c.elastic_loss_fraction},
        {"host_count", c.host_count},
        {"host_capacity", {{"cpus", c.host_capacity.cpus}, {"memory_mb", c.host_capacity.memory}}},
        {"check_invariants", c.check_invariants},
    };
}

WorkloadConfig workload_config_from_json(const json& j) {
    WorkloadConfig c;
    ObjectReader r(j, "workload");
    r.read("n_applications", c.n_applications);
    r.read("elastic_fraction", c.elastic_fraction);
    if (const json* a = r.child("inter_arrival")) {
        ObjectReader ar(*a, r.path("inter_arrival"));
        std::string kind = "gaussian";
        ar.read("kind", kind);
        if (kind == "gaussian") {
            GaussianSpec g;
            ar.read("mu", g.mu);
            ar.read("sigma", g.sigma);
            c.inter_arrival = g;
        } else if (kind == "bimodal") {
            BimodalSpec b;
            ar.read("burst_mu", b.burst_mu);
            ar.read("burst_sigma", b.burst_sigma);
            ar.read("gap_mu", b.gap_mu);
            ar.read("gap_sigma", b.gap_sigma);
            ar.read("burst_prob", b.burst_prob);
            c.inter_arrival = b;
        } else {
            throw InvalidConfig(r.path("inter_arrival") + ": unknown kind '" + kind + "'");
        }
        ar.finish();
    }
    read_range(r, "core_count", c.core_count);
    read_range(r, "elastic_count", c.elastic_count);
    read_range(r, "cpus", c.cpus);
    read_range(r, "memory_mb", c.memory_mb);
    if (const json* rt = r.child("runtime")) {
        ObjectReader rr(*rt, r.path("runtime"));
        rr.read("median_s", c.runtime.median_s);
        rr.read("sigma", c.runtime.sigma);
        rr.read("min_s", c.runtime.min_s);
        rr.read("max_s", c.runtime.max_s);
        rr.finish();
    }
    read_range(r, "usage_level", c.usage_level);
    r.read("usage_noise", c.usage_noise);
    if (const json* w = r.child("pattern_weights")) {
        ObjectReader wr(*w, r.path("pattern_weights"));
        wr.read("constant", c.pattern_weights.constant);
        wr.read("ramp", c.pattern_weights.ramp);
        wr.read("periodic", c.pattern_weights.periodic);
        wr.read("spiky", c.pattern_weights.spiky);
        wr.finish();
    }
    r.read("rng_seed", c.rng_seed);
    r.finish();
    validate(c);
    return c;
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig c;
    ObjectReader r(j, "sim");
    std::string policy = to_string(c.policy);
    r.read("policy", policy);
    c.policy = wrap_invalid([&] { return policy_from_string(policy); });
    if (const json* f = r.child("forecaster")) {
        ObjectReader fr(*f, r.path("forecaster"));
        std::string kind = forecast::to_string(c.forecaster.tag);
        std::string kernel(forecast::to_string(c.forecaster.kernel));
        fr.read("kind", kind);
        fr.read("kernel", kernel);
        c.forecaster.tag = wrap_invalid([&] { return forecast::forecaster_from_string(kind); });
        c.forecaster.kernel = wrap_invalid([&] { return forecast::kernel_from_string(kernel); });
        fr.read("history", c.forecaster.history);
        fr.read("window", c.forecaster.window);
        fr.read("reselect_every", c.forecaster.reselect_every);
        fr.read("ari_window", c.forecaster.ari_window);
        fr.finish();
    }
    r.read("k1", c.buffer.k1);
    r.read("k2", c.buffer.k2);
    r.read("monitor_interval", c.monitor_interval);
    r.read("grace_period", c.grace_period);
    r.read("max_failures_before_exempt", c.max_failures_before_exempt);
    r.read("max_resubmissions", c.max_resubmissions);
    r.read("elastic_loss_fraction", c.elastic_loss_fraction);
    r.read("host_count", c.host_count);
    if (const json* h = r.child("host_capacity")) {
        ObjectReader hr(*h, r.path("host_capacity"));
        hr.read("cpus", c.host_capacity.cpus);
        hr.read("memory_mb", c.host_capacity.memory);
        hr.finish();
    }
    r.read("check_invariants", c.check_invariants);
    r.finish();
    const auto& f = c.forecaster;
    if (f.history < 1 || f.window < 1 || f.reselect_every < 1 || f.ari_window < forecast::kMinAriObservations)
        throw InvalidConfig("sim.forecaster: history, window, reselect_every must be >= 1 and ari_window >= 5");
    wrap_invalid([&] {
        validate(c);
        return 0;
    });
    return c;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig c;
    ObjectReader r(j, "config");
    if (const json* w = r.child("workload")) c.workload = workload_config_from_json(*w);
    if (const json* s = r.child("sim")) c.sim = sim_config_from_json(*s);
    r.finish();
    return c;
}

std::optional<std::uint64_t> seed_override() {
    const char* env = std::getenv("SHAPESIM_SEED");
    if (env == nullptr || *env == '\0') return std::nullopt;
    long long v = 0;
    try {
        v = parse_integer(env);
    } catch (const std::invalid_argument&) {
        throw InvalidConfig(std::string("SHAPESIM_SEED is not an integer: ") + env);
    }
    if (v < 0) throw InvalidConfig("SHAPESIM_SEED must be >= 0");
    return static_cast<std::uint64_t>(v);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw InvalidConfig(path.string() + ": " + e.what());
    }
    ExperimentConfig c = experiment_config_from_json(j);
    if (const auto seed = seed_override()) c.workload.rng_seed = *seed;
    return c;
}

}  // namespace shapesim
