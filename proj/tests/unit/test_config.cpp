#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "../support.hpp"
#include "shapesim/config.hpp"

using namespace shapesim;
using nlohmann::json;

TEST_CASE("configs round-trip through json") {
    WorkloadConfig w;
    w.n_applications = 12;
    w.inter_arrival = BimodalSpec{5.0, 2.0, 90.0, 10.0, 0.3};
    w.memory_mb = {2048.0, 4096.0};
    w.rng_seed = 99;
    CHECK(workload_config_from_json(to_json(w)) == w);

    SimConfig s;
    s.policy = Policy::optimistic;
    s.forecaster.tag = forecast::ForecasterTag::gp;
    s.forecaster.kernel = forecast::KernelKind::rbf;
    s.forecaster.history = 40;
    s.buffer = {0.25, 2.0};
    s.grace_period = 0;
    s.host_capacity = {16.0, 65536.0};
    CHECK(sim_config_from_json(to_json(s)) == s);
}

TEST_CASE("missing fields keep their defaults") {
    const auto c = experiment_config_from_json(json::parse(R"({"sim": {"k1": 0.5}})"));
    CHECK(c.workload == WorkloadConfig{});
    CHECK(c.sim.buffer.k1 == 0.5);
    CHECK(c.sim.buffer.k2 == BufferParams{}.k2);
}

TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"sim": {"k3": 1}})")), InvalidConfig);
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"simulation": {}})")), InvalidConfig);
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"workload": {"runtime": {"mean": 3}}})")),
                    InvalidConfig);
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"sim": {"policy": "greedy"}})")), InvalidConfig);
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"sim": {"k1": "high"}})")), InvalidConfig);
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"sim": {"k1": 1.5}})")), InvalidConfig);
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"sim": {"forecaster": {"kind": "lstm"}}})")),
                    InvalidConfig);
    CHECK_THROWS_AS(experiment_config_from_json(json::parse(R"({"workload": {"n_applications": -3}})")),
                    InvalidConfig);
    try {
        experiment_config_from_json(json::parse(R"({"workload": {"cpus": {"min": 1, "mean": 2}}})"));
        FAIL("expected InvalidConfig");
    } catch (const InvalidConfig& e) {
        CHECK(std::string(e.what()).find("workload.cpus") != std::string::npos);
        CHECK(std::string(e.what()).find("mean") != std::string::npos);
    }
}

TEST_CASE("SHAPESIM_SEED overrides the workload seed") {
    const auto dir = testing::scratch_dir("config");
    const auto path = dir / "c.json";
    std::ofstream(path) << R"({"workload": {"rng_seed": 5}})";
    ::unsetenv("SHAPESIM_SEED");
    CHECK(load_config(path).workload.rng_seed == 5);
    ::setenv("SHAPESIM_SEED", "42", 1);
    CHECK(load_config(path).workload.rng_seed == 42);
    ::setenv("SHAPESIM_SEED", "forty-two", 1);
    CHECK_THROWS_AS(load_config(path), InvalidConfig);
    ::unsetenv("SHAPESIM_SEED");
    std::filesystem::remove_all(dir);
}

TEST_CASE("the shipped desk config parses") {
    const auto c = load_config(SHAPESIM_SOURCE_DIR "/configs/desk.json");
    CHECK(c.workload.n_applications == 1000);
    CHECK(c.sim.host_count == 20);
}
