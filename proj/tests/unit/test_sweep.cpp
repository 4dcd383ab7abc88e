#include <doctest.h>

#include "shapesim/sweep.hpp"

using namespace shapesim;

namespace {

WorkloadTrace small_trace() {
    WorkloadConfig w;
    w.n_applications = 30;
    w.inter_arrival = GaussianSpec{30.0, 10.0};
    w.rng_seed = 9;
    return generate(w);
}

SimConfig base_config() {
    SimConfig c;
    c.policy = Policy::pessimistic;
    c.host_count = 2;
    c.grace_period = 0;
    return c;
}

}  // namespace

TEST_CASE("k1 = 1 has a turnaround ratio of exactly one") {
    const auto r = sweep(small_trace(), base_config(), {1.0}, {0.0});
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].turnaround_ratio == 1.0);
    CHECK(r.cells[0].mem_slack == r.baseline.mem_slack);
}

TEST_CASE("the result does not depend on the number of workers") {
    const auto trace = small_trace();
    const std::vector<double> k1s{0.0, 0.05, 0.2, 1.0}, k2s{0.0, 1.0, 3.0, 5.0};
    const auto one = sweep_csv(sweep(trace, base_config(), k1s, k2s, 1));
    const auto many = sweep_csv(sweep(trace, base_config(), k1s, k2s, 4));
    CHECK(one == many);
    // header + baseline + 16 cells
    CHECK(std::count(one.begin(), one.end(), '\n') == 18);
    CHECK(one.rfind("k1,k2,turnaround_ratio,mem_slack,cpu_slack,failure_pct\nbaseline,baseline,1,", 0) == 0);
}

TEST_CASE("cells are k1-major") {
    const auto r = sweep(small_trace(), base_config(), {0.1, 0.2}, {0.0, 1.0});
    REQUIRE(r.cells.size() == 4);
    CHECK(r.cells[1].k1 == 0.1);
    CHECK(r.cells[1].k2 == 1.0);
    CHECK(r.cells[2].k1 == 0.2);
    CHECK(r.cells[2].k2 == 0.0);
}

TEST_CASE("a bad grid point is named in the error") {
    try {
        sweep(small_trace(), base_config(), {0.1, 1.5}, {0.0});
        FAIL("expected a sweep error");
    } catch (const SweepError& e) {
        CHECK(std::string(e.what()).find("k1=1.5 k2=0") != std::string::npos);
    }
}
