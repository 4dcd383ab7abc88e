#include <doctest.h>

#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "../support.hpp"

namespace fs = std::filesystem;

namespace {

const char* kConfig = R"({
  "workload": {"n_applications": 30, "inter_arrival": {"kind": "gaussian", "mu": 30, "sigma": 10}, "rng_seed": 4},
  "sim": {"policy": "pessimistic", "forecaster": {"kind": "oracle"}, "k1": 0.05, "k2": 0,
          "grace_period": 0, "host_count": 2}
})";

int cli(const std::string& args) {
    const std::string cmd = std::string(SHAPESIM_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Fixture {
    fs::path dir = shapesim::testing::scratch_dir("cli");
    fs::path config = dir / "config.json";
    fs::path trace = dir / "trace";

    Fixture() {
        spit(config, kConfig);
        REQUIRE(cli("gen --config " + config.string() + " --out " + trace.string()) == 0);
    }
    ~Fixture() { fs::remove_all(dir); }
    std::string p(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("gen writes a manifest and usage table") {
    Fixture f;
    CHECK(fs::exists(f.trace / "manifest.json"));
    CHECK(slurp(f.trace / "usage.csv").rfind("component_id,tick,cpus,mem_mb\n", 0) == 0);
}

TEST_CASE("run is byte-for-byte reproducible") {
    Fixture f;
    const std::string base = "run --trace " + f.trace.string() + " --config " + f.config.string();
    REQUIRE(cli(base + " --out " + f.p("a.json") + " --csv " + f.p("csv")) == 0);
    REQUIRE(cli(base + " --out " + f.p("b.json")) == 0);
    CHECK(slurp(f.p("a.json")) == slurp(f.p("b.json")));
    CHECK(slurp(f.dir / "csv" / "ticks.csv").rfind("t,allocated_cpus", 0) == 0);
    CHECK(fs::exists(f.dir / "csv" / "apps.csv"));
}

TEST_CASE("sweep writes the baseline row and one row per grid point") {
    Fixture f;
    const std::string base = "sweep --trace " + f.trace.string() + " --config " + f.config.string() +
                             " --k1 0,0.05,0.2,1 --k2 0,1,3,5";
    REQUIRE(cli(base + " --out " + f.p("s1.csv")) == 0);
    REQUIRE(cli(base + " --jobs 3 --out " + f.p("s3.csv")) == 0);
    const auto csv = slurp(f.p("s1.csv"));
    CHECK(csv == slurp(f.p("s3.csv")));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 18);
}

TEST_CASE("eval-forecast writes pooled rows") {
    Fixture f;
    REQUIRE(cli("eval-forecast --trace " + f.trace.string() + " --kinds oracle,gp-exp,gp-rbf,ari --h 3,5 --out " +
                     f.p("eval.csv") + " --max-series 10") == 0);
    const auto csv = slurp(f.p("eval.csv"));
    CHECK(csv.rfind("kind,kernel,h,series_id,q1,median,q3,mean,max\n", 0) == 0);
    CHECK(csv.find("\ngp,rbf,5,all,") != std::string::npos);
    CHECK(csv.find("\noracle,,3,all,0,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("usage errors exit with 1 and write nothing") {
    Fixture f;
    const std::string cfg = " --config " + f.config.string();
    CHECK(cli("") == 1);
    CHECK(cli("frobnicate") == 1);
    CHECK(cli("run --trace " + f.p("missing") + cfg + " --out " + f.p("r.json")) == 1);
    CHECK_FALSE(fs::exists(f.p("r.json")));
    CHECK(cli("run --trace " + f.trace.string() + " --config " + f.p("nope.json") + " --out " + f.p("r.json")) == 1);
    CHECK(cli("run --trace " + f.trace.string() + cfg + " --out " + f.p("no/such/dir/r.json")) == 1);
    CHECK(cli("sweep --trace " + f.trace.string() + cfg + " --k1 0,,1 --k2 0 --out " + f.p("s.csv")) == 1);
    CHECK(cli("sweep --trace " + f.trace.string() + cfg + " --k1 x --k2 0 --out " + f.p("s.csv")) == 1);
    CHECK(cli("eval-forecast --trace " + f.trace.string() + " --kinds lstm --h 3 --out " + f.p("e.csv")) == 1);
    CHECK(cli("eval-forecast --trace " + f.trace.string() + " --kinds gp --h 0 --out " + f.p("e.csv")) == 1);
    CHECK_FALSE(fs::exists(f.p("s.csv")));
    CHECK_FALSE(fs::exists(f.p("e.csv")));

    spit(f.p("bad.json"), R"({"workload": {"n_apps": 3}})");
    CHECK(cli("gen --config " + f.p("bad.json") + " --out " + f.p("t2")) == 1);
    CHECK_FALSE(fs::exists(f.p("t2")));
}

TEST_CASE("a corrupt trace is a runtime error (exit 2)") {
    Fixture f;
    auto usage = slurp(f.trace / "usage.csv");
    usage += "0,999,1,1\n";
    spit(f.trace / "usage.csv", usage);
    CHECK(cli("run --trace " + f.trace.string() + " --config " + f.config.string() + " --out " + f.p("r.json")) ==
          2);
    CHECK_FALSE(fs::exists(f.p("r.json")));
}
