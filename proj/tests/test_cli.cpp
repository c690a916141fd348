#include "cli.hpp"

#include "spotsched/config.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = spotsched::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "spotsched-cli-test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double field(const std::string& text, const std::string& key) {
    const auto at = text.find(key + " ");
    REQUIRE(at != std::string::npos);
    return std::stod(text.substr(at + key.size() + 1));
}

}  // namespace

TEST_CASE("oracle mm1n") {
    const auto r = cli({"oracle", "mm1n", "--k", "10", "--lambda", "0.08333333", "--mu", "0.04166667", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(field(r.out, "expected_cost") == doctest::Approx(5.8).epsilon(1e-6));
    CHECK(field(r.out, "delay_lower_bound") == doctest::Approx(27.2).epsilon(1e-6));
}

TEST_CASE("oracle single-slot and constructions") {
    auto r = cli({"oracle", "single-slot", "--k", "10", "--mu", "0.04166667", "--delta", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("cost 8.87499") != std::string::npos);
    r = cli({"oracle", "det-wait", "--lambda", "0.0833333333333333", "--mu", "0.0416666666666667", "--delta", "3"});
    CHECK(r.out.find("x 4.3757") != std::string::npos);
    r = cli({"oracle", "exp-wait", "--lambda", "0.0833333333333333", "--mu", "0.0416666666666667", "--delta", "3"});
    CHECK(r.out.find("phi 0.20833333") != std::string::npos);
    r = cli({"oracle", "laplace", "--wait", R"({"kind":"exponential","rate":0.208333333333333333})", "--lambda",
             "0.0833333333333333333", "--mu", "0.0416666666666666667", "--delta", "3", "--tol", "1e-12"});
    CHECK(r.code == 0);
    CHECK(r.out.find("ok true") != std::string::npos);
    r = cli({"oracle", "threshold", "--job", R"({"kind":"exponential","rate":0.0833333333333333333})", "--spot",
             R"({"kind":"exponential","rate":0.0416666666666666667})"});
    CHECK(r.out.find("threshold_h 8\n") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(cli({"oracle", "nope"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"simulate", "--config", "/nonexistent.json"}).code == 2);
    CHECK(cli({"oracle", "mm1n", "--k", "10"}).code == 2);
    // (lambda + mu) delta >= 1: no deterministic construction exists.
    const auto r = cli({"oracle", "det-wait", "--lambda", "0.0833333333", "--mu", "0.0416666667", "--delta", "9"});
    CHECK(r.code == 3);
    CHECK(r.err.find("delta too large") != std::string::npos);
    CHECK(cli({"simulate", "--preset", "mm1-small-delta", "--policy", R"({"kind":"opt_exp_wait"})", "--out",
               scratch("x.csv").string(), "--seed", "1"})
              .code == 0);

    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << "{\n \"k\": 10,\n}\n";
    const auto parse = cli({"simulate", "--config", bad.string()});
    CHECK(parse.code == 2);
    CHECK(parse.err.find("line") != std::string::npos);

    auto cfg = spotsched::preset("mm1-large-delta");
    cfg.sim.delta = 20.0;
    auto j = spotsched::to_json(cfg);
    j["policy"] = {{"kind", "opt_det_wait"}};
    const fs::path pre = scratch("pre.json");
    std::ofstream(pre) << j.dump();
    CHECK(cli({"simulate", "--config", pre.string()}).code == 3);
}

TEST_CASE("simulate writes the trajectory and a summary") {
    const fs::path out = scratch("traj.csv");
    const fs::path outcomes = scratch("outcomes.csv");
    const auto r = cli({"simulate", "--preset", "mm1-small-delta", "--horizon", "40000", "--warmup", "4000", "--out",
                        out.string(), "--outcomes", outcomes.string()});
    REQUIRE(r.code == 0);
    for (const char* key : {"mean_cost", "mean_delay_h", "pi0_time", "pi0_spot", "identity_residual"})
        CHECK(r.out.find(key) != std::string::npos);
    const std::string traj = slurp(out);
    CHECK(traj.rfind("checkpoint,sim_time_h,jobs_seen,running_cost,running_delay,pi0_time,pi0_spot,r\n", 0) == 0);
    const std::string oc = slurp(outcomes);
    CHECK(oc.rfind("id,arrival_t,depart_t,server,delay,cost\n", 0) == 0);
    CHECK(std::count(oc.begin(), oc.end(), '\n') == 36'001);
}

TEST_CASE("dump-config round trip through the command line") {
    const auto dump = cli({"simulate", "--preset", "gcp-small-delta", "--horizon", "20000", "--warmup", "2000",
                           "--dump-config"});
    REQUIRE(dump.code == 0);
    const fs::path cfg = scratch("dumped.json");
    std::ofstream(cfg) << dump.out;
    const fs::path a = scratch("a.csv");
    const fs::path b = scratch("b.csv");
    REQUIRE(cli({"simulate", "--preset", "gcp-small-delta", "--horizon", "20000", "--warmup", "2000", "--out",
                 a.string()})
                .code == 0);
    REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("adapt writes one csv per start and flags non-convergence") {
    auto cfg = spotsched::preset("mm1-small-delta");
    cfg.sim.horizon_jobs = 20'000;
    cfg.sim.warmup_jobs = 2'000;
    cfg.adaptive->params.window_hours = 20'000;
    cfg.adaptive->params.max_windows = 3;
    cfg.adaptive->params.eps = 1e-9;
    const fs::path path = scratch("adapt.json");
    std::ofstream(path) << spotsched::to_json(cfg).dump();
    const std::string prefix = scratch("adapt").string();
    const auto r = cli({"adapt", "--config", path.string(), "--out-prefix", prefix});
    CHECK(r.code == 4);
    const std::string low = slurp(prefix + "_low.csv");
    CHECK(low.rfind("window_index,sim_time_h,r,d_window_h,running_cost,running_delay\n", 0) == 0);
    CHECK(std::count(low.begin(), low.end(), '\n') == 4);
    CHECK(fs::exists(prefix + "_high.csv"));

    cfg.adaptive->params.eps = 100.0;
    cfg.adaptive->params.max_windows = 50;
    std::ofstream(path) << spotsched::to_json(cfg).dump();
    const auto ok = cli({"adapt", "--config", path.string(), "--r0", "0.2", "--out-prefix", prefix});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("converged") != std::string::npos);
    CHECK(fs::exists(prefix + ".csv"));
}

TEST_CASE("lp command") {
    const fs::path csv = scratch("lp.csv");
    const auto r = cli({"lp", "--spot", R"({"kind":"uniform","hi":24})", "--lambda", "0.0833333333333333333", "--delta",
                        "3", "--csv", csv.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("atom w=0 mass=0.666666666667") != std::string::npos);
    CHECK(r.out.find("atom w=24 mass=0.333333333333") != std::string::npos);
    CHECK(r.out.find("verify pass") != std::string::npos);
    const std::string text = slurp(csv);
    CHECK(text.rfind("w,obj_coeff,cons_coeff\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2002);

    CHECK(cli({"lp", "--spot", R"({"kind":"uniform","hi":24})", "--lambda", "0.0833333333", "--delta", "8"}).code == 3);
}

TEST_CASE("sweep over the mm1n oracle") {
    const auto r = cli({"sweep", "--param", "n", "--from", "1", "--to", "10", "--oracle", "mm1n", "--k", "10",
                        "--lambda", "0.0833333333", "--mu", "0.0416666667"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,expected_cost,delay_lower_bound");
    double prev = 1e9;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        const double cost = std::stod(line.substr(a + 1, b - a - 1));
        CHECK(cost < prev);
        prev = cost;
        ++rows;
    }
    CHECK(rows == 10);
}

TEST_CASE("simulation sweep is ordered and repeatable") {
    const std::vector<std::string> args{"sweep", "--preset", "mm1-large-delta", "--param", "r", "--from", "0.5",
                                        "--to", "3", "--steps", "6", "--horizon", "20000", "--warmup", "2000",
                                        "--threads", "3"};
    const auto a = cli(args);
    const auto b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("r,mean_cost,mean_delay,pi0_time,pi0_spot,mean_queue_length\n0.5,", 0) == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 7);

    const auto delta = cli({"sweep", "--preset", "mm1-small-delta", "--param", "delta", "--from", "1", "--to", "5",
                            "--steps", "3", "--horizon", "20000", "--warmup", "2000"});
    CHECK(delta.code == 0);
}
