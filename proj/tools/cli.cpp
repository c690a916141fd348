#include "cli.hpp"

#include "spotsched/adaptive.hpp"
#include "spotsched/analytic.hpp"
#include "spotsched/config.hpp"
#include "spotsched/csv.hpp"
#include "spotsched/errors.hpp"
#include "spotsched/kernels/kernels.hpp"
#include "spotsched/lp.hpp"
#include "spotsched/sim.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

namespace spotsched::cli {

namespace {

std::string num12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct SourceOptions {
    std::string config_path;
    std::string preset_name;
    std::string policy_json;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> warmup;
    std::optional<std::uint64_t> checkpoint;

    void attach(CLI::App* cmd) {
        auto* cfg = cmd->add_option("--config", config_path, "JSON experiment file");
        auto* pre = cmd->add_option("--preset", preset_name, "Named preset")
                        ->check(CLI::IsMember(preset_names()));
        cfg->excludes(pre);
        cmd->add_option("--policy", policy_json, "Policy override as a JSON object");
        cmd->add_option("--seed", seed, "Override the seed");
        cmd->add_option("--horizon", horizon, "Override horizon_jobs");
        cmd->add_option("--warmup", warmup, "Override warmup_jobs");
        cmd->add_option("--checkpoint-every", checkpoint, "Override checkpoint_every");
    }

    ExperimentConfig load() const {
        if (config_path.empty() && preset_name.empty()) throw ConfigError("one of --config or --preset is required");
        ExperimentConfig c = config_path.empty() ? preset(preset_name) : load_config_file(config_path);
        if (seed) c.sim.seed = *seed;
        if (horizon) c.sim.horizon_jobs = *horizon;
        if (warmup) c.sim.warmup_jobs = *warmup;
        if (checkpoint) c.sim.checkpoint_every = *checkpoint;
        if (!policy_json.empty()) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(policy_json);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("--policy: malformed JSON: ") + e.what());
            }
            c.sim.policy = policy_from_json(j, "policy", c.sim.job_dist, c.sim.spot_dist, c.sim.delta);
            const std::string kind = j.value("kind", "");
            c.policy_rule = kind.rfind("opt_", 0) == 0 ? kind : std::string();
        }
        c.sim.validate();
        return c;
    }
};

double little_residual(const SimStats& s) {
    const double lhs = s.mean_queue_length();
    const double rhs = s.arrival_rate() * s.mean_delay;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

double identity_cost(const SimConfig& c, const SimStats& s) {
    const double ratio = mean(c.job_dist) / mean(c.spot_dist);
    return c.k - (c.k - 1.0) * ratio * (1.0 - s.pi0_spot_epochs);
}

void print_summary(std::ostream& out, const SimConfig& c, const SimStats& s) {
    const double identity = identity_cost(c, s);
    out << "policy              " << to_json(c.policy).dump() << '\n'
        << "jobs_counted        " << s.jobs_counted << '\n'
        << "mean_cost           " << num12(s.mean_cost) << '\n'
        << "mean_delay_h        " << num12(s.mean_delay) << '\n'
        << "pi0_time            " << num12(s.pi0_time()) << '\n'
        << "pi0_spot            " << num12(s.pi0_spot_epochs) << '\n'
        << "mean_queue_length   " << num12(s.mean_queue_length()) << '\n'
        << "max_queue_length    " << s.max_queue_len << '\n'
        << "little_rel_residual " << num12(little_residual(s)) << '\n'
        << "identity_cost       " << num12(identity) << '\n'
        << "identity_residual   " << num12(std::abs(s.mean_cost - identity)) << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    return f;
}

// --- simulate ---------------------------------------------------------------

struct SimulateCommand {
    SourceOptions source;
    std::string out_path = "trajectory.csv";
    std::string outcomes_path;
    bool dump = false;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("simulate", "Run one simulation and write its trajectory CSV");
        source.attach(cmd);
        cmd->add_option("--out", out_path, "Trajectory CSV path")->capture_default_str();
        cmd->add_option("--outcomes", outcomes_path, "Optional per-job outcome CSV");
        cmd->add_flag("--dump-config", dump, "Print the resolved configuration and exit");
    }

    int run(std::ostream& out) const {
        const ExperimentConfig cfg = source.load();
        if (dump) {
            out << to_json(cfg).dump(2) << '\n';
            return kOk;
        }
        std::ofstream outcomes;
        OutcomeSink sink;
        if (!outcomes_path.empty()) {
            outcomes = open_out(outcomes_path);
            csv::write_outcome_header(outcomes);
            sink = [&outcomes](const JobOutcome& o) { csv::write_outcome(outcomes, o); };
        }
        const SimStats stats = spotsched::run(cfg.sim, sink);
        std::ofstream traj = open_out(out_path);
        csv::write_trajectory(traj, stats);
        print_summary(out, cfg.sim, stats);
        return kOk;
    }
};

// --- adapt ------------------------------------------------------------------

struct AdaptCommand {
    SourceOptions source;
    std::optional<double> r0;
    std::string prefix = "adapt";

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("adapt", "Learn the fractional queue cap online");
        source.attach(cmd);
        cmd->add_option("--r0", r0, "Single starting r (default: the preset's low and high starts)");
        cmd->add_option("--out-prefix", prefix, "CSV path prefix")->capture_default_str();
    }

    int run(std::ostream& out) const {
        const ExperimentConfig cfg = source.load();
        AdaptiveSpec spec;
        if (cfg.adaptive) {
            spec = *cfg.adaptive;
        } else {
            spec.params.eps = 0.05 * cfg.sim.delta;
        }
        std::vector<std::pair<std::string, double>> starts;
        if (r0) starts.emplace_back(prefix + ".csv", *r0);
        else {
            starts.emplace_back(prefix + "_low.csv", spec.r0_low);
            starts.emplace_back(prefix + "_high.csv", spec.r0_high);
        }

        bool all_converged = true;
        for (const auto& [path, start] : starts) {
            const adaptive::AdaptiveResult res = adaptive::run_adaptive(cfg.sim, spec.params, start);
            std::ofstream f = open_out(path);
            csv::write_adaptive_trajectory(f, res);
            out << "r0 " << num12(start) << ": " << (res.converged ? "converged" : "NOT converged") << " after "
                << res.windows << " windows, r = " << num12(res.r_final)
                << ", terminal cost = " << num12(res.tail.mean_cost)
                << ", terminal delay = " << num12(res.tail.mean_delay) << " h -> " << path << '\n';
            all_converged = all_converged && res.converged;
        }
        return all_converged ? kOk : kNotConverged;
    }
};

// --- oracle -----------------------------------------------------------------

struct OracleCommand {
    std::string kind;
    std::optional<double> k, lambda, mu, delta, pi0, tol, limit;
    std::optional<std::size_t> n;
    std::string job_json, spot_json, wait_json;
    std::uint64_t budget = kDefaultProbLeBudget;
    std::uint64_t seed = 42;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("oracle", "Evaluate a closed-form quantity");
        cmd->add_option("kind", kind,
                        "mm1n | single-slot | general | threshold | laplace | two-point | det-wait | exp-wait")
            ->required();
        cmd->add_option("--k", k);
        cmd->add_option("--lambda", lambda);
        cmd->add_option("--mu", mu);
        cmd->add_option("--delta", delta);
        cmd->add_option("--pi0", pi0);
        cmd->add_option("--n", n);
        cmd->add_option("--tol", tol);
        cmd->add_option("--limit", limit, "Spot support bound for two-point (default: infinity)");
        cmd->add_option("--job", job_json, "Job distribution JSON");
        cmd->add_option("--spot", spot_json, "Spot distribution JSON");
        cmd->add_option("--wait", wait_json, "Maximal-wait distribution JSON");
        cmd->add_option("--budget", budget, "Monte-Carlo samples");
        cmd->add_option("--seed", seed);
    }

    template <class T>
    static T need(const std::optional<T>& v, const char* name) {
        if (!v) throw ConfigError(std::string("missing --") + name);
        return *v;
    }

    static DistributionSpec dist_arg(const std::string& text, const char* name) {
        if (text.empty()) throw ConfigError(std::string("missing --") + name);
        try {
            return distribution_from_json(nlohmann::json::parse(text), name);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("--") + name + ": malformed JSON: " + e.what());
        }
    }

    int run(std::ostream& out) const {
        if (kind == "mm1n") {
            const auto sol = analytic::mm1n_solution(need(k, "k"), need(lambda, "lambda"), need(mu, "mu"), need(n, "n"));
            out << "expected_cost " << num12(sol.expected_cost) << '\n'
                << "delay_lower_bound " << num12(sol.delay_lower_bound) << '\n'
                << "rho " << num12(sol.rho) << '\n';
            for (std::size_t i = 0; i < sol.pi.size(); ++i) out << "pi_" << i << ' ' << num12(sol.pi[i]) << '\n';
        } else if (kind == "single-slot") {
            out << "cost " << num12(analytic::cost_single_slot_opt(need(k, "k"), need(mu, "mu"), need(delta, "delta")))
                << '\n';
        } else if (kind == "general") {
            out << "cost "
                << num12(analytic::cost_general(need(k, "k"), need(lambda, "lambda"), need(mu, "mu"), need(pi0, "pi0")))
                << '\n';
        } else if (kind == "threshold") {
            RandomStream rng = RandomStream::derive(seed, "oracle");
            const auto t = analytic::small_delta_threshold(dist_arg(job_json, "job"), dist_arg(spot_json, "spot"), rng,
                                                           budget);
            out << "threshold_h " << num12(t.value) << '\n' << "halfwidth_h " << num12(t.halfwidth) << '\n';
        } else if (kind == "laplace") {
            const auto chk = analytic::laplace_condition_check(dist_arg(wait_json, "wait"), need(lambda, "lambda"),
                                                               need(mu, "mu"), need(delta, "delta"), tol.value_or(1e-6));
            out << "target " << num12(chk.target) << '\n'
                << "residual " << num12(chk.residual) << '\n'
                << "ok " << (chk.ok ? "true" : "false") << '\n';
        } else if (kind == "two-point") {
            const auto p = make_two_point(need(lambda, "lambda"), need(mu, "mu"), need(delta, "delta"),
                                          limit.value_or(kInfinity));
            out << "p " << num12(p.as<policy::SingleSlotTwoPoint>().p) << '\n';
        } else if (kind == "det-wait") {
            const auto p = make_det_wait(need(lambda, "lambda"), need(mu, "mu"), need(delta, "delta"));
            out << "x " << num12(p.as<policy::SingleSlotDetWait>().x) << '\n';
        } else if (kind == "exp-wait") {
            const auto p = make_exp_wait(need(lambda, "lambda"), need(mu, "mu"), need(delta, "delta"));
            out << "phi " << num12(p.as<policy::SingleSlotExpWait>().phi) << '\n';
        } else {
            throw ConfigError("unknown oracle kind '" + kind + "'");
        }
        return kOk;
    }
};

// --- lp ---------------------------------------------------------------------

struct LpCommand {
    std::string spot_json;
    double lambda = 0.0;
    double delta = 0.0;
    std::size_t grid = 2000;
    std::optional<double> w_max;
    std::string csv_path;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("lp", "Solve the discretized single-slot maximal-wait program");
        cmd->add_option("--spot", spot_json, "Spot distribution JSON")->required();
        cmd->add_option("--lambda", lambda)->required();
        cmd->add_option("--delta", delta)->required();
        cmd->add_option("--grid", grid, "Uniform grid intervals")->capture_default_str();
        cmd->add_option("--w-max", w_max, "Largest wait on the grid (hours)");
        cmd->add_option("--csv", csv_path, "Write w, obj_coeff, cons_coeff");
    }

    int run(std::ostream& out) const {
        const DistributionSpec spot = OracleCommand::dist_arg(spot_json, "spot");
        const lp::DiscretizedLP prog = lp::build(spot, lambda, delta, grid, w_max);
        const lp::AtomicSolution sol = lp::solve_two_atom(prog);
        const double mu = 1.0 / mean(spot);

        double mass = 0.0;
        double constraint = 0.0;
        for (const lp::Atom& a : sol.atoms) {
            mass += a.mass;
            const auto it = std::find(prog.grid.begin(), prog.grid.end(), a.w);
            constraint += a.mass * prog.cons_coeff[static_cast<std::size_t>(it - prog.grid.begin())];
        }

        out << "kernel " << kernels::isa_name(kernels::active_isa()) << '\n'
            << "grid_points " << prog.grid.size() << '\n'
            << "target_h " << num12(prog.target) << '\n';
        for (const lp::Atom& a : sol.atoms) out << "atom w=" << num12(a.w) << " mass=" << num12(a.mass) << '\n';
        out << "objective " << num12(sol.objective) << '\n'
            << "closed_form " << num12(mu * delta / (1.0 - lambda * delta)) << '\n'
            << "mass_residual " << num12(mass - 1.0) << '\n'
            << "constraint_residual " << num12(constraint - prog.target) << '\n';
        const lp::VerificationReport rep = lp::verify_closed_form(spot, lambda, mu, delta, sol);
        out << "verify " << (rep.passed ? "pass" : "fail") << ": " << rep.message << '\n';

        if (!csv_path.empty()) {
            std::ofstream f = open_out(csv_path);
            f << "w,obj_coeff,cons_coeff\n";
            for (std::size_t i = 0; i < prog.grid.size(); ++i)
                f << csv::fmt(prog.grid[i]) << ',' << csv::fmt(prog.obj_coeff[i]) << ','
                  << csv::fmt(prog.cons_coeff[i]) << '\n';
        }
        return kOk;
    }
};

// --- sweep ------------------------------------------------------------------

struct SweepCommand {
    SourceOptions source;
    std::string param;
    double from = 0.0;
    double to = 0.0;
    std::optional<std::size_t> steps;
    std::string oracle;
    std::optional<double> k, lambda, mu;
    std::optional<std::size_t> n;
    std::string out_path;
    std::size_t threads = 0;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("sweep", "Vary one scalar and emit one summary row per value");
        source.attach(cmd);
        cmd->add_option("--param", param, "delta | r | n | lambda | mu")
            ->required()
            ->check(CLI::IsMember({"delta", "r", "n", "lambda", "mu"}));
        cmd->add_option("--from", from)->required();
        cmd->add_option("--to", to)->required();
        cmd->add_option("--steps", steps, "Number of values (default: integer steps for n, else 11)");
        cmd->add_option("--oracle", oracle, "Sweep a closed form instead of simulating (mm1n)");
        cmd->add_option("--k", k);
        cmd->add_option("--lambda", lambda);
        cmd->add_option("--mu", mu);
        cmd->add_option("--n", n, "Fixed queue cap for mm1n sweeps over lambda or mu");
        cmd->add_option("--out", out_path, "CSV path (default: stdout)");
        cmd->add_option("--threads", threads, "Worker threads for simulation sweeps (0 = hardware)");
    }

    std::vector<double> values() const {
        std::size_t count = steps.value_or(0);
        if (count == 0) count = param == "n" ? static_cast<std::size_t>(std::llround(to - from)) + 1 : 11;
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i)
            v[i] = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
        if (param == "n")
            for (double& x : v) x = std::round(x);
        return v;
    }

    int run(std::ostream& out) const {
        std::ofstream file;
        std::ostream* sink = &out;
        if (!out_path.empty()) {
            file = open_out(out_path);
            sink = &file;
        }
        const std::vector<double> vals = values();
        if (!oracle.empty()) return run_oracle(*sink, vals);
        return run_sim(*sink, vals);
    }

    int run_oracle(std::ostream& out, const std::vector<double>& vals) const {
        if (oracle != "mm1n") throw ConfigError("unknown sweep oracle '" + oracle + "'");
        if (param == "delta" || param == "r") throw ConfigError("mm1n sweeps vary n, lambda or mu");
        out << param << ",expected_cost,delay_lower_bound\n";
        for (double v : vals) {
            const double lam = param == "lambda" ? v : OracleCommand::need(lambda, "lambda");
            const double m = param == "mu" ? v : OracleCommand::need(mu, "mu");
            const std::size_t cap = param == "n" ? static_cast<std::size_t>(v) : OracleCommand::need(n, "n");
            const auto sol = analytic::mm1n_solution(OracleCommand::need(k, "k"), lam, m, cap);
            out << csv::fmt(v) << ',' << csv::fmt(sol.expected_cost) << ',' << csv::fmt(sol.delay_lower_bound) << '\n';
        }
        return kOk;
    }

    ExperimentConfig configure(ExperimentConfig c, double v) const {
        if (param == "delta") {
            c.sim.delta = v;
        } else if (param == "r") {
            c.sim.policy = PolicySpec::three_phase(v);
            c.policy_rule.clear();
        } else if (param == "n") {
            c.sim.policy = PolicySpec::indefinite_cap(static_cast<std::size_t>(v));
            c.policy_rule.clear();
        } else if (param == "lambda") {
            c.sim.job_dist = with_rate(c.sim.job_dist, v);
        } else if (param == "mu") {
            c.sim.spot_dist = with_rate(c.sim.spot_dist, v);
        }
        reresolve_policy(c);
        c.sim.validate();
        return c;
    }

    int run_sim(std::ostream& out, const std::vector<double>& vals) const {
        const ExperimentConfig base = source.load();
        std::vector<ExperimentConfig> configs;
        configs.reserve(vals.size());
        for (double v : vals) configs.push_back(configure(base, v));

        std::vector<SimStats> results(vals.size());
        std::vector<std::exception_ptr> errors(vals.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < configs.size(); i = next++) {
                try {
                    results[i] = spotsched::run(configs[i].sim);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::size_t n_threads = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
        n_threads = std::min(n_threads, configs.size());
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);

        out << param << ",mean_cost,mean_delay,pi0_time,pi0_spot,mean_queue_length\n";
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const SimStats& s = results[i];
            out << csv::fmt(vals[i]) << ',' << csv::fmt(s.mean_cost) << ',' << csv::fmt(s.mean_delay) << ','
                << csv::fmt(s.pi0_time()) << ',' << csv::fmt(s.pi0_spot_epochs) << ','
                << csv::fmt(s.mean_queue_length()) << '\n';
        }
        return kOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spot/on-demand scheduling simulator and policy toolkit", "spotsched-cli"};
    app.require_subcommand(1);

    SimulateCommand simulate;
    AdaptCommand adapt;
    OracleCommand oracle;
    LpCommand lp_cmd;
    SweepCommand sweep;
    simulate.attach(app);
    adapt.attach(app);
    oracle.attach(app);
    lp_cmd.attach(app);
    sweep.attach(app);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (app.got_subcommand("simulate")) return simulate.run(out);
        if (app.got_subcommand("adapt")) return adapt.run(out);
        if (app.got_subcommand("oracle")) return oracle.run(out);
        if (app.got_subcommand("lp")) return lp_cmd.run(out);
        if (app.got_subcommand("sweep")) return sweep.run(out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const PreconditionError& e) {
        err << "precondition error: " << e.what() << '\n';
        return kPreconditionError;
    }
    return kConfigError;
}

}  // namespace spotsched::cli
