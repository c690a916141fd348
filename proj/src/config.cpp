#include "spotsched/config.hpp"

#include "spotsched/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace spotsched {

using nlohmann::json;

namespace {

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError("field '" + path + "': expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw ConfigError("field '" + path + "." + it.key() + "': unknown key");
}

double number(const json& j, const std::string& path, const char* key) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!j.contains(key)) throw ConfigError("field '" + where + "': missing");
    const json& v = j.at(key);
    if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
    if (!v.is_number()) throw ConfigError("field '" + where + "': expected a number");
    return v.get<double>();
}

double number_or(const json& j, const std::string& path, const char* key, double fallback) {
    return j.contains(key) ? number(j, path, key) : fallback;
}

std::uint64_t count(const json& j, const std::string& path, const char* key) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!j.contains(key)) throw ConfigError("field '" + where + "': missing");
    const json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError("field '" + where + "': expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string kind_of(const json& j, const std::string& path) {
    expect_object(j, path);
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw ConfigError("field '" + path + ".kind': missing or not a string");
    return j.at("kind").get<std::string>();
}

// Factory errors carry no path; prefix it.
template <class F>
auto with_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind("field '", 0) == 0) throw;
        throw ConfigError("field '" + path + "': " + what);
    }
}

json finite_or_inf(double v) { return std::isfinite(v) ? json(v) : json("inf"); }

}  // namespace

DistributionSpec distribution_from_json(const json& j, const std::string& path) {
    const std::string kind = kind_of(j, path);
    return with_path(path, [&] {
        if (kind == "exponential") {
            reject_unknown(j, path, {"kind", "rate"});
            return DistributionSpec::exponential(number(j, path, "rate"));
        }
        if (kind == "gamma") {
            reject_unknown(j, path, {"kind", "shape", "scale"});
            return DistributionSpec::gamma(number(j, path, "shape"), number(j, path, "scale"));
        }
        if (kind == "uniform") {
            reject_unknown(j, path, {"kind", "hi"});
            return DistributionSpec::uniform(number(j, path, "hi"));
        }
        if (kind == "deterministic") {
            reject_unknown(j, path, {"kind", "value"});
            return DistributionSpec::deterministic(number(j, path, "value"));
        }
        if (kind == "two_point") {
            reject_unknown(j, path, {"kind", "v0", "p0", "v1"});
            return DistributionSpec::two_point(number(j, path, "v0"), number(j, path, "p0"),
                                               number(j, path, "v1"));
        }
        if (kind == "bathtub") {
            reject_unknown(j, path, {"kind", "amp", "b", "tau1", "tau2"});
            return DistributionSpec::bathtub(number(j, path, "amp"), number(j, path, "b"),
                                             number(j, path, "tau1"), number(j, path, "tau2"));
        }
        if (kind == "indefinite") {
            reject_unknown(j, path, {"kind"});
            return DistributionSpec::indefinite();
        }
        throw ConfigError("unknown distribution kind '" + kind + "'");
    });
}

json to_json(const DistributionSpec& d) {
    json j;
    j["kind"] = d.kind();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, dist::Exponential>) {
                j["rate"] = v.rate;
            } else if constexpr (std::is_same_v<T, dist::Gamma>) {
                j["shape"] = v.shape;
                j["scale"] = v.scale;
            } else if constexpr (std::is_same_v<T, dist::Uniform>) {
                j["hi"] = v.hi;
            } else if constexpr (std::is_same_v<T, dist::Deterministic>) {
                j["value"] = v.value;
            } else if constexpr (std::is_same_v<T, dist::TwoPoint>) {
                j["v0"] = v.v0;
                j["p0"] = v.p0;
                j["v1"] = v.v1;
            } else if constexpr (std::is_same_v<T, dist::BathtubGCP>) {
                j["amp"] = v.amp;
                j["b"] = v.b;
                j["tau1"] = v.tau1;
                j["tau2"] = v.tau2;
            }
        },
        d.variant());
    return j;
}

PolicySpec policy_from_json(const json& j, const std::string& path, const DistributionSpec& job_dist,
                            const DistributionSpec& spot_dist, double delta) {
    const std::string kind = kind_of(j, path);
    return with_path(path, [&] {
        if (kind == "indefinite_cap") {
            reject_unknown(j, path, {"kind", "n"});
            return PolicySpec::indefinite_cap(count(j, path, "n"));
        }
        if (kind == "single_slot_two_point") {
            reject_unknown(j, path, {"kind", "limit", "p"});
            return PolicySpec::single_slot_two_point(number_or(j, path, "limit", kInfinity),
                                                     number(j, path, "p"));
        }
        if (kind == "single_slot_det_wait") {
            reject_unknown(j, path, {"kind", "x"});
            return PolicySpec::single_slot_det_wait(number(j, path, "x"));
        }
        if (kind == "single_slot_exp_wait") {
            reject_unknown(j, path, {"kind", "phi"});
            return PolicySpec::single_slot_exp_wait(number(j, path, "phi"));
        }
        if (kind == "three_phase") {
            reject_unknown(j, path, {"kind", "r"});
            return PolicySpec::three_phase(number(j, path, "r"));
        }
        if (kind == "opt_two_point" || kind == "opt_det_wait" || kind == "opt_exp_wait") {
            reject_unknown(j, path, {"kind"});
            const double lambda = 1.0 / mean(job_dist);
            const double mu = 1.0 / mean(spot_dist);
            if (kind == "opt_two_point") return make_two_point(lambda, mu, delta, support_max(spot_dist));
            if (kind == "opt_det_wait") return make_det_wait(lambda, mu, delta);
            return make_exp_wait(lambda, mu, delta);
        }
        throw ConfigError("unknown policy kind '" + kind + "'");
    });
}

json to_json(const PolicySpec& p) {
    json j;
    j["kind"] = p.kind();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, policy::IndefiniteCap>) {
                j["n"] = v.n;
            } else if constexpr (std::is_same_v<T, policy::SingleSlotTwoPoint>) {
                j["limit"] = finite_or_inf(v.limit);
                j["p"] = v.p;
            } else if constexpr (std::is_same_v<T, policy::SingleSlotDetWait>) {
                j["x"] = v.x;
            } else if constexpr (std::is_same_v<T, policy::SingleSlotExpWait>) {
                j["phi"] = v.phi;
            } else if constexpr (std::is_same_v<T, policy::ThreePhase>) {
                j["r"] = v.r;
            }
        },
        p.variant());
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    expect_object(j, "");
    reject_unknown(j, "", {"job_dist", "spot_dist", "k", "delta", "policy", "horizon_jobs", "warmup_jobs",
                           "checkpoint_every", "seed", "adaptive"});
    ExperimentConfig c;
    SimConfig& s = c.sim;
    if (!j.contains("job_dist")) throw ConfigError("field 'job_dist': missing");
    if (!j.contains("spot_dist")) throw ConfigError("field 'spot_dist': missing");
    if (!j.contains("policy")) throw ConfigError("field 'policy': missing");
    s.job_dist = distribution_from_json(j.at("job_dist"), "job_dist");
    s.spot_dist = distribution_from_json(j.at("spot_dist"), "spot_dist");
    s.k = number(j, "", "k");
    s.delta = number(j, "", "delta");
    s.horizon_jobs = count(j, "", "horizon_jobs");
    s.warmup_jobs = j.contains("warmup_jobs") ? count(j, "", "warmup_jobs") : s.horizon_jobs / 10;
    s.checkpoint_every = j.contains("checkpoint_every") ? count(j, "", "checkpoint_every") : 1000;
    s.seed = count(j, "", "seed");
    s.validate();
    s.policy = policy_from_json(j.at("policy"), "policy", s.job_dist, s.spot_dist, s.delta);
    const std::string pkind = kind_of(j.at("policy"), "policy");
    if (pkind.rfind("opt_", 0) == 0) c.policy_rule = pkind;

    if (j.contains("adaptive")) {
        const json& a = j.at("adaptive");
        expect_object(a, "adaptive");
        reject_unknown(a, "adaptive", {"r0", "r0_low", "r0_high", "alpha", "window_hours", "eps", "r_max",
                                       "max_windows", "stable_windows"});
        AdaptiveSpec spec;
        adaptive::AdaptiveParams& p = spec.params;
        p.alpha = number_or(a, "adaptive", "alpha", p.alpha);
        p.window_hours = number_or(a, "adaptive", "window_hours", p.window_hours);
        p.eps = number_or(a, "adaptive", "eps", 0.05 * s.delta);
        p.r_max = number_or(a, "adaptive", "r_max", p.r_max);
        if (a.contains("max_windows")) p.max_windows = count(a, "adaptive", "max_windows");
        if (a.contains("stable_windows")) p.stable_windows_required = count(a, "adaptive", "stable_windows");
        spec.r0 = number_or(a, "adaptive", "r0", 1.0);
        spec.r0_low = number_or(a, "adaptive", "r0_low", spec.r0);
        spec.r0_high = number_or(a, "adaptive", "r0_high", spec.r0);
        p.validate();
        for (double r : {spec.r0, spec.r0_low, spec.r0_high})
            if (!(r >= 0.0 && r <= p.r_max)) throw ConfigError("field 'adaptive': starting r outside [0, r_max]");
        c.adaptive = spec;
    }
    return c;
}

void reresolve_policy(ExperimentConfig& c) {
    if (c.policy_rule.empty()) return;
    c.sim.policy = policy_from_json(json{{"kind", c.policy_rule}}, "policy", c.sim.job_dist, c.sim.spot_dist,
                                    c.sim.delta);
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Message already carries "line L, column C".
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

json to_json(const ExperimentConfig& c) {
    const SimConfig& s = c.sim;
    json j;
    j["job_dist"] = to_json(s.job_dist);
    j["spot_dist"] = to_json(s.spot_dist);
    j["k"] = s.k;
    j["delta"] = s.delta;
    j["policy"] = to_json(s.policy);
    j["horizon_jobs"] = s.horizon_jobs;
    j["warmup_jobs"] = s.warmup_jobs;
    j["checkpoint_every"] = s.checkpoint_every;
    j["seed"] = s.seed;
    if (c.adaptive) {
        const AdaptiveSpec& a = *c.adaptive;
        j["adaptive"] = {
            {"r0", a.r0},
            {"r0_low", a.r0_low},
            {"r0_high", a.r0_high},
            {"alpha", a.params.alpha},
            {"window_hours", a.params.window_hours},
            {"eps", a.params.eps},
            {"r_max", a.params.r_max},
            {"max_windows", a.params.max_windows},
            {"stable_windows", a.params.stable_windows_required},
        };
    }
    return j;
}

}  // namespace spotsched
