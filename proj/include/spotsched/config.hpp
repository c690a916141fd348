#pragma once

#include "spotsched/adaptive.hpp"
#include "spotsched/distributions.hpp"
#include "spotsched/policies.hpp"
#include "spotsched/sim.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace spotsched {

struct AdaptiveSpec {
    adaptive::AdaptiveParams params;
    double r0 = 1.0;
    double r0_low = 1.0;
    double r0_high = 1.0;
};

/// One experiment as stored on disk.
///
/// Schema (durations in hours):
///   { "job_dist": Dist, "spot_dist": Dist, "k": num, "delta": num, "policy": Policy,
///     "horizon_jobs": int, "warmup_jobs"?: int, "checkpoint_every"?: int, "seed": int,
///     "adaptive"?: { "r0"?, "r0_low"?, "r0_high"?, "alpha"?, "window_hours"?, "eps"?,
///                    "r_max"?, "max_windows"?, "stable_windows"? } }
///   Dist   = {"kind": "exponential", "rate"} | {"kind": "gamma", "shape", "scale"}
///          | {"kind": "uniform", "hi"} | {"kind": "deterministic", "value"}
///          | {"kind": "two_point", "v0", "p0", "v1"}
///          | {"kind": "bathtub", "amp", "b", "tau1", "tau2"} | {"kind": "indefinite"}
///   Policy = {"kind": "indefinite_cap", "n"} | {"kind": "single_slot_two_point", "limit"?, "p"}
///          | {"kind": "single_slot_det_wait", "x"} | {"kind": "single_slot_exp_wait", "phi"}
///          | {"kind": "three_phase", "r"}
///          | {"kind": "opt_two_point"} | {"kind": "opt_det_wait"} | {"kind": "opt_exp_wait"}
/// The opt_* kinds are resolved at load time from lambda = 1/mean(job_dist),
/// mu = 1/mean(spot_dist) and delta; a regime violation raises PreconditionError.
struct ExperimentConfig {
    SimConfig sim;
    std::optional<AdaptiveSpec> adaptive;
    /// The opt_* kind the policy was resolved from, empty for explicit
    /// policies. Lets sweeps re-derive the policy when rates or delta change.
    std::string policy_rule;
};

/// Re-resolves `policy_rule` against the current distributions and delta.
void reresolve_policy(ExperimentConfig& c);

DistributionSpec distribution_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json to_json(const DistributionSpec& d);

/// `job_dist`, `spot_dist` and `delta` are needed to resolve opt_* kinds.
PolicySpec policy_from_json(const nlohmann::json& j, const std::string& path,
                            const DistributionSpec& job_dist, const DistributionSpec& spot_dist,
                            double delta);
nlohmann::json to_json(const PolicySpec& p);

ExperimentConfig config_from_json(const nlohmann::json& j);
/// Parses text; JSON syntax errors become ConfigError with line and column.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);

/// Named presets for the four reference experiments.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

}  // namespace spotsched
