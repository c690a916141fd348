#include "spotsched/config.hpp"
#include "spotsched/errors.hpp"

namespace spotsched {

namespace {

constexpr double kJobRate = 1.0 / 12.0;
constexpr double kSpotRateMM1 = 1.0 / 24.0;
constexpr double kOnDemandCost = 10.0;

// Bath-tub parameters inside the ranges reported for preemptible GCP VMs
// (b ~ 24 h, tau1 in [0.5, 1.5], tau2 ~ 0.8, amp in [0.4, 0.5]); mean is
// 12.25 h, close to the 12 h job inter-arrival mean.
DistributionSpec gcp_spots() { return DistributionSpec::bathtub(0.5, 24.0, 0.5, 0.8); }

ExperimentConfig base(DistributionSpec jobs, DistributionSpec spots, double delta) {
    ExperimentConfig c;
    c.sim.job_dist = std::move(jobs);
    c.sim.spot_dist = std::move(spots);
    c.sim.k = kOnDemandCost;
    c.sim.delta = delta;
    c.sim.horizon_jobs = 500'000;
    c.sim.warmup_jobs = 50'000;
    c.sim.checkpoint_every = 1000;
    c.sim.seed = 42;
    return c;
}

// Windows of ~10^5 jobs and a 1% delay band. With the library defaults
// (500 h, 5% of delta) window noise swamps the band, and the band itself
// admits r values far from the fixed point where d(r) is flat.
constexpr double kWindowHours = 1'200'000.0;
constexpr double kEpsFraction = 0.01;

AdaptiveSpec learner(double delta, double r0_low, double r0_high) {
    AdaptiveSpec a;
    a.params.alpha = 0.02;
    a.params.window_hours = kWindowHours;
    a.params.eps = kEpsFraction * delta;
    a.params.r_max = 20.0;
    a.params.max_windows = 2000;
    a.params.stable_windows_required = 5;
    a.r0 = r0_low;
    a.r0_low = r0_low;
    a.r0_high = r0_high;
    return a;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"gcp-small-delta", "gcp-large-delta", "mm1-small-delta", "mm1-large-delta"};
}

ExperimentConfig preset(const std::string& name) {
    if (name == "mm1-small-delta") {
        auto c = base(DistributionSpec::exponential(kJobRate), DistributionSpec::exponential(kSpotRateMM1), 3.0);
        c.sim.policy = make_det_wait(kJobRate, kSpotRateMM1, 3.0);
        c.policy_rule = "opt_det_wait";
        c.adaptive = learner(3.0, 0.05, 2.0);
        return c;
    }
    if (name == "mm1-large-delta") {
        auto c = base(DistributionSpec::exponential(kJobRate), DistributionSpec::exponential(kSpotRateMM1), 27.0);
        c.sim.policy = PolicySpec::three_phase(3.0);
        c.adaptive = learner(27.0, 1.0, 6.0);
        return c;
    }
    if (name == "gcp-small-delta") {
        auto c = base(DistributionSpec::exponential(kJobRate), gcp_spots(), 3.0);
        const double mu = 1.0 / mean(c.sim.spot_dist);
        c.sim.policy = make_two_point(kJobRate, mu, 3.0, support_max(c.sim.spot_dist));
        c.policy_rule = "opt_two_point";
        c.adaptive = learner(3.0, 0.05, 2.0);
        return c;
    }
    if (name == "gcp-large-delta") {
        auto c = base(DistributionSpec::exponential(kJobRate), gcp_spots(), 18.0);
        c.sim.policy = PolicySpec::three_phase(2.0);
        c.adaptive = learner(18.0, 1.0, 6.0);
        return c;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace spotsched
