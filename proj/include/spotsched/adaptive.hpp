#pragma once

#include "spotsched/sim.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spotsched::adaptive {

/// Tunables of the online fractional-cap learner.
struct AdaptiveParams {
    double alpha = 0.02;          // r change per hour of delay error
    double window_hours = 500.0;  // W, simulated time between updates
    double eps = 0.0;             // hours; <= 0 selects 5% of delta
    double r_max = 20.0;
    std::size_t stable_windows_required = 5;
    std::size_t max_windows = 2000;

    void validate() const;
};

/// Learner state carried between window updates.
struct AdaptiveState {
    double r = 1.0;
    double r_max = 20.0;
    double alpha = 0.02;
    double window_hours = 500.0;
    double eps = 0.15;
    std::size_t stable_windows_required = 5;
    std::size_t window_index = 0;
    std::size_t stable_streak = 0;
    double last_d = 0.0;
    bool converged = false;
};

AdaptiveState initial_state(const AdaptiveParams& params, double delta, double r0);

/// One gradient step on L(r) = (d - delta)^2 / 2 with d'(r) absorbed into
/// the step size: r <- clamp(r - alpha * (d - delta), 0, r_max). Convergence
/// is declared after `stable_windows_required` consecutive windows with
/// |d - delta| <= eps.
AdaptiveState window_update(AdaptiveState state, double d_observed, double target_delta);

struct WindowRecord {
    std::size_t window_index = 0;
    double sim_time = 0.0;  // end of window
    double r_before = 0.0;
    double d_observed = 0.0;
    double r_after = 0.0;
    double running_cost = 0.0;
    double running_delay = 0.0;
    std::uint64_t departures = 0;
};

struct AdaptiveResult {
    std::vector<WindowRecord> trajectory;
    bool converged = false;
    double r_final = 0.0;
    std::size_t windows = 0;
    /// Measured with r frozen at r_final, over the config's warmup/horizon
    /// applied after the learning phase.
    SimStats tail;
};

/// Runs the three-phase policy with a learned cap on a single engine:
/// every `window_hours` of simulated time the mean delay of jobs that
/// departed in the window (rejections included at zero delay) drives one
/// window_update. A window without departures is extended. Stops at
/// convergence or after max_windows, then measures the tail.
AdaptiveResult run_adaptive(const SimConfig& config, const AdaptiveParams& params, double r0);

}  // namespace spotsched::adaptive
