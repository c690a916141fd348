#include "spotsched/adaptive.hpp"

#include "spotsched/errors.hpp"

#include <algorithm>
#include <cmath>

namespace spotsched::adaptive {

void AdaptiveParams::validate() const {
    if (!(alpha > 0.0 && std::isfinite(alpha))) throw ConfigError("adaptive.alpha must be finite and > 0");
    if (!(window_hours > 0.0 && std::isfinite(window_hours)))
        throw ConfigError("adaptive.window_hours must be finite and > 0");
    if (!std::isfinite(eps)) throw ConfigError("adaptive.eps must be finite");
    if (!(r_max >= 0.0 && std::isfinite(r_max))) throw ConfigError("adaptive.r_max must be finite and >= 0");
    if (stable_windows_required == 0) throw ConfigError("adaptive.stable_windows_required must be >= 1");
    if (max_windows == 0) throw ConfigError("adaptive.max_windows must be >= 1");
}

AdaptiveState initial_state(const AdaptiveParams& params, double delta, double r0) {
    params.validate();
    if (!(r0 >= 0.0 && r0 <= params.r_max)) throw PreconditionError("r0 must lie in [0, r_max]");
    AdaptiveState s;
    s.r = r0;
    s.r_max = params.r_max;
    s.alpha = params.alpha;
    s.window_hours = params.window_hours;
    s.eps = params.eps > 0.0 ? params.eps : 0.05 * delta;
    if (!(s.eps > 0.0)) throw PreconditionError("eps must be > 0 (delta = 0 needs an explicit eps)");
    s.stable_windows_required = params.stable_windows_required;
    return s;
}

AdaptiveState window_update(AdaptiveState state, double d_observed, double target_delta) {
    const double error = d_observed - target_delta;
    state.r = std::clamp(state.r - state.alpha * error, 0.0, state.r_max);
    state.last_d = d_observed;
    ++state.window_index;
    state.stable_streak = std::abs(error) <= state.eps ? state.stable_streak + 1 : 0;
    if (state.stable_streak >= state.stable_windows_required) state.converged = true;
    return state;
}

AdaptiveResult run_adaptive(const SimConfig& config, const AdaptiveParams& params, double r0) {
    config.validate();
    AdaptiveState state = initial_state(params, config.delta, r0);

    Engine engine(config.job_dist, config.spot_dist, config.k, PolicySpec::three_phase(state.r),
                  config.seed);

    AdaptiveResult result;
    double cost_sum = 0.0;
    double delay_sum = 0.0;
    std::uint64_t departures_total = 0;

    double window_end = state.window_hours;
    double window_delay = 0.0;
    std::uint64_t window_departures = 0;

    while (!state.converged && state.window_index < params.max_windows) {
        while (engine.next_event_time() < window_end) {
            const Engine::Step step = engine.step();
            if (!step.outcome) continue;
            cost_sum += step.outcome->cost;
            delay_sum += step.outcome->delay;
            ++departures_total;
            window_delay += step.outcome->delay;
            ++window_departures;
        }
        if (window_departures == 0) {
            window_end += state.window_hours;
            continue;
        }

        WindowRecord rec;
        rec.r_before = state.r;
        rec.d_observed = window_delay / static_cast<double>(window_departures);
        rec.departures = window_departures;
        state = window_update(state, rec.d_observed, config.delta);
        rec.window_index = state.window_index;
        rec.sim_time = window_end;
        rec.r_after = state.r;
        rec.running_cost = cost_sum / static_cast<double>(departures_total);
        rec.running_delay = delay_sum / static_cast<double>(departures_total);
        result.trajectory.push_back(rec);

        engine.set_policy(PolicySpec::three_phase(state.r));
        window_end += state.window_hours;
        window_delay = 0.0;
        window_departures = 0;
    }

    result.converged = state.converged;
    result.r_final = state.r;
    result.windows = state.window_index;
    result.tail = measure(engine, config.warmup_jobs, config.horizon_jobs - config.warmup_jobs,
                          config.checkpoint_every, state.r);
    return result;
}

}  // namespace spotsched::adaptive
