#include "spotsched/sim.hpp"

#include "spotsched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spotsched {

const char* server_name(Server s) noexcept { return s == Server::Spot ? "spot" : "on_demand"; }

void SimConfig::validate() const {
    if (!(k >= 1.0 && std::isfinite(k))) throw ConfigError("k must be finite and >= 1");
    if (!(delta >= 0.0 && std::isfinite(delta))) throw ConfigError("delta must be finite and >= 0");
    if (!(horizon_jobs > warmup_jobs)) throw ConfigError("horizon_jobs must exceed warmup_jobs");
    if (job_dist.is<dist::Indefinite>()) throw ConfigError("job_dist must have a finite mean");
    if (spot_dist.is<dist::Indefinite>()) throw ConfigError("spot_dist must have a finite mean");
}

double SimStats::pi0_time() const { return pi_time.empty() ? 1.0 : pi_time.front(); }

double SimStats::mean_queue_length() const {
    double s = 0.0;
    for (std::size_t n = 0; n < pi_time.size(); ++n) s += static_cast<double>(n) * pi_time[n];
    return s;
}

double SimStats::arrival_rate() const {
    return window_hours > 0.0 ? static_cast<double>(jobs_seen) / window_hours : 0.0;
}

Engine::Engine(DistributionSpec job_dist, DistributionSpec spot_dist, double k, PolicySpec policy,
               std::uint64_t seed)
    : job_dist_(std::move(job_dist)),
      spot_dist_(std::move(spot_dist)),
      k_(k),
      policy_(std::move(policy)),
      job_rng_(RandomStream::derive(seed, "jobs")),
      spot_rng_(RandomStream::derive(seed, "spots")),
      admission_rng_(RandomStream::derive(seed, "policy")),
      wait_rng_(RandomStream::derive(seed, "waits")) {
    next_job_t_ = sample(job_dist_, job_rng_);
    next_spot_t_ = sample(spot_dist_, spot_rng_);
}

Engine::Queued* Engine::find_live(std::uint64_t id) {
    auto it = std::lower_bound(queue_.begin(), queue_.end(), id,
                               [](const Queued& q, std::uint64_t v) { return q.id < v; });
    if (it == queue_.end() || it->id != id || !it->alive) return nullptr;
    return &*it;
}

void Engine::drop_stale_deadlines() {
    while (!deadlines_.empty() && find_live(deadlines_.top().id) == nullptr) deadlines_.pop();
}

void Engine::trim_front() {
    while (!queue_.empty() && !queue_.front().alive) queue_.pop_front();
}

double Engine::next_event_time() {
    drop_stale_deadlines();
    const double t_renege = deadlines_.empty() ? kInfinity : deadlines_.top().time;
    return std::min({t_renege, next_spot_t_, next_job_t_});
}

Engine::Step Engine::step() {
    drop_stale_deadlines();
    const double t_renege = deadlines_.empty() ? kInfinity : deadlines_.top().time;

    Step out;
    out.len_before = live_;

    if (t_renege <= next_spot_t_ && t_renege <= next_job_t_) {
        const Deadline d = deadlines_.top();
        deadlines_.pop();
        now_ = d.time;
        Queued* job = find_live(d.id);
        job->alive = false;
        --live_;
        out.kind = EventKind::Renege;
        out.outcome = JobOutcome{job->id, job->arrival_t, now_, Server::OnDemand, job->max_wait, k_};
        trim_front();
    } else if (next_spot_t_ <= next_job_t_) {
        now_ = next_spot_t_;
        out.kind = EventKind::SpotArrival;
        if (live_ > 0) {
            trim_front();
            Queued& head = queue_.front();
            head.alive = false;
            --live_;
            out.outcome = JobOutcome{head.id, head.arrival_t, now_, Server::Spot, now_ - head.arrival_t, 1.0};
            trim_front();
        }
        next_spot_t_ = now_ + sample(spot_dist_, spot_rng_);
    } else {
        now_ = next_job_t_;
        out.kind = EventKind::JobArrival;
        const std::uint64_t id = next_id_++;
        out.arrival_id = id;
        const PolicyDecision decision = decide(policy_, live_, admission_rng_, wait_rng_);
        if (decision.admit && !(decision.max_wait >= 0.0)) {
            throw SimulationError("policy " + policy_.kind() + " returned an invalid maximal wait " +
                                  std::to_string(decision.max_wait));
        }
        if (!decision.admit || decision.max_wait == 0.0) {
            out.outcome = JobOutcome{id, now_, now_, Server::OnDemand, 0.0, k_};
        } else {
            out.admitted = true;
            queue_.push_back({id, now_, decision.max_wait, true});
            ++live_;
            if (live_ > policy_.cap()) {
                throw SimulationError("queue length " + std::to_string(live_) + " exceeds the cap " +
                                      std::to_string(policy_.cap()) + " of policy " + policy_.kind());
            }
            if (std::isfinite(decision.max_wait)) deadlines_.push({now_ + decision.max_wait, id});
        }
        next_job_t_ = now_ + sample(job_dist_, job_rng_);
    }

    out.time = now_;
    out.len_after = live_;
    return out;
}

SimStats measure(Engine& engine, std::uint64_t warmup, std::uint64_t count,
                 std::uint64_t checkpoint_every, std::optional<double> r_tag, const OutcomeSink& sink) {
    if (count == 0) throw ConfigError("measure: count must be positive");

    const std::uint64_t first_id = engine.next_job_id() + warmup;
    const std::uint64_t end_id = first_id + count;

    SimStats stats;
    std::vector<double> occupancy;
    bool started = false;
    bool ended = false;
    double last_t = 0.0;
    double cost_sum = 0.0;
    double delay_sum = 0.0;
    std::uint64_t spots_empty = 0;

    auto accumulate = [&](double t, std::size_t len) {
        if (occupancy.size() <= len) occupancy.resize(len + 1, 0.0);
        occupancy[len] += t - last_t;
        last_t = t;
    };
    auto checkpoint = [&]() {
        Checkpoint cp;
        cp.job_index = stats.jobs_counted;
        cp.sim_time = engine.now();
        cp.running_cost = cost_sum / static_cast<double>(stats.jobs_counted);
        cp.running_delay = delay_sum / static_cast<double>(stats.jobs_counted);
        const double elapsed = last_t - stats.window_start;
        cp.pi0_time = elapsed > 0.0 && !occupancy.empty() ? occupancy[0] / elapsed : 1.0;
        cp.pi0_spot = stats.spots_seen > 0 ? static_cast<double>(spots_empty) / static_cast<double>(stats.spots_seen)
                                           : std::nan("");
        cp.r = r_tag;
        stats.trajectory.push_back(cp);
    };

    while (!ended || stats.jobs_counted < count) {
        const Engine::Step step = engine.step();
        const bool in_window = started && !ended;

        if (in_window) accumulate(step.time, step.len_before);

        if (step.kind == Engine::EventKind::JobArrival) {
            if (step.arrival_id == first_id) {
                started = true;
                stats.window_start = step.time;
                last_t = step.time;
            } else if (step.arrival_id == end_id) {
                ended = true;
                stats.window_hours = step.time - stats.window_start;
            }
            if (step.arrival_id >= first_id && step.arrival_id < end_id) {
                const std::size_t len = step.len_before;
                if (stats.arrivals_by_len.size() <= len) {
                    stats.arrivals_by_len.resize(len + 1, 0);
                    stats.admits_by_len.resize(len + 1, 0);
                }
                ++stats.arrivals_by_len[len];
                if (step.admitted) ++stats.admits_by_len[len];
                ++stats.jobs_seen;
            }
        } else if (step.kind == Engine::EventKind::SpotArrival && in_window) {
            ++stats.spots_seen;
            if (step.len_before == 0) ++spots_empty;
        }

        if (started && !ended) stats.max_queue_len = std::max(stats.max_queue_len, step.len_after);

        if (step.outcome && step.outcome->id >= first_id && step.outcome->id < end_id) {
            const JobOutcome& o = *step.outcome;
            cost_sum += o.cost;
            delay_sum += o.delay;
            ++stats.jobs_counted;
            if (sink) sink(o);
            if (checkpoint_every > 0 && stats.jobs_counted % checkpoint_every == 0) checkpoint();
        }
    }

    if (stats.trajectory.empty() || stats.trajectory.back().job_index != stats.jobs_counted) checkpoint();

    stats.mean_cost = cost_sum / static_cast<double>(stats.jobs_counted);
    stats.mean_delay = delay_sum / static_cast<double>(stats.jobs_counted);
    stats.pi0_spot_epochs = stats.spots_seen > 0
                                ? static_cast<double>(spots_empty) / static_cast<double>(stats.spots_seen)
                                : std::nan("");
    // Normalize by the accumulated time rather than the window length so rounding cannot leak mass.
    double occupied = 0.0;
    for (double t : occupancy) occupied += t;
    stats.pi_time.resize(occupancy.size());
    for (std::size_t n = 0; n < occupancy.size(); ++n) stats.pi_time[n] = occupied > 0.0 ? occupancy[n] / occupied : 0.0;
    if (stats.pi_time.empty()) stats.pi_time.push_back(1.0);
    return stats;
}

SimStats run(const SimConfig& config, const OutcomeSink& sink) {
    config.validate();
    Engine engine(config.job_dist, config.spot_dist, config.k, config.policy, config.seed);
    std::optional<double> r_tag;
    if (config.policy.is<policy::ThreePhase>()) r_tag = config.policy.as<policy::ThreePhase>().r;
    return measure(engine, config.warmup_jobs, config.horizon_jobs - config.warmup_jobs,
                   config.checkpoint_every, r_tag, sink);
}

double empirical_pi0_for_identity(const SimStats& stats) {
    if (stats.spots_seen == 0)
        throw PreconditionError("no spot arrivals in the measurement window; pi0 at spot epochs is undefined");
    return stats.pi0_spot_epochs;
}

}  // namespace spotsched
