#pragma once

#include "spotsched/distributions.hpp"
#include "spotsched/policies.hpp"
#include "spotsched/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

namespace spotsched {

enum class Server { Spot, OnDemand };

const char* server_name(Server s) noexcept;

struct JobOutcome {
    std::uint64_t id = 0;
    double arrival_t = 0.0;
    double depart_t = 0.0;
    Server server = Server::OnDemand;
    double delay = 0.0;
    double cost = 0.0;
};

struct SimConfig {
    DistributionSpec job_dist = DistributionSpec::exponential(1.0);
    DistributionSpec spot_dist = DistributionSpec::exponential(1.0);
    double k = 1.0;
    double delta = 0.0;  // target mean delay; carried for policies and learners
    PolicySpec policy = PolicySpec::indefinite_cap(0);
    std::uint64_t horizon_jobs = 0;
    std::uint64_t warmup_jobs = 0;
    std::uint64_t checkpoint_every = 1000;
    std::uint64_t seed = 0;

    /// Throws ConfigError on violated invariants.
    void validate() const;
};

struct Checkpoint {
    std::uint64_t job_index = 0;  // counted outcomes so far
    double sim_time = 0.0;
    double running_cost = 0.0;
    double running_delay = 0.0;
    double pi0_time = 0.0;
    double pi0_spot = 0.0;  // NaN until a spot has been observed
    std::optional<double> r;
};

struct SimStats {
    std::uint64_t jobs_counted = 0;
    double mean_cost = 0.0;
    double mean_delay = 0.0;
    /// Time-averaged queue-length distribution over the measurement window.
    std::vector<double> pi_time;
    /// Fraction of spot arrivals in the window that found the queue empty.
    double pi0_spot_epochs = 0.0;
    std::uint64_t spots_seen = 0;
    std::uint64_t jobs_seen = 0;
    double window_start = 0.0;
    double window_hours = 0.0;
    std::size_t max_queue_len = 0;
    /// Arrivals (and admissions) in the window, indexed by the queue length
    /// the arriving job observed.
    std::vector<std::uint64_t> arrivals_by_len;
    std::vector<std::uint64_t> admits_by_len;
    std::vector<Checkpoint> trajectory;

    double pi0_time() const;
    double mean_queue_length() const;
    /// jobs_seen / window_hours.
    double arrival_rate() const;
};

using OutcomeSink = std::function<void(const JobOutcome&)>;

/// Discrete-event engine: a renewal job stream, a renewal spot stream that
/// instantly serves the head-of-line job, per-job admission and reneging to
/// on-demand. Events at equal timestamps resolve renege, then spot, then job.
class Engine {
public:
    enum class EventKind { JobArrival, SpotArrival, Renege };

    struct Step {
        EventKind kind = EventKind::JobArrival;
        double time = 0.0;
        std::size_t len_before = 0;
        std::size_t len_after = 0;
        std::uint64_t arrival_id = 0;  // JobArrival only
        bool admitted = false;         // JobArrival only
        std::optional<JobOutcome> outcome;
    };

    Engine(DistributionSpec job_dist, DistributionSpec spot_dist, double k, PolicySpec policy,
           std::uint64_t seed);

    Step step();

    double next_event_time();
    double now() const noexcept { return now_; }
    std::size_t queue_length() const noexcept { return live_; }
    std::uint64_t next_job_id() const noexcept { return next_id_; }
    double k() const noexcept { return k_; }

    const PolicySpec& policy() const noexcept { return policy_; }
    void set_policy(PolicySpec policy) { policy_ = std::move(policy); }

private:
    struct Queued {
        std::uint64_t id;
        double arrival_t;
        double max_wait;
        bool alive;
    };
    struct Deadline {
        double time;
        std::uint64_t id;
        bool operator>(const Deadline& o) const {
            return time != o.time ? time > o.time : id > o.id;
        }
    };

    Queued* find_live(std::uint64_t id);
    void drop_stale_deadlines();
    void trim_front();

    DistributionSpec job_dist_;
    DistributionSpec spot_dist_;
    double k_;
    PolicySpec policy_;
    RandomStream job_rng_;
    RandomStream spot_rng_;
    RandomStream admission_rng_;
    RandomStream wait_rng_;

    double now_ = 0.0;
    double next_job_t_;
    double next_spot_t_;
    std::uint64_t next_id_ = 0;
    std::deque<Queued> queue_;
    std::size_t live_ = 0;
    std::priority_queue<Deadline, std::vector<Deadline>, std::greater<>> deadlines_;
};

/// Measures an already-running engine: skips `warmup` further arrivals, then
/// records the next `count` arrivals' outcomes and the occupancy/spot-epoch
/// statistics over the time window they span. Returns once every counted job
/// has departed. Arrivals continue past the window so counted jobs see
/// undisturbed dynamics.
SimStats measure(Engine& engine, std::uint64_t warmup, std::uint64_t count,
                 std::uint64_t checkpoint_every, std::optional<double> r_tag = std::nullopt,
                 const OutcomeSink& sink = {});

/// Fresh engine from `config`, measured over jobs [warmup_jobs, horizon_jobs).
SimStats run(const SimConfig& config, const OutcomeSink& sink = {});

/// Spot-epoch empty-queue probability used by the cost identity.
double empirical_pi0_for_identity(const SimStats& stats);

}  // namespace spotsched
