#include "spotsched/csv.hpp"

#include <cmath>
#include <cstdio>

namespace spotsched::csv {

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_trajectory(std::ostream& out, const SimStats& stats) {
    out << kTrajectoryHeader << '\n';
    std::size_t i = 0;
    for (const Checkpoint& cp : stats.trajectory) {
        out << i++ << ',' << fmt(cp.sim_time) << ',' << cp.job_index << ',' << fmt(cp.running_cost) << ','
            << fmt(cp.running_delay) << ',' << fmt(cp.pi0_time) << ',' << fmt(cp.pi0_spot) << ','
            << (cp.r ? fmt(*cp.r) : std::string()) << '\n';
    }
}

void write_adaptive_trajectory(std::ostream& out, const adaptive::AdaptiveResult& result) {
    out << kAdaptiveHeader << '\n';
    for (const adaptive::WindowRecord& w : result.trajectory) {
        out << w.window_index << ',' << fmt(w.sim_time) << ',' << fmt(w.r_after) << ',' << fmt(w.d_observed)
            << ',' << fmt(w.running_cost) << ',' << fmt(w.running_delay) << '\n';
    }
}

void write_outcome_header(std::ostream& out) { out << kOutcomeHeader << '\n'; }

void write_outcome(std::ostream& out, const JobOutcome& o) {
    out << o.id << ',' << fmt(o.arrival_t) << ',' << fmt(o.depart_t) << ',' << server_name(o.server) << ','
        << fmt(o.delay) << ',' << fmt(o.cost) << '\n';
}

}  // namespace spotsched::csv

namespace spotsched {

nlohmann::json to_json(const SimStats& s) {
    nlohmann::json traj = nlohmann::json::array();
    for (const Checkpoint& cp : s.trajectory) {
        traj.push_back({{"job_index", cp.job_index},
                        {"sim_time", cp.sim_time},
                        {"running_cost", cp.running_cost},
                        {"running_delay", cp.running_delay},
                        {"pi0_time", cp.pi0_time},
                        {"pi0_spot", std::isnan(cp.pi0_spot) ? nlohmann::json() : nlohmann::json(cp.pi0_spot)},
                        {"r", cp.r ? nlohmann::json(*cp.r) : nlohmann::json()}});
    }
    return {{"jobs_counted", s.jobs_counted},
            {"mean_cost", s.mean_cost},
            {"mean_delay", s.mean_delay},
            {"pi_time", s.pi_time},
            {"pi0_spot_epochs", std::isnan(s.pi0_spot_epochs) ? nlohmann::json() : nlohmann::json(s.pi0_spot_epochs)},
            {"spots_seen", s.spots_seen},
            {"jobs_seen", s.jobs_seen},
            {"window_start", s.window_start},
            {"window_hours", s.window_hours},
            {"max_queue_len", s.max_queue_len},
            {"arrivals_by_len", s.arrivals_by_len},
            {"admits_by_len", s.admits_by_len},
            {"trajectory", traj}};
}

}  // namespace spotsched
