#pragma once

#include "spotsched/adaptive.hpp"
#include "spotsched/sim.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace spotsched::csv {

/// Decimal with 9 significant digits; NaN and empty optionals print as "".
std::string fmt(double v);

inline constexpr const char* kTrajectoryHeader =
    "checkpoint,sim_time_h,jobs_seen,running_cost,running_delay,pi0_time,pi0_spot,r";
inline constexpr const char* kAdaptiveHeader =
    "window_index,sim_time_h,r,d_window_h,running_cost,running_delay";
inline constexpr const char* kOutcomeHeader = "id,arrival_t,depart_t,server,delay,cost";

void write_trajectory(std::ostream& out, const SimStats& stats);
void write_adaptive_trajectory(std::ostream& out, const adaptive::AdaptiveResult& result);
void write_outcome_header(std::ostream& out);
void write_outcome(std::ostream& out, const JobOutcome& o);

}  // namespace spotsched::csv

namespace spotsched {

/// Full SimStats as JSON; identical stats serialize to identical bytes.
nlohmann::json to_json(const SimStats& stats);

}  // namespace spotsched
