#pragma once

#include "spotsched/distributions.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spotsched::analytic {

/// Steady-state cost per job of any policy given the empty-queue
/// probability at spot epochs:
///   E[C] = k - (k-1) * (mu/lambda) * (1 - pi0).
/// Throws PreconditionError when the result leaves [1, k].
double cost_general(double k, double lambda, double mu, double pi0);

/// Optimal single-slot cost k - (k-1)*mu*delta. Requires mu*delta <= 1.
double cost_single_slot_opt(double k, double mu, double delta);

/// Largest delta for which a single queue slot is optimal: P(A <= S) / lambda.
/// `halfwidth` carries the Monte-Carlo uncertainty (zero for closed forms).
ProbabilityEstimate small_delta_threshold(const DistributionSpec& job_dist,
                                          const DistributionSpec& spot_dist, RandomStream& rng,
                                          std::uint64_t budget = kDefaultProbLeBudget);

/// Queue capped at n with Poisson jobs and exponential spots.
struct MM1NSolution {
    std::size_t n = 0;
    double rho = 0.0;  // lambda / mu
    std::vector<double> pi;
    double expected_cost = 0.0;
    /// Right-hand side of the delay requirement, i.e. the mean delay the
    /// cap-n queue produces when every arrival below the cap joins.
    double delay_lower_bound = 0.0;
};

MM1NSolution mm1n_solution(double k, double lambda, double mu, std::size_t n);

struct LaplaceCheck {
    bool ok = false;
    double residual = 0.0;
    double target = 0.0;
};

/// Compares E[exp(-mu X)] of a maximal-wait distribution against the value
/// (1 - (lambda+mu)*delta) / (1 - lambda*delta) that makes a single-slot
/// queue with exponential spots optimal. Requires lambda*delta < 1.
LaplaceCheck laplace_condition_check(const DistributionSpec& wait_dist, double lambda, double mu,
                                     double delta, double tol);

}  // namespace spotsched::analytic
