#include "spotsched/analytic.hpp"

#include "spotsched/errors.hpp"

#include <cmath>
#include <string>

namespace spotsched::analytic {

double cost_general(double k, double lambda, double mu, double pi0) {
    if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw PreconditionError("cost_general: pi0 must lie in [0, 1]");
    if (!(lambda > 0.0) || !(mu > 0.0)) throw PreconditionError("cost_general: rates must be > 0");
    const double cost = k - (k - 1.0) * (mu / lambda) * (1.0 - pi0);
    constexpr double kSlack = 1e-12;
    if (cost < 1.0 - kSlack * k || cost > k + kSlack * k)
        throw PreconditionError("inconsistent pi0 for given rates: cost " + std::to_string(cost) +
                                " outside [1, k]");
    return cost;
}

double cost_single_slot_opt(double k, double mu, double delta) {
    if (!(mu > 0.0) || !(delta >= 0.0)) throw PreconditionError("cost_single_slot_opt: need mu > 0, delta >= 0");
    if (mu * delta > 1.0)
        throw PreconditionError("cost_single_slot_opt: mu*delta > 1 is outside the small-delta regime");
    return k - (k - 1.0) * mu * delta;
}

ProbabilityEstimate small_delta_threshold(const DistributionSpec& job_dist,
                                          const DistributionSpec& spot_dist, RandomStream& rng,
                                          std::uint64_t budget) {
    const double lambda = 1.0 / mean(job_dist);
    const ProbabilityEstimate p = prob_le(job_dist, spot_dist, budget, rng);
    return {p.value / lambda, p.halfwidth / lambda};
}

MM1NSolution mm1n_solution(double k, double lambda, double mu, std::size_t n) {
    if (n < 1) throw PreconditionError("mm1n_solution: n must be >= 1");
    if (!(lambda > 0.0) || !(mu > 0.0)) throw PreconditionError("mm1n_solution: rates must be > 0");

    MM1NSolution out;
    out.n = n;
    out.rho = lambda / mu;
    const double rho = out.rho;
    const auto n1 = static_cast<double>(n + 1);

    // (rho - 1) / (rho^{n+1} - 1) = pi_0, with its 1/(n+1) limit at rho = 1.
    const double empty = std::abs(rho - 1.0) < 1e-9 ? 1.0 / n1 : (rho - 1.0) / (std::pow(rho, n1) - 1.0);
    out.expected_cost = k - (k - 1.0) * (mu / lambda) * (1.0 - empty);

    double weighted = 0.0;
    double total = 0.0;
    double term = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
        term *= rho;
        weighted += static_cast<double>(i) * term;
        total += term;
    }
    out.delay_lower_bound = weighted / (1.0 + total) / lambda;

    out.pi.resize(n + 1);
    term = 1.0;
    for (std::size_t i = 0; i <= n; ++i) {
        out.pi[i] = term / (1.0 + total);
        term *= rho;
    }
    return out;
}

LaplaceCheck laplace_condition_check(const DistributionSpec& wait_dist, double lambda, double mu,
                                     double delta, double tol) {
    if (!(lambda * delta < 1.0)) throw PreconditionError("laplace_condition_check: requires lambda*delta < 1");
    LaplaceCheck out;
    out.target = (1.0 - (lambda + mu) * delta) / (1.0 - lambda * delta);
    out.residual = std::abs(laplace(wait_dist, mu) - out.target);
    out.ok = out.residual <= tol;
    return out;
}

}  // namespace spotsched::analytic
