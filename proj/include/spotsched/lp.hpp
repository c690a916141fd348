#pragma once

#include "spotsched/distributions.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spotsched::lp {

/// Grid form of the single-slot maximal-wait program: choose a distribution
/// of X on the grid maximizing sum_i f_i * P(S < w_i) subject to
/// sum_i f_i = 1 and sum_i f_i * int_0^{w_i} P(S > y) dy = delta / (1 - lambda*delta).
struct DiscretizedLP {
    std::vector<double> grid;        // w_i, strictly increasing, grid[0] = 0
    std::vector<double> obj_coeff;   // P(S < w_i)
    std::vector<double> cons_coeff;  // int_0^{w_i} P(S > y) dy, hours
    double target = 0.0;             // delta / (1 - lambda*delta)
    double lambda = 0.0;
    double delta = 0.0;
};

struct Atom {
    double w;
    double mass;
};

struct AtomicSolution {
    std::vector<Atom> atoms;  // one or two entries
    double objective = 0.0;   // P(X > S)
};

/// Default w_max: the support end for bounded spot distributions, ten means
/// otherwise.
double default_w_max(const DistributionSpec& spot_dist);

/// `grid_size` uniform intervals on [0, w_max] plus the spot distribution's
/// breakpoints inside that range. Requires lambda*delta < 1.
DiscretizedLP build(const DistributionSpec& spot_dist, double lambda, double delta,
                    std::size_t grid_size, std::optional<double> w_max = std::nullopt);

/// Exact optimum over distributions supported on at most two grid points.
/// With two equality constraints some optimal basic solution has at most two
/// positive masses, so this is the grid optimum. O(G^2).
AtomicSolution solve_two_atom(const DiscretizedLP& lp);

struct VerificationReport {
    bool passed = true;
    double objective_gap = 0.0;  // |objective - mu*delta/(1 - lambda*delta)|
    double interior_mass = 0.0;  // uniform spots only
    std::optional<double> laplace_residual;  // exponential spots only
    std::string message;
};

/// Checks a solution against the known closed-form optima: for uniform spots
/// no mass strictly inside (0, L); for exponential spots the Laplace
/// condition at tolerance 1e-6. Other families are reported without a verdict.
VerificationReport verify_closed_form(const DistributionSpec& spot_dist, double lambda, double mu,
                                      double delta, const AtomicSolution& solution);

/// The atoms as a distribution (deterministic or two-point).
DistributionSpec to_distribution(const AtomicSolution& solution);

}  // namespace spotsched::lp
