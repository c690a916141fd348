#include "spotsched/lp.hpp"

#include "spotsched/analytic.hpp"
#include "spotsched/errors.hpp"
#include "spotsched/kernels/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spotsched::lp {

namespace {

// Integral of the survival function over [a, b], no breakpoints inside.
double survival_integral(const DistributionSpec& spot, double a, double b) {
    if (!(b > a)) return 0.0;
    auto f = [&](double y) { return survival(spot, y); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 4, 1e-11);
}

std::vector<double> cumulative_survival(const DistributionSpec& spot, const std::vector<double>& grid) {
    std::vector<double> c(grid.size(), 0.0);
    if (spot.is<dist::Exponential>()) {
        const double rate = spot.as<dist::Exponential>().rate;
        for (std::size_t i = 0; i < grid.size(); ++i) c[i] = -std::expm1(-rate * grid[i]) / rate;
        return c;
    }
    if (spot.is<dist::Uniform>()) {
        const double hi = spot.as<dist::Uniform>().hi;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double w = std::min(grid[i], hi);
            c[i] = w - w * w / (2.0 * hi);
        }
        return c;
    }
    for (std::size_t i = 1; i < grid.size(); ++i) c[i] = c[i - 1] + survival_integral(spot, grid[i - 1], grid[i]);
    return c;
}

}  // namespace

double default_w_max(const DistributionSpec& spot_dist) {
    const double end = support_max(spot_dist);
    if (std::isfinite(end) && end > 0.0) return end;
    return 10.0 * mean(spot_dist);
}

DiscretizedLP build(const DistributionSpec& spot_dist, double lambda, double delta,
                    std::size_t grid_size, std::optional<double> w_max) {
    if (!(lambda > 0.0) || !(delta >= 0.0)) throw PreconditionError("lp::build: need lambda > 0, delta >= 0");
    if (!(lambda * delta < 1.0)) throw PreconditionError("lp::build: requires lambda*delta < 1");
    if (grid_size < 1) throw PreconditionError("lp::build: grid_size must be >= 1");
    if (spot_dist.is<dist::Indefinite>()) throw PreconditionError("lp::build: spot distribution must have finite mean");

    const double hi = w_max.value_or(default_w_max(spot_dist));
    if (!(hi > 0.0) || !std::isfinite(hi)) throw PreconditionError("lp::build: w_max must be finite and > 0");

    DiscretizedLP lp;
    lp.lambda = lambda;
    lp.delta = delta;
    lp.target = delta / (1.0 - lambda * delta);

    lp.grid.reserve(grid_size + 4);
    for (std::size_t i = 0; i < grid_size; ++i)
        lp.grid.push_back(hi * static_cast<double>(i) / static_cast<double>(grid_size));
    lp.grid.push_back(hi);
    for (double b : breakpoints(spot_dist))
        if (b > 0.0 && b < hi) lp.grid.push_back(b);
    std::sort(lp.grid.begin(), lp.grid.end());
    lp.grid.erase(std::unique(lp.grid.begin(), lp.grid.end()), lp.grid.end());

    lp.obj_coeff.resize(lp.grid.size());
    for (std::size_t i = 0; i < lp.grid.size(); ++i) lp.obj_coeff[i] = cdf_left(spot_dist, lp.grid[i]);
    lp.cons_coeff = cumulative_survival(spot_dist, lp.grid);
    return lp;
}

AtomicSolution solve_two_atom(const DiscretizedLP& lp) {
    const std::vector<double>& c = lp.cons_coeff;
    const std::vector<double>& o = lp.obj_coeff;
    const double target = lp.target;
    const std::size_t n = c.size();
    const double tol = 1e-12 * std::max(1.0, target);

    AtomicSolution best;
    best.objective = -kInfinity;

    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(c[i] - target) <= tol && o[i] > best.objective) {
            best.objective = o[i];
            best.atoms = {{lp.grid[i], 1.0}};
        }
    }

    // c is nondecreasing: left atoms have c < target, right atoms c >= target.
    const auto right_begin =
        static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), target) - c.begin());
    std::size_t best_i = kernels::kNoIndex;
    std::size_t best_j = kernels::kNoIndex;
    double pair_best = best.objective;
    const std::span<const double> c_right(c.data() + right_begin, n - right_begin);
    const std::span<const double> o_right(o.data() + right_begin, n - right_begin);
    for (std::size_t i = 0; i < right_begin; ++i) {
        const kernels::RowBest row = kernels::scan_pairs(c[i], o[i], target, c_right, o_right);
        if (row.index != kernels::kNoIndex && row.objective > pair_best) {
            pair_best = row.objective;
            best_i = i;
            best_j = right_begin + row.index;
        }
    }

    if (best_i != kernels::kNoIndex) {
        const double span = c[best_j] - c[best_i];
        const double m_right = (target - c[best_i]) / span;
        best.objective = pair_best;
        best.atoms.clear();
        if (1.0 - m_right > 0.0) best.atoms.push_back({lp.grid[best_i], 1.0 - m_right});
        if (m_right > 0.0) best.atoms.push_back({lp.grid[best_j], m_right});
    }

    if (best.atoms.empty()) {
        std::ostringstream msg;
        msg << "delta unreachable with w_max: target " << target << " h exceeds the largest constraint value "
            << (c.empty() ? 0.0 : c.back()) << " h; increase w_max";
        throw PreconditionError(msg.str());
    }
    return best;
}

DistributionSpec to_distribution(const AtomicSolution& solution) {
    if (solution.atoms.size() == 1) return DistributionSpec::deterministic(solution.atoms[0].w);
    if (solution.atoms.size() == 2) {
        const Atom& a = solution.atoms[0];
        const Atom& b = solution.atoms[1];
        return DistributionSpec::two_point(a.w, a.mass / (a.mass + b.mass), b.w);
    }
    throw PreconditionError("to_distribution: a solution has one or two atoms");
}

VerificationReport verify_closed_form(const DistributionSpec& spot_dist, double lambda, double mu,
                                      double delta, const AtomicSolution& solution) {
    VerificationReport report;
    const double closed_form = mu * delta / (1.0 - lambda * delta);
    report.objective_gap = std::abs(solution.objective - closed_form);

    std::ostringstream msg;
    if (spot_dist.is<dist::Uniform>()) {
        const double limit = spot_dist.as<dist::Uniform>().hi;
        const double tol = 1e-9 * limit;
        for (const Atom& a : solution.atoms)
            if (a.w > tol && a.w < limit - tol) report.interior_mass += a.mass;
        report.passed = report.interior_mass <= 1e-12;
        if (report.passed) msg << "uniform spots: all mass at 0 or at L=" << limit;
        else msg << "uniform spots: interior mass " << report.interior_mass << " strictly inside (0, " << limit << ")";
    } else if (spot_dist.is<dist::Exponential>()) {
        const analytic::LaplaceCheck check =
            analytic::laplace_condition_check(to_distribution(solution), lambda, mu, delta, 1e-6);
        report.laplace_residual = check.residual;
        report.passed = check.ok;
        msg << "exponential spots: laplace residual " << check.residual << (check.ok ? " (ok)" : " (exceeds 1e-6)");
    } else {
        msg << spot_dist.kind() << " spots: no closed form to verify against";
    }
    msg << "; objective gap " << report.objective_gap;
    report.message = msg.str();
    return report;
}

}  // namespace spotsched::lp
