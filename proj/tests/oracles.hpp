#pragma once

// Reference computations for the tests. Nothing here calls into the library's
// analytic or lp code; each value is obtained a second, independent way.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Stationary distribution of a birth-death chain on {0..N} with birth rates
/// birth[n] (n < N) and constant death rate mu, by Gaussian elimination on
/// pi Q = 0 with one balance row replaced by the normalization.
inline std::vector<double> birth_death_stationary(const std::vector<double>& birth, double mu) {
    const std::size_t n = birth.size() + 1;
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) {
            q[i][i + 1] = birth[i];
            q[i][i] -= birth[i];
        }
        if (i > 0) {
            q[i][i - 1] = mu;
            q[i][i] -= mu;
        }
    }
    // Solve A x = e with A = Q^T and the last row set to ones.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a[r][c] = q[c][r];
    for (std::size_t c = 0; c < n; ++c) a[n - 1][c] = 1.0;
    a[n - 1][n] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        if (a[col][col] == 0.0) throw std::runtime_error("singular generator");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
    return pi;
}

struct QueueMetrics {
    double cost;
    double delay;
    double pi0;
    double mean_len;
};

/// Poisson jobs and spots; every admitted job waits indefinitely. A spot
/// serves one job, so spot-served throughput is mu (1 - pi0) and the rest of
/// the jobs pay k. Delay over all jobs follows from Little's law.
inline QueueMetrics birth_death_metrics(double k, double lambda, double mu, const std::vector<double>& birth) {
    const std::vector<double> pi = birth_death_stationary(birth, mu);
    double len = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) len += static_cast<double>(i) * pi[i];
    const double spot_share = mu * (1.0 - pi[0]) / lambda;
    return {spot_share * 1.0 + (1.0 - spot_share) * k, len / lambda, pi[0], len};
}

/// Capped queue: admit iff length < n.
inline QueueMetrics capped_queue(double k, double lambda, double mu, std::size_t n) {
    return birth_death_metrics(k, lambda, mu, std::vector<double>(n, lambda));
}

/// Fractional cap r: admit below floor(r), with probability r - floor(r) at floor(r).
inline QueueMetrics fractional_cap(double k, double lambda, double mu, double r) {
    const auto whole = static_cast<std::size_t>(std::floor(r));
    const double q = r - static_cast<double>(whole);
    std::vector<double> birth(whole, lambda);
    if (q > 0.0) birth.push_back(lambda * q);
    if (birth.empty()) return {k, 0.0, 1.0, 0.0};
    return birth_death_metrics(k, lambda, mu, birth);
}

/// Single-slot policy under Poisson jobs and Poisson spots, by renewal reward:
/// an idle period Exp(lambda) alternates with a busy period of mean
/// m = E[min(X, S)]; an admitted job is spot-served with probability P(S < X).
/// `admit` is the probability an arrival to an empty system joins.
inline QueueMetrics single_slot(double k, double lambda, double admit, double busy_mean, double p_spot) {
    const double m = admit * busy_mean;
    const double pi0 = 1.0 / (1.0 + lambda * m);
    const double spot_share = pi0 * admit * p_spot;
    return {spot_share + (1.0 - spot_share) * k, pi0 * admit * busy_mean, pi0, 1.0 - pi0};
}

inline QueueMetrics single_slot_det(double k, double lambda, double mu, double x) {
    const double p = 1.0 - std::exp(-mu * x);
    return single_slot(k, lambda, 1.0, p / mu, p);
}

inline QueueMetrics single_slot_exp(double k, double lambda, double mu, double phi) {
    return single_slot(k, lambda, 1.0, 1.0 / (mu + phi), mu / (mu + phi));
}

inline QueueMetrics single_slot_forever(double k, double lambda, double mu, double p) {
    return single_slot(k, lambda, p, 1.0 / mu, 1.0);
}

/// Composite trapezoid rule on [a, b] with n panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
    return s * h;
}

/// Asymptotic 99% critical value of the one-sample Kolmogorov-Smirnov statistic.
inline double ks_critical_99(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

/// sup_t |F_n(t) - F(t)| over sorted samples, checking both one-sided limits.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf,
                          const std::function<double(double)>& cdf_left) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // Only the last copy of a tied value sees the full empirical jump.
        if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
        std::size_t first = i;
        while (first > 0 && xs[first - 1] == xs[i]) --first;
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf(xs[i])));
        d = std::max(d, std::abs(static_cast<double>(first) / n - cdf_left(xs[i])));
    }
    return d;
}

/// Best two-atom LP value by direct double loop, written independently of
/// the library solver: maximize m_i o_i + m_j o_j subject to m_i + m_j = 1,
/// m_i c_i + m_j c_j = target, masses in [0, 1].
inline double brute_two_atom(const std::vector<double>& c, const std::vector<double>& o, double target) {
    double best = -1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(c[i] - target) <= 1e-12 * std::max(1.0, target)) best = std::max(best, o[i]);
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            if (c[j] == c[i]) continue;
            const double mj = (target - c[i]) / (c[j] - c[i]);
            if (mj < 0.0 || mj > 1.0) continue;
            best = std::max(best, (1.0 - mj) * o[i] + mj * o[j]);
        }
    }
    return best;
}

}  // namespace oracle
