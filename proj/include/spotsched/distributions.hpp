#pragma once

#include "spotsched/rng.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace spotsched {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace dist {

struct Exponential {
    double rate;  // per hour

    bool operator==(const Exponential&) const = default;
};

/// Mean is shape * scale.
struct Gamma {
    double shape;
    double scale;  // hours

    bool operator==(const Gamma&) const = default;
};

/// Support [0, hi].
struct Uniform {
    double hi;

    bool operator==(const Uniform&) const = default;
};

struct Deterministic {
    double value;

    bool operator==(const Deterministic&) const = default;
};

/// Mass p0 at v0 and 1 - p0 at v1. Both values must be finite.
struct TwoPoint {
    double v0;
    double p0;
    double v1;

    bool operator==(const TwoPoint&) const = default;
};

/// Bath-tub spot inter-arrival model for preemptible VMs:
///
///   F(t) = amp * (1 - exp(-t/tau1) + exp((t-b)/tau2) * 1{t <= tau2}),  0 <= t < b
///
/// The formula saturates below one; the remaining mass 1 - F(b-) sits as an
/// atom at t = b, the preemption deadline.
struct BathtubGCP {
    double amp;
    double b;
    double tau1;
    double tau2;

    bool operator==(const BathtubGCP&) const = default;
};

/// The value +infinity ("wait forever").
struct Indefinite {
    bool operator==(const Indefinite&) const = default;
};

}  // namespace dist

/// Tagged description of an inter-arrival or maximal-wait distribution.
///
/// Construction goes through the named factories, which validate parameters
/// and throw ConfigError; a constructed spec is always valid.
class DistributionSpec {
public:
    using Variant = std::variant<dist::Exponential, dist::Gamma, dist::Uniform, dist::Deterministic,
                                 dist::TwoPoint, dist::BathtubGCP, dist::Indefinite>;

    static DistributionSpec exponential(double rate);
    static DistributionSpec gamma(double shape, double scale);
    static DistributionSpec uniform(double hi);
    static DistributionSpec deterministic(double value);
    static DistributionSpec two_point(double v0, double p0, double v1);
    static DistributionSpec bathtub(double amp, double b, double tau1, double tau2);
    static DistributionSpec indefinite();

    const Variant& variant() const noexcept { return v_; }

    template <class T>
    bool is() const noexcept {
        return std::holds_alternative<T>(v_);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(v_);
    }

    /// Stable lowercase tag used in configuration files.
    std::string kind() const;

    bool operator==(const DistributionSpec&) const = default;

private:
    explicit DistributionSpec(Variant v) : v_(v) {}
    Variant v_;
};

/// One draw. Indefinite yields +infinity. Bathtub draws use inverse-transform
/// bisection on the continuous part.
double sample(const DistributionSpec& spec, RandomStream& rng);

/// P(X <= t).
double cdf(const DistributionSpec& spec, double t);
/// P(X < t); differs from cdf only at atoms.
double cdf_left(const DistributionSpec& spec, double t);
/// P(X > t) = 1 - cdf.
double survival(const DistributionSpec& spec, double t);

/// E[X]. Throws PreconditionError for Indefinite.
double mean(const DistributionSpec& spec);

/// E[exp(-s X)] for s >= 0. Throws PreconditionError for Indefinite.
double laplace(const DistributionSpec& spec, double s);

/// Right end of the support, +infinity when unbounded.
double support_max(const DistributionSpec& spec);

/// Points where cdf jumps or changes formula; used to place grid and
/// quadrature breakpoints.
std::vector<double> breakpoints(const DistributionSpec& spec);

/// Same family rescaled to mean 1/rate. Bathtub, two-point and indefinite
/// specs cannot be rescaled and throw ConfigError.
DistributionSpec with_rate(const DistributionSpec& spec, double rate);

struct ProbabilityEstimate {
    double value;
    double halfwidth;  // 95% confidence; 0 for closed forms
};

/// P(A <= S) for independent A ~ a, S ~ b. Closed form when both are
/// exponential or both deterministic, Monte Carlo otherwise.
ProbabilityEstimate prob_le(const DistributionSpec& a, const DistributionSpec& b,
                            std::uint64_t budget, RandomStream& rng);

inline constexpr std::uint64_t kDefaultProbLeBudget = 1'000'000;

}  // namespace spotsched
