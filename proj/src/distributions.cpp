#include "spotsched/distributions.hpp"

#include "spotsched/errors.hpp"
#include "spotsched/kernels/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace spotsched {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
}

constexpr double kQuadTol = 1e-10;

template <class F>
double integrate(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, kQuadTol);
}

// Continuous part of the bathtub CDF on [0, b).
double bathtub_body(const dist::BathtubGCP& d, double t) {
    const double rise = t <= d.tau2 ? std::exp((t - d.b) / d.tau2) : 0.0;
    return d.amp * (1.0 - std::exp(-t / d.tau1) + rise);
}

double bathtub_left_of_deadline(const dist::BathtubGCP& d) {
    const double rise = d.b <= d.tau2 ? 1.0 : 0.0;
    return d.amp * (1.0 - std::exp(-d.b / d.tau1) + rise);
}

// Integrates g(t) * S(t) over [0, b) with a split at tau2 where the printed
// formula is discontinuous.
template <class G>
double bathtub_integrate_survival(const dist::BathtubGCP& d, G&& g) {
    auto integrand = [&](double t) { return g(t) * (1.0 - bathtub_body(d, t)); };
    if (d.tau2 < d.b) return integrate(integrand, 0.0, d.tau2) + integrate(integrand, d.tau2, d.b);
    return integrate(integrand, 0.0, d.b);
}

double bathtub_sample(const dist::BathtubGCP& d, double u) {
    if (u >= bathtub_left_of_deadline(d)) return d.b;
    double lo = 0.0;
    double hi = d.b;
    if (u <= bathtub_body(d, 0.0)) return 0.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (bathtub_body(d, mid) >= u) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace

DistributionSpec DistributionSpec::exponential(double rate) {
    require(positive(rate), "exponential: rate must be finite and > 0");
    return DistributionSpec(dist::Exponential{rate});
}

DistributionSpec DistributionSpec::gamma(double shape, double scale) {
    require(positive(shape), "gamma: shape must be finite and > 0");
    require(positive(scale), "gamma: scale must be finite and > 0");
    return DistributionSpec(dist::Gamma{shape, scale});
}

DistributionSpec DistributionSpec::uniform(double hi) {
    require(positive(hi), "uniform: hi must be finite and > 0");
    return DistributionSpec(dist::Uniform{hi});
}

DistributionSpec DistributionSpec::deterministic(double value) {
    require(nonnegative(value), "deterministic: value must be finite and >= 0");
    return DistributionSpec(dist::Deterministic{value});
}

DistributionSpec DistributionSpec::two_point(double v0, double p0, double v1) {
    require(nonnegative(v0) && nonnegative(v1),
            "two_point: values must be finite and >= 0 (infinite atoms are not allowed)");
    require(p0 >= 0.0 && p0 <= 1.0, "two_point: p0 must lie in [0, 1]");
    return DistributionSpec(dist::TwoPoint{v0, p0, v1});
}

DistributionSpec DistributionSpec::bathtub(double amp, double b, double tau1, double tau2) {
    require(positive(amp) && amp <= 1.0, "bathtub: amp must lie in (0, 1]");
    require(positive(b), "bathtub: b must be finite and > 0");
    require(positive(tau1) && positive(tau2), "bathtub: tau1 and tau2 must be finite and > 0");
    const dist::BathtubGCP d{amp, b, tau1, tau2};
    require(bathtub_left_of_deadline(d) <= 1.0, "bathtub: continuous mass before b exceeds one");
    return DistributionSpec(d);
}

DistributionSpec DistributionSpec::indefinite() { return DistributionSpec(dist::Indefinite{}); }

std::string DistributionSpec::kind() const {
    return std::visit(Overloaded{
                          [](const dist::Exponential&) { return std::string("exponential"); },
                          [](const dist::Gamma&) { return std::string("gamma"); },
                          [](const dist::Uniform&) { return std::string("uniform"); },
                          [](const dist::Deterministic&) { return std::string("deterministic"); },
                          [](const dist::TwoPoint&) { return std::string("two_point"); },
                          [](const dist::BathtubGCP&) { return std::string("bathtub"); },
                          [](const dist::Indefinite&) { return std::string("indefinite"); },
                      },
                      v_);
}

double sample(const DistributionSpec& spec, RandomStream& rng) {
    return std::visit(
        Overloaded{
            [&](const dist::Exponential& d) { return -std::log(rng.uniform_open()) / d.rate; },
            [&](const dist::Gamma& d) {
                std::gamma_distribution<double> g(d.shape, d.scale);
                return g(rng.engine());
            },
            [&](const dist::Uniform& d) { return rng.uniform_open() * d.hi; },
            [&](const dist::Deterministic& d) { return d.value; },
            [&](const dist::TwoPoint& d) { return rng.uniform_open() < d.p0 ? d.v0 : d.v1; },
            [&](const dist::BathtubGCP& d) { return bathtub_sample(d, rng.uniform_open()); },
            [&](const dist::Indefinite&) { return kInfinity; },
        },
        spec.variant());
}

double cdf(const DistributionSpec& spec, double t) {
    if (t < 0.0) return 0.0;
    return std::visit(
        Overloaded{
            [&](const dist::Exponential& d) { return -std::expm1(-d.rate * t); },
            [&](const dist::Gamma& d) { return boost::math::gamma_p(d.shape, t / d.scale); },
            [&](const dist::Uniform& d) { return std::min(1.0, t / d.hi); },
            [&](const dist::Deterministic& d) { return t >= d.value ? 1.0 : 0.0; },
            [&](const dist::TwoPoint& d) {
                return (t >= d.v0 ? d.p0 : 0.0) + (t >= d.v1 ? 1.0 - d.p0 : 0.0);
            },
            [&](const dist::BathtubGCP& d) { return t >= d.b ? 1.0 : bathtub_body(d, t); },
            [&](const dist::Indefinite&) { return 0.0; },
        },
        spec.variant());
}

double cdf_left(const DistributionSpec& spec, double t) {
    if (t <= 0.0) return 0.0;
    return std::visit(
        Overloaded{
            [&](const dist::Deterministic& d) { return t > d.value ? 1.0 : 0.0; },
            [&](const dist::TwoPoint& d) {
                return (t > d.v0 ? d.p0 : 0.0) + (t > d.v1 ? 1.0 - d.p0 : 0.0);
            },
            [&](const dist::BathtubGCP& d) {
                if (t > d.b) return 1.0;
                if (t == d.b) return bathtub_left_of_deadline(d);
                return bathtub_body(d, t);
            },
            [&](const auto&) { return cdf(spec, t); },
        },
        spec.variant());
}

double survival(const DistributionSpec& spec, double t) { return 1.0 - cdf(spec, t); }

double mean(const DistributionSpec& spec) {
    return std::visit(
        Overloaded{
            [](const dist::Exponential& d) { return 1.0 / d.rate; },
            [](const dist::Gamma& d) { return d.shape * d.scale; },
            [](const dist::Uniform& d) { return 0.5 * d.hi; },
            [](const dist::Deterministic& d) { return d.value; },
            [](const dist::TwoPoint& d) { return d.p0 * d.v0 + (1.0 - d.p0) * d.v1; },
            [](const dist::BathtubGCP& d) {
                return bathtub_integrate_survival(d, [](double) { return 1.0; });
            },
            [](const dist::Indefinite&) -> double {
                throw PreconditionError("mean: indefinite distribution has infinite mean");
            },
        },
        spec.variant());
}

double laplace(const DistributionSpec& spec, double s) {
    if (!(s >= 0.0)) throw PreconditionError("laplace: s must be >= 0");
    return std::visit(
        Overloaded{
            [&](const dist::Exponential& d) { return d.rate / (d.rate + s); },
            [&](const dist::Gamma& d) { return std::pow(1.0 + s * d.scale, -d.shape); },
            [&](const dist::Uniform& d) {
                if (s == 0.0) return 1.0;
                return -std::expm1(-s * d.hi) / (s * d.hi);
            },
            [&](const dist::Deterministic& d) { return std::exp(-s * d.value); },
            [&](const dist::TwoPoint& d) {
                return d.p0 * std::exp(-s * d.v0) + (1.0 - d.p0) * std::exp(-s * d.v1);
            },
            [&](const dist::BathtubGCP& d) {
                if (s == 0.0) return 1.0;
                // E[e^{-sX}] = 1 - s * int_0^inf e^{-st} S(t) dt for X >= 0.
                return 1.0 - s * bathtub_integrate_survival(
                                     d, [s](double t) { return std::exp(-s * t); });
            },
            [&](const dist::Indefinite&) -> double {
                throw PreconditionError("laplace: indefinite atoms are not allowed");
            },
        },
        spec.variant());
}

double support_max(const DistributionSpec& spec) {
    return std::visit(Overloaded{
                          [](const dist::Uniform& d) { return d.hi; },
                          [](const dist::Deterministic& d) { return d.value; },
                          [](const dist::TwoPoint& d) { return std::max(d.v0, d.v1); },
                          [](const dist::BathtubGCP& d) { return d.b; },
                          [](const auto&) { return kInfinity; },
                      },
                      spec.variant());
}

std::vector<double> breakpoints(const DistributionSpec& spec) {
    return std::visit(Overloaded{
                          [](const dist::Uniform& d) { return std::vector<double>{0.0, d.hi}; },
                          [](const dist::Deterministic& d) { return std::vector<double>{d.value}; },
                          [](const dist::TwoPoint& d) { return std::vector<double>{d.v0, d.v1}; },
                          [](const dist::BathtubGCP& d) {
                              if (d.tau2 < d.b) return std::vector<double>{d.tau2, d.b};
                              return std::vector<double>{d.b};
                          },
                          [](const auto&) { return std::vector<double>{}; },
                      },
                      spec.variant());
}

DistributionSpec with_rate(const DistributionSpec& spec, double rate) {
    require(positive(rate), "with_rate: rate must be finite and > 0");
    return std::visit(
        Overloaded{
            [&](const dist::Exponential&) { return DistributionSpec::exponential(rate); },
            [&](const dist::Gamma& d) { return DistributionSpec::gamma(d.shape, 1.0 / (rate * d.shape)); },
            [&](const dist::Uniform&) { return DistributionSpec::uniform(2.0 / rate); },
            [&](const dist::Deterministic&) { return DistributionSpec::deterministic(1.0 / rate); },
            [&](const auto&) -> DistributionSpec {
                throw ConfigError("cannot rescale a " + spec.kind() + " distribution to a new rate");
            },
        },
        spec.variant());
}

ProbabilityEstimate prob_le(const DistributionSpec& a, const DistributionSpec& b,
                            std::uint64_t budget, RandomStream& rng) {
    if (a.is<dist::Indefinite>() || b.is<dist::Indefinite>())
        throw PreconditionError("prob_le: both distributions must have finite mean");
    if (a.is<dist::Exponential>() && b.is<dist::Exponential>()) {
        const double lambda = a.as<dist::Exponential>().rate;
        const double mu = b.as<dist::Exponential>().rate;
        return {lambda / (lambda + mu), 0.0};
    }
    if (a.is<dist::Deterministic>() && b.is<dist::Deterministic>()) {
        return {a.as<dist::Deterministic>().value <= b.as<dist::Deterministic>().value ? 1.0 : 0.0,
                0.0};
    }
    if (budget == 0) throw PreconditionError("prob_le: Monte-Carlo budget must be positive");

    constexpr std::uint64_t kChunk = 1 << 16;
    std::vector<double> xs(kChunk);
    std::vector<double> ys(kChunk);
    std::uint64_t hits = 0;
    for (std::uint64_t done = 0; done < budget;) {
        const auto n = static_cast<std::size_t>(std::min(kChunk, budget - done));
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = sample(a, rng);
            ys[i] = sample(b, rng);
        }
        hits += kernels::count_le(std::span<const double>(xs.data(), n),
                                  std::span<const double>(ys.data(), n));
        done += n;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(budget);
    return {p, 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(budget))};
}

}  // namespace spotsched
