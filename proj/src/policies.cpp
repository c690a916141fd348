#include "spotsched/policies.hpp"

#include "spotsched/errors.hpp"

#include <cmath>
#include <string>

namespace spotsched {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_rates(double lambda, double mu, double delta) {
    if (!(lambda > 0.0 && std::isfinite(lambda)) || !(mu > 0.0 && std::isfinite(mu)))
        throw PreconditionError("arrival rates must be finite and > 0");
    if (!(delta >= 0.0 && std::isfinite(delta)))
        throw PreconditionError("delta must be finite and >= 0");
}

}  // namespace

PolicySpec PolicySpec::indefinite_cap(std::size_t n) { return PolicySpec(policy::IndefiniteCap{n}); }

PolicySpec PolicySpec::single_slot_two_point(double limit, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("single_slot_two_point: p must lie in [0, 1]");
    if (!(limit >= 0.0)) throw ConfigError("single_slot_two_point: limit must be >= 0");
    return PolicySpec(policy::SingleSlotTwoPoint{limit, p});
}

PolicySpec PolicySpec::single_slot_det_wait(double x) {
    if (!(x >= 0.0 && std::isfinite(x)))
        throw ConfigError("single_slot_det_wait: x must be finite and >= 0");
    return PolicySpec(policy::SingleSlotDetWait{x});
}

PolicySpec PolicySpec::single_slot_exp_wait(double phi) {
    if (!(phi > 0.0 && std::isfinite(phi)))
        throw ConfigError("single_slot_exp_wait: phi must be finite and > 0");
    return PolicySpec(policy::SingleSlotExpWait{phi});
}

PolicySpec PolicySpec::three_phase(double r) {
    if (!(r >= 0.0 && std::isfinite(r))) throw ConfigError("three_phase: r must be finite and >= 0");
    return PolicySpec(policy::ThreePhase{r});
}

std::string PolicySpec::kind() const {
    return std::visit(Overloaded{
                          [](const policy::IndefiniteCap&) { return std::string("indefinite_cap"); },
                          [](const policy::SingleSlotTwoPoint&) {
                              return std::string("single_slot_two_point");
                          },
                          [](const policy::SingleSlotDetWait&) {
                              return std::string("single_slot_det_wait");
                          },
                          [](const policy::SingleSlotExpWait&) {
                              return std::string("single_slot_exp_wait");
                          },
                          [](const policy::ThreePhase&) { return std::string("three_phase"); },
                      },
                      v_);
}

std::size_t PolicySpec::cap() const {
    return std::visit(Overloaded{
                          [](const policy::IndefiniteCap& p) { return p.n; },
                          [](const policy::ThreePhase& p) {
                              return static_cast<std::size_t>(std::ceil(p.r));
                          },
                          [](const auto&) { return std::size_t{1}; },
                      },
                      v_);
}

PolicyDecision decide(const PolicySpec& spec, std::size_t queue_len, RandomStream& admission_rng,
                      RandomStream& wait_rng) {
    return std::visit(
        Overloaded{
            [&](const policy::IndefiniteCap& p) {
                return queue_len < p.n ? PolicyDecision::admit_for(kInfinity) : PolicyDecision::reject();
            },
            [&](const policy::SingleSlotTwoPoint& p) {
                if (queue_len >= 1) return PolicyDecision::reject();
                return admission_rng.uniform_open() < p.p ? PolicyDecision::admit_for(kInfinity)
                                                          : PolicyDecision::reject();
            },
            [&](const policy::SingleSlotDetWait& p) {
                if (queue_len >= 1) return PolicyDecision::reject();
                return PolicyDecision::admit_for(p.x);
            },
            [&](const policy::SingleSlotExpWait& p) {
                if (queue_len >= 1) return PolicyDecision::reject();
                return PolicyDecision::admit_for(-std::log(wait_rng.uniform_open()) / p.phi);
            },
            [&](const policy::ThreePhase& p) {
                const double floor_r = std::floor(p.r);
                const auto n_hat = static_cast<std::size_t>(floor_r);
                const double q = p.r - floor_r;
                if (queue_len < n_hat) return PolicyDecision::admit_for(kInfinity);
                if (queue_len == n_hat && q > 0.0 && admission_rng.uniform_open() < q)
                    return PolicyDecision::admit_for(kInfinity);
                return PolicyDecision::reject();
            },
        },
        spec.variant());
}

PolicySpec make_two_point(double lambda, double mu, double delta, double limit) {
    check_rates(lambda, mu, delta);
    const double slack = 1.0 - lambda * delta;
    if (!(slack > 0.0)) throw PreconditionError("delta too large for single-slot two-point: lambda*delta >= 1");
    const double p = mu * delta / slack;
    if (p > 1.0)
        throw PreconditionError("delta too large for single-slot two-point: requires delta <= 1/(lambda+mu)");
    return PolicySpec::single_slot_two_point(limit, p);
}

PolicySpec make_det_wait(double lambda, double mu, double delta) {
    check_rates(lambda, mu, delta);
    const double denom = 1.0 - (lambda + mu) * delta;
    if (!(denom > 0.0))
        throw PreconditionError("delta too large for deterministic single-slot wait: requires (lambda+mu)*delta < 1");
    return PolicySpec::single_slot_det_wait(std::log((1.0 - lambda * delta) / denom) / mu);
}

PolicySpec make_exp_wait(double lambda, double mu, double delta) {
    check_rates(lambda, mu, delta);
    if (!(delta > 0.0)) throw PreconditionError("exponential single-slot wait requires delta > 0");
    const double phi = 1.0 / delta - mu - lambda;
    if (!(1.0 - (lambda + mu) * delta > 0.0) || !(phi > 0.0))
        throw PreconditionError("delta too large for exponential single-slot wait: requires delta < 1/(lambda+mu)");
    return PolicySpec::single_slot_exp_wait(phi);
}

}  // namespace spotsched
