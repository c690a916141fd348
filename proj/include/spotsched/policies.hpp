#pragma once

#include "spotsched/distributions.hpp"
#include "spotsched/rng.hpp"

#include <cstddef>
#include <string>
#include <variant>

namespace spotsched {

namespace policy {

/// Admit iff the queue holds fewer than `n` jobs; admitted jobs wait forever.
struct IndefiniteCap {
    std::size_t n;
    bool operator==(const IndefiniteCap&) const = default;
};

/// Single slot. An arrival to an empty queue joins with probability `p` and
/// waits indefinitely, otherwise it goes straight to on-demand. `limit` is the
/// spot support bound the construction was derived for (may be +infinity);
/// it is recorded but waiting past it changes nothing.
struct SingleSlotTwoPoint {
    double limit;
    double p;
    bool operator==(const SingleSlotTwoPoint&) const = default;
};

/// Single slot with a fixed maximal wait `x`.
struct SingleSlotDetWait {
    double x;
    bool operator==(const SingleSlotDetWait&) const = default;
};

/// Single slot with maximal wait ~ Exponential(phi).
struct SingleSlotExpWait {
    double phi;
    bool operator==(const SingleSlotExpWait&) const = default;
};

/// Fractional queue cap r = n_hat + q: admit below n_hat, admit with
/// probability q at exactly n_hat, reject above. Admitted jobs wait forever.
struct ThreePhase {
    double r;
    bool operator==(const ThreePhase&) const = default;
};

}  // namespace policy

class PolicySpec {
public:
    using Variant = std::variant<policy::IndefiniteCap, policy::SingleSlotTwoPoint,
                                 policy::SingleSlotDetWait, policy::SingleSlotExpWait,
                                 policy::ThreePhase>;

    static PolicySpec indefinite_cap(std::size_t n);
    static PolicySpec single_slot_two_point(double limit, double p);
    static PolicySpec single_slot_det_wait(double x);
    static PolicySpec single_slot_exp_wait(double phi);
    static PolicySpec three_phase(double r);

    const Variant& variant() const noexcept { return v_; }

    template <class T>
    bool is() const noexcept {
        return std::holds_alternative<T>(v_);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(v_);
    }

    std::string kind() const;

    /// Largest queue length the policy can ever produce.
    std::size_t cap() const;

    bool operator==(const PolicySpec&) const = default;

private:
    explicit PolicySpec(Variant v) : v_(v) {}
    Variant v_;
};

struct PolicyDecision {
    bool admit = false;
    double max_wait = 0.0;  // hours, +infinity for "wait forever"; meaningless when rejected

    static PolicyDecision reject() { return {false, 0.0}; }
    static PolicyDecision admit_for(double wait) { return {true, wait}; }
};

/// Admission and maximal-wait decision for a job that observes `queue_len`
/// jobs already waiting. Admission coins come from `admission_rng`, wait
/// draws from `wait_rng`, so the two never perturb each other.
PolicyDecision decide(const PolicySpec& policy, std::size_t queue_len, RandomStream& admission_rng,
                      RandomStream& wait_rng);

/// Two-point single-slot optimum for finite-support spots on [0, limit]:
/// join with p = mu*delta / (1 - lambda*delta). Requires delta <= 1/(lambda+mu).
PolicySpec make_two_point(double lambda, double mu, double delta, double limit);

/// Deterministic single-slot optimum for exponential spots:
/// x = ln[(1 - lambda*delta) / (1 - (lambda+mu)*delta)] / mu. Requires (lambda+mu)*delta < 1.
PolicySpec make_det_wait(double lambda, double mu, double delta);

/// Exponential-wait single-slot optimum for exponential spots:
/// phi = 1/delta - mu - lambda. Requires 0 < delta < 1/(lambda+mu).
PolicySpec make_exp_wait(double lambda, double mu, double delta);

}  // namespace spotsched
