#include "oracles.hpp"

#include "spotsched/analytic.hpp"
#include "spotsched/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace spotsched;
using namespace spotsched::analytic;

namespace {
constexpr double kLambda = 1.0 / 12.0;
constexpr double kMu = 1.0 / 24.0;
}  // namespace

TEST_CASE("cost_general examples") {
    CHECK(cost_general(10.0, kLambda, kMu, 1.0) == 10.0);
    CHECK(cost_general(10.0, kLambda, kMu, 2.0 / 3.0) == doctest::Approx(8.5).epsilon(1e-14));
    CHECK(cost_general(10.0, kLambda, kLambda, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // mu > lambda with an almost empty queue would need more spot service than jobs exist.
    CHECK_THROWS_AS(cost_general(10.0, kMu, kLambda, 0.0), PreconditionError);
    CHECK_THROWS_AS(cost_general(10.0, kLambda, kMu, 1.5), PreconditionError);
}

TEST_CASE("cost_single_slot_opt examples") {
    CHECK(cost_single_slot_opt(10.0, kMu, 3.0) == doctest::Approx(8.875).epsilon(1e-14));
    CHECK(cost_single_slot_opt(10.0, 1.0 / 12.0, 3.0) == doctest::Approx(7.75).epsilon(1e-14));
    CHECK(cost_single_slot_opt(10.0, kMu, 0.0) == 10.0);
    CHECK_THROWS_AS(cost_single_slot_opt(10.0, kMu, 25.0), PreconditionError);
}

TEST_CASE("single-slot optimum matches the general cost at pi0 = 1 - lambda delta") {
    for (double lambda : {1.0 / 12.0, 0.05, 0.2})
        for (double delta : {0.0, 0.5, 2.0, 4.9}) {
            if (lambda * delta > 1.0) continue;
            CHECK(cost_single_slot_opt(10.0, kMu, delta) ==
                  doctest::Approx(cost_general(10.0, lambda, kMu, 1.0 - lambda * delta)).epsilon(1e-12));
        }
}

TEST_CASE("small-delta threshold examples") {
    RandomStream rng(1);
    const auto t = small_delta_threshold(DistributionSpec::exponential(kLambda), DistributionSpec::exponential(kMu), rng);
    CHECK(t.value == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(t.halfwidth == 0.0);

    const auto d = small_delta_threshold(DistributionSpec::deterministic(5.0), DistributionSpec::deterministic(5.0), rng);
    CHECK(d.value == 5.0);

    const auto spots = DistributionSpec::bathtub(0.5, 24.0, 0.5, 0.8);
    const auto b = small_delta_threshold(DistributionSpec::exponential(kLambda), spots, rng, 400'000);
    const double exact = (1.0 - laplace(spots, kLambda)) / kLambda;
    CHECK(b.halfwidth > 0.0);
    CHECK(std::abs(b.value - exact) <= 1.5 * b.halfwidth);
}

TEST_CASE("mm1n examples") {
    const auto s = mm1n_solution(10.0, kLambda, kMu, 3);
    CHECK(s.n == 3);
    CHECK(s.rho == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.expected_cost == doctest::Approx(5.8).epsilon(1e-13));
    CHECK(s.delay_lower_bound == doctest::Approx(12.0 * 34.0 / 15.0).epsilon(1e-13));
    REQUIRE(s.pi.size() == 4);
    const double expected[] = {1.0 / 15, 2.0 / 15, 4.0 / 15, 8.0 / 15};
    for (int i = 0; i < 4; ++i) CHECK(s.pi[i] == doctest::Approx(expected[i]).epsilon(1e-13));
    CHECK(cost_general(10.0, kLambda, kMu, 1.0 / 15.0) == doctest::Approx(5.8).epsilon(1e-13));
}

TEST_CASE("mm1n at rho = 1 uses the limit") {
    const auto s = mm1n_solution(10.0, 0.1, 0.1, 3);
    CHECK(s.expected_cost == doctest::Approx(10.0 - 9.0 * 0.75).epsilon(1e-12));
    for (double p : s.pi) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
    // Continuity across the switch.
    const auto near = mm1n_solution(10.0, 0.1 * (1 + 2e-9), 0.1, 3);
    CHECK(near.expected_cost == doctest::Approx(s.expected_cost).epsilon(1e-7));
}

TEST_CASE("mm1n agrees with the birth-death generator") {
    for (double rho : {0.3, 0.5, 0.999, 1.0, 2.0, 3.5})
        for (std::size_t n = 1; n <= 10; ++n) {
            CAPTURE(rho);
            CAPTURE(n);
            const double mu = 1.0 / 24.0;
            const double lambda = rho * mu;
            const auto s = mm1n_solution(10.0, lambda, mu, n);
            const auto o = oracle::capped_queue(10.0, lambda, mu, n);
            const auto pi = oracle::birth_death_stationary(std::vector<double>(n, lambda), mu);
            CHECK(std::accumulate(s.pi.begin(), s.pi.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
            for (std::size_t i = 0; i <= n; ++i) CHECK(s.pi[i] == doctest::Approx(pi[i]).epsilon(1e-9));
            CHECK(s.expected_cost == doctest::Approx(o.cost).epsilon(1e-9));
            CHECK(s.delay_lower_bound == doctest::Approx(o.delay).epsilon(1e-9));
            CHECK(s.expected_cost >= 1.0);
            CHECK(s.expected_cost <= 10.0);
            CHECK(cost_general(10.0, lambda, mu, s.pi[0]) == doctest::Approx(s.expected_cost).epsilon(1e-12));
        }
}

TEST_CASE("mm1n monotone in n") {
    for (double rho : {0.5, 2.0}) {
        double prev_cost = 11.0;
        double prev_delay = -1.0;
        for (std::size_t n = 1; n <= 10; ++n) {
            const auto s = mm1n_solution(10.0, rho * kMu, kMu, n);
            CHECK(s.expected_cost < prev_cost);
            CHECK(s.delay_lower_bound > prev_delay);
            prev_cost = s.expected_cost;
            prev_delay = s.delay_lower_bound;
        }
    }
}

TEST_CASE("mm1n rejects n = 0") { CHECK_THROWS_AS(mm1n_solution(10.0, kLambda, kMu, 0), PreconditionError); }

TEST_CASE("laplace condition examples") {
    const auto det = laplace_condition_check(DistributionSpec::deterministic(4.3757), kLambda, kMu, 3.0, 1e-6);
    CHECK(det.target == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    // 4.3757 is the four-decimal rounding of 24 ln 1.2.
    CHECK(det.residual <= 1e-5);
    const auto exact = laplace_condition_check(DistributionSpec::deterministic(24.0 * std::log(1.2)), kLambda, kMu, 3.0,
                                               1e-6);
    CHECK(exact.ok);
    const auto ex = laplace_condition_check(DistributionSpec::exponential(5.0 / 24.0), kLambda, kMu, 3.0, 1e-12);
    CHECK(ex.ok);
    CHECK(ex.residual <= 1e-12);
    const auto zero = laplace_condition_check(DistributionSpec::deterministic(0.0), kLambda, kMu, 3.0, 1e-6);
    CHECK_FALSE(zero.ok);
    CHECK(zero.residual == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK_THROWS_AS(laplace_condition_check(DistributionSpec::deterministic(1.0), kLambda, kMu, 12.0, 1e-6),
                    PreconditionError);
}
