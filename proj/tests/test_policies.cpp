#include "spotsched/analytic.hpp"
#include "spotsched/errors.hpp"
#include "spotsched/policies.hpp"

#include <doctest.h>

#include <cmath>

using namespace spotsched;

namespace {
constexpr double kLambda = 1.0 / 12.0;
constexpr double kMu = 1.0 / 24.0;
}  // namespace

TEST_CASE("three-phase decisions") {
    RandomStream adm(1), wait(2);
    const auto p3 = PolicySpec::three_phase(3.0);
    const auto below = decide(p3, 2, adm, wait);
    CHECK(below.admit);
    CHECK(std::isinf(below.max_wait));
    CHECK_FALSE(decide(p3, 3, adm, wait).admit);
    CHECK_FALSE(decide(p3, 7, adm, wait).admit);
    CHECK(p3.cap() == 3);
    CHECK(PolicySpec::three_phase(2.4).cap() == 3);
    CHECK(PolicySpec::three_phase(0.0).cap() == 0);
}

TEST_CASE("three-phase admits with the fractional part at the boundary") {
    RandomStream adm(11), wait(12);
    const auto p = PolicySpec::three_phase(2.4);
    const int n = 1'000'000;
    int admitted = 0;
    for (int i = 0; i < n; ++i) admitted += decide(p, 2, adm, wait).admit ? 1 : 0;
    CHECK(static_cast<double>(admitted) / n == doctest::Approx(0.4).epsilon(0.01));
    for (int i = 0; i < 1000; ++i) REQUIRE(decide(p, 1, adm, wait).admit);
}

TEST_CASE("single-slot variants reject a busy queue") {
    RandomStream adm(1), wait(2);
    for (const auto& p : {PolicySpec::single_slot_two_point(24.0, 1.0), PolicySpec::single_slot_det_wait(4.0),
                          PolicySpec::single_slot_exp_wait(0.2)}) {
        CAPTURE(p.kind());
        CHECK(p.cap() == 1);
        for (std::size_t len : {1u, 2u, 10u}) CHECK_FALSE(decide(p, len, adm, wait).admit);
    }
    const auto det = decide(PolicySpec::single_slot_det_wait(4.0), 0, adm, wait);
    CHECK(det.admit);
    CHECK(det.max_wait == 4.0);
    const auto ex = decide(PolicySpec::single_slot_exp_wait(0.2), 0, adm, wait);
    CHECK(ex.admit);
    CHECK(ex.max_wait > 0.0);
    CHECK(std::isfinite(ex.max_wait));
}

TEST_CASE("two-point admits with p and waits forever") {
    RandomStream adm(3), wait(4);
    const auto p = PolicySpec::single_slot_two_point(24.0, 0.3);
    int admitted = 0;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        const auto d = decide(p, 0, adm, wait);
        if (d.admit) {
            ++admitted;
            REQUIRE(std::isinf(d.max_wait));
        }
    }
    CHECK(static_cast<double>(admitted) / n == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("exponential waits have the configured rate") {
    RandomStream adm(5), wait(6);
    const auto p = PolicySpec::single_slot_exp_wait(5.0 / 24.0);
    double s = 0.0;
    const int n = 400'000;
    for (int i = 0; i < n; ++i) s += decide(p, 0, adm, wait).max_wait;
    CHECK(s / n == doctest::Approx(24.0 / 5.0).epsilon(0.01));
}

TEST_CASE("indefinite cap") {
    RandomStream adm(1), wait(2);
    const auto p = PolicySpec::indefinite_cap(2);
    CHECK(decide(p, 1, adm, wait).admit);
    CHECK_FALSE(decide(p, 2, adm, wait).admit);
    CHECK_FALSE(decide(PolicySpec::indefinite_cap(0), 0, adm, wait).admit);
}

TEST_CASE("factories validate") {
    CHECK_THROWS_AS(PolicySpec::three_phase(-0.1), ConfigError);
    CHECK_THROWS_AS(PolicySpec::single_slot_two_point(24.0, 1.1), ConfigError);
    CHECK_THROWS_AS(PolicySpec::single_slot_det_wait(-1.0), ConfigError);
    CHECK_THROWS_AS(PolicySpec::single_slot_exp_wait(0.0), ConfigError);
}

TEST_CASE("make_two_point examples") {
    CHECK(make_two_point(kLambda, 1.0 / 12.0, 3.0, 24.0).as<policy::SingleSlotTwoPoint>().p ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(make_two_point(kLambda, kMu, 0.0, 24.0).as<policy::SingleSlotTwoPoint>().p == 0.0);
    const auto p = make_two_point(kLambda, kMu, 3.0, kInfinity).as<policy::SingleSlotTwoPoint>();
    CHECK(p.p == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(std::isinf(p.limit));
    CHECK_THROWS_AS(make_two_point(kLambda, kMu, 9.0, 24.0), PreconditionError);
    CHECK_THROWS_AS(make_two_point(kLambda, kMu, 12.0, 24.0), PreconditionError);
}

TEST_CASE("make_det_wait examples") {
    CHECK(make_det_wait(kLambda, kMu, 3.0).as<policy::SingleSlotDetWait>().x ==
          doctest::Approx(24.0 * std::log(1.2)).epsilon(1e-14));
    CHECK(make_det_wait(kLambda, kMu, 3.0).as<policy::SingleSlotDetWait>().x == doctest::Approx(4.3757).epsilon(1e-4));
    CHECK(make_det_wait(kLambda, kMu, 0.0).as<policy::SingleSlotDetWait>().x == 0.0);
    // Near the boundary the wait blows up; at it the construction is refused.
    CHECK(make_det_wait(kLambda, kMu, 8.0 * (1 - 1e-9)).as<policy::SingleSlotDetWait>().x > 400.0);
    CHECK_THROWS_AS(make_det_wait(kLambda, kMu, 8.0), PreconditionError);
}

TEST_CASE("make_exp_wait examples") {
    CHECK(make_exp_wait(kLambda, kMu, 3.0).as<policy::SingleSlotExpWait>().phi ==
          doctest::Approx(5.0 / 24.0).epsilon(1e-14));
    CHECK_THROWS_AS(make_exp_wait(kLambda, kMu, 8.0), PreconditionError);
    CHECK_THROWS_AS(make_exp_wait(kLambda, kMu, 0.0), PreconditionError);
}

TEST_CASE("constructions meet the Laplace condition") {
    const double target = (1.0 - (kLambda + kMu) * 3.0) / (1.0 - kLambda * 3.0);
    CHECK(target == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    const double phi = make_exp_wait(kLambda, kMu, 3.0).as<policy::SingleSlotExpWait>().phi;
    CHECK(std::abs(phi / (phi + kMu) - target) <= 1e-12);
    const double x = make_det_wait(kLambda, kMu, 3.0).as<policy::SingleSlotDetWait>().x;
    CHECK(std::abs(std::exp(-kMu * x) - target) <= 1e-12);
    const double p = make_two_point(kLambda, kMu, 3.0, kInfinity).as<policy::SingleSlotTwoPoint>().p;
    CHECK(std::abs((1.0 - p) - target) <= 1e-12);
}

TEST_CASE("constructions agree across deltas") {
    // All three share the same busy-queue probability lambda * delta.
    for (double delta : {0.5, 1.0, 2.0, 3.0, 5.0, 7.5}) {
        CAPTURE(delta);
        const double x = make_det_wait(kLambda, kMu, delta).as<policy::SingleSlotDetWait>().x;
        const double phi = make_exp_wait(kLambda, kMu, delta).as<policy::SingleSlotExpWait>().phi;
        const double p = make_two_point(kLambda, kMu, delta, kInfinity).as<policy::SingleSlotTwoPoint>().p;
        const double m_det = (1.0 - std::exp(-kMu * x)) / kMu;
        const double m_exp = 1.0 / (kMu + phi);
        const double m_two = p / kMu;
        // E[W] of the queued job equals delta / (1 - lambda delta).
        CHECK(m_det == doctest::Approx(delta / (1 - kLambda * delta)).epsilon(1e-12));
        CHECK(m_exp == doctest::Approx(delta / (1 - kLambda * delta)).epsilon(1e-12));
        CHECK(m_two == doctest::Approx(delta / (1 - kLambda * delta)).epsilon(1e-12));
    }
}
