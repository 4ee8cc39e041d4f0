#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "quayside/busy_period.hpp"

using namespace quayside;

namespace {

// Smaller root of a pi^2 - (s + a + b) pi + b = 0: Kendall's equation for
// exponential service, solved in closed form.
double mm1_busy_period(double a, double b, double s) {
    const double p = s + a + b;
    return (p - std::sqrt(p * p - 4.0 * a * b)) / (2.0 * a);
}

}  // namespace

TEST(BusyPeriod, ExponentialQuadraticExample) {
    const auto d = ServiceDistribution::exponential(10.0);
    const auto sol = busy_period_lst(d, 12.0, 1.0);
    EXPECT_NEAR(sol.value, 2.0 / 3.0, 1e-11);
    EXPECT_LE(sol.residual, 1e-12);
    EXPECT_GT(sol.iterations, 0u);
}

TEST(BusyPeriod, HeavyTrafficExample) {
    const auto d = ServiceDistribution::exponential(10.0);
    const auto sol = busy_period_lst(d, 16.0, 1.0);
    EXPECT_NEAR(sol.value, (27.0 - std::sqrt(89.0)) / 32.0, 1e-11);
}

TEST(BusyPeriod, NoArrivalsLimitIsOneService) {
    const auto d = ServiceDistribution::exponential(10.0);
    EXPECT_NEAR(busy_period_lst(d, 1e-12, 1.0).value, 10.0 / 11.0, 1e-11);
}

TEST(BusyPeriod, MatchesQuadraticRootOnGrid) {
    for (double a : {0.5, 2.0, 4.0, 9.0, 16.0}) {
        for (double b : {1.0, 5.0, 10.0}) {
            for (double s : {0.01, 0.3, 1.0, 5.0}) {
                const auto sol = busy_period_lst(ServiceDistribution::exponential(b), a, s);
                EXPECT_NEAR(sol.value, mm1_busy_period(a, b, s), 1e-10)
                    << "a=" << a << " b=" << b << " s=" << s;
            }
        }
    }
}

TEST(BusyPeriod, ResidualWithinToleranceForEveryLaw) {
    const std::vector<ServiceDistribution> laws{
        ServiceDistribution::exponential(5.0), ServiceDistribution::uniform(1.0, 3.0),
        ServiceDistribution::erlang2(4.0), ServiceDistribution::gamma3(6.0)};
    for (const auto& d : laws) {
        for (double s : {0.1, 1.0, 3.0}) {
            const auto sol = busy_period_lst(d, 0.3, s);
            EXPECT_LE(sol.residual, 1e-12) << to_literal(d);
            EXPECT_NEAR(sol.value, lst(d, s + 0.3 - 0.3 * sol.value), 1e-12);
            EXPECT_GE(sol.value, 0.0);
            EXPECT_LE(sol.value, 1.0);
        }
    }
}

TEST(BusyPeriod, NonincreasingInS) {
    const auto d = ServiceDistribution::uniform(1.0, 5.0);
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double cur = busy_period_lst(d, 0.2, 0.05 * i).value;
        EXPECT_LE(cur, prev);
        prev = cur;
    }
}

TEST(BusyPeriod, TendsToOneAtZeroWhenStationary) {
    const auto d = ServiceDistribution::exponential(5.0);
    EXPECT_GE(busy_period_lst(d, 4.0, 1e-8).value, 1.0 - 1e-3);
    const auto u = ServiceDistribution::uniform(1.0, 5.0);
    EXPECT_GE(busy_period_lst(u, 0.2, 1e-8).value, 1.0 - 1e-3);
}

// With a E[B] > 1 the least fixed point stays below one as s -> 0.
TEST(BusyPeriod, NonstationaryLeastFixedPointBelowOne) {
    const auto d = ServiceDistribution::exponential(10.0);
    const auto sol = busy_period_lst(d, 12.0, 1e-9);
    EXPECT_NEAR(sol.value, 10.0 / 12.0, 1e-6);
}

TEST(BusyPeriod, LongDoubleAgreesWithDouble) {
    const auto d = ServiceDistribution::gamma3(6.0);
    const auto dbl = busy_period_lst(d, 1.5, 0.7);
    const auto ext = busy_period_lst(d, 1.5, 0.7L, KendallOptions{1e-17L, 1'000'000});
    EXPECT_NEAR(static_cast<double>(ext.value), dbl.value, 1e-11);
    EXPECT_LE(ext.residual, 1e-17L);
}

TEST(BusyPeriod, ConvergenceErrorCarriesLastIterate) {
    const auto d = ServiceDistribution::exponential(1.0);
    try {
        busy_period_lst(d, 0.9, 1e-6, KendallOptions{1e-15L, 5});
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.iterations, 5u);
        EXPECT_GT(e.last_iterate, 0.0L);
        EXPECT_GT(e.residual, 1e-15L);
    }
}

TEST(BusyPeriod, RejectsBadArguments) {
    const auto d = ServiceDistribution::exponential(1.0);
    EXPECT_THROW(busy_period_lst(d, 1.0, 0.0), DomainError);
    EXPECT_THROW(busy_period_lst(d, 0.0, 1.0), DomainError);
    EXPECT_THROW(busy_period_lst(d, 1.0, 1.0, KendallOptions{0.0L, 10}), DomainError);
}
