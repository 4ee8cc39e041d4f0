#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "quayside/sim_oracle.hpp"

using namespace quayside;

namespace {

SimConfig config(std::size_t arrivals, std::uint64_t seed = 1, std::vector<double> grid = {}) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.total_arrivals = arrivals;
    cfg.ecdf_grid = std::move(grid);
    return cfg;
}

PriorityScenario exp_scenario(Preemption p) {
    const std::vector<double> lambdas{0.3, 0.2, 0.4, 0.5, 0.8};
    const std::vector<double> rates{7, 3, 4, 2, 5};
    std::vector<PriorityClass> classes;
    for (std::size_t i = 0; i < 5; ++i) classes.push_back({lambdas[i], ServiceDistribution::exponential(rates[i])});
    return {classes, p};
}

}  // namespace

TEST(SimMG1, FifoMeanAndEcdf) {
    const auto r = simulate_mg1(ServiceDistribution::exponential(5.0), 4.0, ServiceOrder::FIFO,
                                config(1'000'000, 1, {0.0, 1.0, 3.0}));
    EXPECT_NEAR(r.mean_wait, 0.8, 0.02);
    EXPECT_GT(r.mean_wait_half_width, 0.0);
    EXPECT_LT(r.mean_wait_half_width, 0.05);
    ASSERT_EQ(r.ecdf.size(), 3u);
    EXPECT_NEAR(r.ecdf[0].value, 0.2, 0.01);
    EXPECT_NEAR(r.ecdf[1].value, 1.0 - 0.8 * std::exp(-1.0), 0.01);
    EXPECT_NEAR(r.ecdf[2].value, 1.0 - 0.8 * std::exp(-3.0), 0.01);
}

TEST(SimMG1, LifoSharesTheMean) {
    const auto d = ServiceDistribution::exponential(5.0);
    const auto fifo = simulate_mg1(d, 4.0, ServiceOrder::FIFO, config(1'000'000, 3));
    const auto lifo = simulate_mg1(d, 4.0, ServiceOrder::LIFO, config(1'000'000, 4));
    EXPECT_NEAR(lifo.mean_wait, 0.8, 0.02);
    EXPECT_LE(std::abs(lifo.mean_wait - fifo.mean_wait), lifo.mean_wait_half_width + fifo.mean_wait_half_width);
}

TEST(SimMG1, LifoEcdfMatchesInvertedTransform) {
    const auto d = ServiceDistribution::exponential(5.0);
    const auto r = simulate_mg1(d, 4.0, ServiceOrder::LIFO, config(1'000'000, 5, {0.5, 1.0, 3.0}));
    for (const auto& p : r.ecdf) {
        EXPECT_NEAR(p.value, wait_cdf(ServiceOrder::LIFO, d, 4.0, p.x).value, 0.01) << p.x;
    }
}

TEST(SimMG1, IdleFractionAtZero) {
    const auto d = ServiceDistribution::uniform(1.0, 5.0);
    const auto r = simulate_mg1(d, 0.2, ServiceOrder::LIFO, config(200'000, 9, {0.0}));
    EXPECT_NEAR(r.ecdf[0].value, 1.0 - offered_load(d, 0.2), 0.01);
    EXPECT_NEAR(r.busy_fraction, offered_load(d, 0.2), 0.01);
    EXPECT_NEAR(r.utilization_prefix.back(), r.busy_fraction, 1e-6);
}

TEST(SimMG1, EcdfNondecreasing) {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);
    const auto r = simulate_mg1(ServiceDistribution::gamma3(6.0), 1.1, ServiceOrder::FIFO, config(50'000, 2, grid));
    for (std::size_t i = 1; i < r.ecdf.size(); ++i) EXPECT_GE(r.ecdf[i].value, r.ecdf[i - 1].value);
    EXPECT_LE(r.ecdf.back().value, 1.0);
}

TEST(SimMG1, Deterministic) {
    const auto d = ServiceDistribution::erlang2(4.0);
    const auto a = simulate_mg1(d, 1.2, ServiceOrder::LIFO, config(50'000, 77, {0.5, 1.0}));
    const auto b = simulate_mg1(d, 1.2, ServiceOrder::LIFO, config(50'000, 77, {0.5, 1.0}));
    EXPECT_EQ(a.mean_wait, b.mean_wait);
    EXPECT_EQ(a.mean_wait_half_width, b.mean_wait_half_width);
    EXPECT_EQ(a.horizon, b.horizon);
    EXPECT_EQ(a.ecdf[1].value, b.ecdf[1].value);
    const auto c = simulate_mg1(d, 1.2, ServiceOrder::LIFO, config(50'000, 78, {0.5, 1.0}));
    EXPECT_NE(a.mean_wait, c.mean_wait);
}

TEST(SimMG1, RejectsBadInput) {
    const auto d = ServiceDistribution::exponential(1.0);
    EXPECT_THROW(simulate_mg1(d, 1.0, ServiceOrder::FIFO, config(1000)), StationarityError);
    EXPECT_THROW(simulate_mg1(d, 0.5, ServiceOrder::FIFO, config(10)), DomainError);
    EXPECT_THROW(simulate_mg1(d, 0.5, ServiceOrder::FIFO, config(1000, 1, {2.0, 1.0})), DomainError);
}

TEST(SimPriority, LossUtilizationMatchesTraffic) {
    const auto sc = exp_scenario(Preemption::Loss);
    const auto report = traffic_coefficients(sc);
    const auto r = simulate_priority(sc, config(1'000'000, 11));
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_NEAR(r.utilization_prefix[k], report.classes[k].rho, 0.01) << "class " << k + 1;
    }
    EXPECT_EQ(r.lost[0], 0u);
    EXPECT_GT(r.lost[4], 0u);
}

TEST(SimPriority, ResumeUtilizationAndWorkConservation) {
    const auto sc = exp_scenario(Preemption::Resume);
    const auto r = simulate_priority(sc, config(1'000'000, 12));
    const std::vector<double> expected{0.0429, 0.1095, 0.2095, 0.4595, 0.6195};
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(r.utilization_prefix[k], expected[k], 0.01);
    EXPECT_NEAR(r.utilization_prefix.back(), r.busy_fraction, 1e-6);
    EXPECT_LE(r.max_service_overrun, 1e-9);
    for (auto lost : r.lost) EXPECT_EQ(lost, 0u);
    EXPECT_GT(r.preemptions[4], 0u);
}

TEST(SimPriority, UtilizationPrefixIsMonotone) {
    for (auto p : {Preemption::Resume, Preemption::Loss, Preemption::Repeat}) {
        const auto r = simulate_priority(exp_scenario(p), config(100'000, 13));
        for (std::size_t k = 0; k < 5; ++k) {
            EXPECT_GE(r.utilization_prefix[k], 0.0);
            EXPECT_LE(r.utilization_prefix[k], 1.0);
            if (k > 0) EXPECT_GE(r.utilization_prefix[k], r.utilization_prefix[k - 1]);
        }
    }
}

TEST(SimPriority, RepeatErlangMatchesTraffic) {
    const std::vector<double> lambdas{0.3, 0.2, 0.4};
    const std::vector<double> rates{7, 3, 4};
    std::vector<PriorityClass> classes;
    for (std::size_t i = 0; i < 3; ++i) classes.push_back({lambdas[i], ServiceDistribution::erlang2(rates[i])});
    const PriorityScenario sc(classes, Preemption::Repeat);
    const auto report = traffic_coefficients(sc);
    ASSERT_TRUE(report.stationary);
    const auto r = simulate_priority(sc, config(1'000'000, 14));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r.utilization_prefix[k], report.classes[k].rho, 0.01);
}

TEST(SimPriority, SingleClassRepeatIsPlainFifo) {
    const auto d = ServiceDistribution::uniform(1.0, 3.0);
    const auto cfg = config(100'000, 21, {0.5, 2.0});
    const auto prio = simulate_priority(PriorityScenario({{0.3, d}}, Preemption::Repeat), cfg);
    const auto mg1 = simulate_mg1(d, 0.3, ServiceOrder::FIFO, cfg);
    EXPECT_EQ(prio.mean_wait, mg1.mean_wait);
    EXPECT_EQ(prio.ecdf[0].value, mg1.ecdf[0].value);
    EXPECT_EQ(prio.ecdf[1].value, mg1.ecdf[1].value);
    EXPECT_EQ(prio.busy_fraction, mg1.busy_fraction);
}

TEST(SimPriority, RefusesOverloadNamingClass) {
    std::vector<PriorityClass> classes;
    const std::vector<double> lambdas{0.3, 0.2, 0.4, 0.5, 0.8};
    const std::vector<double> rates{7, 3, 4, 2, 5};
    for (std::size_t i = 0; i < 5; ++i) classes.push_back({lambdas[i], ServiceDistribution::erlang2(rates[i])});
    try {
        simulate_priority(PriorityScenario(classes, Preemption::Resume), config(1000));
        FAIL() << "expected StationarityError";
    } catch (const StationarityError& e) {
        EXPECT_NE(std::string(e.what()).find("class 5"), std::string::npos) << e.what();
    }
}
