#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"

namespace quayside {

// What happens to a lower-priority job in service when a higher-priority job
// arrives. Preemption is always immediate.
enum class Preemption {
    Resume,  // continues later with its remaining work
    Loss,    // leaves the system for good
    Repeat,  // restarts later with a freshly drawn service time
};

inline std::string_view to_string(Preemption p) {
    switch (p) {
        case Preemption::Resume: return "resume";
        case Preemption::Loss: return "loss";
        case Preemption::Repeat: return "repeat";
    }
    return "?";
}

inline Preemption parse_preemption(std::string_view text) {
    if (text == "resume") return Preemption::Resume;
    if (text == "loss") return Preemption::Loss;
    if (text == "repeat") return Preemption::Repeat;
    throw ParseError("unknown discipline '" + std::string(text) +
                     "' (expected resume, loss or repeat)");
}

struct PriorityClass {
    double lambda;
    ServiceDistribution service;
};

// Classes in priority order: index 0 is the highest priority.
class PriorityScenario {
public:
    PriorityScenario(std::vector<PriorityClass> classes, Preemption discipline)
        : classes_(std::move(classes)), discipline_(discipline) {
        if (classes_.empty()) throw DomainError("scenario needs at least one class");
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            const double lambda = classes_[i].lambda;
            if (!(lambda > 0.0) || !std::isfinite(lambda)) {
                throw DomainError("class " + std::to_string(i + 1) +
                                  ": arrival rate must be positive");
            }
        }
    }

    [[nodiscard]] const std::vector<PriorityClass>& classes() const noexcept { return classes_; }
    [[nodiscard]] Preemption discipline() const noexcept { return discipline_; }
    [[nodiscard]] std::size_t size() const noexcept { return classes_.size(); }

    [[nodiscard]] PriorityScenario with_discipline(Preemption p) const { return {classes_, p}; }

private:
    std::vector<PriorityClass> classes_;
    Preemption discipline_;
};

struct ClassTraffic {
    double sigma;      // lambda_1 + ... + lambda_k
    double increment;  // contribution of class k
    double rho;        // cumulative traffic coefficient of classes 1..k
    bool stationary;   // rho < 1
};

struct TrafficReport {
    Preemption discipline{};
    std::vector<ClassTraffic> classes;
    bool stationary{};
    std::optional<std::size_t> first_overloaded_class;  // 1-based
};

// Expected server time consumed by one class-k job that can be interrupted by
// a Poisson stream of rate `interrupt_rate` (the higher classes combined).
//   Resume: E[B]
//   Loss:   (1 - beta(sigma)) / sigma
//   Repeat: (1 / beta(sigma) - 1) / sigma
// With no interrupting stream all three reduce to E[B].
inline double effective_service(const ServiceDistribution& d, Preemption p, double interrupt_rate,
                                 std::size_t class_index = 0) {
    if (interrupt_rate <= 0.0 || p == Preemption::Resume) return moment1(d);
    const double beta = lst(d, interrupt_rate);
    if (p == Preemption::Loss) return (1.0 - beta) / interrupt_rate;
    if (!(beta > 0.0)) {
        throw OverflowError("class " + std::to_string(class_index + 1) +
                                ": service transform underflows at sigma = " +
                                std::to_string(interrupt_rate) + "; repeat coefficient is infinite",
                            class_index + 1);
    }
    const double term = (1.0 / beta - 1.0) / interrupt_rate;
    if (!std::isfinite(term)) {
        throw OverflowError("class " + std::to_string(class_index + 1) +
                                ": repeat coefficient overflows",
                            class_index + 1);
    }
    return term;
}

inline TrafficReport traffic_coefficients(const PriorityScenario& sc) {
    TrafficReport report;
    report.discipline = sc.discipline();
    report.stationary = true;
    double sigma = 0.0;
    double rho = 0.0;
    for (std::size_t k = 0; k < sc.size(); ++k) {
        const auto& cls = sc.classes()[k];
        // sigma here is sigma_{k-1}: only strictly higher classes interrupt.
        const double increment = cls.lambda * effective_service(cls.service, sc.discipline(), sigma, k);
        sigma += cls.lambda;
        rho += increment;
        const bool ok = rho < 1.0;
        report.classes.push_back({sigma, increment, rho, ok});
        if (!ok && report.stationary) {
            report.stationary = false;
            report.first_overloaded_class = k + 1;
        }
    }
    return report;
}

struct StationarityVerdict {
    bool stationary{};
    std::size_t stationary_prefix{};  // classes 1..m are stationary
    std::optional<std::size_t> first_overloaded_class;
};

// Once some rho_k >= 1 the classes k and below are overloaded; the classes
// above it still see a stationary system.
inline StationarityVerdict stationarity_verdict(const TrafficReport& report) {
    StationarityVerdict v;
    for (const auto& c : report.classes) {
        if (!c.stationary) break;
        ++v.stationary_prefix;
    }
    v.stationary = v.stationary_prefix == report.classes.size();
    if (!v.stationary) v.first_overloaded_class = v.stationary_prefix + 1;
    return v;
}

}  // namespace quayside
