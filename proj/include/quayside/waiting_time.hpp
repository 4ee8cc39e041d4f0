#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>

#include "quayside/busy_period.hpp"
#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"
#include "quayside/lst_inversion.hpp"

namespace quayside {

// Order of service in a single-server M|G|1 queue. LIFO is non-preemptive:
// an arrival never interrupts the job in service.
enum class ServiceOrder { FIFO, LIFO };

inline std::string_view to_string(ServiceOrder order) {
    return order == ServiceOrder::FIFO ? "fifo" : "lifo";
}

inline ServiceOrder parse_service_order(std::string_view text) {
    if (text == "fifo") return ServiceOrder::FIFO;
    if (text == "lifo") return ServiceOrder::LIFO;
    throw ParseError("unknown service order '" + std::string(text) + "' (expected fifo or lifo)");
}

template <std::floating_point T>
struct WaitEvaluation {
    ServiceOrder order{};
    T argument{};      // s for transforms, x for the CDF
    T value{};
    bool stationary{};  // a * E[B] < 1
    std::optional<BusyPeriodSolution<T>> busy_period;  // LIFO transforms only
    std::optional<long double> inversion_spread;       // CDF only
};

inline double offered_load(const ServiceDistribution& d, double arrival_rate) {
    return arrival_rate * moment1(d);
}

inline bool is_stationary(const ServiceDistribution& d, double arrival_rate) {
    return offered_load(d, arrival_rate) < 1.0;
}

// Pollaczek-Khinchine mean wait a E[B^2] / (2 (1 - rho)).
inline double pk_mean_wait(const ServiceDistribution& d, double arrival_rate) {
    const double rho = offered_load(d, arrival_rate);
    if (!(rho < 1.0)) throw StationarityError("mean wait is infinite when rho >= 1");
    return arrival_rate * moment2(d) / (2.0 * (1.0 - rho));
}

namespace detail {

inline void check_wait_args(double arrival_rate, long double s) {
    if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
        throw DomainError("arrival rate must be positive");
    }
    if (!(s > 0.0L)) throw DomainError("transform argument must be positive");
}

}  // namespace detail

// w(s) = (1 - a b1) + a (1 - pi(s)) / (s + a - a pi(s)).
// Evaluated for any a; `stationary` reports whether the value is a proper
// transform of a waiting-time distribution.
template <std::floating_point T>
WaitEvaluation<T> lifo_wait_lst(const ServiceDistribution& d, double arrival_rate, T s,
                                KendallOptions opts = {}) {
    detail::check_wait_args(arrival_rate, s);
    const auto bp = busy_period_lst(d, arrival_rate, s, opts);
    const T a = static_cast<T>(arrival_rate);
    const T rho = a * static_cast<T>(moment1(d));
    const T value = (T{1} - rho) + a * (T{1} - bp.value) / (s + a - a * bp.value);
    return {ServiceOrder::LIFO, s, value, is_stationary(d, arrival_rate), bp, std::nullopt};
}

// w(s) = (1 - a b1) s / (s - a + a beta(s)).
template <std::floating_point T>
WaitEvaluation<T> fifo_wait_lst(const ServiceDistribution& d, double arrival_rate, T s) {
    detail::check_wait_args(arrival_rate, s);
    const T a = static_cast<T>(arrival_rate);
    const T rho = a * static_cast<T>(moment1(d));
    const T denom = s - a + a * lst(d, s);
    if (std::abs(denom) <= static_cast<T>(1e-14)) {
        throw SingularityError("FIFO transform denominator vanishes at s = " +
                               std::to_string(static_cast<double>(s)));
    }
    return {ServiceOrder::FIFO, s, (T{1} - rho) * s / denom, is_stationary(d, arrival_rate),
            std::nullopt, std::nullopt};
}

template <std::floating_point T>
WaitEvaluation<T> wait_lst(ServiceOrder order, const ServiceDistribution& d, double arrival_rate,
                           T s, KendallOptions opts = {}) {
    return order == ServiceOrder::FIFO ? fifo_wait_lst(d, arrival_rate, s)
                                       : lifo_wait_lst(d, arrival_rate, s, opts);
}

// Kendall tolerance used inside inversions; Stehfest weights reach 1e8..1e11,
// so the transform has to be accurate far beyond the display tolerance.
inline constexpr KendallOptions kInversionKendall{1e-17L, 1'000'000};

// W(x) = P(wait <= x), recovered by inverting the ordinary Laplace transform
// w(s)/s of the CDF. Inverting w(s)/s keeps the atom of mass 1 - rho at zero
// inside a continuous target.
inline WaitEvaluation<double> wait_cdf(ServiceOrder order, const ServiceDistribution& d,
                                       double arrival_rate, double x, InversionSpec spec = {}) {
    if (!(x > 0.0)) throw DomainError("cdf argument must be positive");
    if (!(arrival_rate > 0.0)) throw DomainError("arrival rate must be positive");
    if (!is_stationary(d, arrival_rate)) {
        throw StationarityError("waiting-time distribution undefined: rho = " +
                                std::to_string(offered_load(d, arrival_rate)) + " >= 1");
    }
    auto transform = [&](long double s) {
        return wait_lst(order, d, arrival_rate, s, kInversionKendall).value / s;
    };
    const auto diag = invert_with_diagnostics(transform, static_cast<long double>(x), spec);
    const double value = std::clamp(static_cast<double>(diag.value), 0.0, 1.0);
    return {order, x, value, true, std::nullopt, diag.spread};
}

}  // namespace quayside
