#pragma once

#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>

#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"

namespace quayside {

struct KendallOptions {
    long double tol = 1e-12L;
    std::size_t max_iter = 1'000'000;
};

template <std::floating_point T>
struct BusyPeriodSolution {
    T value{};                 // pi(s), in [0, 1]
    std::size_t iterations{};
    T residual{};              // |pi - beta(s + a - a pi)| at the returned value
};

// Busy-period transform pi(s): the least fixed point in [0, 1] of
//     pi = beta(s + a - a pi).
//
// The map is increasing in pi, so iterating from zero climbs monotonically to
// the least fixed point. That branch is the busy-period transform for
// stationary queues, and is still well defined when a * E[B] >= 1.
template <std::floating_point T>
BusyPeriodSolution<T> busy_period_lst(const ServiceDistribution& d, double arrival_rate, T s,
                                      KendallOptions opts = {}) {
    if (!(s > T{0})) throw DomainError("busy period: s must be positive");
    if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
        throw DomainError("busy period: arrival rate must be positive");
    }
    if (!(opts.tol > 0.0L)) throw DomainError("busy period: tolerance must be positive");

    const T a = static_cast<T>(arrival_rate);
    const T tol = static_cast<T>(opts.tol);
    auto step = [&](T pi) {
        const T arg = s + a - a * pi;
        assert(arg >= T{0});
        return lst(d, arg);
    };

    T pi{0};
    T residual = step(pi);  // |T(0) - 0|
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        const T next = step(pi);
        // Monotone up to rounding in the last place.
        assert(next >= pi - T{64} * std::numeric_limits<T>::epsilon());
        residual = std::abs(next - pi);
        pi = next;
        if (residual <= tol) {
            return {pi, it, std::abs(pi - step(pi))};
        }
    }
    throw ConvergenceError("busy period: fixed-point iteration did not converge in " +
                               std::to_string(opts.max_iter) + " iterations",
                           pi, residual, opts.max_iter);
}

}  // namespace quayside
