#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "quayside/errors.hpp"

namespace quayside {

enum class InversionMethod { GaverStehfest };

struct InversionSpec {
    InversionMethod method = InversionMethod::GaverStehfest;
    int order = 14;

    static constexpr int kMinOrder = 4;
    static constexpr int kMaxOrder = 20;

    void validate() const {
        if (order % 2 != 0 || order < kMinOrder || order > kMaxOrder) {
            throw DomainError("inversion order must be even and within [4, 20], got " +
                              std::to_string(order));
        }
    }
};

// A transform is anything callable at a positive real argument.
template <class F>
concept TransformFn = std::invocable<F&, long double> &&
                      std::convertible_to<std::invoke_result_t<F&, long double>, long double>;

namespace detail {

inline constexpr int kMaxStehfestOrder = 20;

// V_k = (-1)^(m+k) sum_{j=floor((k+1)/2)}^{min(k,m)} j^m (2j)! / ((m-j)! j! (j-1)! (k-j)! (2j-k)!)
// with m = n/2. Every factorial involved is at most 20! < 2^63, so each term
// is formed exactly enough in long double; the inner sum has no cancellation.
inline std::vector<long double> compute_stehfest_weights(int n) {
    std::array<long double, 2 * kMaxStehfestOrder + 1> fact{};
    fact[0] = 1.0L;
    for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<long double>(i);

    const int m = n / 2;
    std::vector<long double> weights(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        long double sum = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, m); ++j) {
            const long double num = std::pow(static_cast<long double>(j), m) * fact[2 * j];
            const long double den = fact[m - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
            sum += num / den;
        }
        weights[k - 1] = ((m + k) % 2 == 0) ? sum : -sum;
    }
    return weights;
}

}  // namespace detail

// Gaver-Stehfest weights V_1..V_n for even n in [2, 20]. Cached per order.
inline const std::vector<long double>& stehfest_weights(int n) {
    if (n % 2 != 0 || n < 2 || n > detail::kMaxStehfestOrder) {
        throw DomainError("Stehfest order must be even and within [2, 20], got " +
                          std::to_string(n));
    }
    static const auto table = [] {
        std::array<std::vector<long double>, detail::kMaxStehfestOrder / 2> t;
        for (int order = 2; order <= detail::kMaxStehfestOrder; order += 2) {
            t[order / 2 - 1] = detail::compute_stehfest_weights(order);
        }
        return t;
    }();
    return table[static_cast<std::size_t>(n / 2 - 1)];
}

// f(x) ~ (ln2 / x) sum_k V_k fhat(k ln2 / x).
//
// Gaver-Stehfest needs fhat only on the positive real axis. It cannot resolve
// atoms or jumps in f; invert the transform of a CDF rather than of a density
// that carries point masses.
template <TransformFn F>
long double invert(F&& transform, long double x, InversionSpec spec = {}) {
    spec.validate();
    if (!(x > 0.0L) || !std::isfinite(x)) throw DomainError("inversion point must be positive");

    const auto& weights = stehfest_weights(spec.order);
    const long double step = std::numbers::ln2_v<long double> / x;
    long double sum = 0.0L;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const long double s = static_cast<long double>(k + 1) * step;
        sum += weights[k] * static_cast<long double>(transform(s));
    }
    const long double result = step * sum;
    if (!std::isfinite(result)) {
        throw InversionError("Gaver-Stehfest sum is not finite at x = " + std::to_string(static_cast<double>(x)));
    }
    return result;
}

struct InversionDiagnostics {
    long double value{};        // estimate at the requested order
    long double neighbour{};    // estimate at order - 2 (order + 2 for the minimum order)
    long double spread{};       // |value - neighbour|
};

// Runs the inversion at the requested order and at a neighbouring order. A large spread
// between neighbouring orders indicates precision loss or a non-smooth target.
template <TransformFn F>
InversionDiagnostics invert_with_diagnostics(F&& transform, long double x, InversionSpec spec = {}) {
    spec.validate();
    InversionDiagnostics diag;
    diag.value = invert(transform, x, spec);
    InversionSpec other = spec;
    other.order = spec.order > InversionSpec::kMinOrder ? spec.order - 2 : spec.order + 2;
    diag.neighbour = invert(transform, x, other);
    diag.spread = std::abs(diag.value - diag.neighbour);
    return diag;
}

}  // namespace quayside
