#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <variant>
#include <vector>

#include "quayside/errors.hpp"
#include "quayside/rng.hpp"

namespace quayside {

// Service-time laws. Rates are in 1/time, bounds in time units.
struct Exponential {
    double rate;
};

struct Uniform {
    double lo;
    double hi;
};

struct Erlang2 {
    double rate;
};

// Erlang of order 3 (Gamma with integer shape 3).
struct Gamma3 {
    double rate;
};

class ServiceDistribution {
public:
    using Law = std::variant<Exponential, Uniform, Erlang2, Gamma3>;

    // Throws DomainError for invalid parameters.
    ServiceDistribution(Law law) : law_(law) { validate(); }  // NOLINT(implicit)

    static ServiceDistribution exponential(double rate) { return {Exponential{rate}}; }
    static ServiceDistribution uniform(double lo, double hi) { return {Uniform{lo, hi}}; }
    static ServiceDistribution erlang2(double rate) { return {Erlang2{rate}}; }
    static ServiceDistribution gamma3(double rate) { return {Gamma3{rate}}; }

    [[nodiscard]] const Law& law() const noexcept { return law_; }

    template <class Visitor>
    decltype(auto) visit(Visitor&& vis) const {
        return std::visit(std::forward<Visitor>(vis), law_);
    }

    friend bool operator==(const ServiceDistribution& lhs, const ServiceDistribution& rhs) {
        return lhs.law_.index() == rhs.law_.index() && lhs.params() == rhs.params();
    }

    // Parameters in literal order: rate for the Erlang family, (lo, hi) for Uniform.
    [[nodiscard]] std::vector<double> params() const {
        return visit([](const auto& law) -> std::vector<double> {
            using L = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<L, Uniform>) {
                return {law.lo, law.hi};
            } else {
                return {law.rate};
            }
        });
    }

private:
    void validate() const {
        visit([](const auto& law) {
            using L = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<L, Uniform>) {
                if (!std::isfinite(law.lo) || !std::isfinite(law.hi) || law.lo < 0.0 ||
                    !(law.lo < law.hi)) {
                    throw DomainError("uniform bounds must satisfy 0 <= lo < hi");
                }
            } else {
                if (!std::isfinite(law.rate) || !(law.rate > 0.0)) {
                    throw DomainError("rate must be positive");
                }
            }
        });
    }

    Law law_;
};

namespace detail {

template <std::floating_point T>
T erlang_lst(double rate, T s, int order) {
    const T ratio = static_cast<T>(rate) / (s + static_cast<T>(rate));
    T out = ratio;
    for (int i = 1; i < order; ++i) out *= ratio;
    return out;
}

// (e^{-s lo} - e^{-s hi}) / (s (hi - lo)), written as e^{-s lo} (1 - e^{-y}) / y.
template <std::floating_point T>
T uniform_lst(double lo, double hi, T s) {
    const T width = static_cast<T>(hi) - static_cast<T>(lo);
    const T y = s * width;
    const T head = std::exp(-s * static_cast<T>(lo));
    if (y < static_cast<T>(1e-8)) {
        return head * (T{1} - y / T{2} + y * y / T{6});
    }
    return head * (-std::expm1(-y)) / y;
}

}  // namespace detail

// Laplace-Stieltjes transform beta(s) = E[exp(-s X)], s >= 0.
template <std::floating_point T>
T lst(const ServiceDistribution& d, T s) {
    if (!(s >= T{0})) throw DomainError("transform argument must be nonnegative");
    return d.visit([s](const auto& law) -> T {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
            return detail::erlang_lst(law.rate, s, 1);
        } else if constexpr (std::is_same_v<L, Uniform>) {
            return detail::uniform_lst(law.lo, law.hi, s);
        } else if constexpr (std::is_same_v<L, Erlang2>) {
            return detail::erlang_lst(law.rate, s, 2);
        } else {
            return detail::erlang_lst(law.rate, s, 3);
        }
    });
}

inline double moment1(const ServiceDistribution& d) {
    return d.visit([](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
            return 1.0 / law.rate;
        } else if constexpr (std::is_same_v<L, Uniform>) {
            return (law.lo + law.hi) / 2.0;
        } else if constexpr (std::is_same_v<L, Erlang2>) {
            return 2.0 / law.rate;
        } else {
            return 3.0 / law.rate;
        }
    });
}

// E[X^2]; used by the Pollaczek-Khinchine mean.
inline double moment2(const ServiceDistribution& d) {
    return d.visit([](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
            return 2.0 / (law.rate * law.rate);
        } else if constexpr (std::is_same_v<L, Uniform>) {
            return (law.lo * law.lo + law.lo * law.hi + law.hi * law.hi) / 3.0;
        } else if constexpr (std::is_same_v<L, Erlang2>) {
            return 6.0 / (law.rate * law.rate);
        } else {
            return 12.0 / (law.rate * law.rate);
        }
    });
}

inline double cdf(const ServiceDistribution& d, double x) {
    if (!(x >= 0.0)) throw DomainError("cdf argument must be nonnegative");
    return d.visit([x](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Uniform>) {
            if (x <= law.lo) return 0.0;
            if (x >= law.hi) return 1.0;
            return (x - law.lo) / (law.hi - law.lo);
        } else {
            const double bx = law.rate * x;
            if constexpr (std::is_same_v<L, Exponential>) {
                return -std::expm1(-bx);
            } else if constexpr (std::is_same_v<L, Erlang2>) {
                return 1.0 - std::exp(-bx) * (1.0 + bx);
            } else {
                return 1.0 - std::exp(-bx) * (1.0 + bx + bx * bx / 2.0);
            }
        }
    });
}

// Erlang laws are drawn as sums of independent exponential stages.
template <class URBG>
double sample(const ServiceDistribution& d, URBG& rng) {
    return d.visit([&rng](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Exponential>) {
            return exponential_draw(rng, law.rate);
        } else if constexpr (std::is_same_v<L, Uniform>) {
            return law.lo + (law.hi - law.lo) * uniform_open01(rng);
        } else if constexpr (std::is_same_v<L, Erlang2>) {
            return exponential_draw(rng, law.rate) + exponential_draw(rng, law.rate);
        } else {
            return exponential_draw(rng, law.rate) + exponential_draw(rng, law.rate) +
                   exponential_draw(rng, law.rate);
        }
    });
}

// ---------------------------------------------------------------------------
// Literal syntax: exp(b), unif(lo,hi), erlang2(b), gamma3(b).

namespace detail {

inline std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

inline double parse_number(std::string_view text, std::string_view context) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("malformed number '" + std::string(text) + "' in " +
                         std::string(context));
    }
    return value;
}

inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    // Prefer the shortest representation that round-trips.
    for (int precision = 1; precision <= 17; ++precision) {
        char shorter[64];
        std::snprintf(shorter, sizeof shorter, "%.*g", precision, value);
        if (std::strtod(shorter, nullptr) == value) return shorter;
    }
    return buf;
}

}  // namespace detail

inline ServiceDistribution parse_distribution(std::string_view literal) {
    const std::string_view text = detail::trim(literal);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw ParseError("unknown distribution literal '" + std::string(text) +
                         "' (expected exp(b), unif(lo,hi), erlang2(b) or gamma3(b))");
    }
    const std::string_view name = detail::trim(text.substr(0, open));
    const std::string_view args = text.substr(open + 1, text.size() - open - 2);

    std::vector<double> values;
    std::size_t start = 0;
    for (;;) {
        const auto comma = args.find(',', start);
        values.push_back(detail::parse_number(args.substr(start, comma - start), text));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }

    auto expect_args = [&](std::size_t n) {
        if (values.size() != n) {
            throw ParseError("distribution literal '" + std::string(text) + "' takes " +
                             std::to_string(n) + " argument(s)");
        }
    };
    if (name == "exp") {
        expect_args(1);
        return ServiceDistribution::exponential(values[0]);
    }
    if (name == "unif") {
        expect_args(2);
        return ServiceDistribution::uniform(values[0], values[1]);
    }
    if (name == "erlang2") {
        expect_args(1);
        return ServiceDistribution::erlang2(values[0]);
    }
    if (name == "gamma3") {
        expect_args(1);
        return ServiceDistribution::gamma3(values[0]);
    }
    throw ParseError("unknown distribution literal '" + std::string(text) + "'");
}

inline std::string to_literal(const ServiceDistribution& d) {
    return d.visit([](const auto& law) -> std::string {
        using L = std::decay_t<decltype(law)>;
        using detail::format_number;
        if constexpr (std::is_same_v<L, Exponential>) {
            return "exp(" + format_number(law.rate) + ")";
        } else if constexpr (std::is_same_v<L, Uniform>) {
            return "unif(" + format_number(law.lo) + "," + format_number(law.hi) + ")";
        } else if constexpr (std::is_same_v<L, Erlang2>) {
            return "erlang2(" + format_number(law.rate) + ")";
        } else {
            return "gamma3(" + format_number(law.rate) + ")";
        }
    });
}

}  // namespace quayside
