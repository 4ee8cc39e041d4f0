#pragma once

#include <cmath>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"

namespace quayside {

enum class ObservationKind {
    Arrival,  // per-period arrival counts, or arrival observations in general
    Service,  // service durations
};

class ObservationSample {
public:
    ObservationSample(std::vector<double> values, ObservationKind kind)
        : values_(std::move(values)), kind_(kind) {
        if (values_.empty()) throw DomainError("observation sample is empty");
        for (double v : values_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw DomainError("observations must be finite and nonnegative");
            }
        }
    }

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] ObservationKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
    ObservationKind kind_;
};

// nu_k = (1/n) sum X_i^k
inline double empirical_moment(const ObservationSample& sample, int k) {
    if (k < 1) throw DomainError("moment order must be >= 1");
    long double sum = 0.0L;
    for (double x : sample.values()) sum += std::pow(static_cast<long double>(x), k);
    return static_cast<double>(sum / static_cast<long double>(sample.size()));
}

// Method-of-moments estimate of the Poisson parameter: the sample mean.
// Unbiased, and consistent by the law of large numbers.
inline double estimate_arrival_rate(const ObservationSample& sample) {
    return empirical_moment(sample, 1);
}

// Exponential service rate b from 1/b = sample mean. No small-sample bias
// correction is applied (1/mean overestimates b for small n).
inline double estimate_service_rate(const ObservationSample& sample) {
    const double mean = empirical_moment(sample, 1);
    if (!(mean > 0.0)) throw DomainError("service sample is all zero; rate is undefined");
    return 1.0 / mean;
}

// One observation per line; blank lines and '#' comments are skipped.
inline ObservationSample read_observations(std::istream& in, ObservationKind kind) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = detail::trim(text);
        if (text.empty()) continue;
        try {
            values.push_back(detail::parse_number(text, "observation"));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (values.empty()) throw ParseError("observation file contains no values");
    return {std::move(values), kind};
}

}  // namespace quayside
