#pragma once

#include <istream>
#include <iterator>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"
#include "quayside/traffic.hpp"
#include "quayside/waiting_time.hpp"

namespace quayside {

// Single-class M|G|1 configuration.
struct QueueConfig {
    double arrival_rate;
    ServiceDistribution service;
    ServiceOrder order;
};

using Scenario = std::variant<PriorityScenario, QueueConfig>;

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
    }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
    return obj.at(key);
}

inline double require_number(const nlohmann::json& obj, const char* key, const std::string& where) {
    const auto& v = require(obj, key, where);
    if (!v.is_number()) throw ParseError(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
    const auto& v = require(obj, key, where);
    if (!v.is_string()) throw ParseError(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

// Rewraps domain errors from constructors so every diagnostic names its field.
template <class F>
auto with_context(const std::string& where, F&& build) {
    try {
        return build();
    } catch (const DomainError& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

}  // namespace detail

// Parses a scenario document:
//   {"discipline": "resume"|"loss"|"repeat", "classes": [{"lambda": x, "service": "exp(b)"}, ...]}
// or
//   {"arrival_rate": x, "service": "unif(lo,hi)", "order": "fifo"|"lifo"}
inline Scenario parse_scenario(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object");

    if (doc.contains("classes") || doc.contains("discipline")) {
        detail::reject_unknown_keys(doc, {"discipline", "classes"}, "scenario");
        const auto discipline = detail::with_context("discipline", [&] {
            return parse_preemption(detail::require_string(doc, "discipline", "scenario"));
        });
        const auto& arr = detail::require(doc, "classes", "scenario");
        if (!arr.is_array()) throw ParseError("scenario: 'classes' must be an array");
        if (arr.empty()) throw ParseError("scenario: at least one class is required");

        std::vector<PriorityClass> classes;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "classes[" + std::to_string(i) + "]";
            const auto& c = arr[i];
            if (!c.is_object()) throw ParseError(where + ": must be an object");
            detail::reject_unknown_keys(c, {"lambda", "service"}, where);
            const double lambda = detail::require_number(c, "lambda", where);
            if (!(lambda > 0.0)) throw ParseError(where + ".lambda: rate must be positive");
            auto service = detail::with_context(where + ".service", [&] {
                return parse_distribution(detail::require_string(c, "service", where));
            });
            classes.push_back({lambda, std::move(service)});
        }
        return PriorityScenario(std::move(classes), discipline);
    }

    detail::reject_unknown_keys(doc, {"arrival_rate", "service", "order"}, "scenario");
    const double rate = detail::require_number(doc, "arrival_rate", "scenario");
    if (!(rate > 0.0)) throw ParseError("arrival_rate: rate must be positive");
    auto service = detail::with_context("service", [&] {
        return parse_distribution(detail::require_string(doc, "service", "scenario"));
    });
    const auto order = detail::with_context("order", [&] {
        return parse_service_order(detail::require_string(doc, "order", "scenario"));
    });
    return QueueConfig{rate, std::move(service), order};
}

inline Scenario read_scenario(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_scenario(text);
}

inline nlohmann::json to_json(const PriorityScenario& sc) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : sc.classes()) {
        classes.push_back({{"lambda", c.lambda}, {"service", to_literal(c.service)}});
    }
    return {{"discipline", std::string(to_string(sc.discipline()))}, {"classes", classes}};
}

}  // namespace quayside
