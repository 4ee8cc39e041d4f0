#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"
#include "quayside/published_tables_data.hpp"
#include "quayside/traffic.hpp"
#include "quayside/waiting_time.hpp"

namespace quayside {

// A printed table cell: the text as it appears in print (decimal comma) and
// its numeric value.
struct PrintedCell {
    std::string printed;
    double value{};
};

struct TransformRow {
    std::vector<std::string> inputs;  // printed input columns, in header order
    ServiceDistribution service;
    double s{};
    double arrival_rate{};
    double x{};
    PrintedCell w;
    PrintedCell cdf;  // W(x) as printed; non-normative
};

struct TransformTable {
    std::string id;
    std::string title;
    ServiceOrder order{};
    std::vector<std::string> header;
    std::vector<TransformRow> rows;
};

struct TrafficRow {
    std::string params;  // b_k or [a_k,b_k] as printed
    ServiceDistribution service;
    PrintedCell lambda;
    std::optional<PrintedCell> beta1;  // resume tables
    std::optional<PrintedCell> sigma;  // loss and repeat tables
    PrintedCell rho;
};

struct TrafficTable {
    std::string id;
    std::string title;
    Preemption discipline{};
    std::vector<std::string> header;
    std::vector<TrafficRow> rows;
};

struct PublishedTables {
    std::vector<TransformTable> transform;
    std::vector<TrafficTable> traffic;

    [[nodiscard]] std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& t : transform) out.push_back(t.id);
        for (const auto& t : traffic) out.push_back(t.id);
        return out;
    }
    [[nodiscard]] const TransformTable* find_transform(std::string_view id) const {
        for (const auto& t : transform) {
            if (t.id == id) return &t;
        }
        return nullptr;
    }
    [[nodiscard]] const TrafficTable* find_traffic(std::string_view id) const {
        for (const auto& t : traffic) {
            if (t.id == id) return &t;
        }
        return nullptr;
    }
};

// "0,5577276" -> 0.5577276
inline double decimal_comma_value(std::string printed) {
    std::replace(printed.begin(), printed.end(), ',', '.');
    return detail::parse_number(printed, "printed table value");
}

namespace detail {

inline PrintedCell read_cell(const nlohmann::json& j) {
    return {j.at("printed").get<std::string>(), j.at("value").get<double>()};
}

inline ServiceDistribution distribution_for(std::string_view family, std::string_view params) {
    if (family == "unif") {
        // "[lo,hi]"
        if (params.size() < 2 || params.front() != '[' || params.back() != ']') {
            throw ParseError("bad uniform bounds '" + std::string(params) + "'");
        }
        return parse_distribution("unif(" + std::string(params.substr(1, params.size() - 2)) + ")");
    }
    if (family == "exp" || family == "erlang2" || family == "gamma3") {
        return parse_distribution(std::string(family) + "(" + std::string(params) + ")");
    }
    throw ParseError("unknown distribution family '" + std::string(family) + "'");
}

inline PublishedTables load_published_tables() {
    const auto doc = nlohmann::json::parse(data::kPublishedTablesJson);
    PublishedTables out;
    for (const auto& t : doc.at("tables")) {
        const auto kind = t.at("kind").get<std::string>();
        const auto family = t.at("family").get<std::string>();
        if (kind == "transform") {
            TransformTable table{t.at("id"), t.at("title"),
                                 parse_service_order(t.at("order").get<std::string>()),
                                 t.at("header").get<std::vector<std::string>>(), {}};
            for (const auto& r : t.at("rows")) {
                const bool uniform = family == "unif";
                const auto dist = uniform
                    ? ServiceDistribution::uniform(r.at("lo").at("value"), r.at("hi").at("value"))
                    : ServiceDistribution::exponential(r.at("b").at("value"));
                std::vector<std::string> inputs;
                const std::vector<std::string> keys =
                    uniform ? std::vector<std::string>{"s", "lo", "hi", "a", "x"}
                            : std::vector<std::string>{"b", "s", "x", "a"};
                for (const auto& k : keys) inputs.push_back(r.at(k).at("printed"));
                table.rows.push_back({std::move(inputs), dist, r.at("s").at("value"),
                                      r.at("a").at("value"), r.at("x").at("value"),
                                      read_cell(r.at("w")), read_cell(r.at("W"))});
            }
            out.transform.push_back(std::move(table));
        } else {
            TrafficTable table{t.at("id"), t.at("title"),
                               parse_preemption(t.at("discipline").get<std::string>()),
                               t.at("header").get<std::vector<std::string>>(), {}};
            for (const auto& r : t.at("rows")) {
                const auto params = r.at("params").get<std::string>();
                TrafficRow row{params, distribution_for(family, params), read_cell(r.at("lambda")),
                               std::nullopt, std::nullopt, read_cell(r.at("rho"))};
                if (r.contains("beta1")) row.beta1 = read_cell(r.at("beta1"));
                if (r.contains("sigma")) row.sigma = read_cell(r.at("sigma"));
                table.rows.push_back(std::move(row));
            }
            out.traffic.push_back(std::move(table));
        }
    }
    return out;
}

}  // namespace detail

// The printed tables, parsed once.
inline const PublishedTables& published_tables() {
    static const PublishedTables tables = detail::load_published_tables();
    return tables;
}

inline PriorityScenario scenario_for(const TrafficTable& table) {
    std::vector<PriorityClass> classes;
    for (const auto& r : table.rows) classes.push_back({r.lambda.value, r.service});
    return {std::move(classes), table.discipline};
}

// ---------------------------------------------------------------------------
// Errata engine

enum class CellStatus {
    Match,         // within the rounding of the printed value
    Rounding,      // larger than display rounding, explained by rounded intermediates
    Erratum,       // printed value disagrees with the formula
    NonNormative,  // printed W(x): shown for comparison, never judged
    NotApplicable, // no stationary value exists
};

inline std::string_view to_string(CellStatus s) {
    switch (s) {
        case CellStatus::Match: return "MATCH";
        case CellStatus::Rounding: return "ROUNDING";
        case CellStatus::Erratum: return "ERRATUM";
        case CellStatus::NonNormative: return "NON-NORMATIVE";
        case CellStatus::NotApplicable: return "n/a (non-stationary)";
    }
    return "?";
}

struct Tiers {
    double match;
    double rounding;
};

// Traffic tables round intermediates to two decimals before summing.
inline constexpr Tiers kTrafficTiers{0.02, 0.05};
// Transform tables print seven decimals.
inline constexpr Tiers kTransformTiers{1e-3, 1e-2};

inline CellStatus classify(double delta, Tiers tiers) {
    const double d = std::abs(delta);
    if (d <= tiers.match) return CellStatus::Match;
    if (d <= tiers.rounding) return CellStatus::Rounding;
    return CellStatus::Erratum;
}

struct CellCheck {
    std::size_t row{};  // 1-based
    std::string column;
    std::string printed;
    double printed_value{};
    std::optional<double> recomputed;
    CellStatus status{};

    [[nodiscard]] double delta() const { return recomputed ? *recomputed - printed_value : 0.0; }
};

struct ErrataRecord {
    std::string table_id;
    std::string title;
    std::vector<CellCheck> cells;

    [[nodiscard]] std::vector<CellCheck> flagged(CellStatus status) const {
        std::vector<CellCheck> out;
        for (const auto& c : cells) {
            if (c.status == status) out.push_back(c);
        }
        return out;
    }
    [[nodiscard]] const CellCheck* find(std::size_t row, std::string_view column) const {
        for (const auto& c : cells) {
            if (c.row == row && c.column == column) return &c;
        }
        return nullptr;
    }
};

inline ErrataRecord recompute_traffic_table(const TrafficTable& table) {
    ErrataRecord rec{table.id, table.title, {}};
    const auto report = traffic_coefficients(scenario_for(table));
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        auto check = [&](std::string column, const PrintedCell& cell, double ours) {
            rec.cells.push_back({k + 1, std::move(column), cell.printed, cell.value, ours,
                                 classify(ours - cell.value, kTrafficTiers)});
        };
        if (row.beta1) check("beta_k1", *row.beta1, moment1(row.service));
        if (row.sigma) check("sigma_k", *row.sigma, report.classes[k].sigma);
        check("rho_k", row.rho, report.classes[k].rho);
    }
    return rec;
}

inline ErrataRecord recompute_transform_table(const TransformTable& table) {
    ErrataRecord rec{table.id, table.title, {}};
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        const double w = wait_lst(table.order, row.service, row.arrival_rate, row.s).value;
        rec.cells.push_back({k + 1, "w(s)", row.w.printed, row.w.value, w,
                             classify(w - row.w.value, kTransformTiers)});
        if (is_stationary(row.service, row.arrival_rate)) {
            const double cdf_value =
                wait_cdf(table.order, row.service, row.arrival_rate, row.x).value;
            rec.cells.push_back({k + 1, "W(x)", row.cdf.printed, row.cdf.value, cdf_value,
                                 CellStatus::NonNormative});
        } else {
            rec.cells.push_back({k + 1, "W(x)", row.cdf.printed, row.cdf.value, std::nullopt,
                                 CellStatus::NotApplicable});
        }
    }
    return rec;
}

// Recomputes every checkable cell of a printed table from the formulas.
inline ErrataRecord recompute_table(std::string_view table_id) {
    const auto& tables = published_tables();
    if (const auto* t = tables.find_traffic(table_id)) return recompute_traffic_table(*t);
    if (const auto* t = tables.find_transform(table_id)) return recompute_transform_table(*t);
    throw DomainError("unknown table id '" + std::string(table_id) + "'");
}

}  // namespace quayside
