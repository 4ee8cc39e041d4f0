#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "quayside/errors.hpp"
#include "quayside/published_tables.hpp"

namespace quayside {

// Six significant digits, decimal point.
inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct RenderedTable {
    std::string id;
    std::string title;
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;
};

inline void write_text(std::ostream& os, const RenderedTable& t) {
    std::vector<std::size_t> width(t.headers.size(), 0);
    for (std::size_t c = 0; c < t.headers.size(); ++c) width[c] = t.headers[c].size();
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    if (!t.id.empty()) os << "Table " << t.id << ". " << t.title << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) os << "  ";
            os << cells[c];
            if (c + 1 < cells.size()) os << std::string(width[c] - cells[c].size(), ' ');
        }
        os << '\n';
    };
    line(t.headers);
    for (const auto& row : t.rows) line(row);
}

inline std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) os << ',';
        os << csv_field(cells[c]);
    }
    os << '\n';
}

// Tables go out with a leading "table" column so several can share one file.
inline void write_csv(std::ostream& os, const RenderedTable& t, bool with_header = true) {
    if (with_header) {
        std::vector<std::string> h{"table"};
        h.insert(h.end(), t.headers.begin(), t.headers.end());
        write_csv_row(os, h);
    }
    for (const auto& row : t.rows) {
        std::vector<std::string> r{t.id};
        r.insert(r.end(), row.begin(), row.end());
        write_csv_row(os, r);
    }
}

// ---------------------------------------------------------------------------
// Reproduction of the printed tables

namespace detail {

inline std::string cell_status(const CellCheck& c) { return std::string(to_string(c.status)); }

inline std::string recomputed_text(const CellCheck& c) {
    return c.recomputed ? format_value(*c.recomputed) : std::string(to_string(c.status));
}

}  // namespace detail

inline RenderedTable render_reproduction(const TransformTable& table, const ErrataRecord& rec) {
    RenderedTable out{table.id, table.title, {}, {}};
    out.headers.assign(table.header.begin(), table.header.end() - 2);
    const std::string w = table.header[table.header.size() - 2];
    const std::string big_w = table.header.back();
    for (const auto& h : {w, "printed " + w, std::string("status"), big_w,
                          "printed " + big_w + " (non-normative)"}) {
        out.headers.push_back(h);
    }
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        std::vector<std::string> cells;
        for (const auto& in : row.inputs) cells.push_back(format_value(decimal_comma_value(in)));
        const auto* wc = rec.find(k + 1, "w(s)");
        const auto* cc = rec.find(k + 1, "W(x)");
        cells.push_back(detail::recomputed_text(*wc));
        cells.push_back(format_value(wc->printed_value));
        cells.push_back(detail::cell_status(*wc));
        cells.push_back(detail::recomputed_text(*cc));
        cells.push_back(format_value(cc->printed_value));
        out.rows.push_back(std::move(cells));
    }
    return out;
}

inline RenderedTable render_reproduction(const TrafficTable& table, const ErrataRecord& rec) {
    RenderedTable out{table.id, table.title, {}, {}};
    const std::string third = table.header[3];
    out.headers = {"k", table.header[1], "lambda_k", third, "printed " + third, "status",
                   "rho_k", "printed rho_k", "status"};
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        const auto* mid = rec.find(k + 1, third);
        const auto* rho = rec.find(k + 1, "rho_k");
        out.rows.push_back({std::to_string(k + 1), row.params, format_value(row.lambda.value),
                            detail::recomputed_text(*mid), format_value(mid->printed_value),
                            detail::cell_status(*mid), detail::recomputed_text(*rho),
                            format_value(rho->printed_value), detail::cell_status(*rho)});
    }
    return out;
}

struct Reproduction {
    std::vector<RenderedTable> tables;
    std::vector<ErrataRecord> records;
    std::vector<std::string> errata;  // one line per ROUNDING or ERRATUM cell
};

// Expands "all", "traffic", "transform" and comma-separated table ids into
// ids in print order.
inline std::vector<std::string> expand_table_selection(const std::vector<std::string>& selectors) {
    const auto& tables = published_tables();
    std::vector<std::string> wanted;
    auto add = [&wanted](const std::string& id) {
        if (std::find(wanted.begin(), wanted.end(), id) == wanted.end()) wanted.push_back(id);
    };
    for (const auto& sel : selectors) {
        if (sel == "all") {
            for (const auto& id : tables.ids()) add(id);
        } else if (sel == "traffic") {
            for (const auto& t : tables.traffic) add(t.id);
        } else if (sel == "transform") {
            for (const auto& t : tables.transform) add(t.id);
        } else if (tables.find_traffic(sel) || tables.find_transform(sel)) {
            add(sel);
        } else {
            throw DomainError("unknown table id '" + sel + "'");
        }
    }
    std::vector<std::string> ordered;
    for (const auto& id : tables.ids()) {
        if (std::find(wanted.begin(), wanted.end(), id) != wanted.end()) ordered.push_back(id);
    }
    return ordered;
}

inline std::string describe_flag(const std::string& table_id, const CellCheck& c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "Table %s row %zu %s: printed %s, recomputed %s (delta %+.4g) %s",
                  table_id.c_str(), c.row, c.column.c_str(), c.printed.c_str(),
                  format_value(*c.recomputed).c_str(), c.delta(),
                  std::string(to_string(c.status)).c_str());
    return buf;
}

inline Reproduction reproduce(const std::vector<std::string>& selectors) {
    const auto& tables = published_tables();
    Reproduction out;
    for (const auto& id : expand_table_selection(selectors)) {
        auto rec = recompute_table(id);
        if (const auto* t = tables.find_transform(id)) {
            out.tables.push_back(render_reproduction(*t, rec));
        } else {
            out.tables.push_back(render_reproduction(*tables.find_traffic(id), rec));
        }
        for (const auto& c : rec.cells) {
            if (c.status == CellStatus::Rounding || c.status == CellStatus::Erratum) {
                out.errata.push_back(describe_flag(id, c));
            }
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace quayside
