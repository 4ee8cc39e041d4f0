#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quayside/quayside.hpp"

namespace quayside::cli {
namespace {

enum class Format { Text, Csv };

struct Output {
    std::ostream& out;
    Format format;

    void table(const RenderedTable& t) const {
        if (format == Format::Csv) {
            write_csv_row(out, t.headers);
            for (const auto& row : t.rows) write_csv_row(out, row);
        } else {
            write_text(out, t);
        }
    }
};

void add_format_option(CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();
}

Format to_format(const std::string& f) { return f == "csv" ? Format::Csv : Format::Text; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QUAYSIDE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ParseError(std::string("QUAYSIDE_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 1;
}

// Single-class configuration either from --scenario or from flags.
struct QueueArgs {
    std::string scenario;
    std::string order;
    std::string service;
    double rate = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scenario", scenario, "Single-class scenario file (JSON)");
        cmd->add_option("--order", order, "Service order")->check(CLI::IsMember({"fifo", "lifo"}));
        cmd->add_option("--service", service, "Service law: exp(b), unif(lo,hi), erlang2(b), gamma3(b)");
        cmd->add_option("--rate", rate, "Poisson arrival rate");
    }

    [[nodiscard]] QueueConfig resolve() const {
        if (!scenario.empty()) {
            auto sc = parse_scenario(read_file(scenario));
            if (!std::holds_alternative<QueueConfig>(sc)) {
                throw ParseError("'" + scenario + "' is a priority scenario; expected a single-class one");
            }
            auto cfg = std::get<QueueConfig>(sc);
            if (!order.empty()) cfg.order = parse_service_order(order);
            return cfg;
        }
        if (order.empty() || service.empty() || rate == 0.0) {
            throw ParseError("give --scenario, or all of --order, --service and --rate");
        }
        if (!(rate > 0.0)) throw DomainError("--rate must be positive");
        return {rate, parse_distribution(service), parse_service_order(order)};
    }
};

void warn_if_nonstationary(std::ostream& err, const QueueConfig& cfg) {
    if (!is_stationary(cfg.service, cfg.arrival_rate)) {
        err << "warning: rho = " << format_value(offered_load(cfg.service, cfg.arrival_rate))
            << " >= 1; transform values are not a waiting-time distribution\n";
    }
}

RenderedTable traffic_table(const PriorityScenario& sc, const TrafficReport& report) {
    RenderedTable t{"", "", {"k", "lambda_k", "service", "sigma_k", "increment", "rho_k", "stationary"}, {}};
    for (std::size_t k = 0; k < report.classes.size(); ++k) {
        const auto& c = report.classes[k];
        t.rows.push_back({std::to_string(k + 1), format_value(sc.classes()[k].lambda),
                          to_literal(sc.classes()[k].service), format_value(c.sigma),
                          format_value(c.increment), format_value(c.rho),
                          c.stationary ? "yes" : "no"});
    }
    return t;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"quayside: waiting times and traffic coefficients for M|G|1 and priority queues",
                 "quayside"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    std::string format = "text";
    std::function<int()> action;

    // wait -----------------------------------------------------------------
    QueueArgs wait_args;
    std::vector<double> wait_s;
    double kendall_tol = 1e-12;
    auto* wait = app.add_subcommand("wait", "Evaluate the waiting-time transform w(s)");
    wait_args.attach(wait);
    wait->add_option("--s", wait_s, "Transform argument(s)")->required()->delimiter(',');
    wait->add_option("--kendall-tol", kendall_tol, "Busy-period fixed-point tolerance")
        ->capture_default_str();
    add_format_option(wait, format);
    wait->callback([&] {
        action = [&]() -> int {
            const auto cfg = wait_args.resolve();
            warn_if_nonstationary(err, cfg);
            RenderedTable t{"", "", {"order", "service", "rate", "s", "w(s)", "stationary", "iterations", "residual"}, {}};
            for (double s : wait_s) {
                const auto ev = wait_lst(cfg.order, cfg.service, cfg.arrival_rate, s,
                                         KendallOptions{kendall_tol, 1'000'000});
                t.rows.push_back({std::string(to_string(cfg.order)), to_literal(cfg.service),
                                  format_value(cfg.arrival_rate), format_value(s), format_value(ev.value),
                                  ev.stationary ? "yes" : "no",
                                  ev.busy_period ? std::to_string(ev.busy_period->iterations) : "",
                                  ev.busy_period ? format_value(ev.busy_period->residual) : ""});
            }
            Output{out, to_format(format)}.table(t);
            return kOk;
        };
    });

    // cdf ------------------------------------------------------------------
    QueueArgs cdf_args;
    std::vector<double> cdf_x;
    int cdf_order = InversionSpec{}.order;
    auto* cdf_cmd = app.add_subcommand("cdf", "Waiting-time distribution W(x) by numerical inversion");
    cdf_args.attach(cdf_cmd);
    cdf_cmd->add_option("--x", cdf_x, "Point(s) at which to evaluate W")->required()->delimiter(',');
    cdf_cmd->add_option("--inversion-order", cdf_order, "Gaver-Stehfest order (even, 4..20)")
        ->capture_default_str();
    add_format_option(cdf_cmd, format);
    cdf_cmd->callback([&] {
        action = [&]() -> int {
            const auto cfg = cdf_args.resolve();
            RenderedTable t{"", "", {"order", "service", "rate", "x", "W(x)", "order_spread"}, {}};
            for (double x : cdf_x) {
                const auto ev = wait_cdf(cfg.order, cfg.service, cfg.arrival_rate, x,
                                         InversionSpec{InversionMethod::GaverStehfest, cdf_order});
                t.rows.push_back({std::string(to_string(cfg.order)), to_literal(cfg.service),
                                  format_value(cfg.arrival_rate), format_value(x), format_value(ev.value),
                                  format_value(static_cast<double>(ev.inversion_spread.value_or(0.0L)))});
            }
            Output{out, to_format(format)}.table(t);
            return kOk;
        };
    });

    // traffic --------------------------------------------------------------
    std::string traffic_scenario;
    std::string traffic_discipline;
    auto* traffic = app.add_subcommand("traffic", "Traffic coefficients of a priority scenario");
    traffic->add_option("--scenario", traffic_scenario, "Priority scenario file (JSON)")->required();
    traffic->add_option("--discipline", traffic_discipline, "Override the scenario's discipline")
        ->check(CLI::IsMember({"resume", "loss", "repeat"}));
    add_format_option(traffic, format);
    traffic->callback([&] {
        action = [&]() -> int {
            auto parsed = parse_scenario(read_file(traffic_scenario));
            if (!std::holds_alternative<PriorityScenario>(parsed)) {
                throw ParseError("'" + traffic_scenario + "' is not a priority scenario");
            }
            auto sc = std::get<PriorityScenario>(parsed);
            if (!traffic_discipline.empty()) sc = sc.with_discipline(parse_preemption(traffic_discipline));
            const auto report = traffic_coefficients(sc);
            const auto verdict = stationarity_verdict(report);
            const Output o{out, to_format(format)};
            if (o.format == Format::Text) out << "discipline: " << to_string(sc.discipline()) << '\n';
            o.table(traffic_table(sc, report));
            std::string verdict_text =
                verdict.stationary
                    ? "stationary"
                    : "overloaded from class " + std::to_string(*verdict.first_overloaded_class) +
                          "; classes 1.." + std::to_string(verdict.stationary_prefix) + " stationary";
            if (verdict.stationary_prefix == 0 && !verdict.stationary) {
                verdict_text = "overloaded from class 1; no stationary classes";
            }
            if (o.format == Format::Text) {
                out << "verdict: " << verdict_text << '\n';
            } else {
                write_csv_row(out, {"verdict", verdict_text});
            }
            return kOk;
        };
    });

    // simulate -------------------------------------------------------------
    std::string sim_scenario;
    std::size_t sim_arrivals = 1'000'000;
    std::optional<std::size_t> sim_warmup;
    std::optional<std::uint64_t> sim_seed;
    std::vector<double> sim_grid;
    auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation of a scenario");
    simulate->add_option("--scenario", sim_scenario, "Scenario file (JSON)")->required();
    simulate->add_option("--arrivals", sim_arrivals, "Measured arrivals after warmup")->capture_default_str();
    simulate->add_option("--warmup", sim_warmup, "Warmup arrivals (default: 10% of --arrivals)");
    simulate->add_option("--seed", sim_seed, "Random seed (default: $QUAYSIDE_SEED or 1)");
    simulate->add_option("--grid", sim_grid, "ECDF points, comma separated")->delimiter(',');
    add_format_option(simulate, format);
    simulate->callback([&] {
        action = [&]() -> int {
            const auto parsed = parse_scenario(read_file(sim_scenario));
            SimConfig cfg;
            cfg.seed = sim_seed ? *sim_seed : default_seed();
            cfg.total_arrivals = sim_arrivals;
            cfg.warmup_arrivals = sim_warmup;
            cfg.ecdf_grid = sim_grid;
            std::sort(cfg.ecdf_grid.begin(), cfg.ecdf_grid.end());

            std::optional<TrafficReport> report;
            SimResult res;
            if (const auto* sc = std::get_if<PriorityScenario>(&parsed)) {
                report = traffic_coefficients(*sc);
                res = simulate_priority(*sc, cfg);
            } else {
                const auto& q = std::get<QueueConfig>(parsed);
                res = simulate_mg1(q.service, q.arrival_rate, q.order, cfg);
            }

            RenderedTable t{"", "", {"metric", "value", "half_width"}, {}};
            t.rows.push_back({"seed", std::to_string(cfg.seed), ""});
            t.rows.push_back({"mean_wait", format_value(res.mean_wait), format_value(res.mean_wait_half_width)});
            for (const auto& p : res.ecdf) t.rows.push_back({"ecdf(" + format_value(p.x) + ")", format_value(p.value), ""});
            for (std::size_t k = 0; k < res.utilization_prefix.size(); ++k) {
                const auto idx = std::to_string(k + 1);
                t.rows.push_back({"utilization_prefix_" + idx, format_value(res.utilization_prefix[k]), ""});
                if (report) t.rows.push_back({"rho_" + idx, format_value(report->classes[k].rho), ""});
            }
            t.rows.push_back({"busy_fraction", format_value(res.busy_fraction), ""});
            for (std::size_t k = 0; k < res.arrivals.size(); ++k) {
                const auto idx = std::to_string(k + 1);
                t.rows.push_back({"mean_wait_" + idx, format_value(res.class_mean_wait[k]), ""});
                t.rows.push_back({"arrivals_" + idx, std::to_string(res.arrivals[k]), ""});
                t.rows.push_back({"completed_" + idx, std::to_string(res.completed[k]), ""});
                t.rows.push_back({"lost_" + idx, std::to_string(res.lost[k]), ""});
            }
            Output{out, to_format(format)}.table(t);
            return kOk;
        };
    });

    // estimate -------------------------------------------------------------
    std::string est_kind;
    std::string est_file;
    auto* estimate = app.add_subcommand(
        "estimate",
        "Method-of-moments estimates from an observation file (one value per line).\n"
        "  arrival: sample mean, the Poisson parameter a; read it as arrivals per period\n"
        "           for count data, or as the mean interarrival time for gap data.\n"
        "  service: b = 1 / sample mean of service durations (exponential rate).");
    estimate->add_option("--kind", est_kind, "arrival or service")
        ->required()
        ->check(CLI::IsMember({"arrival", "service"}));
    estimate->add_option("--file", est_file, "Observation file")->required();
    add_format_option(estimate, format);
    estimate->callback([&] {
        action = [&]() -> int {
            std::ifstream in(est_file);
            if (!in) throw ParseError("cannot open '" + est_file + "'");
            const auto kind = est_kind == "arrival" ? ObservationKind::Arrival : ObservationKind::Service;
            const auto sample = read_observations(in, kind);
            RenderedTable t{"", "", {"quantity", "value"}, {}};
            t.rows.push_back({"n", std::to_string(sample.size())});
            t.rows.push_back({"nu_1", format_value(empirical_moment(sample, 1))});
            t.rows.push_back({"nu_2", format_value(empirical_moment(sample, 2))});
            if (kind == ObservationKind::Arrival) {
                t.rows.push_back({"arrival_rate", format_value(estimate_arrival_rate(sample))});
            } else {
                t.rows.push_back({"service_rate", format_value(estimate_service_rate(sample))});
            }
            Output{out, to_format(format)}.table(t);
            return kOk;
        };
    });

    // invert ---------------------------------------------------------------
    std::string inv_transform;
    std::vector<double> inv_x;
    int inv_order = InversionSpec{}.order;
    auto* invert_cmd = app.add_subcommand(
        "invert",
        "Gaver-Stehfest inversion of a catalog transform: one_over_s, one_over_s_plus_1, or a\n"
        "service literal such as exp(5), whose transform beta(s)/s inverts to the CDF.");
    invert_cmd->add_option("--transform", inv_transform, "Transform name or service literal")->required();
    invert_cmd->add_option("--x", inv_x, "Inversion point(s)")->required()->delimiter(',');
    invert_cmd->add_option("--order", inv_order, "Gaver-Stehfest order (even, 4..20)")->capture_default_str();
    add_format_option(invert_cmd, format);
    invert_cmd->callback([&] {
        action = [&]() -> int {
            std::function<long double(long double)> fn;
            if (inv_transform == "one_over_s") {
                fn = [](long double s) { return 1.0L / s; };
            } else if (inv_transform == "one_over_s_plus_1") {
                fn = [](long double s) { return 1.0L / (s + 1.0L); };
            } else {
                const auto d = parse_distribution(inv_transform);
                fn = [d](long double s) { return lst(d, s) / s; };
            }
            const InversionSpec spec{InversionMethod::GaverStehfest, inv_order};
            RenderedTable t{"", "", {"transform", "x", "value", "order_spread"}, {}};
            for (double x : inv_x) {
                const auto diag = invert_with_diagnostics(fn, x, spec);
                t.rows.push_back({inv_transform, format_value(x), format_value(static_cast<double>(diag.value)),
                                  format_value(static_cast<double>(diag.spread))});
            }
            Output{out, to_format(format)}.table(t);
            return kOk;
        };
    });

    // reproduce ------------------------------------------------------------
    std::vector<std::string> selectors;
    std::vector<std::string> table_flags;
    auto* repro = app.add_subcommand("reproduce", "Recompute the published tables and report errata");
    repro->add_option("ids", selectors, "Table ids, 'traffic', 'transform' or 'all'")->delimiter(',');
    repro->add_option("--tables", table_flags, "Same as the positional argument")->delimiter(',');
    add_format_option(repro, format);
    repro->callback([&] {
        action = [&]() -> int {
            selectors.insert(selectors.end(), table_flags.begin(), table_flags.end());
            const auto result = reproduce(selectors.empty() ? std::vector<std::string>{"all"} : selectors);
            const Output o{out, to_format(format)};
            for (std::size_t i = 0; i < result.tables.size(); ++i) {
                if (i) out << '\n';
                if (o.format == Format::Csv) {
                    write_csv(out, result.tables[i]);
                } else {
                    write_text(out, result.tables[i]);
                }
            }
            out << '\n';
            if (o.format == Format::Csv) {
                write_csv_row(out, {"errata"});
                for (const auto& line : result.errata) write_csv_row(out, {line});
            } else {
                out << "Errata summary (" << result.errata.size() << " flagged cells)\n";
                for (const auto& line : result.errata) out << "  " << line << '\n';
            }
            return kOk;
        };
    });

    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        return action ? action() : kUsage;
    } catch (const StationarityError& e) {
        err << "error: " << e.what() << '\n';
        return kStationarity;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kNumeric;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace quayside::cli
