#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "quayside/distributions.hpp"
#include "quayside/errors.hpp"
#include "quayside/rng.hpp"
#include "quayside/traffic.hpp"
#include "quayside/waiting_time.hpp"

namespace quayside {

struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t total_arrivals = 1'000'000;       // measured arrivals, after warmup
    std::optional<std::size_t> warmup_arrivals;  // defaults to 10% of total_arrivals
    std::vector<double> ecdf_grid;

    [[nodiscard]] std::size_t warmup() const {
        return warmup_arrivals.value_or(total_arrivals / 10);
    }
};

struct EcdfPoint {
    double x;
    double value;
};

struct SimResult {
    double mean_wait{};
    double mean_wait_half_width{};  // 95% batch-means interval
    std::vector<EcdfPoint> ecdf;
    std::vector<double> utilization_prefix;  // server share of classes 1..k
    double busy_fraction{};                  // 1 - idle time / horizon
    double horizon{};
    std::vector<double> class_mean_wait;
    std::vector<std::size_t> arrivals;   // measured arrivals per class
    std::vector<std::size_t> completed;  // measured jobs that finished service
    std::vector<std::size_t> lost;       // measured jobs discarded by preemption
    std::vector<std::size_t> preemptions;
    double max_service_overrun{};  // largest negative remaining work seen (Resume)
};

inline constexpr std::size_t kBatchCount = 20;
inline constexpr double kStudentT975Dof19 = 2.093024054408263;

namespace detail {

// Single-server event loop. Classes are served in priority order (index 0
// first) with immediate preemption; `within_class` orders jobs inside a class.
// Random streams: class k draws interarrivals from split(2k) and service
// times from split(2k + 1).
class ServerSim {
public:
    ServerSim(const std::vector<PriorityClass>& classes, Preemption discipline,
              ServiceOrder within_class, const SimConfig& cfg)
        : classes_(classes), discipline_(discipline), order_(within_class), cfg_(cfg),
          warmup_(cfg.warmup()), queues_(classes.size()),
          waits_(cfg.total_arrivals, std::numeric_limits<double>::quiet_NaN()),
          busy_(classes.size(), 0.0) {
        const Rng master(cfg.seed);
        for (std::size_t k = 0; k < classes.size(); ++k) {
            arrival_rng_.push_back(master.split(2 * k));
            service_rng_.push_back(master.split(2 * k + 1));
        }
        result_.arrivals.assign(classes.size(), 0);
        result_.completed.assign(classes.size(), 0);
        result_.lost.assign(classes.size(), 0);
        result_.preemptions.assign(classes.size(), 0);
        class_wait_sum_.assign(classes.size(), 0.0L);
    }

    SimResult run() {
        if (cfg_.total_arrivals < kBatchCount) {
            throw DomainError("simulation needs at least " + std::to_string(kBatchCount) +
                              " measured arrivals");
        }
        if (!std::is_sorted(cfg_.ecdf_grid.begin(), cfg_.ecdf_grid.end())) {
            throw DomainError("ECDF grid must be sorted");
        }
        for (std::size_t k = 0; k < classes_.size(); ++k) {
            next_arrival_.push_back(exponential_draw(arrival_rng_[k], classes_[k].lambda));
        }

        for (;;) {
            if (window_end_ < kInf && pending_ == 0) break;

            const auto next = std::min_element(next_arrival_.begin(), next_arrival_.end());
            const double t_arrival = *next;
            const auto cls = static_cast<std::size_t>(next - next_arrival_.begin());

            // Ties go to the completion.
            if (in_service_ && segment_start_ + current_.remaining <= t_arrival) {
                complete(segment_start_ + current_.remaining);
            } else {
                arrive(cls, t_arrival);
            }
        }
        flush(now_);
        return finish();
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    struct Job {
        double arrival;
        double remaining;
        std::size_t id;
        std::size_t cls;
        bool started;
    };

    [[nodiscard]] bool measured(std::size_t id) const {
        return id >= warmup_ && id < warmup_ + cfg_.total_arrivals;
    }

    [[nodiscard]] double overlap(double from, double to) const {
        const double lo = std::max(from, window_start_);
        const double hi = std::min(to, window_end_);
        return hi > lo ? hi - lo : 0.0;
    }

    void arrive(std::size_t cls, double t) {
        now_ = t;
        const std::size_t id = next_id_++;
        if (id == warmup_) window_start_ = t;
        if (id == warmup_ + cfg_.total_arrivals) window_end_ = t;

        Job job{t, sample(classes_[cls].service, service_rng_[cls]), id, cls, false};
        next_arrival_[cls] = t + exponential_draw(arrival_rng_[cls], classes_[cls].lambda);
        if (measured(id)) {
            ++pending_;
            ++result_.arrivals[cls];
        }

        if (!in_service_) {
            queues_[cls].push_back(job);
            start_next(t);
            return;
        }
        if (cls < current_.cls) {
            preempt(t);
            queues_[cls].push_back(job);
            start_next(t);
            return;
        }
        queues_[cls].push_back(job);
    }

    void preempt(double t) {
        const double elapsed = t - segment_start_;
        busy_[current_.cls] += overlap(segment_start_, t);
        in_service_ = false;
        Job job = current_;
        if (measured(job.id)) ++result_.preemptions[job.cls];
        switch (discipline_) {
            case Preemption::Resume:
                job.remaining -= elapsed;
                result_.max_service_overrun = std::max(result_.max_service_overrun, -job.remaining);
                requeue_interrupted(job);
                break;
            case Preemption::Loss:
                if (measured(job.id)) ++result_.lost[job.cls];
                break;
            case Preemption::Repeat:
                job.remaining = sample(classes_[job.cls].service, service_rng_[job.cls]);
                requeue_interrupted(job);
                break;
        }
    }

    // Interrupted jobs go back to the head of their class.
    void requeue_interrupted(const Job& job) {
        auto& q = queues_[job.cls];
        if (order_ == ServiceOrder::FIFO) {
            q.push_front(job);
        } else {
            q.push_back(job);
        }
    }

    void complete(double t) {
        now_ = t;
        busy_[current_.cls] += overlap(segment_start_, t);
        if (measured(current_.id)) ++result_.completed[current_.cls];
        in_service_ = false;
        start_next(t);
    }

    void start_next(double t) {
        for (auto& q : queues_) {
            if (q.empty()) continue;
            Job job;
            if (order_ == ServiceOrder::FIFO) {
                job = q.front();
                q.pop_front();
            } else {
                job = q.back();
                q.pop_back();
            }
            if (!job.started) {
                job.started = true;
                if (measured(job.id)) {
                    const double wait = t - job.arrival;
                    waits_[job.id - warmup_] = wait;
                    class_wait_sum_[job.cls] += wait;
                    --pending_;
                }
            }
            if (idle_open_) {
                idle_ += overlap(idle_since_, t);
                idle_open_ = false;
            }
            current_ = job;
            segment_start_ = t;
            in_service_ = true;
            return;
        }
        idle_open_ = true;
        idle_since_ = t;
    }

    void flush(double t) {
        if (in_service_) {
            busy_[current_.cls] += overlap(segment_start_, t);
        } else if (idle_open_) {
            idle_ += overlap(idle_since_, t);
        }
    }

    SimResult finish() {
        const std::size_t n = waits_.size();
        long double total = 0.0L;
        for (double w : waits_) total += w;
        result_.mean_wait = static_cast<double>(total / static_cast<long double>(n));

        const std::size_t batch = n / kBatchCount;
        std::vector<double> means(kBatchCount);
        for (std::size_t b = 0; b < kBatchCount; ++b) {
            const std::size_t lo = b * batch;
            const std::size_t hi = (b + 1 == kBatchCount) ? n : lo + batch;
            long double s = 0.0L;
            for (std::size_t i = lo; i < hi; ++i) s += waits_[i];
            means[b] = static_cast<double>(s / static_cast<long double>(hi - lo));
        }
        double grand = 0.0;
        for (double m : means) grand += m;
        grand /= static_cast<double>(kBatchCount);
        double var = 0.0;
        for (double m : means) var += (m - grand) * (m - grand);
        var /= static_cast<double>(kBatchCount - 1);
        result_.mean_wait_half_width = kStudentT975Dof19 * std::sqrt(var / kBatchCount);

        std::vector<double> sorted = waits_;
        std::sort(sorted.begin(), sorted.end());
        for (double x : cfg_.ecdf_grid) {
            const auto count = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
            result_.ecdf.push_back({x, static_cast<double>(count) / static_cast<double>(n)});
        }

        result_.horizon = window_end_ - window_start_;
        double cumulative = 0.0;
        for (std::size_t k = 0; k < classes_.size(); ++k) {
            cumulative += busy_[k];
            result_.utilization_prefix.push_back(cumulative / result_.horizon);
            result_.class_mean_wait.push_back(
                result_.arrivals[k] == 0
                    ? 0.0
                    : static_cast<double>(class_wait_sum_[k] /
                                          static_cast<long double>(result_.arrivals[k])));
        }
        result_.busy_fraction = 1.0 - idle_ / result_.horizon;
        return result_;
    }

    const std::vector<PriorityClass>& classes_;
    Preemption discipline_;
    ServiceOrder order_;
    const SimConfig& cfg_;
    std::size_t warmup_;

    std::vector<Rng> arrival_rng_;
    std::vector<Rng> service_rng_;
    std::vector<double> next_arrival_;
    std::vector<std::deque<Job>> queues_;

    Job current_{};
    bool in_service_ = false;
    double segment_start_ = 0.0;
    double idle_since_ = 0.0;
    bool idle_open_ = true;  // the server has been idle since idle_since_
    double now_ = 0.0;

    std::size_t next_id_ = 0;
    std::size_t pending_ = 0;
    double window_start_ = kInf;
    double window_end_ = kInf;

    std::vector<double> waits_;  // measured jobs, in arrival order
    std::vector<long double> class_wait_sum_;
    std::vector<double> busy_;
    double idle_ = 0.0;
    SimResult result_;
};

}  // namespace detail

// Oracle for the M|G|1 transforms: Poisson(a) arrivals, one server, FIFO
// queue or non-preemptive LIFO stack. Waiting time runs from arrival to the
// start of service.
inline SimResult simulate_mg1(const ServiceDistribution& d, double arrival_rate, ServiceOrder order,
                              const SimConfig& cfg) {
    if (!(arrival_rate > 0.0)) throw DomainError("arrival rate must be positive");
    if (!is_stationary(d, arrival_rate)) {
        throw StationarityError("simulation refused: rho = " +
                                std::to_string(offered_load(d, arrival_rate)) + " >= 1");
    }
    const std::vector<PriorityClass> classes{{arrival_rate, d}};
    return detail::ServerSim(classes, Preemption::Resume, order, cfg).run();
}

// Oracle for the priority traffic coefficients. Higher classes preempt lower
// ones immediately; within a class jobs are served FIFO and an interrupted
// job returns to the head of its class.
inline SimResult simulate_priority(const PriorityScenario& sc, const SimConfig& cfg) {
    const auto report = traffic_coefficients(sc);
    if (!report.stationary) {
        throw StationarityError("simulation refused: class " +
                                std::to_string(*report.first_overloaded_class) +
                                " is overloaded (rho = " +
                                std::to_string(report.classes[*report.first_overloaded_class - 1].rho) +
                                ")");
    }
    return detail::ServerSim(sc.classes(), sc.discipline(), ServiceOrder::FIFO, cfg).run();
}

}  // namespace quayside
