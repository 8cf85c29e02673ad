#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bcsat/bipartite_graph.hpp"
#include "bcsat/cover.hpp"
#include "bcsat/encoder.hpp"
#include "bcsat/io.hpp"
#include "bcsat/matching.hpp"
#include "bcsat/rng.hpp"
#include "bcsat/solve.hpp"

namespace bcsat {

// Uniform ratio grid: from, from+step, ..., up to the last value <= to
// (within rounding slack).
struct RatioGrid {
    double from = 1.0;
    double to = 1.0;
    double step = 0.05;

    int count() const {
        return static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    }
    double at(int i) const { return from + step * i; }
};

struct SweepConfig {
    int n = 100;
    int k_from = 3;
    int k_to = 3;
    RatioGrid ratios;
    int trials = 100;
    std::optional<int> t = 2;             // biclique size bound (cover/compare)
    Strategy strategy = Strategy::Rand;   // seed choice (cover/compare)
    std::uint64_t seed = 1;
    SolverConfig solver;                  // compare only
    int workers = 1;
};

struct SweepRow {
    int n = 0;
    int m = 0;
    int k = 0;
    double ratio = 0;
    int trials = 0;
    int successes = 0;
    double rate = 0;
    double mean_seconds = 0; // informative only; never serialized
};

struct SweepResult {
    std::vector<SweepRow> rows; // k-major, ratio-minor, both ascending
    int k_count = 0;
    int ratio_count = 0;
};

struct CompareRow {
    int n = 0;
    int m = 0;
    int k = 0;
    double ratio = 0;
    int trials = 0;
    int heuristic_successes = 0;
    int sat_true = 0;     // solver said satisfiable
    int sat_finished = 0; // Sat or Unsat within the time limit
    int sat_timeouts = 0;
    int solver_errors = 0;
    // invariant breaches; stay 0 unless something is wrong
    int contradictions = 0;   // heuristic found a cover, solver proved none exists
    int decode_failures = 0;  // SAT model decoded to an invalid cover
    double avg_time_ratio = 0; // heuristic seconds / solver seconds, finished instances
    double max_time_ratio = 0;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    int k_count = 0;
    int ratio_count = 0;
};

namespace detail {

inline void check_config(const SweepConfig& cfg) {
    if (cfg.n < 1) throw std::invalid_argument("sweep: n must be >= 1");
    if (cfg.k_from < 1 || cfg.k_to < cfg.k_from)
        throw std::invalid_argument("sweep: bad k range");
    if (cfg.k_to > cfg.n) throw std::invalid_argument("sweep: k exceeds n");
    if (cfg.ratios.step <= 0) throw std::invalid_argument("sweep: ratio step must be positive");
    if (cfg.ratios.from < 0 || cfg.ratios.to < cfg.ratios.from)
        throw std::invalid_argument("sweep: bad ratio range");
    if (cfg.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("sweep: workers must be >= 1");
}

inline void run_tasks(long long total, int workers, const std::function<void(long long)>& fn) {
    if (workers <= 1) {
        for (long long i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                long long i = next.fetch_add(1);
                if (i >= total) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

struct CellPlan {
    std::vector<int> ks;
    RatioGrid grid;
    int ratio_count = 0;

    explicit CellPlan(const SweepConfig& cfg) : grid(cfg.ratios) {
        for (int k = cfg.k_from; k <= cfg.k_to; ++k) ks.push_back(k);
        ratio_count = grid.count();
    }
    int cells() const { return static_cast<int>(ks.size()) * ratio_count; }
    int k_of(int cell) const { return ks[static_cast<std::size_t>(cell / ratio_count)]; }
    double ratio_of(int cell) const { return grid.at(cell % ratio_count); }
};

inline double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

// All harness ops share the trial derivation scheme: the substream for trial
// j of cell i is master.derive(i*trials + j), the trial graph always comes
// from substream child 0 and the heuristic from child 1. Identical configs
// therefore see identical instances across sweep_cover and compare_sat, and
// results are independent of worker count and scheduling.

// Fraction of matched formulas per (k, ratio) cell, m = round(ratio*n).
inline SweepResult sweep_matched(const SweepConfig& cfg) {
    detail::check_config(cfg);
    detail::CellPlan plan(cfg);
    const Rng master(cfg.seed);
    std::vector<std::atomic<int>> successes(static_cast<std::size_t>(plan.cells()));
    std::vector<std::atomic<long long>> nanos(static_cast<std::size_t>(plan.cells()));
    detail::run_tasks(static_cast<long long>(plan.cells()) * cfg.trials, cfg.workers,
                      [&](long long task) {
                          int cell = static_cast<int>(task / cfg.trials);
                          Rng trial_rng = master.derive(static_cast<std::uint64_t>(task));
                          Rng graph_rng = trial_rng.derive(0);
                          int m = static_cast<int>(std::llround(plan.ratio_of(cell) * cfg.n));
                          auto t0 = std::chrono::steady_clock::now();
                          BipartiteGraph g = random_graph(cfg.n, m, plan.k_of(cell), graph_rng);
                          bool ok = is_matched(g);
                          auto dt = std::chrono::steady_clock::now() - t0;
                          if (ok) successes[static_cast<std::size_t>(cell)].fetch_add(1);
                          nanos[static_cast<std::size_t>(cell)].fetch_add(
                              std::chrono::duration_cast<std::chrono::nanoseconds>(dt).count());
                      });
    SweepResult out;
    out.k_count = static_cast<int>(plan.ks.size());
    out.ratio_count = plan.ratio_count;
    for (int cell = 0; cell < plan.cells(); ++cell) {
        SweepRow row;
        row.n = cfg.n;
        row.k = plan.k_of(cell);
        row.ratio = plan.ratio_of(cell);
        row.m = static_cast<int>(std::llround(row.ratio * cfg.n));
        row.trials = cfg.trials;
        row.successes = successes[static_cast<std::size_t>(cell)].load();
        row.rate = static_cast<double>(row.successes) / cfg.trials;
        row.mean_seconds =
            static_cast<double>(nanos[static_cast<std::size_t>(cell)].load()) / 1e9 / cfg.trials;
        out.rows.push_back(row);
    }
    return out;
}

// Fraction of instances where the greedy cover search succeeds.
inline SweepResult sweep_cover(const SweepConfig& cfg) {
    detail::check_config(cfg);
    detail::CellPlan plan(cfg);
    const Rng master(cfg.seed);
    std::vector<std::atomic<int>> successes(static_cast<std::size_t>(plan.cells()));
    std::vector<std::atomic<long long>> nanos(static_cast<std::size_t>(plan.cells()));
    detail::run_tasks(static_cast<long long>(plan.cells()) * cfg.trials, cfg.workers,
                      [&](long long task) {
                          int cell = static_cast<int>(task / cfg.trials);
                          Rng trial_rng = master.derive(static_cast<std::uint64_t>(task));
                          Rng graph_rng = trial_rng.derive(0);
                          Rng heur_rng = trial_rng.derive(1);
                          int m = static_cast<int>(std::llround(plan.ratio_of(cell) * cfg.n));
                          BipartiteGraph g = random_graph(cfg.n, m, plan.k_of(cell), graph_rng);
                          auto t0 = std::chrono::steady_clock::now();
                          auto cover = find_cover(g, cfg.t, cfg.strategy, heur_rng);
                          auto dt = std::chrono::steady_clock::now() - t0;
                          if (cover) successes[static_cast<std::size_t>(cell)].fetch_add(1);
                          nanos[static_cast<std::size_t>(cell)].fetch_add(
                              std::chrono::duration_cast<std::chrono::nanoseconds>(dt).count());
                      });
    SweepResult out;
    out.k_count = static_cast<int>(plan.ks.size());
    out.ratio_count = plan.ratio_count;
    for (int cell = 0; cell < plan.cells(); ++cell) {
        SweepRow row;
        row.n = cfg.n;
        row.k = plan.k_of(cell);
        row.ratio = plan.ratio_of(cell);
        row.m = static_cast<int>(std::llround(row.ratio * cfg.n));
        row.trials = cfg.trials;
        row.successes = successes[static_cast<std::size_t>(cell)].load();
        row.rate = static_cast<double>(row.successes) / cfg.trials;
        row.mean_seconds =
            static_cast<double>(nanos[static_cast<std::size_t>(cell)].load()) / 1e9 / cfg.trials;
        out.rows.push_back(row);
    }
    return out;
}

// Heuristic vs complete SAT decision on identical instances. Needs a finite
// t: the encoding enumerates a catalog bounded by it. Solver timeouts and
// errors are counted per cell, never fatal.
inline CompareResult compare_sat(const SweepConfig& cfg) {
    detail::check_config(cfg);
    if (!cfg.t) throw std::invalid_argument("compare_sat: finite t required");
    detail::CellPlan plan(cfg);
    const Rng master(cfg.seed);
    struct Acc {
        std::mutex mu;
        int heur = 0, sat_true = 0, sat_finished = 0, timeouts = 0, errors = 0;
        int contradictions = 0, decode_failures = 0;
        double sum_ratio = 0, max_ratio = 0;
    };
    std::vector<Acc> acc(static_cast<std::size_t>(plan.cells()));
    detail::run_tasks(
        static_cast<long long>(plan.cells()) * cfg.trials, cfg.workers, [&](long long task) {
            int cell = static_cast<int>(task / cfg.trials);
            Rng trial_rng = master.derive(static_cast<std::uint64_t>(task));
            Rng graph_rng = trial_rng.derive(0);
            Rng heur_rng = trial_rng.derive(1);
            int m = static_cast<int>(std::llround(plan.ratio_of(cell) * cfg.n));
            BipartiteGraph g = random_graph(cfg.n, m, plan.k_of(cell), graph_rng);

            auto t0 = std::chrono::steady_clock::now();
            auto cover = find_cover(g, cfg.t, cfg.strategy, heur_rng);
            double heur_seconds = detail::elapsed_since(t0);

            t0 = std::chrono::steady_clock::now();
            BicliqueCatalog cat = enumerate_bicliques(g, *cfg.t, EnumerationMode::Canonical);
            CoverEncoding enc = encode_cover(g, cat);
            SolveOutcome sat = solve_cnf(enc.cnf, cfg.solver);
            double sat_seconds = detail::elapsed_since(t0);

            bool decode_failed = false;
            if (sat.status == SolveStatus::Sat) {
                BicliqueCover decoded = decode_model(cat, *sat.model);
                decode_failed = !validate_cover(g, decoded, cfg.t).ok();
            }
            Acc& a = acc[static_cast<std::size_t>(cell)];
            std::lock_guard<std::mutex> lock(a.mu);
            if (cover) ++a.heur;
            switch (sat.status) {
            case SolveStatus::Sat:
                ++a.sat_true;
                ++a.sat_finished;
                break;
            case SolveStatus::Unsat:
                ++a.sat_finished;
                if (cover) ++a.contradictions;
                break;
            case SolveStatus::Timeout: ++a.timeouts; break;
            case SolveStatus::SolverError: ++a.errors; break;
            }
            if (decode_failed) ++a.decode_failures;
            if (sat.status == SolveStatus::Sat || sat.status == SolveStatus::Unsat) {
                double r = heur_seconds / std::max(sat_seconds, 1e-9);
                a.sum_ratio += r;
                a.max_ratio = std::max(a.max_ratio, r);
            }
        });
    CompareResult out;
    out.k_count = static_cast<int>(plan.ks.size());
    out.ratio_count = plan.ratio_count;
    for (int cell = 0; cell < plan.cells(); ++cell) {
        Acc& a = acc[static_cast<std::size_t>(cell)];
        CompareRow row;
        row.n = cfg.n;
        row.k = plan.k_of(cell);
        row.ratio = plan.ratio_of(cell);
        row.m = static_cast<int>(std::llround(row.ratio * cfg.n));
        row.trials = cfg.trials;
        row.heuristic_successes = a.heur;
        row.sat_true = a.sat_true;
        row.sat_finished = a.sat_finished;
        row.sat_timeouts = a.timeouts;
        row.solver_errors = a.errors;
        row.contradictions = a.contradictions;
        row.decode_failures = a.decode_failures;
        row.avg_time_ratio = a.sat_finished > 0 ? a.sum_ratio / a.sat_finished : 0;
        row.max_time_ratio = a.max_ratio;
        out.rows.push_back(row);
    }
    return out;
}

enum class ThresholdAxis { Ratio, Degree };

// Phase-transition interval along one axis, the other value held fixed.
// Success falls with ratio and grows with k, so the >=99% side is the low
// end on the RATIO axis and the high end on the DEGREE axis. Endpoints are
// cumulative: low/high hold only if every grid point on their side passes,
// which keeps the interval conservative when rates wobble; a wobble that
// makes the cumulative endpoint differ from the pointwise one sets warning.
struct ThresholdInterval {
    std::optional<double> low;
    std::optional<double> high;
    bool warning = false;
};

struct ThresholdRow {
    double fixed = 0; // the complementary axis value (k or ratio)
    ThresholdInterval interval;
};

namespace detail {

struct ThresholdPoint {
    double x = 0;
    int successes = 0;
    int trials = 0;
};

// Integer comparisons: rate >= 0.99 <=> 100*succ >= 99*trials, etc.
inline bool rate_high(const ThresholdPoint& p) {
    return 100LL * p.successes >= 99LL * p.trials;
}
inline bool rate_low(const ThresholdPoint& p) { return 100LL * p.successes <= 1LL * p.trials; }

// points ascending in x; pass_near: predicate that must hold from the start
// of the axis, pass_far: from the end.
inline ThresholdInterval interval_of(const std::vector<ThresholdPoint>& pts,
                                     bool (*pass_near)(const ThresholdPoint&),
                                     bool (*pass_far)(const ThresholdPoint&)) {
    ThresholdInterval out;
    std::optional<double> pointwise_near, pointwise_far;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pass_near(pts[i])) pointwise_near = pts[i].x;
        if (pass_far(pts[i]) && !pointwise_far) pointwise_far = pts[i].x;
    }
    for (std::size_t i = 0; i < pts.size() && pass_near(pts[i]); ++i) out.low = pts[i].x;
    for (std::size_t i = pts.size(); i > 0 && pass_far(pts[i - 1]); --i) out.high = pts[i - 1].x;
    if (out.low != pointwise_near || out.high != pointwise_far) out.warning = true;
    return out;
}

} // namespace detail

inline std::vector<ThresholdRow> thresholds(const SweepResult& result, ThresholdAxis axis) {
    if (static_cast<int>(result.rows.size()) != result.k_count * result.ratio_count)
        throw std::invalid_argument("thresholds: incomplete sweep grid");
    std::vector<ThresholdRow> out;
    if (axis == ThresholdAxis::Ratio) {
        for (int ki = 0; ki < result.k_count; ++ki) {
            std::vector<detail::ThresholdPoint> pts;
            for (int ri = 0; ri < result.ratio_count; ++ri) {
                const SweepRow& row =
                    result.rows[static_cast<std::size_t>(ki * result.ratio_count + ri)];
                pts.push_back({row.ratio, row.successes, row.trials});
            }
            ThresholdRow tr;
            tr.fixed = result.rows[static_cast<std::size_t>(ki * result.ratio_count)].k;
            tr.interval = detail::interval_of(pts, detail::rate_high, detail::rate_low);
            out.push_back(tr);
        }
    } else {
        for (int ri = 0; ri < result.ratio_count; ++ri) {
            std::vector<detail::ThresholdPoint> pts;
            for (int ki = 0; ki < result.k_count; ++ki) {
                const SweepRow& row =
                    result.rows[static_cast<std::size_t>(ki * result.ratio_count + ri)];
                pts.push_back({static_cast<double>(row.k), row.successes, row.trials});
            }
            ThresholdRow tr;
            tr.fixed = result.rows[static_cast<std::size_t>(ri)].ratio;
            tr.interval = detail::interval_of(pts, detail::rate_low, detail::rate_high);
            out.push_back(tr);
        }
    }
    return out;
}

namespace detail {

inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

} // namespace detail

// Deterministic for a fixed seed: no timing data, fixed row order, %g floats.
inline std::string to_csv(const SweepResult& result) {
    std::string out = "n,m,k,ratio,trials,successes,rate\n";
    for (const SweepRow& r : result.rows) {
        out += std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + std::to_string(r.k) + ',' +
               detail::fmt_double(r.ratio) + ',' + std::to_string(r.trials) + ',' +
               std::to_string(r.successes) + ',' + detail::fmt_double(r.rate) + '\n';
    }
    return out;
}

inline std::string to_csv(const CompareResult& result) {
    std::string out =
        "n,m,k,ratio,trials,heuristic,sat_true,sat_finished,sat_timeouts,solver_errors,"
        "avg_time_ratio,max_time_ratio\n";
    for (const CompareRow& r : result.rows) {
        out += std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + std::to_string(r.k) + ',' +
               detail::fmt_double(r.ratio) + ',' + std::to_string(r.trials) + ',' +
               std::to_string(r.heuristic_successes) + ',' + std::to_string(r.sat_true) + ',' +
               std::to_string(r.sat_finished) + ',' + std::to_string(r.sat_timeouts) + ',' +
               std::to_string(r.solver_errors) + ',' + detail::fmt_double(r.avg_time_ratio) + ',' +
               detail::fmt_double(r.max_time_ratio) + '\n';
    }
    return out;
}

// Success-rate heat map, ASCII PGM: one row per k (ascending), one column
// per ratio (ascending), pixel = round(255 * rate).
inline std::string to_pgm(const SweepResult& result) {
    if (static_cast<int>(result.rows.size()) != result.k_count * result.ratio_count)
        throw std::invalid_argument("to_pgm: incomplete sweep grid");
    std::string out = "P2\n" + std::to_string(result.ratio_count) + ' ' +
                      std::to_string(result.k_count) + "\n255\n";
    for (int ki = 0; ki < result.k_count; ++ki) {
        for (int ri = 0; ri < result.ratio_count; ++ri) {
            const SweepRow& row =
                result.rows[static_cast<std::size_t>(ki * result.ratio_count + ri)];
            if (ri > 0) out += ' ';
            out += std::to_string(std::lround(255.0 * row.rate));
        }
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    auto out = detail::open_output(path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace bcsat
