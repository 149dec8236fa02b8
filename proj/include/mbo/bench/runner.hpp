#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mbo/bench/functions.hpp"
#include "mbo/bench/stats.hpp"
#include "mbo/bo/loop.hpp"
#include "mbo/config.hpp"
#include "mbo/core/rng.hpp"

namespace mbo {

enum class HpOptMode { on, off, both };

/// Benchmark protocol configuration. The protocol fixes a unit-box-generic
/// kernel (Matern-5/2, l = 0.2, signal variance 100) rather than the library
/// default l = 1, which is far too smooth for sharp-basined test functions
/// when hyperparameter optimization is off; hp-on runs start from the same
/// config and re-learn from there.
inline BoConfig bench_default_config() {
    BoConfig cfg;
    cfg.kernel.kind = KernelKind::matern52;
    cfg.kernel.log_lengthscale = Eigen::VectorXd::Constant(1, std::log(0.2));
    cfg.kernel.log_signal_variance = std::log(100.0);
    return cfg;
}

struct BenchOptions {
    std::vector<std::string> functions;
    int replicates = 25;
    int budget = 200;  // total objective evaluations per replicate
    int init = 10;     // initial design size (counted inside budget)
    HpOptMode hp_opt = HpOptMode::both;
    std::uint64_t master_seed = 42;
    int parallelism = 1;
    BoConfig base_config = bench_default_config();  // per-record copies override params from the fields above
};

struct BenchRecord {
    std::string function;
    int replicate = 0;
    std::uint64_t seed = 0;  // master seed; replicate is the stream id
    bool hp_opt = false;
    double best_value = std::numeric_limits<double>::quiet_NaN();  // minimization convention
    double gap = std::numeric_limits<double>::quiet_NaN();
    double wall_time_ms = 0.0;
    long evaluations = 0;
    std::string status = "ok";
    std::vector<double> iter_times_ms;  // per-iteration wall time, summary-only
};

namespace bench_detail {

struct Task {
    const TestFunction* fn = nullptr;
    bool hp_opt = false;
    int replicate = 0;
};

inline std::string sanitize_status(std::string s) {
    for (char& c : s) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r') c = ' ';
        if (c == '"') c = '\'';
    }
    return s;
}

inline BenchRecord run_one(const Task& task, const BenchOptions& opt) {
    BenchRecord rec;
    rec.function = task.fn->name;
    rec.replicate = task.replicate;
    rec.seed = opt.master_seed;
    rec.hp_opt = task.hp_opt;

    BoConfig cfg = opt.base_config;
    cfg.params.init_samples = opt.init;
    cfg.params.max_evaluations = opt.budget;
    cfg.params.hp_opt_enabled = task.hp_opt;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const BoResult r = optimize(bench_objective(*task.fn), cfg,
                                    RngStream(opt.master_seed,
                                              static_cast<std::uint64_t>(task.replicate)));
        rec.best_value = -r.best_observed_y;  // back to minimization convention
        rec.gap = std::abs(task.fn->known_best_value - rec.best_value);
        rec.evaluations = r.total_evaluations;
        rec.iter_times_ms.reserve(r.history.size());
        for (const auto& h : r.history) rec.iter_times_ms.push_back(h.wall_time_ms);
    } catch (const std::exception& e) {
        rec.status = sanitize_status(e.what());
    }
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
    rec.wall_time_ms = dt.count();
    return rec;
}

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_ms(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

inline nlohmann::json stats_json(const SummaryStats& s) {
    nlohmann::json j;
    j["median"] = s.median;
    j["q1"] = s.q1;
    j["q3"] = s.q3;
    j["whisker_lo"] = s.whisker_lo;
    j["whisker_hi"] = s.whisker_hi;
    j["outliers"] = s.outliers;
    j["n"] = s.n;
    return j;
}

}  // namespace bench_detail

/// Run every (function, hp setting, replicate) combination. Records come back
/// sorted by (function name, hp_opt off<on, replicate) no matter how the work
/// was scheduled; replicate i always runs on RNG stream i of the master seed.
inline std::vector<BenchRecord> run_benchmark(const BenchOptions& opt) {
    if (opt.replicates < 1) throw std::invalid_argument("run_benchmark: replicates must be >= 1");
    if (opt.parallelism < 1) throw std::invalid_argument("run_benchmark: parallelism must be >= 1");
    if (opt.init < 1) throw std::invalid_argument("run_benchmark: init must be >= 1");
    if (opt.budget < opt.init) throw std::invalid_argument("run_benchmark: budget must be >= init");
    if (opt.functions.empty()) throw std::invalid_argument("run_benchmark: no functions given");

    std::vector<const TestFunction*> fns;
    for (const auto& name : opt.functions) {
        const TestFunction& f = find_test_function(name);  // throws on unknown name
        for (const TestFunction* seen : fns)
            if (seen == &f) throw std::invalid_argument("run_benchmark: duplicate function '" + name + "'");
        fns.push_back(&f);
    }
    std::sort(fns.begin(), fns.end(),
              [](const TestFunction* a, const TestFunction* b) { return a->name < b->name; });

    std::vector<bool> hp_settings;
    if (opt.hp_opt == HpOptMode::off || opt.hp_opt == HpOptMode::both) hp_settings.push_back(false);
    if (opt.hp_opt == HpOptMode::on || opt.hp_opt == HpOptMode::both) hp_settings.push_back(true);

    std::vector<bench_detail::Task> tasks;  // already in canonical record order
    tasks.reserve(fns.size() * hp_settings.size() * static_cast<std::size_t>(opt.replicates));
    for (const TestFunction* fn : fns)
        for (bool hp : hp_settings)
            for (int i = 0; i < opt.replicates; ++i)
                tasks.push_back(bench_detail::Task{fn, hp, i});

    std::vector<BenchRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            records[i] = bench_detail::run_one(tasks[i], opt);
        }
    };

    if (opt.parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const std::size_t n_threads =
            std::min<std::size_t>(static_cast<std::size_t>(opt.parallelism), tasks.size());
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

/// Fixed-layout CSV; every field except wall_time_ms is deterministic for a
/// given invocation.
inline void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "function,replicate,seed,hp_opt,best_value,gap,wall_time_ms,evaluations,status\n";
    for (const auto& r : records) {
        out << r.function << ',' << r.replicate << ',' << r.seed << ','
            << (r.hp_opt ? "on" : "off") << ',' << bench_detail::fmt_g17(r.best_value) << ','
            << bench_detail::fmt_g17(r.gap) << ',' << bench_detail::fmt_ms(r.wall_time_ms) << ','
            << r.evaluations << ',' << r.status << '\n';
    }
}

inline void write_csv_file(const std::string& path, const std::vector<BenchRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_csv(out, records);
}

/// Per (function, hp setting): box-plot stats of gap, replicate wall time,
/// and pooled per-iteration wall time over the successful records.
inline nlohmann::json summary_json(const BenchOptions& opt, const std::vector<BenchRecord>& records) {
    nlohmann::json root;
    root["master_seed"] = opt.master_seed;
    root["budget"] = opt.budget;
    root["init"] = opt.init;
    root["replicates"] = opt.replicates;

    nlohmann::json results = nlohmann::json::object();
    for (const auto& rec : records) {
        const char* hp_key = rec.hp_opt ? "on" : "off";
        nlohmann::json& group = results[rec.function][hp_key];
        if (group.is_null()) {
            group["n"] = 0;
            group["failed"] = 0;
        }
        if (rec.status != "ok") {
            group["failed"] = group["failed"].get<int>() + 1;
            continue;
        }
        group["n"] = group["n"].get<int>() + 1;
    }
    for (auto& [fn_name, by_hp] : results.items()) {
        for (auto& [hp_key, group] : by_hp.items()) {
            const bool hp = hp_key == std::string("on");
            std::vector<double> gaps, walls, iters;
            for (const auto& rec : records) {
                if (rec.function != fn_name || rec.hp_opt != hp || rec.status != "ok") continue;
                gaps.push_back(rec.gap);
                walls.push_back(rec.wall_time_ms);
                iters.insert(iters.end(), rec.iter_times_ms.begin(), rec.iter_times_ms.end());
            }
            if (!gaps.empty()) {
                group["gap"] = bench_detail::stats_json(summarize(gaps));
                group["wall_time_ms"] = bench_detail::stats_json(summarize(walls));
                group["iteration_time_ms"] = bench_detail::stats_json(summarize(iters));
            }
        }
    }
    root["results"] = results;
    return root;
}

}  // namespace mbo
