#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbo/bench/runner.hpp"
#include "mbo/config.hpp"

namespace {

mbo::HpOptMode parse_hp_mode(const std::string& s) {
    if (s == "on") return mbo::HpOptMode::on;
    if (s == "off") return mbo::HpOptMode::off;
    if (s == "both") return mbo::HpOptMode::both;
    throw std::invalid_argument("--hp-opt must be one of: on, off, both");
}

void print_group_medians(const std::vector<mbo::BenchRecord>& records) {
    // (function, hp) -> gaps of successful records, in record order
    std::map<std::pair<std::string, bool>, std::vector<double>> groups;
    for (const auto& r : records)
        if (r.status == "ok") groups[{r.function, r.hp_opt}].push_back(r.gap);
    for (const auto& [key, gaps] : groups) {
        const mbo::SummaryStats s = mbo::summarize(gaps);
        std::printf("%-16s hp=%-3s  median gap %.6g  (q1 %.6g, q3 %.6g, n %ld)\n",
                    key.first.c_str(), key.second ? "on" : "off", s.median, s.q1, s.q3, s.n);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for the Bayesian-optimization library"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "Run replicated optimization experiments");

    std::vector<std::string> functions{"branin"};
    int replicates = 25;
    int budget = 200;
    int init = 10;
    std::string hp_mode = "both";
    std::uint64_t seed = 42;
    int parallelism = 1;
    std::string out_path = "results.csv";
    std::string summary_path;
    std::string config_path;
    bool full = false;

    run->add_option("--functions", functions,
                    "Comma-separated test functions (see 'functions' subcommand)")
        ->delimiter(',');
    auto* rep_opt = run->add_option("--replicates", replicates, "Replicates per configuration");
    auto* budget_opt = run->add_option("--budget", budget, "Objective evaluations per replicate");
    auto* init_opt = run->add_option("--init", init, "Initial random samples (within the budget)");
    run->add_option("--hp-opt", hp_mode, "Hyperparameter optimization: on, off or both")
        ->check(CLI::IsMember({"on", "off", "both"}));
    run->add_option("--seed", seed, "Master seed; replicate i runs on RNG stream i");
    run->add_option("--parallelism", parallelism, "Worker threads for replicates");
    run->add_option("--out", out_path, "CSV output path");
    run->add_option("--summary", summary_path, "Also write box-plot summary JSON here");
    run->add_option("--config", config_path, "Config file (section.key = value lines)");
    run->add_flag("--full", full, "Full protocol: 250 replicates (unless --replicates is given)");

    CLI::App* list = app.add_subcommand("functions", "List registered test functions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list->parsed()) {
        for (const auto& f : mbo::test_function_registry())
            std::printf("%-16s dim %d  best %.12g\n", f.name.c_str(), f.dim, f.known_best_value);
        return 0;
    }

    try {
        mbo::BenchOptions opt;
        if (!config_path.empty()) mbo::load_config_file(opt.base_config, config_path);

        // Layering: defaults, then config file, then explicit flags.
        opt.budget = budget_opt->count() ? budget : opt.base_config.params.max_evaluations;
        opt.init = init_opt->count() ? init : opt.base_config.params.init_samples;
        opt.functions = functions;
        opt.replicates = full && rep_opt->count() == 0 ? 250 : replicates;
        opt.hp_opt = parse_hp_mode(hp_mode);
        opt.master_seed = seed;
        opt.parallelism = parallelism;

        const std::vector<mbo::BenchRecord> records = mbo::run_benchmark(opt);
        mbo::write_csv_file(out_path, records);
        if (!summary_path.empty()) {
            std::ofstream js(summary_path);
            if (!js) throw std::invalid_argument("cannot open summary file: " + summary_path);
            js << mbo::summary_json(opt, records).dump(2) << '\n';
        }

        long failed = 0;
        for (const auto& r : records)
            if (r.status != "ok") ++failed;

        std::printf("wrote %zu records to %s", records.size(), out_path.c_str());
        if (!summary_path.empty()) std::printf(" (summary: %s)", summary_path.c_str());
        std::printf("\n");
        print_group_medians(records);

        if (failed > 0) {
            std::fprintf(stderr, "%ld record(s) failed; see the status column\n", failed);
            return 1;
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
