#pragma once

// Command-line front end: single simulations, the three experiment sweeps,
// and CSV -> table/SVG reporting. Kept in a header (with streams injected)
// so the whole surface is exercisable from tests without spawning processes.
//
// Exit statuses: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fsb/bench.hpp"
#include "fsb/csv.hpp"
#include "fsb/report.hpp"
#include "fsb/sim.hpp"
#include "parfor/executor.hpp"

namespace fsb {
namespace cli {

// Parses the --schedule flag format "kind[:chunk]" (case-insensitive kind,
// positive integer chunk). "runtime" takes no chunk; it defers to the
// FSB_SCHEDULE environment variable at loop execution time.
inline parfor::ScheduleSpec parse_schedule_flag(std::string_view text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string kind_tok = lowered;
    std::optional<std::string> chunk_tok;
    if (const auto colon = lowered.find(':'); colon != std::string::npos) {
        kind_tok = lowered.substr(0, colon);
        chunk_tok = lowered.substr(colon + 1);
    }
    const auto kind = parfor::schedule_kind_from_string(kind_tok);
    if (!kind) {
        throw std::invalid_argument("unknown schedule kind '" + kind_tok +
                                    "' (expected static, dynamic, guided, or runtime)");
    }
    parfor::ScheduleSpec spec{*kind, 0};
    if (chunk_tok) {
        if (*kind == parfor::ScheduleKind::Runtime) {
            throw std::invalid_argument("schedule 'runtime' takes no chunk (set " +
                                        std::string(parfor::kScheduleEnvVar) + " instead)");
        }
        if (chunk_tok->empty() ||
            !std::all_of(chunk_tok->begin(), chunk_tok->end(),
                         [](unsigned char c) { return std::isdigit(c) != 0; })) {
            throw std::invalid_argument("malformed chunk '" + *chunk_tok +
                                        "' (expected a positive integer)");
        }
        const unsigned long long v = std::stoull(*chunk_tok);
        if (v == 0) throw std::invalid_argument("chunk must be positive");
        spec.chunk = static_cast<std::size_t>(v);
    }
    return spec;
}

namespace detail {

struct SimFlags {
    std::size_t fish = 10000;
    std::size_t steps = 1000;
    std::uint64_t seed = 1;

    SimConfig to_config() const {
        SimConfig cfg;
        cfg.num_fish = fish;
        cfg.num_steps = steps;
        cfg.seed = seed;
        return cfg;
    }
};

inline void add_sim_flags(CLI::App* cmd, SimFlags& f) {
    cmd->add_option("--fish", f.fish, "Fish population")->capture_default_str();
    cmd->add_option("--steps", f.steps, "Simulation steps")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master RNG seed")->capture_default_str();
}

inline int write_records(const std::vector<BenchRecord>& records, const std::string& out_path,
                         std::ostream& out, std::ostream& err) {
    if (out_path.empty()) {
        write_csv(out, records);
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        err << "error: cannot open '" << out_path << "' for writing\n";
        return 1;
    }
    write_csv(f, records);
    return 0;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fish School Behaviour simulation and loop-scheduling benchmark"};
    app.require_subcommand(1);

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "Run one simulation and print its record");
    detail::SimFlags sim_flags;
    detail::add_sim_flags(sim_cmd, sim_flags);
    int threads = 8;
    std::string schedule_text = "static:50";
    std::string construct_name = "reduction";
    int cap_threads = 1024;
    std::string out_path;
    sim_cmd->add_option("--threads", threads, "Worker thread count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--schedule", schedule_text, "Loop schedule kind[:chunk]")
        ->capture_default_str()
        ->check([](const std::string& v) -> std::string {
            try {
                parse_schedule_flag(v);
                return {};
            } catch (const std::exception& e) {
                return e.what();
            }
        });
    sim_cmd->add_option("--construct", construct_name, "Aggregation construct")
        ->capture_default_str()
        ->check(CLI::IsMember({"sequential", "reduction", "critical-partial", "critical-full"}));
    sim_cmd->add_option("--cap-threads", cap_threads, "Upper bound on spawned workers")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");

    // --- exp1 / exp2 / exp3 ---
    int reps = 5;
    int warmup = 1;
    auto add_bench_flags = [&](CLI::App* cmd) {
        cmd->add_option("--reps", reps, "Measured repetitions per cell")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--warmup", warmup, "Discarded leading repetitions")
            ->capture_default_str()
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
    };
    auto* exp1_cmd = app.add_subcommand("exp1", "Thread-count sweep (4 schedule/construct combos)");
    detail::add_sim_flags(exp1_cmd, sim_flags);
    add_bench_flags(exp1_cmd);
    exp1_cmd->add_option("--cap-threads", cap_threads, "Upper bound on spawned workers")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    auto* exp2_cmd = app.add_subcommand("exp2", "Schedule/chunk sweep at 2, 4, 8 threads");
    detail::add_sim_flags(exp2_cmd, sim_flags);
    add_bench_flags(exp2_cmd);
    auto* exp3_cmd = app.add_subcommand("exp3", "Construct comparison at static:50");
    detail::add_sim_flags(exp3_cmd, sim_flags);
    add_bench_flags(exp3_cmd);

    // --- report ---
    auto* report_cmd = app.add_subcommand("report", "Render a results CSV into tables and charts");
    std::string in_path;
    std::string report_dir = "report";
    report_cmd->add_option("--in", in_path, "Input results CSV")->required();
    report_cmd->add_option("--out", report_dir, "Output directory")->capture_default_str();

    std::reverse(args.begin(), args.end());  // CLI11 consumes back-to-front
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sim_cmd->parsed()) {
            const SimConfig cfg = sim_flags.to_config();
            cfg.validate();
            parfor::RunConfig run{threads, parse_schedule_flag(schedule_text),
                                  *parfor::construct_from_string(construct_name), cap_threads};
            run.validate();
            const SimResult result = simulate(cfg, run);

            BenchRecord rec;
            rec.experiment = "custom";
            rec.threads = run.num_threads;
            rec.schedule = parfor::to_string(run.schedule.kind);
            rec.chunk = run.schedule.kind == parfor::ScheduleKind::Runtime ? 0 : run.schedule.chunk;
            rec.construct = parfor::to_string(run.construct);
            rec.fish = cfg.num_fish;
            rec.steps = cfg.num_steps;
            rec.seconds_total = result.seconds_total;
            rec.seconds_eat = result.seconds_eat;
            rec.checksum = checksum(result.school);

            const int rc = detail::write_records({rec}, out_path, out, err);
            if (rc != 0) return rc;
            // Keep the human-readable line off stdout when the CSV goes there.
            std::ostream& info = out_path.empty() ? err : out;
            info << "total " << format_seconds(rec.seconds_total) << " s, eat "
                 << format_seconds(rec.seconds_eat) << " s, checksum "
                 << format_checksum(rec.checksum) << "\n";
            return 0;
        }

        if (exp1_cmd->parsed() || exp2_cmd->parsed() || exp3_cmd->parsed()) {
            const SimConfig cfg = sim_flags.to_config();
            ExperimentSpec spec;
            if (exp1_cmd->parsed()) {
                spec = build_exp1(cfg, cap_threads);
            } else if (exp2_cmd->parsed()) {
                spec = build_exp2(cfg);
            } else {
                spec = build_exp3(cfg);
            }
            spec.reps = reps;
            spec.warmup = warmup;
            const auto records = run_experiment(spec);
            const int rc = detail::write_records(records, out_path, out, err);
            if (rc != 0) return rc;
            if (has_failures(records)) {
                err << "error: " << std::count_if(records.begin(), records.end(),
                                                  [](const BenchRecord& r) { return r.failed(); })
                    << " grid cell(s) failed\n";
                return 1;
            }
            return 0;
        }

        // report
        std::ifstream in(in_path, std::ios::binary);
        if (!in) {
            err << "error: cannot open '" << in_path << "'\n";
            return 1;
        }
        std::vector<BenchRecord> records;
        try {
            records = read_csv(in);
        } catch (const CsvError& e) {
            err << "error: " << in_path << ": " << e.what() << "\n";
            return 1;
        }
        for (const std::string& issue : validate_records(records)) {
            err << "warning: " << in_path << ": " << issue << "\n";
        }
        out << report::write_report(records, report_dir);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cli
}  // namespace fsb
