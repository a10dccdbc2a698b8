#pragma once

// Experiment definitions and the sweep driver. Experiments are parameter
// grids over RunConfig; the driver runs warmup + measured repetitions per
// cell, one timed simulation at a time, and emits one record per kept rep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsb/sim.hpp"
#include "parfor/executor.hpp"

namespace fsb {

enum class ExperimentId { Exp1, Exp2, Exp3, Custom };

inline const char* to_string(ExperimentId id) {
    switch (id) {
        case ExperimentId::Exp1: return "exp1";
        case ExperimentId::Exp2: return "exp2";
        case ExperimentId::Exp3: return "exp3";
        case ExperimentId::Custom: return "custom";
    }
    return "?";
}

struct ExperimentSpec {
    ExperimentId id = ExperimentId::Custom;
    SimConfig sim;
    std::vector<parfor::RunConfig> grid;
    int reps = 5;
    int warmup = 1;

    void validate() const {
        sim.validate();
        if (grid.empty()) throw std::invalid_argument("ExperimentSpec: grid must be non-empty");
        if (reps < 1) throw std::invalid_argument("ExperimentSpec: reps must be >= 1");
        if (warmup < 0) throw std::invalid_argument("ExperimentSpec: warmup must be >= 0");
        for (const auto& run : grid) run.validate();
    }
};

struct BenchRecord {
    std::string experiment;
    int threads = 0;
    std::string schedule;
    std::size_t chunk = 0;
    std::string construct;
    int rep = 0;
    std::size_t fish = 0;
    std::size_t steps = 0;
    double seconds_total = 0.0;
    double seconds_eat = 0.0;
    std::uint64_t checksum = 0;

    bool failed() const { return std::isnan(seconds_total); }

    // NaN seconds mark failed cells and must compare equal for round-trips.
    friend bool operator==(const BenchRecord& a, const BenchRecord& b) {
        const auto same = [](double x, double y) {
            return (std::isnan(x) && std::isnan(y)) || x == y;
        };
        return a.experiment == b.experiment && a.threads == b.threads &&
               a.schedule == b.schedule && a.chunk == b.chunk && a.construct == b.construct &&
               a.rep == b.rep && a.fish == b.fish && a.steps == b.steps &&
               same(a.seconds_total, b.seconds_total) && same(a.seconds_eat, b.seconds_eat) &&
               a.checksum == b.checksum;
    }
};

// Experiment 1: thread scaling. 16 power-of-two thread counts (each capped)
// crossed with the four schedule/construct combinations under study.
inline ExperimentSpec build_exp1(const SimConfig& sim, int cap = 1024) {
    sim.validate();
    if (cap < 1) throw std::invalid_argument("build_exp1: cap must be >= 1");
    using parfor::Construct;
    using parfor::ScheduleKind;
    using parfor::ScheduleSpec;
    const std::pair<ScheduleSpec, Construct> combos[] = {
        {ScheduleSpec{ScheduleKind::Static, 50}, Construct::Reduction},
        {ScheduleSpec{ScheduleKind::Dynamic, 50}, Construct::Reduction},
        {ScheduleSpec{ScheduleKind::Guided, 50}, Construct::Reduction},
        {ScheduleSpec{ScheduleKind::Static, 50}, Construct::CriticalPartial},
    };
    ExperimentSpec spec;
    spec.id = ExperimentId::Exp1;
    spec.sim = sim;
    for (const auto& [schedule, construct] : combos) {
        for (int k = 0; k < 16; ++k) {
            const int threads = std::min(1 << k, cap);
            spec.grid.push_back(parfor::RunConfig{threads, schedule, construct, cap});
        }
    }
    return spec;
}

// Experiment 2: schedule/chunk sweep at threads {2, 4, 8} under Reduction.
// Chunk sizes are the powers of two in [1, 4096]; the runtime schedule has
// no chunk of its own and is recorded with chunk 0.
inline ExperimentSpec build_exp2(const SimConfig& sim) {
    sim.validate();
    using parfor::Construct;
    using parfor::ScheduleKind;
    using parfor::ScheduleSpec;
    ExperimentSpec spec;
    spec.id = ExperimentId::Exp2;
    spec.sim = sim;
    const int thread_counts[] = {2, 4, 8};
    for (ScheduleKind kind : {ScheduleKind::Static, ScheduleKind::Dynamic, ScheduleKind::Guided}) {
        for (int k = 0; k <= 12; ++k) {
            for (int threads : thread_counts) {
                spec.grid.push_back(parfor::RunConfig{
                    threads, ScheduleSpec{kind, std::size_t{1} << k}, Construct::Reduction});
            }
        }
    }
    for (int threads : thread_counts) {
        spec.grid.push_back(parfor::RunConfig{
            threads, ScheduleSpec{ScheduleKind::Runtime, 0}, Construct::Reduction});
    }
    return spec;
}

// Experiment 3: aggregation constructs at static:50 across thread counts,
// recording both the eat-region time and the whole-program time.
inline ExperimentSpec build_exp3(const SimConfig& sim) {
    sim.validate();
    using parfor::Construct;
    using parfor::ScheduleKind;
    using parfor::ScheduleSpec;
    ExperimentSpec spec;
    spec.id = ExperimentId::Exp3;
    spec.sim = sim;
    for (Construct construct :
         {Construct::Reduction, Construct::CriticalPartial, Construct::CriticalFull}) {
        for (int threads : {1, 2, 4, 8, 16, 32, 64}) {
            spec.grid.push_back(
                parfor::RunConfig{threads, ScheduleSpec{ScheduleKind::Static, 50}, construct});
        }
    }
    return spec;
}

inline BenchRecord record_for(const ExperimentSpec& spec, const parfor::RunConfig& run, int rep) {
    BenchRecord rec;
    rec.experiment = to_string(spec.id);
    rec.threads = run.num_threads;
    rec.schedule = parfor::to_string(run.schedule.kind);
    rec.chunk = run.schedule.kind == parfor::ScheduleKind::Runtime ? 0 : run.schedule.chunk;
    rec.construct = parfor::to_string(run.construct);
    rec.rep = rep;
    rec.fish = spec.sim.num_fish;
    rec.steps = spec.sim.num_steps;
    return rec;
}

// Runs every grid cell serially: warmup reps are discarded, each kept rep
// becomes one record. A failing cell yields a single marker record with NaN
// in both seconds fields and the sweep continues.
inline std::vector<BenchRecord> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<BenchRecord> records;
    records.reserve(spec.grid.size() * static_cast<std::size_t>(spec.reps));
    for (const parfor::RunConfig& run : spec.grid) {
        try {
            parfor::Executor exec(run);
            for (int rep = 0; rep < spec.warmup + spec.reps; ++rep) {
                const SimResult result = simulate(spec.sim, exec);
                if (rep < spec.warmup) continue;
                BenchRecord rec = record_for(spec, run, rep - spec.warmup);
                rec.seconds_total = result.seconds_total;
                rec.seconds_eat = result.seconds_eat;
                rec.checksum = fsb::checksum(result.school);
                records.push_back(std::move(rec));
            }
        } catch (const std::exception&) {
            BenchRecord rec = record_for(spec, run, 0);
            rec.seconds_total = std::numeric_limits<double>::quiet_NaN();
            rec.seconds_eat = std::numeric_limits<double>::quiet_NaN();
            rec.checksum = 0;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

inline bool has_failures(const std::vector<BenchRecord>& records) {
    for (const auto& r : records) {
        if (r.failed()) return true;
    }
    return false;
}

struct SummaryStats {
    std::size_t n = 0;
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

inline SummaryStats summarize(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize: need at least one sample");
    std::sort(samples.begin(), samples.end());
    SummaryStats s;
    s.n = samples.size();
    s.min = samples.front();
    const std::size_t mid = s.n / 2;
    s.median = (s.n % 2 == 1) ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double v : samples) ss += (v - s.mean) * (v - s.mean);
    s.stddev = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
    return s;
}

}  // namespace fsb
