#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <map>
#include <random>
#include <set>

#include "fsb/bench.hpp"
#include "fsb/csv.hpp"

using namespace fsb;

namespace {

SimConfig tiny_sim() {
    SimConfig cfg;
    cfg.num_fish = 64;
    cfg.num_steps = 2;
    cfg.seed = 9;
    return cfg;
}

// Seconds exactly representable in the CSV's 9-significant-digit format.
double canonical_seconds(double v) {
    return std::strtod(format_seconds(v).c_str(), nullptr);
}

std::vector<BenchRecord> synthetic_records(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> time_dist(0.0, 100.0);
    const char* schedules[] = {"static", "dynamic", "guided", "runtime"};
    const char* constructs[] = {"sequential", "reduction", "critical-partial", "critical-full"};
    std::vector<BenchRecord> records;
    records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        BenchRecord r;
        r.experiment = i % 2 == 0 ? "exp1" : "exp2";
        r.threads = 1 << (rng() % 8);
        r.schedule = schedules[rng() % 4];
        r.chunk = r.schedule == "runtime" ? 0 : (std::size_t{1} << (rng() % 12));
        r.construct = constructs[rng() % 4];
        r.rep = static_cast<int>(rng() % 5);
        r.fish = 10000;
        r.steps = 1000;
        const double total = canonical_seconds(time_dist(rng));
        r.seconds_total = total;
        r.seconds_eat = canonical_seconds(total / 3.0);
        r.checksum = rng();
        if (rng() % 97 == 0) {  // occasional failure marker
            r.seconds_total = std::numeric_limits<double>::quiet_NaN();
            r.seconds_eat = std::numeric_limits<double>::quiet_NaN();
            r.checksum = 0;
        }
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace

TEST_CASE("exp1 grid is 16 thread counts by 4 combinations") {
    const ExperimentSpec spec = build_exp1(tiny_sim());
    REQUIRE(spec.grid.size() == 64);
    std::set<std::pair<std::string, std::string>> combos;
    for (const auto& run : spec.grid) {
        combos.insert({std::string(parfor::to_string(run.schedule.kind)) + ":" +
                           std::to_string(run.schedule.chunk),
                       std::string(parfor::to_string(run.construct))});
    }
    const std::set<std::pair<std::string, std::string>> expected = {
        {"static:50", "reduction"},
        {"dynamic:50", "reduction"},
        {"guided:50", "reduction"},
        {"static:50", "critical-partial"}};
    REQUIRE(combos == expected);
}

TEST_CASE("exp1 thread counts are powers of two capped at the limit") {
    const ExperimentSpec spec = build_exp1(tiny_sim(), 8);
    std::multiset<int> threads;
    for (const auto& run : spec.grid) {
        if (run.construct == parfor::Construct::CriticalPartial) continue;
        if (run.schedule.kind != parfor::ScheduleKind::Static) continue;
        threads.insert(run.num_threads);
    }
    // One combination contributes 16 entries: 1, 2, 4, then 8 thirteen times.
    REQUIRE(threads.size() == 16);
    REQUIRE(threads.count(1) == 1);
    REQUIRE(threads.count(2) == 1);
    REQUIRE(threads.count(4) == 1);
    REQUIRE(threads.count(8) == 13);
}

TEST_CASE("exp2 grid enumerates schedules, chunks, and thread counts") {
    const ExperimentSpec spec = build_exp2(tiny_sim());
    REQUIRE(spec.grid.size() == 120);
    std::set<int> threads;
    for (const auto& run : spec.grid) {
        threads.insert(run.num_threads);
        REQUIRE(run.construct == parfor::Construct::Reduction);
        if (run.schedule.kind == parfor::ScheduleKind::Runtime) {
            REQUIRE(run.schedule.chunk == 0);
        } else {
            REQUIRE(run.schedule.chunk >= 1);
            REQUIRE(run.schedule.chunk <= 4096);
        }
    }
    REQUIRE((threads == std::set<int>{2, 4, 8}));
}

TEST_CASE("exp3 grid crosses three constructs with seven thread counts") {
    const ExperimentSpec spec = build_exp3(tiny_sim());
    REQUIRE(spec.grid.size() == 21);
    for (const auto& run : spec.grid) {
        REQUIRE(run.construct != parfor::Construct::Sequential);
        REQUIRE((run.schedule == parfor::ScheduleSpec{parfor::ScheduleKind::Static, 50}));
    }
}

TEST_CASE("summarize computes order statistics") {
    const SummaryStats s = summarize({5, 1, 4, 2, 3});
    REQUIRE(s.n == 5);
    REQUIRE(s.min == 1.0);
    REQUIRE(s.median == 3.0);
    REQUIRE(s.mean == 3.0);

    REQUIRE(summarize({2, 4}).median == 3.0);

    const SummaryStats single = summarize({7});
    REQUIRE(single.median == 7.0);
    REQUIRE(single.stddev == 0.0);

    REQUIRE_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("run_experiment keeps reps, drops warmup, and shares a checksum") {
    ExperimentSpec spec;
    spec.id = ExperimentId::Custom;
    spec.sim = tiny_sim();
    spec.grid = {
        parfor::RunConfig{1, {parfor::ScheduleKind::Static, 50}, parfor::Construct::Reduction},
        parfor::RunConfig{2, {parfor::ScheduleKind::Dynamic, 1}, parfor::Construct::CriticalFull},
    };
    spec.reps = 3;
    spec.warmup = 1;
    const auto records = run_experiment(spec);
    REQUIRE(records.size() == 6);
    std::set<std::uint64_t> checksums;
    std::multiset<int> reps;
    for (const auto& r : records) {
        REQUIRE_FALSE(r.failed());
        REQUIRE(r.seconds_total >= 0.0);
        REQUIRE(r.seconds_eat >= 0.0);
        REQUIRE(r.seconds_eat <= r.seconds_total);
        checksums.insert(r.checksum);
        reps.insert(r.rep);
    }
    REQUIRE(checksums.size() == 1);
    REQUIRE((reps == std::multiset<int>{0, 0, 1, 1, 2, 2}));
}

TEST_CASE("a failing cell yields a marker record and the sweep continues") {
    setenv(parfor::kScheduleEnvVar, "not-a-schedule", 1);
    ExperimentSpec spec;
    spec.sim = tiny_sim();
    spec.grid = {
        parfor::RunConfig{2, {parfor::ScheduleKind::Runtime, 0}, parfor::Construct::Reduction},
        parfor::RunConfig{2, {parfor::ScheduleKind::Static, 0}, parfor::Construct::Reduction},
    };
    spec.reps = 2;
    spec.warmup = 0;
    const auto records = run_experiment(spec);
    unsetenv(parfor::kScheduleEnvVar);

    REQUIRE(records.size() == 3);  // 1 marker + 2 good reps
    REQUIRE(records[0].failed());
    REQUIRE(std::isnan(records[0].seconds_eat));
    REQUIRE(records[0].checksum == 0);
    REQUIRE_FALSE(records[1].failed());
    REQUIRE_FALSE(records[2].failed());
    REQUIRE(has_failures(records));
}

TEST_CASE("csv header is the fixed schema") {
    const std::string text = write_csv_string({});
    REQUIRE(text ==
            "experiment,threads,schedule,chunk,construct,rep,fish,steps,"
            "seconds_total,seconds_eat,checksum\n");
}

TEST_CASE("csv round-trips the record sequence") {
    const auto records = synthetic_records(200, 11);
    const auto parsed = read_csv_string(write_csv_string(records));
    REQUIRE(parsed == records);
}

TEST_CASE("csv serializes seconds with 9 significant digits and hex checksums") {
    BenchRecord r;
    r.experiment = "exp3";
    r.threads = 8;
    r.schedule = "static";
    r.chunk = 50;
    r.construct = "reduction";
    r.rep = 2;
    r.fish = 10000;
    r.steps = 1000;
    r.seconds_total = 0.123456789123;
    r.seconds_eat = 0.0123456789123;
    r.checksum = 0xDEADBEEF01234567ull;
    const std::string text = write_csv_string({r});
    REQUIRE(text.find("exp3,8,static,50,reduction,2,10000,1000,0.123456789,0.0123456789,"
                      "deadbeef01234567") != std::string::npos);
}

TEST_CASE("csv failure markers use NaN in both seconds fields") {
    BenchRecord r;
    r.experiment = "exp1";
    r.schedule = "runtime";
    r.construct = "reduction";
    r.seconds_total = std::numeric_limits<double>::quiet_NaN();
    r.seconds_eat = std::numeric_limits<double>::quiet_NaN();
    const std::string text = write_csv_string({r});
    REQUIRE(text.find("NaN,NaN") != std::string::npos);
    const auto parsed = read_csv_string(text);
    REQUIRE(parsed.size() == 1);
    REQUIRE(parsed[0].failed());
}

TEST_CASE("csv reader names the offending line") {
    REQUIRE_THROWS_WITH(read_csv_string("bogus,header\n"),
                        Catch::Matchers::ContainsSubstring("line 1"));

    const std::string header(kCsvHeader);
    REQUIRE_THROWS_WITH(read_csv_string(header + "\nexp1,2,static,50\n"),
                        Catch::Matchers::ContainsSubstring("line 2"));
    REQUIRE_THROWS_WITH(
        read_csv_string(header + "\nexp1,two,static,50,reduction,0,1,1,0.5,0.1,0000000000000000\n"),
        Catch::Matchers::ContainsSubstring("threads"));
    REQUIRE_THROWS_WITH(
        read_csv_string(header + "\nexp1,2,static,50,reduction,0,1,1,0.5,0.1,zzzz\n"),
        Catch::Matchers::ContainsSubstring("checksum"));
    REQUIRE_THROWS_WITH(
        read_csv_string(header + "\nexp1,2,static,50,reduction,0,1,1,0.5,oops,0000000000000000\n"),
        Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("validation flags seconds_eat exceeding seconds_total") {
    const std::string header(kCsvHeader);
    const auto records = read_csv_string(
        header + "\nexp1,2,static,50,reduction,0,1,1,0.5,0.9,0000000000000000\n");
    REQUIRE(records.size() == 1);
    const auto issues = validate_records(records);
    REQUIRE(issues.size() == 1);
    REQUIRE_THAT(issues[0], Catch::Matchers::ContainsSubstring("seconds_eat exceeds"));
    REQUIRE_THAT(issues[0], Catch::Matchers::ContainsSubstring("line 2"));
}
