#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

#include "parfor/schedule.hpp"

using namespace parfor;

TEST_CASE("static_chunks deals chunk-sized blocks round-robin") {
    const auto a = static_chunks(10, 2, 3);
    const ChunkAssignment expected = {
        {0, 0, 3}, {1, 3, 6}, {0, 6, 9}, {1, 9, 10}};
    REQUIRE(a == expected);
}

TEST_CASE("static_chunks with chunk 0 makes balanced contiguous blocks") {
    const auto a = static_chunks(10, 3, 0);
    const ChunkAssignment expected = {{0, 0, 4}, {1, 4, 7}, {2, 7, 10}};
    REQUIRE(a == expected);
}

TEST_CASE("static_chunks of an empty range is empty") {
    REQUIRE(static_chunks(0, 4, 50).empty());
    REQUIRE(static_chunks(0, 4, 0).empty());
}

TEST_CASE("static_chunks is a disjoint cover for random shapes") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = rng() % 5000;
        const int workers = 1 + static_cast<int>(rng() % 64);
        const std::size_t chunk = rng() % 200;
        const auto a = static_chunks(n, workers, chunk);
        std::vector<int> hits(n, 0);
        for (const auto& r : a) {
            REQUIRE(r.begin < r.end);
            REQUIRE(r.end <= n);
            REQUIRE(r.worker >= 0);
            REQUIRE(r.worker < workers);
            for (std::size_t i = r.begin; i < r.end; ++i) ++hits[i];
        }
        for (std::size_t i = 0; i < n; ++i) REQUIRE(hits[i] == 1);
        // Round-robin worker identity: chunk k belongs to worker k mod P.
        if (chunk > 0) {
            for (std::size_t k = 0; k < a.size(); ++k) {
                REQUIRE(a[k].worker == static_cast<int>(k % static_cast<std::size_t>(workers)));
            }
        }
    }
}

TEST_CASE("static_chunks is deterministic") {
    REQUIRE(static_chunks(977, 7, 13) == static_chunks(977, 7, 13));
}

TEST_CASE("dynamic cursor claims successive chunks then runs dry") {
    DynamicCursor cursor;
    REQUIRE((cursor.claim(5, 2) == std::pair<std::size_t, std::size_t>{0, 2}));
    REQUIRE((cursor.claim(5, 2) == std::pair<std::size_t, std::size_t>{2, 4}));
    REQUIRE((cursor.claim(5, 2) == std::pair<std::size_t, std::size_t>{4, 5}));
    REQUIRE_FALSE(cursor.claim(5, 2).has_value());
}

TEST_CASE("dynamic cursor on an empty range is immediately dry") {
    DynamicCursor cursor;
    REQUIRE_FALSE(cursor.claim(0, 4).has_value());
}

TEST_CASE("concurrent dynamic claims partition the iteration space") {
    const std::size_t n = 10000;
    const std::size_t chunk = 7;
    DynamicCursor cursor;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> claims(8);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            while (auto r = cursor.claim(n, chunk)) claims[t].push_back(*r);
        });
    }
    for (auto& t : threads) t.join();

    std::vector<int> hits(n, 0);
    for (const auto& per_thread : claims) {
        for (const auto& [begin, end] : per_thread) {
            for (std::size_t i = begin; i < end; ++i) ++hits[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) REQUIRE(hits[i] == 1);
}

TEST_CASE("guided chunk size follows remaining/workers with a floor") {
    REQUIRE(guided_chunk_size(1000, 4, 50) == 250);
    REQUIRE(guided_chunk_size(100, 4, 50) == 50);
    REQUIRE(guided_chunk_size(30, 4, 50) == 30);
}

TEST_CASE("guided chunk sizes are non-increasing down to the floor") {
    std::mt19937 rng(321);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 100000;
        const int workers = 1 + static_cast<int>(rng() % 64);
        const std::size_t min_chunk = 1 + rng() % 512;
        std::size_t remaining = n;
        std::size_t prev = remaining + 1;
        while (remaining > 0) {
            const std::size_t size = guided_chunk_size(remaining, workers, min_chunk);
            const std::size_t share =
                (remaining + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
            REQUIRE(size == std::min(remaining, std::max(share, min_chunk)));
            REQUIRE(size <= prev);
            REQUIRE(size >= std::min(remaining, min_chunk));
            prev = size;
            remaining -= size;
        }
    }
}

TEST_CASE("parse_runtime_schedule accepts kind[,chunk]") {
    REQUIRE((parse_runtime_schedule("dynamic,64") == ScheduleSpec{ScheduleKind::Dynamic, 64}));
    REQUIRE((parse_runtime_schedule("static,50") == ScheduleSpec{ScheduleKind::Static, 50}));
    REQUIRE((parse_runtime_schedule("guided") == ScheduleSpec{ScheduleKind::Guided, 0}));
    REQUIRE((parse_runtime_schedule("STATIC,8") == ScheduleSpec{ScheduleKind::Static, 8}));
}

TEST_CASE("parse_runtime_schedule rejects malformed input by name") {
    REQUIRE_THROWS_WITH(parse_runtime_schedule("runtime"),
                        Catch::Matchers::ContainsSubstring("runtime"));
    REQUIRE_THROWS_WITH(parse_runtime_schedule("bogus,4"),
                        Catch::Matchers::ContainsSubstring("bogus"));
    REQUIRE_THROWS_AS(parse_runtime_schedule("static,"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_runtime_schedule("static,abc"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_runtime_schedule("static,0"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_runtime_schedule(""), std::invalid_argument);
}

TEST_CASE("resolve_schedule consults FSB_SCHEDULE only for runtime") {
    setenv(kScheduleEnvVar, "dynamic,64", 1);
    REQUIRE((resolve_schedule({ScheduleKind::Runtime, 0}) ==
             ScheduleSpec{ScheduleKind::Dynamic, 64}));
    REQUIRE((resolve_schedule({ScheduleKind::Static, 50}) ==
             ScheduleSpec{ScheduleKind::Static, 50}));
    unsetenv(kScheduleEnvVar);
    REQUIRE((resolve_schedule({ScheduleKind::Runtime, 0}) ==
             ScheduleSpec{ScheduleKind::Static, 0}));
}

TEST_CASE("RunConfig caps effective workers") {
    RunConfig run;
    run.num_threads = 1 << 15;
    run.thread_cap = 1024;
    REQUIRE(run.workers() == 1024);
    run.num_threads = 4;
    REQUIRE(run.workers() == 4);
    run.num_threads = 0;
    REQUIRE_THROWS_AS(run.validate(), std::invalid_argument);
}
