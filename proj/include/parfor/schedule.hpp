#pragma once

// Loop-scheduling algebra: schedule kinds, chunk assignment, the shared
// claim counter for dynamic scheduling, and the guided chunk-size rule.
// Pure functions live here; the worker pool that consumes them is in
// executor.hpp.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parfor {

enum class ScheduleKind { Static, Dynamic, Guided, Runtime };

// Aggregation strategy for reductions. Sequential ignores the thread count
// entirely; the critical variants differ in how much of the loop body sits
// inside the exclusion region.
enum class Construct { Sequential, Reduction, CriticalPartial, CriticalFull };

struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::Static;
    std::size_t chunk = 0;  // 0 = default (balanced blocks / min chunk 1)

    friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

inline const char* to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::Static: return "static";
        case ScheduleKind::Dynamic: return "dynamic";
        case ScheduleKind::Guided: return "guided";
        case ScheduleKind::Runtime: return "runtime";
    }
    return "?";
}

inline const char* to_string(Construct c) {
    switch (c) {
        case Construct::Sequential: return "sequential";
        case Construct::Reduction: return "reduction";
        case Construct::CriticalPartial: return "critical-partial";
        case Construct::CriticalFull: return "critical-full";
    }
    return "?";
}

inline std::optional<ScheduleKind> schedule_kind_from_string(std::string_view s) {
    if (s == "static") return ScheduleKind::Static;
    if (s == "dynamic") return ScheduleKind::Dynamic;
    if (s == "guided") return ScheduleKind::Guided;
    if (s == "runtime") return ScheduleKind::Runtime;
    return std::nullopt;
}

inline std::optional<Construct> construct_from_string(std::string_view s) {
    if (s == "sequential") return Construct::Sequential;
    if (s == "reduction") return Construct::Reduction;
    if (s == "critical-partial") return Construct::CriticalPartial;
    if (s == "critical-full") return Construct::CriticalFull;
    return std::nullopt;
}

struct RunConfig {
    int num_threads = 8;
    ScheduleSpec schedule{ScheduleKind::Static, 50};
    Construct construct = Construct::Reduction;
    int thread_cap = 1024;

    // Effective worker count; oversubscription is honored up to the cap.
    int workers() const { return std::max(1, std::min(num_threads, thread_cap)); }

    void validate() const {
        if (num_threads < 1) throw std::invalid_argument("RunConfig: num_threads must be >= 1");
        if (thread_cap < 1) throw std::invalid_argument("RunConfig: thread_cap must be >= 1");
    }
};

// One contiguous index range owned by one worker.
struct ChunkRange {
    int worker = 0;
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive

    friend bool operator==(const ChunkRange&, const ChunkRange&) = default;
};

using ChunkAssignment = std::vector<ChunkRange>;

// Static schedule: chunk > 0 deals chunk-sized blocks round-robin (worker w
// gets chunks w, w+workers, w+2*workers, ...); chunk == 0 splits [0, n) into
// `workers` balanced contiguous blocks. Ranges are emitted in index order.
inline ChunkAssignment static_chunks(std::size_t n, int workers, std::size_t chunk) {
    if (workers < 1) throw std::invalid_argument("static_chunks: workers must be >= 1");
    ChunkAssignment out;
    if (n == 0) return out;
    const auto p = static_cast<std::size_t>(workers);
    if (chunk > 0) {
        std::size_t k = 0;
        for (std::size_t begin = 0; begin < n; begin += chunk, ++k) {
            out.push_back({static_cast<int>(k % p), begin, std::min(begin + chunk, n)});
        }
    } else {
        const std::size_t q = n / p;
        const std::size_t r = n % p;
        for (std::size_t w = 0; w < p; ++w) {
            const std::size_t lo = w * q + std::min(w, r);
            const std::size_t hi = lo + q + (w < r ? 1 : 0);
            if (hi > lo) out.push_back({static_cast<int>(w), lo, hi});
        }
    }
    return out;
}

// Shared claim counter for dynamic scheduling. One instance per loop; workers
// atomically grab the next chunk-sized range until the iteration space is
// exhausted.
struct DynamicCursor {
    std::atomic<std::size_t> next{0};

    std::optional<std::pair<std::size_t, std::size_t>> claim(std::size_t n, std::size_t chunk) {
        if (chunk == 0) chunk = 1;
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= n) return std::nullopt;
        return std::make_pair(begin, std::min(begin + chunk, n));
    }
};

// Guided chunk-size rule: proportional to the remaining work, with a floor.
inline std::size_t guided_chunk_size(std::size_t remaining, int workers, std::size_t min_chunk) {
    if (remaining == 0) return 0;
    if (workers < 1) workers = 1;
    if (min_chunk == 0) min_chunk = 1;
    const auto p = static_cast<std::size_t>(workers);
    const std::size_t share = (remaining + p - 1) / p;
    return std::min(remaining, std::max(share, min_chunk));
}

// Parses the FSB_SCHEDULE environment format: "kind[,chunk]" where kind is
// static | dynamic | guided (case-insensitive) and chunk is a positive
// integer. "runtime" is rejected: it cannot resolve to itself.
inline ScheduleSpec parse_runtime_schedule(std::string_view text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    std::string_view body(lowered);
    std::string_view kind_tok = body;
    std::string_view chunk_tok;
    if (const auto comma = body.find(','); comma != std::string_view::npos) {
        kind_tok = body.substr(0, comma);
        chunk_tok = body.substr(comma + 1);
    }

    const auto kind = schedule_kind_from_string(kind_tok);
    if (!kind || *kind == ScheduleKind::Runtime) {
        throw std::invalid_argument("runtime schedule: unrecognized kind '" + std::string(kind_tok) +
                                    "' (expected static, dynamic, or guided)");
    }

    ScheduleSpec spec{*kind, 0};
    if (body.find(',') != std::string_view::npos) {
        if (chunk_tok.empty() || !std::all_of(chunk_tok.begin(), chunk_tok.end(), [](unsigned char c) {
                return std::isdigit(c) != 0;
            })) {
            throw std::invalid_argument("runtime schedule: malformed chunk '" + std::string(chunk_tok) +
                                        "' (expected a positive integer)");
        }
        const unsigned long long v = std::stoull(std::string(chunk_tok));
        if (v == 0) {
            throw std::invalid_argument("runtime schedule: malformed chunk '0' (must be positive)");
        }
        spec.chunk = static_cast<std::size_t>(v);
    }
    return spec;
}

// Name of the environment variable consulted for kind == Runtime.
inline constexpr const char* kScheduleEnvVar = "FSB_SCHEDULE";

// Resolves Runtime to a concrete schedule via FSB_SCHEDULE. An unset variable
// falls back to static with default chunking, mirroring the usual OpenMP
// default. Malformed values throw.
inline ScheduleSpec resolve_schedule(ScheduleSpec spec) {
    if (spec.kind != ScheduleKind::Runtime) return spec;
    const char* env = std::getenv(kScheduleEnvVar);
    if (env == nullptr || *env == '\0') return ScheduleSpec{ScheduleKind::Static, 0};
    return parse_runtime_schedule(env);
}

}  // namespace parfor
