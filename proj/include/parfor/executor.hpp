#pragma once

// OpenMP-style chunked parallel-for executor. An Executor owns a worker pool
// sized from its RunConfig and reuses it across loop instances, so per-loop
// cost is a dispatch/quiesce handshake rather than thread creation. Loop
// bodies must be safe to invoke concurrently on distinct indices.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "parfor/schedule.hpp"

namespace parfor {

struct MaxResult {
    double value = -std::numeric_limits<double>::infinity();
    double seconds = 0.0;
};

class Executor {
  public:
    explicit Executor(RunConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        // The calling thread acts as team member 0, so the pool holds one
        // thread fewer than the worker count. Sequential aggregation ignores
        // the thread count, and a single worker runs on the calling thread;
        // neither needs a pool.
        const int pooled = pooled_workers();
        pool_.reserve(static_cast<std::size_t>(pooled));
        for (int w = 0; w < pooled; ++w) {
            pool_.emplace_back([this, w] { worker_loop(w + 1); });
        }
    }

    Executor(const Executor&) = delete;
    Executor& operator=(const Executor&) = delete;

    ~Executor() {
        {
            std::lock_guard<std::mutex> lk(m_);
            stop_ = true;
        }
        cv_work_.notify_all();
        for (auto& t : pool_) t.join();
    }

    const RunConfig& config() const { return cfg_; }
    int workers() const { return cfg_.workers(); }

    // Invokes body(i) exactly once for every i in [0, n). Iteration order is
    // unspecified except under the Sequential construct, which runs ascending
    // on the calling thread. Returns the wall time of the loop (monotonic
    // clock), including work distribution. A body exception is rethrown after
    // all workers quiesce.
    template <class Body>
    double parallel_for(std::size_t n, Body&& body) {
        const auto t0 = Clock::now();
        if (n > 0) {
            if (pool_.empty()) {
                for (std::size_t i = 0; i < n; ++i) body(i);
            } else {
                auto chunk_body = [&body](std::size_t begin, std::size_t end, int) {
                    for (std::size_t i = begin; i < end; ++i) body(i);
                };
                run_job(n, chunk_body);
            }
        }
        return elapsed_since(t0);
    }

    // Max over value_of(i) for i in [0, n), aggregated per the construct.
    // Empty ranges yield -infinity. The result is bit-identical across all
    // constructs and schedules: floating-point max is exact, so the grouping
    // of comparisons cannot change it.
    template <class ValueOf>
    MaxResult parallel_max(std::size_t n, ValueOf&& value_of) {
        const auto t0 = Clock::now();
        double best = -std::numeric_limits<double>::infinity();
        if (n > 0) {
            if (pool_.empty()) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double v = value_of(i);
                    if (v > best) best = v;
                }
            } else {
                switch (cfg_.construct) {
                    case Construct::Reduction: best = reduction_max(n, value_of); break;
                    case Construct::CriticalPartial: best = critical_max<false>(n, value_of); break;
                    case Construct::CriticalFull: best = critical_max<true>(n, value_of); break;
                    case Construct::Sequential: break;  // unreachable: no pool
                }
            }
        }
        return MaxResult{best, elapsed_since(t0)};
    }

  private:
    using Clock = std::chrono::steady_clock;

    struct Job {
        std::size_t n = 0;
        ScheduleSpec schedule{};
        void* ctx = nullptr;
        void (*invoke)(void*, std::size_t, std::size_t, int) = nullptr;
        std::atomic<std::size_t> next{0};
        std::atomic<bool> cancelled{false};
        std::exception_ptr error;  // first failure; guarded by m_
        int remaining = 0;         // workers yet to quiesce; guarded by m_
    };

    int pooled_workers() const {
        if (cfg_.construct == Construct::Sequential) return 0;
        return cfg_.workers() - 1;
    }

    int team_size() const { return static_cast<int>(pool_.size()) + 1; }

    static double elapsed_since(Clock::time_point t0) {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    template <class ChunkBody>
    void run_job(std::size_t n, ChunkBody& chunk_body) {
        Job job;
        job.n = n;
        job.schedule = resolve_schedule(cfg_.schedule);
        job.ctx = &chunk_body;
        job.invoke = [](void* ctx, std::size_t b, std::size_t e, int w) {
            (*static_cast<ChunkBody*>(ctx))(b, e, w);
        };
        {
            std::lock_guard<std::mutex> lk(m_);
            job.remaining = static_cast<int>(pool_.size());
            job_ = &job;
            ++generation_;
        }
        cv_work_.notify_all();
        try {
            run_share(job, 0);  // the driver works as team member 0
        } catch (...) {
            std::lock_guard<std::mutex> lk(m_);
            if (!job.error) job.error = std::current_exception();
            job.cancelled.store(true, std::memory_order_relaxed);
        }
        {
            std::unique_lock<std::mutex> lk(m_);
            cv_done_.wait(lk, [&] { return job.remaining == 0; });
            job_ = nullptr;
        }
        if (job.error) std::rethrow_exception(job.error);
    }

    void worker_loop(int id) {
        std::uint64_t seen = 0;
        for (;;) {
            Job* job = nullptr;
            {
                std::unique_lock<std::mutex> lk(m_);
                cv_work_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                job = job_;
            }
            try {
                run_share(*job, id);
            } catch (...) {
                std::lock_guard<std::mutex> lk(m_);
                if (!job->error) job->error = std::current_exception();
                job->cancelled.store(true, std::memory_order_relaxed);
            }
            {
                std::lock_guard<std::mutex> lk(m_);
                if (--job->remaining == 0) cv_done_.notify_one();
            }
        }
    }

    void run_share(Job& job, int id) {
        const std::size_t n = job.n;
        const auto p = static_cast<std::size_t>(team_size());
        const auto w = static_cast<std::size_t>(id);
        switch (job.schedule.kind) {
            case ScheduleKind::Static: {
                const std::size_t chunk = job.schedule.chunk;
                if (chunk > 0) {
                    // Round-robin deal: this worker owns chunks w, w+p, ...
                    for (std::size_t begin = w * chunk; begin < n; begin += p * chunk) {
                        if (job.cancelled.load(std::memory_order_relaxed)) return;
                        job.invoke(job.ctx, begin, std::min(begin + chunk, n), id);
                    }
                } else {
                    const std::size_t q = n / p;
                    const std::size_t r = n % p;
                    const std::size_t lo = w * q + std::min(w, r);
                    const std::size_t hi = lo + q + (w < r ? 1 : 0);
                    if (hi > lo && !job.cancelled.load(std::memory_order_relaxed)) {
                        job.invoke(job.ctx, lo, hi, id);
                    }
                }
                break;
            }
            case ScheduleKind::Dynamic: {
                const std::size_t chunk = job.schedule.chunk > 0 ? job.schedule.chunk : 1;
                for (;;) {
                    if (job.cancelled.load(std::memory_order_relaxed)) return;
                    const std::size_t begin = job.next.fetch_add(chunk);
                    if (begin >= n) return;
                    job.invoke(job.ctx, begin, std::min(begin + chunk, n), id);
                }
            }
            case ScheduleKind::Guided: {
                const std::size_t min_chunk = job.schedule.chunk > 0 ? job.schedule.chunk : 1;
                std::size_t begin = job.next.load();
                for (;;) {
                    if (job.cancelled.load(std::memory_order_relaxed)) return;
                    if (begin >= n) return;
                    const std::size_t size =
                        guided_chunk_size(n - begin, static_cast<int>(p), min_chunk);
                    if (job.next.compare_exchange_weak(begin, begin + size)) {
                        job.invoke(job.ctx, begin, begin + size, id);
                        begin = job.next.load();
                    }
                }
            }
            case ScheduleKind::Runtime:
                break;  // resolved before dispatch
        }
    }

    template <class ValueOf>
    double reduction_max(std::size_t n, ValueOf& value_of) {
        struct alignas(64) Slot {
            double v = -std::numeric_limits<double>::infinity();
        };
        std::vector<Slot> locals(pool_.size());
        auto chunk_body = [&](std::size_t begin, std::size_t end, int w) {
            double m = locals[static_cast<std::size_t>(w)].v;
            for (std::size_t i = begin; i < end; ++i) {
                const double v = value_of(i);
                if (v > m) m = v;
            }
            locals[static_cast<std::size_t>(w)].v = m;
        };
        run_job(n, chunk_body);
        // Combine in worker-id order; deterministic (and exact regardless).
        double best = -std::numeric_limits<double>::infinity();
        for (const Slot& s : locals) {
            if (s.v > best) best = s.v;
        }
        return best;
    }

    template <bool GuardWholeBody, class ValueOf>
    double critical_max(std::size_t n, ValueOf& value_of) {
        std::mutex guard;
        double best = -std::numeric_limits<double>::infinity();
        auto chunk_body = [&](std::size_t begin, std::size_t end, int) {
            for (std::size_t i = begin; i < end; ++i) {
                if constexpr (GuardWholeBody) {
                    std::lock_guard<std::mutex> lk(guard);
                    const double v = value_of(i);
                    if (v > best) best = v;
                } else {
                    // Value computed outside the exclusion region; only the
                    // compare-and-update is guarded.
                    const double v = value_of(i);
                    std::lock_guard<std::mutex> lk(guard);
                    if (v > best) best = v;
                }
            }
        };
        run_job(n, chunk_body);
        return best;
    }

    RunConfig cfg_;
    std::vector<std::thread> pool_;
    std::mutex m_;
    std::condition_variable cv_work_;
    std::condition_variable cv_done_;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    Job* job_ = nullptr;
};

}  // namespace parfor
