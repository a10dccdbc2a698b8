#pragma once

// Fish School Behaviour simulation: a 2-D pond whose agents random-walk with
// weight-limited mobility and feed on objective improvement. Both hot phases
// (move, and the max inside eat) run under a parfor::Executor; per-(fish,
// step) random streams keep the outcome independent of schedule, construct,
// and thread count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fsb/rng.hpp"
#include "parfor/executor.hpp"

namespace fsb {

// Lower weight bound; the upper bound is 2 * SimConfig::weight_scale.
inline constexpr double kWeightMin = 1.0;

struct Fish {
    double x = 0.0;
    double y = 0.0;
    double weight = kWeightMin;
    double prev_objective = 0.0;
    double current_objective = 0.0;
};

struct SimConfig {
    std::size_t num_fish = 10000;
    double pond_size = 200.0;
    double weight_scale = 10.0;  // W0: initial weights are uniform in [kWeightMin, W0]
    std::size_t num_steps = 1000;
    std::uint64_t seed = 1;
    double step_base = 1.0;  // per-axis displacement bound at unit weight

    double weight_max() const { return 2.0 * weight_scale; }

    void validate() const {
        if (!(pond_size > 0.0)) throw std::invalid_argument("SimConfig: pond_size must be > 0");
        if (!(weight_scale >= kWeightMin))
            throw std::invalid_argument("SimConfig: weight_scale must be >= 1");
        if (!(step_base > 0.0)) throw std::invalid_argument("SimConfig: step_base must be > 0");
    }
};

struct School {
    std::vector<Fish> fishes;

    std::size_t size() const { return fishes.size(); }
};

// Euclidean distance from (x, y) to the pond center.
inline double objective(double x, double y, double pond_size) {
    const double dx = x - pond_size / 2.0;
    const double dy = y - pond_size / 2.0;
    return std::sqrt(dx * dx + dy * dy);
}

inline School init_school(const SimConfig& cfg) {
    cfg.validate();
    School school;
    school.fishes.resize(cfg.num_fish);
    for (std::size_t i = 0; i < cfg.num_fish; ++i) {
        const RngStream rng{cfg.seed, i, kInitStep};
        Fish& f = school.fishes[i];
        f.x = rng.uniform(0, 0.0, cfg.pond_size);
        f.y = rng.uniform(1, 0.0, cfg.pond_size);
        f.weight = rng.uniform(2, kWeightMin, cfg.weight_scale);
        f.current_objective = objective(f.x, f.y, cfg.pond_size);
        f.prev_objective = f.current_objective;
    }
    return school;
}

// One random-walk step for every fish. Heavier fish move less: the per-axis
// displacement is uniform in [-s, +s] with s = step_base / max(1, weight).
// Positions clamp at the pond walls. Returns the wall time of the loop.
inline double move_phase(School& school, const SimConfig& cfg, std::size_t step_index,
                         parfor::Executor& exec) {
    Fish* fishes = school.fishes.data();
    const double pond = cfg.pond_size;
    const double step_base = cfg.step_base;
    const std::uint64_t seed = cfg.seed;
    return exec.parallel_for(school.size(), [=](std::size_t i) {
        Fish& f = fishes[i];
        const RngStream rng{seed, i, step_index};
        const double s = step_base / std::max(1.0, f.weight);
        f.x = std::clamp(f.x + rng.uniform(0, -s, s), 0.0, pond);
        f.y = std::clamp(f.y + rng.uniform(1, -s, s), 0.0, pond);
        f.prev_objective = f.current_objective;
        f.current_objective = objective(f.x, f.y, pond);
    });
}

struct EatResult {
    double max_diff = -std::numeric_limits<double>::infinity();
    double seconds = 0.0;  // timed region: the max computation only
};

// Feeding: maxDiff = max over fish of (prev - current objective), computed
// under the executor's construct, then a sequential weight update
// w += diff / maxDiff (clamped) when maxDiff > 0. Only the max is timed,
// mirroring the measured region of the reference implementation.
inline EatResult eat_phase(School& school, const SimConfig& cfg, parfor::Executor& exec) {
    const Fish* fishes = school.fishes.data();
    const auto [max_diff, seconds] = exec.parallel_max(school.size(), [=](std::size_t i) {
        return fishes[i].prev_objective - fishes[i].current_objective;
    });
    if (max_diff > 0.0) {
        const double w_max = cfg.weight_max();
        for (Fish& f : school.fishes) {
            const double diff = f.prev_objective - f.current_objective;
            f.weight = std::clamp(f.weight + diff / max_diff, kWeightMin, w_max);
        }
    }
    return EatResult{max_diff, seconds};
}

struct SimResult {
    School school;
    std::vector<double> max_diff_trace;  // one entry per step
    double seconds_total = 0.0;
    double seconds_move = 0.0;
    double seconds_eat = 0.0;
};

inline SimResult simulate(const SimConfig& cfg, parfor::Executor& exec) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SimResult result;
    result.school = init_school(cfg);
    result.max_diff_trace.reserve(cfg.num_steps);
    for (std::size_t step = 0; step < cfg.num_steps; ++step) {
        result.seconds_move += move_phase(result.school, cfg, step, exec);
        const EatResult eat = eat_phase(result.school, cfg, exec);
        result.seconds_eat += eat.seconds;
        result.max_diff_trace.push_back(eat.max_diff);
    }
    result.seconds_total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

inline SimResult simulate(const SimConfig& cfg, const parfor::RunConfig& run) {
    parfor::Executor exec(run);
    return simulate(cfg, exec);
}

// Order-sensitive FNV-1a digest over the exact bit patterns of every fish.
// The empty school hashes to the FNV-1a offset basis.
inline constexpr std::uint64_t kChecksumEmpty = 0xcbf29ce484222325ull;

inline std::uint64_t checksum(const School& school) {
    std::uint64_t h = kChecksumEmpty;
    const auto feed = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int k = 0; k < 8; ++k) {
            h ^= (bits >> (8 * k)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    };
    for (const Fish& f : school.fishes) {
        feed(f.x);
        feed(f.y);
        feed(f.weight);
        feed(f.prev_objective);
        feed(f.current_objective);
    }
    return h;
}

}  // namespace fsb
