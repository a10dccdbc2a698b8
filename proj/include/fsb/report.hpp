#pragma once

// Turns benchmark CSV records into per-cell summary tables and SVG trend
// charts. Output is a pure function of the input records: series are sorted
// alphabetically, numbers use fixed formats, and nothing environmental leaks
// into the bytes, so identical input produces identical files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "fsb/bench.hpp"
#include "fsb/csv.hpp"

namespace fsb {
namespace report {

// One grid cell: every record sharing (experiment, threads, schedule, chunk,
// construct). Duplicate cells (e.g. capped thread counts) merge here.
struct Cell {
    std::string experiment;
    int threads = 0;
    std::string schedule;
    std::size_t chunk = 0;
    std::string construct;
    std::vector<double> totals;  // valid reps only
    std::vector<double> eats;
    int failures = 0;
};

using CellKey = std::tuple<std::string, std::string, std::string, std::size_t, int>;

inline CellKey key_of(const BenchRecord& r) {
    // Sort order: experiment, construct, schedule, chunk, threads.
    return {r.experiment, r.construct, r.schedule, r.chunk, r.threads};
}

inline std::map<CellKey, Cell> group_cells(const std::vector<BenchRecord>& records) {
    std::map<CellKey, Cell> cells;
    for (const BenchRecord& r : records) {
        Cell& c = cells[key_of(r)];
        c.experiment = r.experiment;
        c.threads = r.threads;
        c.schedule = r.schedule;
        c.chunk = r.chunk;
        c.construct = r.construct;
        if (r.failed()) {
            ++c.failures;
        } else {
            c.totals.push_back(r.seconds_total);
            c.eats.push_back(r.seconds_eat);
        }
    }
    return cells;
}

inline std::string schedule_label(const std::string& schedule, std::size_t chunk) {
    if (chunk == 0) return schedule;
    return schedule + ":" + std::to_string(chunk);
}

inline std::string fmt(const char* f, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Per-cell median/mean/stddev table; one line per cell, stable order.
inline std::string summary_table(const std::vector<BenchRecord>& records) {
    const auto cells = group_cells(records);
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %7s %-12s %6s %-16s %3s %5s %13s %13s %13s %13s\n",
                  "experiment", "threads", "schedule", "chunk", "construct", "n", "fails",
                  "total_median", "total_mean", "total_stddev", "eat_median");
    out += line;
    for (const auto& [key, cell] : cells) {
        double median = std::nan(""), mean = std::nan(""), stddev = std::nan("");
        double eat_median = std::nan("");
        if (!cell.totals.empty()) {
            const SummaryStats st = summarize(cell.totals);
            median = st.median;
            mean = st.mean;
            stddev = st.stddev;
            eat_median = summarize(cell.eats).median;
        }
        std::snprintf(line, sizeof line,
                      "%-10s %7d %-12s %6zu %-16s %3zu %5d %13.6g %13.6g %13.6g %13.6g\n",
                      cell.experiment.c_str(), cell.threads, cell.schedule.c_str(), cell.chunk,
                      cell.construct.c_str(), cell.totals.size(), cell.failures, median, mean,
                      stddev, eat_median);
        out += line;
    }
    return out;
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // sorted by x
};

namespace svg {

inline constexpr double kWidth = 860.0;
inline constexpr double kHeight = 520.0;
inline constexpr double kLeft = 70.0;
inline constexpr double kRight = 660.0;  // legend lives right of this
inline constexpr double kTop = 46.0;
inline constexpr double kBottom = 460.0;

inline const char* palette(std::size_t i) {
    static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                                              "#bcbd22", "#17becf"};
    return kColors[i % (sizeof kColors / sizeof kColors[0])];
}

inline std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace svg

// Minimal deterministic line chart. log2_x plots x on a log2 axis (callers
// must not pass x <= 0 in that case).
inline std::string render_line_chart(const std::string& title, const std::string& x_label,
                                     const std::string& y_label, const std::vector<Series>& series,
                                     bool log2_x) {
    using namespace svg;
    // Collect ranges and the distinct x positions for ticks.
    std::map<double, bool> xs;
    double ymax = 0.0;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            xs[x] = true;
            if (y > ymax) ymax = y;
        }
    }
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.05;
    const double txmin = log2_x ? std::log2(xs.begin()->first) : xs.begin()->first;
    const double txmax = log2_x ? std::log2(xs.rbegin()->first) : xs.rbegin()->first;
    const auto map_x = [&](double x) {
        const double t = log2_x ? std::log2(x) : x;
        if (txmax == txmin) return (kLeft + kRight) / 2.0;
        return kLeft + (t - txmin) / (txmax - txmin) * (kRight - kLeft);
    };
    const auto map_y = [&](double y) { return kBottom - y / ymax * (kBottom - kTop); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
           coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + coord((kLeft + kRight) / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           title + "</text>\n";

    // Axes.
    out += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kBottom) + "\" x2=\"" + coord(kRight) +
           "\" y2=\"" + coord(kBottom) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop) + "\" x2=\"" + coord(kLeft) +
           "\" y2=\"" + coord(kBottom) + "\" stroke=\"black\"/>\n";

    // X ticks at the distinct data positions (thin out when crowded).
    const std::size_t n_ticks = xs.size();
    const std::size_t stride = n_ticks > 15 ? (n_ticks + 14) / 15 : 1;
    std::size_t tick_i = 0;
    for (const auto& [x, unused] : xs) {
        (void)unused;
        const bool labeled = tick_i % stride == 0;
        ++tick_i;
        const double px = map_x(x);
        out += "<line x1=\"" + coord(px) + "\" y1=\"" + coord(kBottom) + "\" x2=\"" + coord(px) +
               "\" y2=\"" + coord(kBottom + 5) + "\" stroke=\"black\"/>\n";
        if (labeled) {
            out += "<text x=\"" + coord(px) + "\" y=\"" + coord(kBottom + 20) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
                   fmt("%.6g", x) + "</text>\n";
        }
    }
    // Y ticks: 5 even divisions of [0, ymax].
    for (int k = 0; k <= 5; ++k) {
        const double y = ymax * k / 5.0;
        const double py = map_y(y);
        out += "<line x1=\"" + coord(kLeft - 5) + "\" y1=\"" + coord(py) + "\" x2=\"" +
               coord(kLeft) + "\" y2=\"" + coord(py) + "\" stroke=\"black\"/>\n";
        out += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(py) + "\" x2=\"" + coord(kRight) +
               "\" y2=\"" + coord(py) + "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + coord(kLeft - 9) + "\" y=\"" + coord(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt("%.3g", y) + "</text>\n";
    }

    // Axis labels.
    out += "<text x=\"" + coord((kLeft + kRight) / 2) + "\" y=\"" + coord(kHeight - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           (log2_x ? " (log2)" : "") + "</text>\n";
    out += "<text x=\"18\" y=\"" + coord((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           coord((kTop + kBottom) / 2) + ")\">" + y_label + "</text>\n";

    // Series polylines, legend on the right.
    std::size_t si = 0;
    for (const Series& s : series) {
        const char* color = svg::palette(si);
        std::string pts;
        for (const auto& [x, y] : s.points) {
            pts += coord(map_x(x)) + "," + coord(map_y(y)) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
        for (const auto& [x, y] : s.points) {
            out += "<circle cx=\"" + coord(map_x(x)) + "\" cy=\"" + coord(map_y(y)) +
                   "\" r=\"2.5\" fill=\"" + std::string(color) + "\"/>\n";
        }
        const double ly = kTop + 8.0 + 18.0 * static_cast<double>(si);
        out += "<line x1=\"" + coord(kRight + 12) + "\" y1=\"" + coord(ly) + "\" x2=\"" +
               coord(kRight + 34) + "\" y2=\"" + coord(ly) + "\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2.5\"/>\n";
        out += "<text x=\"" + coord(kRight + 40) + "\" y=\"" + coord(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + s.name + "</text>\n";
        ++si;
    }
    out += "</svg>\n";
    return out;
}

namespace detail {

// series name -> x -> pooled samples; medians become the plotted points.
using SeriesPool = std::map<std::string, std::map<double, std::vector<double>>>;

inline std::vector<Series> finish(const SeriesPool& pool) {
    std::vector<Series> series;
    for (const auto& [name, xs] : pool) {
        Series s{name, {}};
        for (const auto& [x, samples] : xs) {
            s.points.emplace_back(x, summarize(samples).median);
        }
        series.push_back(std::move(s));
    }
    return series;
}

}  // namespace detail

struct ChartSet {
    // file base name -> svg bytes; empty when there is nothing to plot
    std::vector<std::pair<std::string, std::string>> files;
};

inline ChartSet build_charts(const std::vector<BenchRecord>& records) {
    const auto cells = group_cells(records);
    detail::SeriesPool by_construct;         // runtime vs threads, per (construct, schedule)
    detail::SeriesPool by_schedule;          // runtime vs threads, reduction rows only
    detail::SeriesPool by_chunk;             // runtime vs chunk, per (schedule, threads)
    detail::SeriesPool eat_by_construct;     // eat time vs threads, per construct

    for (const auto& [key, cell] : cells) {
        if (cell.totals.empty()) continue;
        const std::string sched = schedule_label(cell.schedule, cell.chunk);
        const double threads = static_cast<double>(cell.threads);
        for (double v : cell.totals) {
            by_construct[cell.construct + " " + sched][threads].push_back(v);
            if (cell.construct == "reduction") by_schedule[sched][threads].push_back(v);
            if (cell.chunk >= 1) {
                by_chunk[cell.schedule + " t" + std::to_string(cell.threads)]
                        [static_cast<double>(cell.chunk)].push_back(v);
            }
        }
        for (double v : cell.eats) eat_by_construct[cell.construct][threads].push_back(v);
    }

    ChartSet charts;
    const auto add = [&charts](const std::string& name, const std::string& title,
                               const std::string& x_label, const std::string& y_label,
                               const detail::SeriesPool& pool, bool log2_x) {
        if (pool.empty()) return;
        charts.files.emplace_back(
            name + ".svg",
            render_line_chart(title, x_label, y_label, detail::finish(pool), log2_x));
    };
    add("threads_by_construct", "Runtime vs. threads by construct", "threads",
        "median seconds (total)", by_construct, true);
    add("threads_by_schedule", "Runtime vs. threads by schedule (reduction)", "threads",
        "median seconds (total)", by_schedule, true);
    add("chunk_by_schedule", "Runtime vs. chunk by schedule and threads", "chunk",
        "median seconds (total)", by_chunk, true);
    add("eat_by_construct", "Eat-phase time vs. threads by construct", "threads",
        "median seconds (eat)", eat_by_construct, true);
    return charts;
}

// Writes summary.txt plus any charts into out_dir (created if missing).
// Returns the summary table text.
inline std::string write_report(const std::vector<BenchRecord>& records,
                                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string table = summary_table(records);
    {
        std::ofstream f(out_dir / "summary.txt", std::ios::binary);
        f << table;
    }
    for (const auto& [name, bytes] : build_charts(records).files) {
        std::ofstream f(out_dir / name, std::ios::binary);
        f << bytes;
    }
    return table;
}

}  // namespace report
}  // namespace fsb
