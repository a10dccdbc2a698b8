// Minimal standalone use of the executor: same max, four aggregation
// strategies, printed with their loop times.

#include <cstdio>
#include <vector>

#include "parfor/executor.hpp"

int main() {
    const std::size_t n = 1u << 20;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = static_cast<double>((i * 2654435761u) % 1000003u);
    }

    for (parfor::Construct construct :
         {parfor::Construct::Sequential, parfor::Construct::Reduction,
          parfor::Construct::CriticalPartial, parfor::Construct::CriticalFull}) {
        parfor::RunConfig run;
        run.num_threads = 4;
        run.schedule = {parfor::ScheduleKind::Dynamic, 1024};
        run.construct = construct;
        parfor::Executor exec(run);
        const auto [value, seconds] = exec.parallel_max(n, [&](std::size_t i) { return values[i]; });
        std::printf("%-16s max=%.0f  %.6f s\n", parfor::to_string(construct), value, seconds);
    }
    return 0;
}
