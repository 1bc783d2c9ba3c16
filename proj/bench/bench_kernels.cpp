// Serial reference vs OpenMP timings for the ensemble kernels.
//
//   bench_kernels [members] [total_time]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <omp.h>

#include "maggeo/chaos.hpp"
#include "maggeo/ensemble.hpp"
#include "maggeo/fuchsian.hpp"
#include "maggeo/integrals.hpp"

using namespace maggeo;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-22s serial %10.2f ms   openmp %10.2f ms   speedup %5.2fx\n", name, serial, parallel,
                serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t members = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 64;
    const double total_time = argc > 2 ? std::strtod(argv[2], nullptr) : 20.0;
    const FuchsianGroup& group = genus2_octagon_group();
    std::printf("threads %d, members %zu, total_time %g\n", omp_get_max_threads(), members, total_time);

    std::vector<PhaseState> initial;
    for (std::size_t i = 0; i < members; ++i) initial.push_back(seeded_state(2.0, i + 1, group));

    std::vector<PhaseState> a;
    std::vector<PhaseState> b;
    const double ts = time_ms([&] {
        a = propagate_ensemble(initial, total_time, default_step(2.0), FieldStrength::unit(), &group,
                               Execution::Serial);
    });
    const double tp = time_ms([&] {
        b = propagate_ensemble(initial, total_time, default_step(2.0), FieldStrength::unit(), &group,
                               Execution::Parallel);
    });
    report("propagate_ensemble", ts, tp);
    if (!(a == b)) {
        std::printf("mismatch between serial and parallel ensembles\n");
        return 1;
    }

    std::vector<DiskPoint> points;
    for (std::size_t i = 0; i < members * 1000; ++i) {
        const double r = 0.999 * std::sqrt((i % 997) / 997.0);
        points.emplace_back(std::polar(r, 0.618 * static_cast<double>(i)));
    }
    report("reduce_batch", time_ms([&] { reduce_batch(points, group, Execution::Serial); }),
           time_ms([&] { reduce_batch(points, group, Execution::Parallel); }));

    LocateOptions serial_opt;
    serial_opt.exec = Execution::Serial;
    LocateOptions parallel_opt;
    auto f = observables::real_part();
    auto g = observables::imag_part();
    report("locate_closed_orbit",
           time_ms([&] { locate_closed_trajectory(0.1, -0.2, f, g, 0.125, group, serial_opt); }),
           time_ms([&] { locate_closed_trajectory(0.1, -0.2, f, g, 0.125, group, parallel_opt); }));
    return 0;
}
