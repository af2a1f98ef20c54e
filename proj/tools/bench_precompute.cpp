// Compares the serial reference precompute against the OpenMP kernel on the
// precomputable check modules of an instance.

#include "hybplan/instance_io.hpp"
#include "hybplan/precompute.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#ifdef HYBPLAN_HAVE_OPENMP
#include <omp.h>
#endif

using namespace hybplan;

int main(int argc, char** argv) {
    CLI::App app{"precompute kernel benchmark: serial reference vs OpenMP"};
    std::string instance_path;
    int repeats = 3;
    app.add_option("--instance", instance_path, "instance file")->required();
    app.add_option("--repeats", repeats, "timing repetitions");
    CLI11_PARSE(app, argc, argv);

    const Instance inst = load_instance_file(instance_path);
    const DomainBundle bundle = build_bundle(inst);

#ifdef HYBPLAN_HAVE_OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel path falls back to serial\n");
#endif
    std::printf("%-10s %10s %10s %12s %12s %8s\n", "module", "keys", "failed",
                "serial_s", "parallel_s", "speedup");

    for (const auto& module : bundle.modules) {
        if (!module->has_input_space())
            continue;
        double serial_best = 1e300, parallel_best = 1e300;
        long keys = 0, failed = 0;
        for (int r = 0; r < repeats; ++r) {
            CheckCache c1, c2;
            const PrecomputeStats s = precompute_serial(*module, c1);
            const PrecomputeStats p = precompute_parallel(*module, c2);
            if (s.failed != p.failed || s.keys != p.keys) {
                std::cerr << "serial/parallel mismatch on " << module->id()
                          << '\n';
                return 1;
            }
            serial_best = std::min(serial_best, s.wall_s);
            parallel_best = std::min(parallel_best, p.wall_s);
            keys = s.keys;
            failed = s.failed;
        }
        std::printf("%-10s %10ld %10ld %12.6f %12.6f %8.2f\n",
                    module->id().c_str(), keys, failed, serial_best,
                    parallel_best, serial_best / parallel_best);
    }
    return 0;
}
