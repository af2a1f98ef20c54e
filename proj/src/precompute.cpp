#include "hybplan/precompute.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#ifdef HYBPLAN_HAVE_OPENMP
#include <omp.h>
#endif

namespace hybplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

PrecomputeStats precompute_serial(const CheckModule& module, CheckCache& cache) {
    const auto t0 = Clock::now();
    PrecomputeStats stats;
    for (const CheckKey& key : module.input_space()) {
        stats.keys++;
        if (!cache.query(module, key))
            stats.failed++;
    }
    stats.wall_s = seconds_since(t0);
    return stats;
}

PrecomputeStats precompute_parallel(const CheckModule& module,
                                    CheckCache& cache) {
#ifndef HYBPLAN_HAVE_OPENMP
    return precompute_serial(module, cache);
#else
    const auto t0 = Clock::now();
    const std::vector<CheckKey> keys = module.input_space();
    std::vector<char> verdicts(keys.size());
    std::vector<double> elapsed(keys.size());

#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto k0 = Clock::now();
        verdicts[i] = module.evaluate(keys[i]) ? 1 : 0;
        elapsed[i] = seconds_since(k0);
    }

    PrecomputeStats stats;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        stats.keys++;
        if (!verdicts[i])
            stats.failed++;
        cache.insert_evaluated(module, keys[i], verdicts[i] != 0, elapsed[i]);
    }
    stats.wall_s = seconds_since(t0);
    return stats;
#endif
}

void write_check_table(std::ostream& os, const CheckModule& module,
                       const CheckCache& cache) {
    for (const auto& [key, verdict] : cache.snapshot(module.module_id())) {
        os << module.id();
        for (int i = 0; i < key.len; ++i)
            os << ',' << key.v[i];
        os << ',' << (verdict ? 1 : 0) << '\n';
    }
}

void write_check_table_file(const std::string& path, const CheckModule& module,
                            const CheckCache& cache) {
    std::ofstream os(path);
    if (!os)
        throw Error("cannot write check table: " + path);
    write_check_table(os, module, cache);
}

long load_check_table(std::istream& is,
                      const std::vector<std::shared_ptr<CheckModule>>& modules,
                      CheckCache& cache) {
    long loaded = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() < 3)
            throw ParseError(line_no, "malformed check table record");
        const CheckModule* module = nullptr;
        for (const auto& m : modules)
            if (m->id() == fields[0])
                module = m.get();
        if (!module)
            continue; // table may cover modules of another domain
        CheckKey key;
        key.module = static_cast<std::int16_t>(module->module_id());
        key.len = static_cast<std::int8_t>(fields.size() - 2);
        for (int i = 0; i < key.len; ++i)
            key.v[i] = static_cast<std::int16_t>(std::stoi(fields[1 + i]));
        cache.preload(key, fields.back() == "1");
        ++loaded;
    }
    return loaded;
}

long load_check_table_file(const std::string& path,
                           const std::vector<std::shared_ptr<CheckModule>>& modules,
                           CheckCache& cache) {
    std::ifstream is(path);
    if (!is)
        throw Error("cannot read check table: " + path);
    return load_check_table(is, modules, cache);
}

} // namespace hybplan
