#pragma once

#include "hybplan/checks.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace hybplan {

struct PrecomputeStats {
    long keys = 0;
    long failed = 0;
    double wall_s = 0.0;
};

// Evaluate a module's whole input space into the cache, one key at a time.
PrecomputeStats precompute_serial(const CheckModule&, CheckCache&);

// Same result, keys fanned out across OpenMP threads (falls back to the
// serial path when built without OpenMP). Verdicts and counters match the
// serial reference; only the wall time differs.
PrecomputeStats precompute_parallel(const CheckModule&, CheckCache&);

// One record per line: `moduleid,key...,0|1`, sorted by key.
void write_check_table(std::ostream&, const CheckModule&, const CheckCache&);
void write_check_table_file(const std::string& path, const CheckModule&,
                            const CheckCache&);

// Preloads records of any module found in `modules`; returns records loaded.
long load_check_table(std::istream&,
                      const std::vector<std::shared_ptr<CheckModule>>& modules,
                      CheckCache&);
long load_check_table_file(const std::string& path,
                           const std::vector<std::shared_ptr<CheckModule>>& modules,
                           CheckCache&);

} // namespace hybplan
