#include "hybplan/precompute.hpp"

#include "hybplan/domains.hpp"
#include "hybplan/strategies.hpp"
#include "toys.hpp"

#include <doctest.h>

#include <sstream>

using namespace hybplan;

TEST_CASE("serial and parallel precompute produce identical tables") {
    const DomainBundle bundle = build_locomotion(test::loco_tight());
    const CheckModule& reach = *bundle.module("reach");

    CheckCache serial_cache, parallel_cache;
    const PrecomputeStats s = precompute_serial(reach, serial_cache);
    const PrecomputeStats p = precompute_parallel(reach, parallel_cache);
    CHECK(s.keys == 81);
    CHECK(p.keys == s.keys);
    CHECK(p.failed == s.failed);
    CHECK(serial_cache.totals().distinct_evaluations == 81);
    CHECK(parallel_cache.totals().distinct_evaluations == 81);
    CHECK(serial_cache.snapshot(reach.module_id()) ==
          parallel_cache.snapshot(reach.module_id()));
}

TEST_CASE("check tables round-trip through the text format") {
    const DomainBundle bundle = build_locomotion(test::loco_tight());
    const CheckModule& reach = *bundle.module("reach");
    CheckCache cache;
    precompute_serial(reach, cache);

    std::ostringstream os;
    write_check_table(os, reach, cache);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 81);
    CHECK(text.rfind("reach,0,0,0,0,", 0) == 0); // sorted by key

    CheckCache loaded;
    std::istringstream is(text);
    CHECK(load_check_table(is, bundle.modules, loaded) == 81);
    CHECK(loaded.size() == 81);
    // preloaded entries answer without evaluation
    for (const auto& [key, verdict] : cache.snapshot(reach.module_id()))
        CHECK(loaded.query(reach, key) == verdict);
    CHECK(loaded.totals().distinct_evaluations == 0);
    CHECK(loaded.totals().total_queries == 81);
}

TEST_CASE("a preloaded table removes in-search evaluations for that module") {
    const DomainBundle bundle = build_locomotion(test::loco_tight());
    const CheckModule& reach = *bundle.module("reach");

    CheckCache precomputed;
    precompute_serial(reach, precomputed);
    std::ostringstream os;
    write_check_table(os, reach, precomputed);

    CheckCache cache;
    std::istringstream is(os.str());
    load_check_table(is, bundle.modules, cache);

    RunOptions opts;
    opts.cfg.mode = Mode::First;
    opts.cfg.horizon_max = 4;
    const StrategyRun run = run_int(bundle, cache, opts);
    CHECK(run.report.per_module.at("reach").distinct_evaluations == 0);
    CHECK(run.report.per_module.at("reach").total_queries > 0);
}

TEST_CASE("malformed table records are rejected with a line number") {
    const DomainBundle bundle = build_locomotion(test::loco_easy());
    CheckCache cache;
    std::istringstream is("reach,1\n");
    CHECK_THROWS_AS(load_check_table(is, bundle.modules, cache), ParseError);
}
