// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Runs against freshly generated benchmark suites and randomized
// desk-scale instances with independent oracles.

#include "hybplan/instance_io.hpp"
#include "hybplan/strategies.hpp"

#include "oracle.hpp"
#include "toys.hpp"

#include <doctest.h>

#include <chrono>
#include <iostream>
#include <random>
#include <set>

using namespace hybplan;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void verdict_line(const std::string& id, const std::string& name, bool pass,
                  const std::string& detail = "") {
    std::cout << "[accept] " << id << ' ' << name << ": "
              << (pass ? "PASS" : "FAIL");
    if (!detail.empty())
        std::cout << "  (" << detail << ')';
    std::cout << std::endl;
}

const std::vector<SuiteEntry>& locomotion_suite() {
    static const std::vector<SuiteEntry> suite = [] {
        GenOptions opts;
        opts.solve_timeout_s = 5.0;
        return generate_suite("locomotion", 20, 42, opts);
    }();
    return suite;
}

const std::vector<SuiteEntry>& manipulation_suite() {
    static const std::vector<SuiteEntry> suite = [] {
        GenOptions opts;
        opts.solve_timeout_s = 5.0;
        return generate_suite("manipulation", 10, 43, opts);
    }();
    return suite;
}

RunOptions suite_options(Mode mode, double timeout_s, long max_plans = 10000) {
    RunOptions opts;
    opts.cfg.mode = mode;
    opts.cfg.timeout_s = timeout_s;
    opts.cfg.max_plans = max_plans;
    opts.retain_plans = false;
    return opts;
}

std::set<std::string> sig_set(const StrategyRun& run) {
    return {run.signatures.begin(), run.signatures.end()};
}

} // namespace

TEST_CASE("C1 check-space cardinalities") {
    const auto t0 = Clock::now();

    LocomotionInstance loc = test::loco_easy();
    loc.grid = 10;
    loc.cm = {4, 4};
    loc.legs = {LegState{{3, 3}, true}, LegState{{3, 5}, true},
                LegState{{5, 3}, true}, LegState{{5, 5}, true}};
    loc.goal = {5, 4};
    const DomainBundle lb = build_locomotion(loc);
    CheckCache lc;
    const PrecomputeStats ls = precompute_serial(*lb.module("reach"), lc);

    ManipulationInstance man;
    man.grid = 11;
    man.bases = {Cell{1, 0}, Cell{9, 0}};
    man.payloads = {{{2, 2}, {4, 2}}};
    man.goals = {{{2, 6}, {4, 6}}};
    const DomainBundle mb = build_manipulation(man);
    CheckCache mc;
    const PrecomputeStats ps = precompute_serial(*mb.module("payload"), mc);
    const PrecomputeStats as = precompute_serial(*mb.module("arms"), mc);

    const double elapsed = seconds_since(t0);
    const bool pass = ls.keys == 10000 &&
                      lc.totals().distinct_evaluations == 10000 &&
                      ps.keys + as.keys == 29282 &&
                      mc.totals().distinct_evaluations == 29282 &&
                      elapsed < 10.0;
    CHECK(ls.keys == 10000);
    CHECK(lc.totals().distinct_evaluations == 10000);
    CHECK(ps.keys + as.keys == 29282);
    CHECK(mc.totals().distinct_evaluations == 29282);
    CHECK(elapsed < 10.0);
    verdict_line("C1", "check-space cardinalities", pass,
                 "reach=" + std::to_string(ls.keys) + " manipulation=" +
                     std::to_string(ps.keys + as.keys) + " in " +
                     std::to_string(elapsed) + " s");
}

TEST_CASE("C2 zero-infeasible invariant for direct integration") {
    bool pass = true;
    long runs = 0;
    auto exercise = [&](const SuiteEntry& entry) {
        const DomainBundle bundle = build_bundle(entry.instance);
        for (const char* strategy : {"int", "pre"}) {
            CheckCache cache;
            const StrategyRun run = run_assignment(
                bundle, assignment_from_string(strategy, bundle), cache,
                suite_options(Mode::First, 10.0));
            ++runs;
            if (run.report.n_infeasible != 0)
                pass = false;
            CHECK(run.report.n_infeasible == 0);
        }
    };
    for (const SuiteEntry& entry : locomotion_suite())
        exercise(entry);
    for (const SuiteEntry& entry : manipulation_suite())
        exercise(entry);
    verdict_line("C2", "zero infeasible candidates (Int, Pre)", pass,
                 std::to_string(runs) + " suite runs");
}

TEST_CASE("C3 cross-strategy oracle equivalence") {
    const auto t0 = Clock::now();
    std::mt19937 rng(7777);
    int instances = 0, nonempty = 0;
    bool pass = true;

    for (int trial = 0; trial < 52; ++trial) {
        DomainBundle bundle;
        int horizon;
        StrategyAssignment mixed_a, mixed_b;
        if (trial % 2 == 0) {
            const LocomotionInstance inst = test::loco_random(rng, trial);
            bundle = build_locomotion(inst);
            horizon = inst.horizon_max;
            mixed_a.roles = {{"reach", Role::Pre}, {"balance", Role::Int}};
            mixed_b.roles = {{"reach", Role::Int}, {"balance", Role::Repl}};
        } else {
            const ManipulationInstance inst = test::man_random(rng, trial);
            bundle = build_manipulation(inst);
            horizon = inst.horizon_max;
            mixed_a.roles = {{"payload", Role::Pre}, {"arms", Role::Int}};
            mixed_b.roles = {{"payload", Role::Int}, {"arms", Role::Repl}};
        }
        mixed_a.label = "mixed_a";
        mixed_b.label = "mixed_b";
        ++instances;

        const auto oracle = test::oracle_plan_set(
            bundle.problem, horizon, true,
            test::direct_check_pred(bundle.modules));
        if (!oracle.empty())
            ++nonempty;

        const RunOptions opts = suite_options(Mode::All, 60.0, 1000000);
        auto check_run = [&](const StrategyRun& run, const char* what) {
            const bool ok = sig_set(run) == oracle;
            if (!ok) {
                pass = false;
                MESSAGE("mismatch: " << what << " on trial " << trial);
            }
            CHECK(ok);
        };
        CheckCache c1, c2, c3, c4, c5, c6, c7, c8, c9;
        check_run(run_assignment(bundle, assignment_from_string("pre", bundle),
                                 c1, opts),
                  "pre");
        check_run(run_int(bundle, c2, opts), "int");
        check_run(run_filt(bundle, c3, opts), "filt");
        check_run(run_repl(bundle, c4, opts), "repl");
        check_run(run_batch_repl(bundle, c5, opts, 1), "batchrepl:1");
        check_run(run_batch_repl(bundle, c6, opts, 2), "batchrepl:2");
        check_run(run_batch_repl(bundle, c7, opts, 8), "batchrepl:8");
        check_run(run_mixed(bundle, mixed_a, c8, opts), "mixed_a");
        check_run(run_mixed(bundle, mixed_b, c9, opts), "mixed_b");
    }

    const double elapsed = seconds_since(t0);
    CHECK(instances >= 50);
    CHECK(nonempty >= 10); // the suite genuinely distinguishes feasibility
    CHECK(elapsed < 300.0);
    pass = pass && instances >= 50 && nonempty >= 10 && elapsed < 300.0;
    verdict_line("C3", "cross-strategy oracle equivalence", pass,
                 std::to_string(instances) + " instances (" +
                     std::to_string(nonempty) + " solvable) in " +
                     std::to_string(elapsed) + " s");
}

TEST_CASE("C4 geometry oracles") {
    const auto t0 = Clock::now();
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> coord(0, 9);
    std::uniform_int_distribution<int> count(1, 40);
    bool pass = true;

    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<geom::Point> pts;
        const int n = count(rng);
        for (int i = 0; i < n; ++i)
            pts.push_back({static_cast<double>(coord(rng)),
                           static_cast<double>(coord(rng))});
        const geom::Polygon hull = geom::convex_hull(pts);
        auto got = hull.vertices;
        std::sort(got.begin(), got.end(), [](const auto& l, const auto& r) {
            return l.x < r.x || (l.x == r.x && l.y < r.y);
        });
        const auto expect = test::oracle_hull_vertices(pts);
        if (got.size() != expect.size() ||
            !std::equal(got.begin(), got.end(), expect.begin(),
                        [](const auto& a, const auto& b) {
                            return a.x == b.x && a.y == b.y;
                        }))
            pass = false;
    }
    CHECK(pass);

    int containment_checked = 0;
    for (int trial = 0; trial < 4000 && containment_checked < 1000; ++trial) {
        std::vector<geom::Point> pts;
        for (int i = 0; i < 8; ++i)
            pts.push_back({static_cast<double>(coord(rng)),
                           static_cast<double>(coord(rng))});
        const geom::Polygon hull = geom::convex_hull(pts);
        const geom::Point q{coord(rng) + 0.25, coord(rng) + 0.25};
        double closest = 1e18;
        for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
            const auto& a = hull.vertices[i];
            const auto& b = hull.vertices[(i + 1) % hull.vertices.size()];
            closest =
                std::min(closest, test::oracle_segment_gap(q, q, a, b, 1));
        }
        if (closest < 1e-9)
            continue; // boundary cases excluded
        ++containment_checked;
        if (geom::point_in_hull(q, hull) !=
            test::oracle_point_in_polygon(q, hull.vertices))
            pass = false;
    }
    CHECK(containment_checked >= 1000);
    CHECK(pass);

    const double elapsed = seconds_since(t0);
    CHECK(elapsed < 30.0);
    pass = pass && containment_checked >= 1000 && elapsed < 30.0;
    verdict_line("C4", "geometry oracles", pass,
                 "1000 hulls + " + std::to_string(containment_checked) +
                     " containment queries in " + std::to_string(elapsed) +
                     " s");
}

TEST_CASE("C5 replanning progress and termination") {
    bool pass = true;
    long runs = 0;
    auto exercise = [&](const SuiteEntry& entry) {
        const DomainBundle bundle = build_bundle(entry.instance);
        CheckCache cache;
        const StrategyRun run =
            run_repl(bundle, cache, suite_options(Mode::First, 10.0));
        ++runs;
        const bool bound_ok = run.report.n_restarts <=
                              run.report.n_failed_keys + run.report.n_feasible;
        CHECK(bound_ok);
        CHECK(run.report.constraint_growth_strict);
        if (!bound_ok || !run.report.constraint_growth_strict)
            pass = false;
    };
    for (const SuiteEntry& entry : locomotion_suite())
        exercise(entry);
    for (const SuiteEntry& entry : manipulation_suite())
        exercise(entry);
    verdict_line("C5", "replanning progress bound", pass,
                 std::to_string(runs) + " suite runs");
}

TEST_CASE("C6 caching contract") {
    bool pass = true;

    auto replay = [&](const DomainBundle& bundle, const std::string& strategy,
                      const RunOptions& opts) {
        CheckCache warm, cold;
        const StrategyRun a = run_assignment(
            bundle, assignment_from_string(strategy, bundle), warm, opts);
        const StrategyRun b = run_assignment(
            bundle, assignment_from_string(strategy, bundle), cold, opts);
        const bool same_stream = a.signatures == b.signatures;
        const bool same_distinct =
            a.report.checks_distinct == b.report.checks_distinct;
        const bool counts_sane =
            a.report.checks_distinct <= a.report.checks_total &&
            b.report.checks_distinct <= b.report.checks_total;
        CHECK(same_stream);
        CHECK(same_distinct);
        CHECK(counts_sane);

        // cache off: identical verdict stream, every query evaluated
        CheckCache off(false);
        const StrategyRun c = run_assignment(
            bundle, assignment_from_string(strategy, bundle), off, opts);
        const bool off_stream = c.signatures == a.signatures;
        const bool off_counts =
            c.report.checks_total == c.report.checks_distinct;
        CHECK(off_stream);
        CHECK(off_counts);
        if (!(same_stream && same_distinct && counts_sane && off_stream &&
              off_counts))
            pass = false;
    };

    replay(build_locomotion(test::loco_tight()), "int",
           suite_options(Mode::All, 30.0, 1000000));
    replay(build_locomotion(test::loco_tight()), "repl",
           suite_options(Mode::All, 30.0, 1000000));
    replay(build_manipulation(test::man_blocked(10)), "int",
           suite_options(Mode::First, 30.0));
    replay(build_bundle(locomotion_suite()[0].instance), "int",
           suite_options(Mode::First, 10.0));
    replay(build_bundle(manipulation_suite()[0].instance), "int",
           suite_options(Mode::First, 10.0));

    verdict_line("C6", "caching contract", pass);
}

TEST_CASE("C7 qualitative trend: Filt discards more than Repl") {
    // soft criterion: reported, investigated on failure, never a gate
    long both_finished = 0, trend_holds = 0;
    auto exercise = [&](const SuiteEntry& entry) {
        const DomainBundle bundle = build_bundle(entry.instance);
        const RunOptions opts = suite_options(Mode::All, 15.0, 200);
        CheckCache c1, c2;
        const StrategyRun filt = run_filt(bundle, c1, opts);
        const StrategyRun repl = run_repl(bundle, c2, opts);
        if (filt.report.status == TermStatus::Timeout ||
            repl.report.status == TermStatus::Timeout)
            return;
        ++both_finished;
        if (filt.report.n_infeasible >= repl.report.n_infeasible)
            ++trend_holds;
    };
    for (const SuiteEntry& entry : locomotion_suite())
        exercise(entry);
    for (const SuiteEntry& entry : manipulation_suite())
        exercise(entry);

    const double ratio =
        both_finished ? static_cast<double>(trend_holds) / both_finished : 0.0;
    const bool pass = both_finished >= 5 && ratio >= 0.8;
    if (!pass)
        MESSAGE("trend below threshold; investigate before concluding");
    WARN(pass); // soft: a miss triggers investigation, not rejection
    std::cout << "[accept] C7 infeasible-candidate trend: "
              << (pass ? "PASS" : "SOFT-FAIL") << "  (" << trend_holds << '/'
              << both_finished << " finished instances, ratio " << ratio << ')'
              << std::endl;
}
