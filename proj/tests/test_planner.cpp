#include "hybplan/planner.hpp"

#include "hybplan/domains.hpp"
#include "oracle.hpp"
#include "toys.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace hybplan;

namespace {

std::set<std::string> collect_set(const PlanningProblem& p,
                                  const EnumerationConfig& cfg,
                                  const CheckHook* hook,
                                  EnumerationResult* out_res = nullptr) {
    std::set<std::string> sigs;
    const EnumerationResult res =
        enumerate_plans(p, cfg, hook, [&](const PlanHistory& h) {
            REQUIRE(validate_history(p, h));
            sigs.insert(plan_signature(p, h));
            return true;
        });
    if (out_res)
        *out_res = res;
    return sigs;
}

std::vector<std::string> collect_stream(const PlanningProblem& p,
                                        const EnumerationConfig& cfg,
                                        const CheckHook* hook) {
    std::vector<std::string> sigs;
    enumerate_plans(p, cfg, hook, [&](const PlanHistory& h) {
        sigs.push_back(plan_signature(p, h));
        return true;
    });
    return sigs;
}

} // namespace

TEST_CASE("a goal-satisfying initial state yields one empty plan") {
    DomainBundle bundle = build_locomotion(test::loco_easy());
    PlanningProblem p = bundle.problem;
    p.goal = [](const State&) { return true; };
    EnumerationConfig cfg;
    cfg.mode = Mode::All;
    cfg.horizon_max = p.horizon_max;
    EnumerationResult res;
    const auto sigs = collect_set(p, cfg, nullptr, &res);
    REQUIRE(sigs.size() == 1);
    CHECK(*sigs.begin() == "");
    CHECK(res.status == TermStatus::Exhausted);
    CHECK(res.horizon_used == 0);
}

TEST_CASE("plan set equals the brute-force oracle without checks") {
    LocomotionInstance inst = test::loco_easy();
    inst.horizon_max = 2;
    const DomainBundle bundle = build_locomotion(inst);
    EnumerationConfig cfg;
    cfg.mode = Mode::All;
    cfg.horizon_max = 2;
    cfg.minimal_only = true;
    const auto got = collect_set(bundle.problem, cfg, nullptr);
    const auto expect = test::oracle_plan_set(bundle.problem, 2, true);
    CHECK(got == expect);
    CHECK_FALSE(got.empty());

    // non-minimal: all horizons up to the bound
    cfg.minimal_only = false;
    const auto got_all = collect_set(bundle.problem, cfg, nullptr);
    const auto expect_all = test::oracle_plan_set(bundle.problem, 2, false);
    CHECK(got_all == expect_all);
    CHECK(got_all.size() > got.size());
}

TEST_CASE("a rejecting hook filters exactly like the oracle predicate") {
    LocomotionInstance inst = test::loco_easy();
    inst.horizon_max = 2;
    const DomainBundle bundle = build_locomotion(inst);

    const auto touches = [](const ActionInstance& a) {
        if (a.schema == LOC_MOVE_CM)
            return a.args[0] == 1 && a.args[1] == 1;
        if (a.schema == LOC_PLACE)
            return a.args[1] == 1 && a.args[2] == 1;
        return false;
    };
    CheckHook hook;
    hook.per_action_complete = false;
    hook.on_transition = [&](const Transition& t) {
        HookResult r;
        for (const ActionInstance& a : t.step)
            if (touches(a))
                r.feasible = false;
        return r;
    };

    EnumerationConfig cfg;
    cfg.mode = Mode::All;
    cfg.horizon_max = 2;
    const auto got = collect_set(bundle.problem, cfg, &hook);
    const auto expect = test::oracle_plan_set(
        bundle.problem, 2, true,
        [&](const State&, const std::vector<ActionInstance>& step,
            const State&) {
            for (const ActionInstance& a : step)
                if (touches(a))
                    return false;
            return true;
        });
    CHECK(got == expect);
}

TEST_CASE("constraints prune matching transitions and only those") {
    LocomotionInstance inst = test::loco_easy();
    inst.horizon_max = 2;
    const DomainBundle bundle = build_locomotion(inst);
    EnumerationConfig cfg;
    cfg.mode = Mode::All;
    cfg.horizon_max = 2;

    const auto base = collect_set(bundle.problem, cfg, nullptr);

    // a constraint matching no reachable transition changes nothing
    Constraint inert;
    inert.context = {make_fluent(LOC_CM_AT, {0, 0})};
    inert.forbidden = make_action(LOC_MOVE_CM, {0, 1});
    const auto same = collect_set(add_constraints(bundle.problem, {inert}),
                                  cfg, nullptr);
    CHECK(same == base);

    // forbidding the first move removes exactly the plans using it
    Constraint live;
    live.context = {make_fluent(LOC_CM_AT, {1, 1})};
    live.forbidden = make_action(LOC_MOVE_CM, {2, 1});
    const auto pruned = collect_set(add_constraints(bundle.problem, {live}),
                                    cfg, nullptr);
    for (const std::string& sig : pruned)
        CHECK(base.count(sig));
    const auto expect = test::oracle_plan_set(
        bundle.problem, 2, true,
        [&](const State& s, const std::vector<ActionInstance>& step,
            const State&) {
            if (!s.contains(make_fluent(LOC_CM_AT, {1, 1})))
                return true;
            for (const ActionInstance& a : step)
                if (a == live.forbidden)
                    return false;
            return true;
        });
    CHECK(pruned == expect);
}

TEST_CASE("constraint monotonicity on exhaustive toys") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const LocomotionInstance inst = test::loco_random(rng, trial);
        const DomainBundle bundle = build_locomotion(inst);
        EnumerationConfig cfg;
        cfg.mode = Mode::All;
        cfg.horizon_max = inst.horizon_max;
        const auto base = collect_set(bundle.problem, cfg, nullptr);

        Constraint c;
        c.context = {make_fluent(LOC_CM_AT, {1, 1})};
        c.forbidden = make_action(
            LOC_MOVE_CM, {static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)});
        const auto restricted =
            collect_set(add_constraints(bundle.problem, {c}), cfg, nullptr);
        for (const std::string& sig : restricted)
            CHECK(base.count(sig));
    }
}

TEST_CASE("memoization does not change results") {
    const DomainBundle bundle = build_locomotion(test::loco_tight());
    CheckCache cache;
    CheckHook hook = make_check_hook(bundle.modules, cache);

    EnumerationConfig cfg;
    cfg.horizon_max = 4;

    SUBCASE("first mode: identical first plan") {
        cfg.mode = Mode::First;
        cfg.memoize = true;
        const auto with = collect_stream(bundle.problem, cfg, &hook);
        cfg.memoize = false;
        const auto without = collect_stream(bundle.problem, cfg, &hook);
        REQUIRE(with.size() == 1);
        CHECK(with == without);
    }

    SUBCASE("all mode: multiset equals the oracle either way") {
        cfg.mode = Mode::All;
        const auto expect = test::oracle_plan_set(
            bundle.problem, 4, true, test::direct_check_pred(bundle.modules));
        cfg.memoize = false;
        const auto off = collect_stream(bundle.problem, cfg, &hook);
        cfg.memoize = true;
        const auto on = collect_stream(bundle.problem, cfg, &hook);
        CHECK(off == on); // same stream, not only same set
        const std::set<std::string> on_set(on.begin(), on.end());
        CHECK(on_set == expect);
        CHECK(on.size() == on_set.size()); // no duplicate emissions
    }

    SUBCASE("depth zero: no pruning effect") {
        PlanningProblem p = bundle.problem;
        p.goal = [](const State&) { return true; };
        cfg.mode = Mode::All;
        cfg.memoize = true;
        const auto sigs = collect_stream(p, cfg, nullptr);
        CHECK(sigs.size() == 1);
    }
}

TEST_CASE("identical configuration gives a byte-identical plan stream") {
    const DomainBundle bundle = build_locomotion(test::loco_tight());
    CheckCache c1, c2;
    CheckHook h1 = make_check_hook(bundle.modules, c1);
    CheckHook h2 = make_check_hook(bundle.modules, c2);
    EnumerationConfig cfg;
    cfg.mode = Mode::All;
    cfg.horizon_max = 3;
    const auto a = collect_stream(bundle.problem, cfg, &h1);
    const auto b = collect_stream(bundle.problem, cfg, &h2);
    CHECK(a == b);
}

TEST_CASE("distinct hook keys do not depend on enumeration order") {
    const DomainBundle bundle = build_locomotion(test::loco_tight());

    auto distinct_keys = [&](bool reverse) {
        CheckCache cache;
        CheckHook hook = make_check_hook(bundle.modules, cache);
        EnumerationConfig cfg;
        cfg.mode = Mode::All;
        cfg.horizon_max = 3;
        cfg.reverse_order = reverse;
        enumerate_plans(bundle.problem, cfg, &hook,
                        [](const PlanHistory&) { return true; });
        std::set<CheckKey> keys;
        for (const auto& m : bundle.modules)
            for (const auto& [k, v] : cache.snapshot(m->module_id()))
                keys.insert(k);
        return keys;
    };
    const auto forward = distinct_keys(false);
    const auto backward = distinct_keys(true);
    CHECK(forward == backward);
    CHECK_FALSE(forward.empty());
}

TEST_CASE("timeout returns promptly with Timeout status") {
    LocomotionInstance inst = test::loco_easy();
    inst.grid = 8;
    inst.cm = {3, 3};
    inst.legs = {LegState{{2, 2}, true}, LegState{{2, 4}, true},
                 LegState{{4, 2}, true}, LegState{{4, 4}, true}};
    inst.goal = {7, 7};
    inst.horizon_max = 20;
    const DomainBundle bundle = build_locomotion(inst);
    EnumerationConfig cfg;
    cfg.mode = Mode::All;
    cfg.horizon_max = 20;
    cfg.timeout_s = 0.05;
    EnumerationResult res;
    collect_set(bundle.problem, cfg, nullptr, &res);
    CHECK(res.status == TermStatus::Timeout);
}

TEST_CASE("unreachable goal reports NoPlanExists") {
    const DomainBundle bundle = build_locomotion(test::loco_walled());
    CheckCache cache;
    CheckHook hook = make_check_hook(bundle.modules, cache);
    EnumerationConfig cfg;
    cfg.mode = Mode::First;
    cfg.horizon_max = 4;
    EnumerationResult res;
    const auto sigs = collect_set(bundle.problem, cfg, &hook, &res);
    CHECK(sigs.empty());
    CHECK(res.status == TermStatus::NoPlanExists);
}

TEST_CASE("max_plans caps the stream") {
    LocomotionInstance inst = test::loco_easy();
    inst.horizon_max = 2;
    const DomainBundle bundle = build_locomotion(inst);
    EnumerationConfig cfg;
    cfg.mode = Mode::All;
    cfg.horizon_max = 2;
    cfg.minimal_only = false;
    cfg.max_plans = 3;
    long seen = 0;
    const EnumerationResult res = enumerate_plans(
        bundle.problem, cfg, nullptr, [&](const PlanHistory&) {
            ++seen;
            return true;
        });
    CHECK(seen == 3);
    CHECK(res.status == TermStatus::MaxPlans);
}
