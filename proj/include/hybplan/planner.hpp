#pragma once

#include "hybplan/checks.hpp"
#include "hybplan/core.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hybplan {

enum class Mode { First, All };
enum class TermStatus { Exhausted, MaxPlans, Timeout, NoPlanExists };

std::string to_string(Mode);
std::string to_string(TermStatus);
Mode mode_from_string(const std::string&);

struct EnumerationConfig {
    int horizon_max = 30;
    long max_plans = 10000;
    double timeout_s = 7200.0;
    Mode mode = Mode::First;
    // enumerate only at the smallest horizon admitting a plan (vs all
    // horizons up to horizon_max)
    bool minimal_only = true;
    bool memoize = true;
    // alternate canonical ordering (descending); used to test that the set
    // of distinct check keys does not depend on enumeration order
    bool reverse_order = false;
};

struct Transition {
    const State& from;
    const std::vector<ActionInstance>& step;
    const State& to;
};

struct HookResult {
    bool feasible = true;
    std::vector<CheckKey> failed;
};

// In-search feasibility callback. When per_action_complete is set the hook
// promises that a step is feasible iff each of its actions is individually
// feasible against the pre-state, and the planner filters single actions;
// otherwise it is consulted once per candidate transition.
struct CheckHook {
    std::function<HookResult(const Transition&)> on_transition;
    std::function<HookResult(const State&, const ActionInstance&)> on_action;
    bool per_action_complete = false;
};

// Hook evaluating the given modules through the cache (per-action complete
// by construction: every module keys its checks on (pre-state, action)).
CheckHook make_check_hook(const std::vector<std::shared_ptr<CheckModule>>& modules,
                          CheckCache& cache);

struct EnumerationResult {
    TermStatus status = TermStatus::NoPlanExists;
    long n_emitted = 0;
    long n_expanded = 0;    // transitions expanded (diagnostic)
    int horizon_used = -1;  // horizon of the last emitted plan
    bool stopped_by_sink = false;
};

// Return false to stop the stream.
using PlanSink = std::function<bool(const PlanHistory&)>;

// Iterative deepening over horizon 0..horizon_max with deterministic
// canonical ordering of candidate action sets. Emitted plans satisfy
// validate_history; transitions violating a constraint or rejected by the
// hook are not expanded.
EnumerationResult enumerate_plans(const PlanningProblem&,
                                  const EnumerationConfig&,
                                  const CheckHook* hook, const PlanSink& sink);

// Single fixed horizon; building block for drivers that own the deepening
// and restarting policy. `deadline` overrides the config timeout when set.
EnumerationResult enumerate_at_horizon(
    const PlanningProblem&, int horizon, const EnumerationConfig&,
    const CheckHook* hook, const PlanSink& sink,
    std::optional<std::chrono::steady_clock::time_point> deadline = {});

} // namespace hybplan
