#include "hybplan/planner.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace hybplan {

std::string to_string(Mode m) {
    return m == Mode::First ? "first" : "all";
}

std::string to_string(TermStatus s) {
    switch (s) {
    case TermStatus::Exhausted: return "Exhausted";
    case TermStatus::MaxPlans: return "MaxPlans";
    case TermStatus::Timeout: return "Timeout";
    case TermStatus::NoPlanExists: return "NoPlanExists";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "first")
        return Mode::First;
    if (s == "all")
        return Mode::All;
    throw Error("unknown mode: " + s);
}

CheckHook make_check_hook(const std::vector<std::shared_ptr<CheckModule>>& modules,
                          CheckCache& cache) {
    CheckHook hook;
    hook.per_action_complete = true;
    hook.on_action = [modules, &cache](const State& from,
                                       const ActionInstance& a) {
        HookResult r;
        std::vector<ExtractedCheck> checks;
        for (const auto& m : modules) {
            checks.clear();
            m->extract(from, a, checks);
            for (const ExtractedCheck& ec : checks) {
                if (!cache.query(*m, ec.key)) {
                    r.feasible = false;
                    r.failed.push_back(ec.key);
                    return r;
                }
            }
        }
        return r;
    };
    hook.on_transition = [modules, &cache](const Transition& t) {
        HookResult r;
        std::vector<ExtractedCheck> checks;
        for (const auto& m : modules) {
            checks.clear();
            m->extract_step(t.from, t.step, checks);
            for (const ExtractedCheck& ec : checks) {
                if (!cache.query(*m, ec.key)) {
                    r.feasible = false;
                    r.failed.push_back(ec.key);
                    return r;
                }
            }
        }
        return r;
    };
    return hook;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Searcher {
    const PlanningProblem& problem;
    const EnumerationConfig& cfg;
    const CheckHook* hook;
    const PlanSink& sink;
    Clock::time_point deadline;
    long cap; // stop emitting once reached

    Searcher(const PlanningProblem& problem_, const EnumerationConfig& cfg_,
             const CheckHook* hook_, const PlanSink& sink_,
             Clock::time_point deadline_, long cap_)
        : problem(problem_), cfg(cfg_), hook(hook_), sink(sink_),
          deadline(deadline_), cap(cap_) {
        for (const Constraint& c : problem.constraints) {
            ConstraintIndex& idx = by_forbidden[c.forbidden];
            if (c.context.empty())
                idx.unconditional = true;
            else
                idx.by_first[c.context.front()].push_back(&c);
        }
    }

    // constraints grouped by forbidden action, each group bucketed by the
    // first context fluent: a state can only trip constraints whose first
    // fluent it contains, so matching costs one hash probe per state fluent
    struct ConstraintIndex {
        bool unconditional = false; // an empty-context constraint exists
        std::unordered_map<Fluent, std::vector<const Constraint*>, FluentHash>
            by_first;
    };
    std::unordered_map<ActionInstance, ConstraintIndex, ActionInstanceHash>
        by_forbidden;

    bool forbidden_in(const State& s, const ActionInstance& a) const {
        const auto it = by_forbidden.find(a);
        if (it == by_forbidden.end())
            return false;
        if (it->second.unconditional)
            return true;
        for (const Fluent& f : s.fluents) {
            const auto bucket = it->second.by_first.find(f);
            if (bucket == it->second.by_first.end())
                continue;
            for (const Constraint* c : bucket->second)
                if (s.contains_all(c->context))
                    return true;
        }
        return false;
    }

    long emitted = 0;
    long expanded = 0;
    bool timed_out = false;
    bool sink_stop = false;
    long tick = 0;

    std::vector<State> states;
    std::vector<std::vector<ActionInstance>> steps;

    // bit r set: fully explored from this state with r steps remaining and
    // no plan was emitted below it. Pruning such subtrees never drops a
    // candidate in any mode, since they contain none.
    std::unordered_map<State, std::uint64_t, StateHash> fruitless;
    bool use_memo = false;

    bool stop() const { return timed_out || sink_stop || emitted >= cap; }

    bool check_clock() {
        if (++tick % 512 == 1 && Clock::now() >= deadline)
            timed_out = true;
        return timed_out;
    }

    // successor state without the validation apply() repeats; the pool is
    // precondition-filtered and the chosen set conflict-free by construction
    State successor(const State& s, const std::vector<ActionInstance>& actions) {
        std::vector<Fluent> add, del;
        std::vector<Fluent> a1, d1;
        for (const ActionInstance& a : actions) {
            a1.clear();
            d1.clear();
            problem.schemas[a.schema].effect(s, a, a1, d1);
            add.insert(add.end(), a1.begin(), a1.end());
            del.insert(del.end(), d1.begin(), d1.end());
        }
        State out = s;
        for (const Fluent& f : del)
            out.erase(f);
        for (const Fluent& f : add)
            out.insert(f);
        return out;
    }

    // actions applicable in s, minus constraint-forbidden and (when the hook
    // is per-action complete) check-infeasible ones, in canonical order
    std::vector<ActionInstance> candidate_pool(const State& s) {
        std::vector<ActionInstance> pool;
        for (const ActionSchema& schema : problem.schemas)
            schema.instances(s, pool);
        std::sort(pool.begin(), pool.end());
        if (cfg.reverse_order)
            std::reverse(pool.begin(), pool.end());

        std::vector<ActionInstance> kept;
        kept.reserve(pool.size());
        for (const ActionInstance& a : pool) {
            if (forbidden_in(s, a))
                continue;
            if (hook && hook->per_action_complete &&
                !hook->on_action(s, a).feasible)
                continue;
            kept.push_back(a);
        }
        return kept;
    }

    // returns true iff some plan was emitted below this node
    bool dfs(const State& s, int remaining) {
        if (stop() || check_clock())
            return false;
        if (remaining == 0) {
            if (!problem.goal(s))
                return false;
            PlanHistory h;
            h.states = states;
            h.states.push_back(s);
            h.steps = steps;
            ++emitted;
            if (!sink(h))
                sink_stop = true;
            return true;
        }
        if (use_memo) {
            auto it = fruitless.find(s);
            if (it != fruitless.end() &&
                (it->second >> remaining & 1))
                return false;
        }

        const std::vector<ActionInstance> pool = candidate_pool(s);
        std::vector<ActionInstance> chosen;
        bool found = false;
        bool complete = true;

        // lexicographic subset order: each chosen set is expanded as soon as
        // it is formed, then extended with later pool members
        auto build = [&](auto&& self, std::size_t start) -> void {
            for (std::size_t i = start; i < pool.size(); ++i) {
                if (stop() || check_clock()) {
                    complete = false;
                    return;
                }
                bool clash = false;
                for (const ActionInstance& c : chosen) {
                    if (problem.conflicts(c, pool[i])) {
                        clash = true;
                        break;
                    }
                }
                if (clash)
                    continue;
                chosen.push_back(pool[i]);
                ++expanded;
                states.push_back(s);
                steps.push_back(chosen);
                State next = successor(s, chosen);
                bool ok = true;
                if (hook && !hook->per_action_complete) {
                    Transition t{s, chosen, next};
                    ok = hook->on_transition(t).feasible;
                }
                if (ok && dfs(next, remaining - 1))
                    found = true;
                states.pop_back();
                steps.pop_back();
                if (!stop())
                    self(self, i + 1);
                else
                    complete = false;
                chosen.pop_back();
                if (stop())
                    return;
            }
        };
        build(build, 0);

        if (use_memo && !found && complete && !stop()) {
            fruitless[s] |= std::uint64_t{1} << remaining;
        }
        return found;
    }
};

} // namespace

EnumerationResult enumerate_at_horizon(
    const PlanningProblem& problem, int horizon, const EnumerationConfig& cfg,
    const CheckHook* hook, const PlanSink& sink,
    std::optional<Clock::time_point> deadline) {
    Searcher s(problem, cfg, hook, sink,
               deadline.value_or(Clock::now() +
                                 std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(cfg.timeout_s))),
               cfg.mode == Mode::First ? 1 : cfg.max_plans);
    s.use_memo = cfg.memoize;
    s.dfs(problem.initial, horizon);

    EnumerationResult r;
    r.n_emitted = s.emitted;
    r.n_expanded = s.expanded;
    r.horizon_used = s.emitted > 0 ? horizon : -1;
    r.stopped_by_sink = s.sink_stop;
    if (s.timed_out)
        r.status = TermStatus::Timeout;
    else if (s.emitted >= s.cap)
        r.status = TermStatus::MaxPlans;
    else
        r.status = TermStatus::Exhausted; // horizon fully enumerated
    return r;
}

EnumerationResult enumerate_plans(const PlanningProblem& problem,
                                  const EnumerationConfig& cfg,
                                  const CheckHook* hook, const PlanSink& sink) {
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(cfg.timeout_s));
    EnumerationResult total;
    total.status = TermStatus::NoPlanExists;
    long budget = cfg.mode == Mode::First ? 1 : cfg.max_plans;

    for (int h = 0; h <= problem.horizon_max; ++h) {
        EnumerationConfig step_cfg = cfg;
        step_cfg.max_plans = budget;
        EnumerationResult r = enumerate_at_horizon(problem, h, step_cfg, hook,
                                                   sink, deadline);
        total.n_emitted += r.n_emitted;
        total.n_expanded += r.n_expanded;
        if (r.n_emitted > 0)
            total.horizon_used = h;
        budget -= r.n_emitted;
        total.stopped_by_sink = r.stopped_by_sink;

        if (r.status == TermStatus::Timeout) {
            total.status = TermStatus::Timeout;
            return total;
        }
        if (budget <= 0) {
            total.status = TermStatus::MaxPlans;
            return total;
        }
        if (r.stopped_by_sink) {
            total.status = TermStatus::Exhausted;
            return total;
        }
        if (cfg.minimal_only && r.n_emitted > 0) {
            total.status = TermStatus::Exhausted;
            return total;
        }
    }
    total.status = total.n_emitted > 0 ? TermStatus::Exhausted
                                       : TermStatus::NoPlanExists;
    return total;
}

} // namespace hybplan
