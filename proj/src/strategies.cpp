#include "hybplan/strategies.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <set>
#include <unordered_set>

namespace hybplan {

std::string to_string(Role r) {
    switch (r) {
    case Role::Pre: return "pre";
    case Role::Int: return "int";
    case Role::Filt: return "filt";
    case Role::Repl: return "repl";
    case Role::Off: return "off";
    }
    return "?";
}

Role role_from_string(const std::string& s) {
    if (s == "pre") return Role::Pre;
    if (s == "int") return Role::Int;
    if (s == "filt") return Role::Filt;
    if (s == "repl") return Role::Repl;
    if (s == "off") return Role::Off;
    throw Error("unknown role: " + s);
}

StrategyAssignment assignment_from_string(const std::string& strategy,
                                          const DomainBundle& bundle) {
    StrategyAssignment a;
    a.label = strategy;
    auto assign_all = [&](Role role) {
        for (const auto& m : bundle.modules)
            a.roles[m->id()] = role;
    };
    // precomputation only applies to modules with an input space; the
    // combination strings say what the remaining modules do
    auto assign_pre_rest = [&](Role rest) {
        for (const auto& m : bundle.modules)
            a.roles[m->id()] = m->has_input_space() ? Role::Pre : rest;
    };
    if (strategy == "int") {
        assign_all(Role::Int);
    } else if (strategy == "filt") {
        assign_all(Role::Filt);
    } else if (strategy == "repl") {
        assign_all(Role::Repl);
    } else if (strategy == "pre" || strategy == "pre+int") {
        assign_pre_rest(Role::Int);
    } else if (strategy == "pre+filt") {
        assign_pre_rest(Role::Filt);
    } else if (strategy == "pre+repl") {
        assign_pre_rest(Role::Repl);
    } else if (strategy.rfind("batchrepl:", 0) == 0) {
        assign_all(Role::Repl);
        a.batch_k = std::stoi(strategy.substr(10));
        if (a.batch_k < 1)
            throw Error("batchrepl needs k >= 1");
    } else {
        throw Error("unknown strategy: " + strategy);
    }
    return a;
}

void apply_assignment_overrides(StrategyAssignment& a,
                                const std::string& overrides) {
    if (overrides.empty())
        return;
    std::size_t pos = 0;
    while (pos < overrides.size()) {
        std::size_t comma = overrides.find(',', pos);
        if (comma == std::string::npos)
            comma = overrides.size();
        const std::string item = overrides.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw Error("bad assignment item: " + item);
        const std::string module = item.substr(0, eq);
        if (!a.roles.count(module))
            throw Error("unknown check module: " + module);
        a.roles[module] = role_from_string(item.substr(eq + 1));
        pos = comma + 1;
    }
    a.label += "+assign";
}

PreResult run_pre(const PlanningProblem& problem,
                  const std::vector<std::shared_ptr<CheckModule>>& modules,
                  CheckCache& cache, bool parallel) {
    for (const auto& m : modules)
        if (!m->has_input_space())
            throw PrecomputationUnsupported(m->id());

    PreResult result;
    std::vector<Constraint> learned;
    for (const auto& m : modules) {
        const PrecomputeStats st =
            parallel ? precompute_parallel(*m, cache) : precompute_serial(*m, cache);
        result.stats.keys += st.keys;
        result.stats.failed += st.failed;
        result.stats.wall_s += st.wall_s;
        for (const auto& [key, verdict] : cache.snapshot(m->module_id())) {
            if (verdict)
                continue;
            auto family = m->constraints_for_key(key);
            learned.insert(learned.end(), family.begin(), family.end());
        }
    }
    result.augmented = add_constraints(problem, learned);
    result.constraints_added =
        static_cast<long>(result.augmented.constraints.size()) -
        static_cast<long>(problem.constraints.size());
    return result;
}

namespace {

using Clock = std::chrono::steady_clock;

struct PostModule {
    const CheckModule* module;
    Role role;
};

} // namespace

StrategyRun run_assignment(const DomainBundle& bundle,
                           const StrategyAssignment& assignment,
                           CheckCache& cache, const RunOptions& opts) {
    // every module of the domain carries exactly one role
    for (const auto& m : bundle.modules)
        if (!assignment.roles.count(m->id()))
            throw Error("module without a role: " + m->id());
    for (const auto& [id, role] : assignment.roles) {
        const CheckModule* m = bundle.module(id);
        if (!m)
            throw Error("assignment names unknown module: " + id);
        if (role == Role::Pre && !m->has_input_space())
            throw PrecomputationUnsupported(id);
    }

    const auto wall_t0 = Clock::now();
    const CheckCounters totals_before = cache.totals();
    const auto per_module_before = cache.per_module();

    StrategyRun out;
    RunReport& rep = out.report;
    rep.instance_id = "";
    rep.domain = bundle.domain;
    rep.strategy = assignment.label.empty() ? "custom" : assignment.label;
    rep.mode = opts.cfg.mode;

    std::vector<std::shared_ptr<CheckModule>> pre_mods, int_mods;
    std::vector<PostModule> post_mods;
    for (const auto& m : bundle.modules) {
        switch (assignment.roles.at(m->id())) {
        case Role::Pre: pre_mods.push_back(m); break;
        case Role::Int: int_mods.push_back(m); break;
        case Role::Filt: post_mods.push_back({m.get(), Role::Filt}); break;
        case Role::Repl: post_mods.push_back({m.get(), Role::Repl}); break;
        case Role::Off: break;
        }
    }

    PlanningProblem problem = bundle.problem;
    if (!pre_mods.empty()) {
        PreResult pre = run_pre(problem, pre_mods, cache, opts.parallel_precompute);
        problem = std::move(pre.augmented);
        rep.constraints_added += pre.constraints_added;
    }

    CheckHook hook;
    const bool have_hook = !int_mods.empty();
    if (have_hook)
        hook = make_check_hook(int_mods, cache);

    const auto deadline =
        wall_t0 + std::chrono::duration_cast<Clock::duration>(
                      std::chrono::duration<double>(opts.cfg.timeout_s));

    std::unordered_set<std::string> emitted_sigs;
    std::set<CheckKey> failed_keys;
    std::vector<Constraint> pending;
    std::vector<ExtractedCheck> extracted;

    long candidates = 0;
    int batch_failures = 0;
    bool first_found = false;   // first-mode success
    bool plan_cap_hit = false;  // all-mode feasible cap
    bool budget_exhausted = false;
    bool restart_requested = false;
    bool timed_out = false;

    const bool direct = post_mods.empty();

    auto post_check = [&](const PlanHistory& h)
        -> std::optional<std::pair<const PostModule*, CheckKey>> {
        for (std::size_t i = 0; i < h.steps.size(); ++i) {
            for (const PostModule& pm : post_mods) {
                extracted.clear();
                pm.module->extract_step(h.states[i], h.steps[i], extracted);
                for (const ExtractedCheck& ec : extracted)
                    if (!cache.query(*pm.module, ec.key))
                        return std::pair{&pm, ec.key};
            }
        }
        return std::nullopt;
    };

    PlanSink sink = [&](const PlanHistory& h) {
        const std::string sig = plan_signature(problem, h);
        if (emitted_sigs.count(sig))
            return true; // found plans are not re-emitted after a restart
        ++candidates;

        const auto failure = post_check(h);
        if (!failure) {
            rep.n_feasible++;
            emitted_sigs.insert(sig);
            out.signatures.push_back(sig);
            if (opts.retain_plans)
                out.plans.push_back(h);
            if (opts.cfg.mode == Mode::First) {
                first_found = true;
                return false;
            }
            if (rep.n_feasible >= opts.cfg.max_plans) {
                plan_cap_hit = true;
                return false;
            }
        } else {
            rep.n_infeasible++;
            const auto& [pm, key] = *failure;
            if (pm->role == Role::Repl) {
                if (failed_keys.insert(key).second) {
                    auto family = pm->module->constraints_for_key(key);
                    pending.insert(pending.end(), family.begin(), family.end());
                }
                if (++batch_failures >= assignment.batch_k) {
                    restart_requested = true;
                    return false;
                }
            }
        }
        if (candidates >= opts.cfg.max_plans) {
            budget_exhausted = true;
            return false;
        }
        return true;
    };

    auto flush_pending = [&](bool count_restart) {
        if (pending.empty())
            return;
        const std::size_t before = problem.constraints.size();
        problem = add_constraints(problem, pending);
        const long grown =
            static_cast<long>(problem.constraints.size() - before);
        rep.constraints_added += grown;
        if (count_restart) {
            rep.n_restarts++;
            if (grown < 1)
                rep.constraint_growth_strict = false;
        }
        pending.clear();
        batch_failures = 0;
    };

    TermStatus final_status = TermStatus::NoPlanExists;
    bool done = false;

    for (int h = 0; h <= problem.horizon_max && !done; ++h) {
        while (true) {
            restart_requested = false;
            EnumerationConfig step_cfg = opts.cfg;
            // the sink owns every stopping decision; post stages consume raw
            // candidates, so the first/cap shortcuts must not apply there
            step_cfg.max_plans = std::numeric_limits<long>::max() / 2;
            if (!direct)
                step_cfg.mode = Mode::All;
            const EnumerationResult res = enumerate_at_horizon(
                problem, h, step_cfg, have_hook ? &hook : nullptr, sink,
                deadline);

            if (res.status == TermStatus::Timeout) {
                timed_out = true;
                done = true;
                break;
            }
            if (first_found || plan_cap_hit) {
                final_status = TermStatus::MaxPlans;
                done = true;
                break;
            }
            if (budget_exhausted) {
                // the candidate budget is spent; keep gathered constraints
                // in the augmented problem without another pass
                flush_pending(false);
                final_status = TermStatus::MaxPlans;
                done = true;
                break;
            }
            if (restart_requested) {
                flush_pending(true);
                continue; // re-enumerate this horizon against H^+
            }
            // horizon fully enumerated
            flush_pending(false);
            if (opts.cfg.minimal_only && rep.n_feasible > 0) {
                final_status = TermStatus::Exhausted;
                done = true;
            }
            break;
        }
    }

    if (timed_out)
        final_status = TermStatus::Timeout;
    else if (!done)
        final_status = rep.n_feasible > 0 ? TermStatus::Exhausted
                                          : TermStatus::NoPlanExists;

    rep.status = final_status;
    rep.wall_s = std::chrono::duration<double>(Clock::now() - wall_t0).count();
    const CheckCounters totals_delta = cache.totals() - totals_before;
    rep.lowlevel_s = totals_delta.time_s;
    rep.checks_total = totals_delta.total_queries;
    rep.checks_distinct = totals_delta.distinct_evaluations;
    rep.n_failed_keys = static_cast<long>(failed_keys.size());
    rep.peak_memory_bytes = peak_memory_bytes();
    for (const auto& [id, counters] : cache.per_module()) {
        auto it = per_module_before.find(id);
        rep.per_module[id] =
            it == per_module_before.end() ? counters : counters - it->second;
    }

    out.augmented = std::move(problem);
    return out;
}

StrategyRun run_int(const DomainBundle& b, CheckCache& c, const RunOptions& o) {
    return run_assignment(b, assignment_from_string("int", b), c, o);
}

StrategyRun run_filt(const DomainBundle& b, CheckCache& c, const RunOptions& o) {
    return run_assignment(b, assignment_from_string("filt", b), c, o);
}

StrategyRun run_repl(const DomainBundle& b, CheckCache& c, const RunOptions& o) {
    return run_assignment(b, assignment_from_string("repl", b), c, o);
}

StrategyRun run_batch_repl(const DomainBundle& b, CheckCache& c,
                           const RunOptions& o, int batch_k) {
    StrategyAssignment a = assignment_from_string("repl", b);
    a.batch_k = batch_k;
    a.label = "batchrepl:" + std::to_string(batch_k);
    return run_assignment(b, a, c, o);
}

StrategyRun run_mixed(const DomainBundle& b, const StrategyAssignment& a,
                      CheckCache& c, const RunOptions& o) {
    return run_assignment(b, a, c, o);
}

} // namespace hybplan
