#pragma once

#include "hybplan/domains.hpp"
#include "hybplan/metrics.hpp"
#include "hybplan/planner.hpp"
#include "hybplan/precompute.hpp"

#include <map>
#include <string>
#include <vector>

namespace hybplan {

enum class Role { Pre, Int, Filt, Repl, Off };

std::string to_string(Role);
Role role_from_string(const std::string&);

// Partition of the domain's check modules into integration roles.
struct StrategyAssignment {
    std::map<std::string, Role> roles; // module id -> role
    int batch_k = 1; // infeasible candidates absorbed before a restart
    std::string label;
};

// "pre" assigns Pre to every module with an input space and Int to the
// rest; "int"/"filt"/"repl" assign that role everywhere; "batchrepl:K"
// is Repl with batch_k = K.
StrategyAssignment assignment_from_string(const std::string& strategy,
                                          const DomainBundle&);
// comma list "module=role,..." applied on top of an assignment
void apply_assignment_overrides(StrategyAssignment&, const std::string& overrides);

struct RunOptions {
    EnumerationConfig cfg;
    bool retain_plans = true;
    bool parallel_precompute = false;
};

struct StrategyRun {
    std::vector<PlanHistory> plans;      // when retain_plans
    std::vector<std::string> signatures; // canonical, emission order
    RunReport report;
    PlanningProblem augmented; // problem as last used (H^pre / H^+)
};

// Precomputation: evaluate the whole input space of each module and turn
// every failed key into constraints.
struct PreResult {
    PlanningProblem augmented;
    PrecomputeStats stats;
    long constraints_added = 0;
};
PreResult run_pre(const PlanningProblem&,
                  const std::vector<std::shared_ptr<CheckModule>>& modules,
                  CheckCache&, bool parallel = false);

// The general driver: Pre modules first, Int modules as the in-search hook,
// Filt/Repl modules as the post-check stage with optional constraint
// feedback and restarts.
StrategyRun run_assignment(const DomainBundle&, const StrategyAssignment&,
                           CheckCache&, const RunOptions&);

StrategyRun run_int(const DomainBundle&, CheckCache&, const RunOptions&);
StrategyRun run_filt(const DomainBundle&, CheckCache&, const RunOptions&);
StrategyRun run_repl(const DomainBundle&, CheckCache&, const RunOptions&);
StrategyRun run_batch_repl(const DomainBundle&, CheckCache&, const RunOptions&,
                           int batch_k);
StrategyRun run_mixed(const DomainBundle&, const StrategyAssignment&,
                      CheckCache&, const RunOptions&);

} // namespace hybplan
