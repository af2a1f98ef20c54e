#pragma once

#include "hybplan/checks.hpp"
#include "hybplan/planner.hpp"

#include <map>
#include <string>
#include <vector>

namespace hybplan {

// All measured quantities for one benchmark run.
struct RunReport {
    std::string instance_id;
    std::string domain;
    std::string strategy;
    Mode mode = Mode::First;
    TermStatus status = TermStatus::NoPlanExists;

    double wall_s = 0.0;
    double lowlevel_s = 0.0; // accumulated around check evaluation only
    long n_feasible = 0;
    long n_infeasible = 0;
    long checks_distinct = 0;
    long checks_total = 0;
    long n_restarts = 0;

    // replanning progress diagnostics
    long n_failed_keys = 0;
    bool constraint_growth_strict = true;
    long constraints_added = 0;

    long peak_memory_bytes = 0; // best effort

    std::map<std::string, CheckCounters> per_module;

    double highlevel_s() const { return wall_s - lowlevel_s; }
};

std::string report_csv_header();
std::string report_csv_row(const RunReport&);
std::string report_json(const RunReport&); // same field names as the CSV plus detail

// Per-(domain, strategy, mode) means and maxima.
struct SummaryRow {
    std::string domain, strategy, mode;
    int runs = 0;
    int timeouts = 0;
    double wall_mean_s = 0, wall_max_s = 0;
    double lowlevel_mean_s = 0;
    double feasible_mean = 0, infeasible_mean = 0;
    double checks_distinct_mean = 0;
    double restarts_mean = 0;
};

std::vector<SummaryRow> aggregate(const std::vector<RunReport>&);
std::string summary_csv(const std::vector<SummaryRow>&);
std::string summary_json(const std::vector<SummaryRow>&);

long peak_memory_bytes();

} // namespace hybplan
