#include "hybplan/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

#include <sys/resource.h>

namespace hybplan {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

std::string report_csv_header() {
    return "instance,domain,strategy,mode,status,wall_s,lowlevel_s,n_feas,"
           "n_infeas,checks_distinct,checks_total,restarts";
}

std::string report_csv_row(const RunReport& r) {
    std::ostringstream os;
    os << r.instance_id << ',' << r.domain << ',' << r.strategy << ','
       << to_string(r.mode) << ',' << to_string(r.status) << ',' << fmt(r.wall_s)
       << ',' << fmt(r.lowlevel_s) << ',' << r.n_feasible << ','
       << r.n_infeasible << ',' << r.checks_distinct << ',' << r.checks_total
       << ',' << r.n_restarts;
    return os.str();
}

std::string report_json(const RunReport& r) {
    nlohmann::json j;
    j["instance"] = r.instance_id;
    j["domain"] = r.domain;
    j["strategy"] = r.strategy;
    j["mode"] = to_string(r.mode);
    j["status"] = to_string(r.status);
    j["wall_s"] = r.wall_s;
    j["lowlevel_s"] = r.lowlevel_s;
    j["highlevel_s"] = r.highlevel_s();
    j["n_feas"] = r.n_feasible;
    j["n_infeas"] = r.n_infeasible;
    j["checks_distinct"] = r.checks_distinct;
    j["checks_total"] = r.checks_total;
    j["restarts"] = r.n_restarts;
    j["failed_keys"] = r.n_failed_keys;
    j["constraint_growth_strict"] = r.constraint_growth_strict;
    j["constraints_added"] = r.constraints_added;
    j["peak_memory_bytes"] = r.peak_memory_bytes;
    nlohmann::json modules = nlohmann::json::object();
    for (const auto& [id, c] : r.per_module) {
        modules[id] = {{"total", c.total_queries},
                       {"distinct", c.distinct_evaluations},
                       {"time_s", c.time_s}};
    }
    j["modules"] = modules;
    return j.dump(2);
}

std::vector<SummaryRow> aggregate(const std::vector<RunReport>& reports) {
    if (reports.empty())
        throw Error("aggregate needs at least one report");
    std::map<std::tuple<std::string, std::string, std::string>,
             std::vector<const RunReport*>>
        groups;
    for (const RunReport& r : reports)
        groups[{r.domain, r.strategy, to_string(r.mode)}].push_back(&r);

    std::vector<SummaryRow> rows;
    for (const auto& [key, rs] : groups) {
        SummaryRow row;
        std::tie(row.domain, row.strategy, row.mode) = key;
        row.runs = static_cast<int>(rs.size());
        for (const RunReport* r : rs) {
            if (r->status == TermStatus::Timeout)
                row.timeouts++;
            row.wall_mean_s += r->wall_s;
            row.wall_max_s = std::max(row.wall_max_s, r->wall_s);
            row.lowlevel_mean_s += r->lowlevel_s;
            row.feasible_mean += static_cast<double>(r->n_feasible);
            row.infeasible_mean += static_cast<double>(r->n_infeasible);
            row.checks_distinct_mean += static_cast<double>(r->checks_distinct);
            row.restarts_mean += static_cast<double>(r->n_restarts);
        }
        const double n = row.runs;
        row.wall_mean_s /= n;
        row.lowlevel_mean_s /= n;
        row.feasible_mean /= n;
        row.infeasible_mean /= n;
        row.checks_distinct_mean /= n;
        row.restarts_mean /= n;
        rows.push_back(row);
    }
    return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream os;
    os << "domain,strategy,mode,runs,timeouts,wall_mean_s,wall_max_s,"
          "lowlevel_mean_s,feas_mean,infeas_mean,checks_distinct_mean,"
          "restarts_mean\n";
    for (const SummaryRow& r : rows) {
        os << r.domain << ',' << r.strategy << ',' << r.mode << ',' << r.runs
           << ',' << r.timeouts << ',' << fmt(r.wall_mean_s) << ','
           << fmt(r.wall_max_s) << ',' << fmt(r.lowlevel_mean_s) << ','
           << fmt(r.feasible_mean) << ',' << fmt(r.infeasible_mean) << ','
           << fmt(r.checks_distinct_mean) << ',' << fmt(r.restarts_mean)
           << '\n';
    }
    return os.str();
}

std::string summary_json(const std::vector<SummaryRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SummaryRow& r : rows) {
        arr.push_back({{"domain", r.domain},
                       {"strategy", r.strategy},
                       {"mode", r.mode},
                       {"runs", r.runs},
                       {"timeouts", r.timeouts},
                       {"wall_mean_s", r.wall_mean_s},
                       {"wall_max_s", r.wall_max_s},
                       {"lowlevel_mean_s", r.lowlevel_mean_s},
                       {"feas_mean", r.feasible_mean},
                       {"infeas_mean", r.infeasible_mean},
                       {"checks_distinct_mean", r.checks_distinct_mean},
                       {"restarts_mean", r.restarts_mean}});
    }
    return arr.dump(2);
}

long peak_memory_bytes() {
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0)
        return 0;
    return usage.ru_maxrss * 1024L; // ru_maxrss is KiB on Linux
}

} // namespace hybplan
