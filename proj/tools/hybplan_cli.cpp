// Command-line front end: solve single instances, generate and validate
// instance files, precompute check tables, and run benchmark suites.

#include "hybplan/instance_io.hpp"
#include "hybplan/metrics.hpp"
#include "hybplan/precompute.hpp"
#include "hybplan/strategies.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace hybplan;

namespace {

struct CommonOpts {
    std::string strategy = "int";
    std::string assign;
    std::string mode = "first";
    std::string domain; // optional cross-check against the parsed file
    long max_plans = 10000;
    double timeout_s = 7200.0;
    int horizon = -1; // -1: keep the instance's own bound
    bool all_horizons = false;
    bool no_memo = false;
    bool parallel_pre = false;
    std::vector<std::string> cache_paths;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--strategy", o.strategy,
                    "pre, int, filt, repl, batchrepl:K, or pre+{int,filt,repl}");
    cmd->add_option("--assign", o.assign,
                    "per-module roles, e.g. reach=pre,balance=int");
    cmd->add_option("--mode", o.mode, "first or all")
        ->check(CLI::IsMember({"first", "all"}));
    cmd->add_option("--max-plans", o.max_plans, "plan/candidate cap");
    cmd->add_option("--timeout", o.timeout_s, "timeout in seconds");
    cmd->add_option("--horizon", o.horizon, "override the instance horizon");
    cmd->add_flag("--all-horizons", o.all_horizons,
                  "enumerate every horizon up to the bound, not only the "
                  "smallest feasible one");
    cmd->add_flag("--no-memo", o.no_memo, "disable duplicate-state pruning");
    cmd->add_flag("--parallel-pre", o.parallel_pre,
                  "fan precomputation out across threads");
    cmd->add_option("--domain", o.domain,
                    "expected domain; errors when the file disagrees")
        ->check(CLI::IsMember({"locomotion", "manipulation"}));
    cmd->add_option("--cache", o.cache_paths,
                    "check table(s) to preload (repeatable)");
}

RunOptions make_run_options(const CommonOpts& o) {
    RunOptions opts;
    opts.cfg.mode = mode_from_string(o.mode);
    opts.cfg.max_plans = o.max_plans;
    opts.cfg.timeout_s = o.timeout_s;
    opts.cfg.minimal_only = !o.all_horizons;
    opts.cfg.memoize = !o.no_memo;
    opts.parallel_precompute = o.parallel_pre;
    return opts;
}

std::string plan_text(const PlanningProblem& p,
                      const std::vector<PlanHistory>& plans) {
    std::ostringstream os;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        if (i)
            os << '\n';
        os << plan_signature(p, plans[i]);
    }
    return os.str();
}

nlohmann::json plans_json(const PlanningProblem& p,
                          const std::vector<PlanHistory>& plans) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PlanHistory& plan : plans) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& step : plan.steps) {
            nlohmann::json actions = nlohmann::json::array();
            for (const ActionInstance& a : step) {
                nlohmann::json action;
                action["name"] = p.schemas[a.schema].name;
                nlohmann::json args = nlohmann::json::array();
                for (int k = 0; k < a.arity; ++k)
                    args.push_back(a.args[k]);
                action["args"] = args;
                actions.push_back(action);
            }
            steps.push_back(actions);
        }
        arr.push_back({{"steps", steps}});
    }
    return arr;
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

int run_one(const std::string& instance_path, const CommonOpts& common,
            StrategyRun& out, DomainBundle& bundle) {
    const Instance inst = load_instance_file(instance_path);
    if (!common.domain.empty() && instance_domain(inst) != common.domain)
        throw Error("instance is a " + instance_domain(inst) +
                    " problem, not " + common.domain);
    bundle = build_bundle(inst);
    if (common.horizon >= 0)
        bundle.problem.horizon_max = common.horizon;

    CheckCache cache;
    std::vector<std::string> cache_paths = common.cache_paths;
    if (cache_paths.empty())
        if (const char* env = std::getenv("HYBPLAN_CACHE"))
            cache_paths.push_back(env);
    for (const std::string& path : cache_paths)
        load_check_table_file(path, bundle.modules, cache);

    StrategyAssignment assignment =
        assignment_from_string(common.strategy, bundle);
    apply_assignment_overrides(assignment, common.assign);

    out = run_assignment(bundle, assignment, cache, make_run_options(common));
    out.report.instance_id = instance_id(inst);
    return 0;
}

int cmd_solve(const std::string& instance_path, const CommonOpts& common,
              const std::string& report_path, const std::string& plans_path,
              const std::string& plans_json_path) {
    StrategyRun run;
    DomainBundle bundle;
    run_one(instance_path, common, run, bundle);

    std::cout << "status: " << to_string(run.report.status)
              << "  feasible: " << run.report.n_feasible
              << "  infeasible: " << run.report.n_infeasible
              << "  checks: " << run.report.checks_distinct << '/'
              << run.report.checks_total << "  restarts: "
              << run.report.n_restarts << '\n';
    if (!run.plans.empty())
        std::cout << plan_text(bundle.problem, run.plans);

    if (!report_path.empty()) {
        std::ofstream os(report_path);
        os << report_json(run.report) << '\n';
    }
    if (!plans_path.empty()) {
        std::ofstream os(plans_path);
        os << plan_text(bundle.problem, run.plans);
    }
    if (!plans_json_path.empty()) {
        std::ofstream os(plans_json_path);
        os << plans_json(bundle.problem, run.plans).dump(2) << '\n';
    }

    if (run.report.n_feasible > 0)
        return 0;
    if (run.report.status == TermStatus::NoPlanExists)
        return 1;
    return 2; // ran out of time or budget without a feasible plan
}

int cmd_validate(const std::string& instance_path) {
    const Instance inst = load_instance_file(instance_path);
    validate_instance(inst);
    std::cout << instance_id(inst) << ": valid "
              << instance_domain(inst) << " instance\n";
    return 0;
}

int cmd_gen(const std::string& domain, int count, unsigned seed,
            const std::string& out_dir, double budget) {
    GenOptions opts;
    opts.solve_timeout_s = budget;
    const auto suite = generate_suite(domain, count, seed, opts);
    fs::create_directories(out_dir);

    std::ofstream meta(fs::path(out_dir) / (domain + "_meta.csv"));
    meta << "id,domain,grid,obstacles,goal_distance,horizon\n";
    for (const SuiteEntry& entry : suite) {
        const std::string id = instance_id(entry.instance);
        const std::string ext =
            instance_domain(entry.instance) == "locomotion" ? ".loc" : ".man";
        save_instance_file((fs::path(out_dir) / (id + ext)).string(),
                           entry.instance);
        const int horizon = std::visit(
            [](const auto& i) { return i.horizon_max; }, entry.instance);
        meta << id << ',' << instance_domain(entry.instance) << ','
             << entry.grid << ',' << entry.n_obstacles << ','
             << entry.goal_distance << ',' << horizon << '\n';
    }
    std::cout << "wrote " << suite.size() << " instances to " << out_dir
              << '\n';
    return 0;
}

int cmd_precompute(const std::string& instance_path, const std::string& module_id,
                   const std::string& out_path, bool parallel) {
    const Instance inst = load_instance_file(instance_path);
    const DomainBundle bundle = build_bundle(inst);
    const CheckModule* module = bundle.module(module_id);
    if (!module)
        throw Error("no such check module: " + module_id);

    CheckCache cache;
    const PrecomputeStats stats = parallel ? precompute_parallel(*module, cache)
                                           : precompute_serial(*module, cache);
    write_check_table_file(out_path, *module, cache);
    std::cout << module_id << ": " << stats.keys << " keys, " << stats.failed
              << " infeasible, " << stats.wall_s << " s\n";
    return 0;
}

int cmd_bench(const std::string& suite_dir,
              const std::vector<std::string>& strategies,
              const std::vector<std::string>& modes, const CommonOpts& common,
              const std::string& report_path, const std::string& summary_path,
              const std::string& summary_json_path,
              const std::string& json_path) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(suite_dir)) {
        const std::string ext = entry.path().extension().string();
        if (ext == ".loc" || ext == ".man")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw Error("no instances in " + suite_dir);

    // resume: skip rows already present
    std::set<std::string> done;
    bool have_report = fs::exists(report_path);
    if (have_report) {
        std::ifstream is(report_path);
        std::string line;
        std::getline(is, line); // header
        while (std::getline(is, line)) {
            std::stringstream ss(line);
            std::string instance, domain, strategy, mode;
            std::getline(ss, instance, ',');
            std::getline(ss, domain, ',');
            std::getline(ss, strategy, ',');
            std::getline(ss, mode, ',');
            done.insert(instance + '|' + strategy + '|' + mode);
        }
    }

    std::ofstream os(report_path, std::ios::app);
    if (!have_report)
        os << report_csv_header() << '\n';

    std::vector<RunReport> reports;
    long executed = 0, skipped = 0;
    for (const std::string& file : files) {
        for (const std::string& strategy : strategies) {
            for (const std::string& mode : modes) {
                std::string id = fs::path(file).stem().string();
                if (done.count(id + '|' + strategy + '|' + mode)) {
                    ++skipped;
                    continue;
                }
                CommonOpts row = common;
                row.strategy = strategy;
                row.mode = mode;
                RunReport rep;
                try {
                    StrategyRun run;
                    DomainBundle bundle;
                    run_one(file, row, run, bundle);
                    rep = run.report;
                } catch (const std::exception& e) {
                    std::cerr << id << '/' << strategy << '/' << mode
                              << " failed: " << e.what() << '\n';
                    rep.instance_id = id;
                    rep.strategy = strategy;
                    rep.mode = mode_from_string(mode);
                    os << id << ",error," << strategy << ',' << mode
                       << ",Error,0,0,0,0,0,0,0\n";
                    os.flush();
                    continue;
                }
                os << report_csv_row(rep) << '\n';
                os.flush();
                reports.push_back(rep);
                ++executed;
            }
        }
    }
    std::cout << "bench: " << executed << " runs, " << skipped
              << " skipped (already in report)\n";

    if (!reports.empty()) {
        const auto summary = aggregate(reports);
        if (!summary_path.empty()) {
            std::ofstream sos(summary_path);
            sos << summary_csv(summary);
        }
        if (!summary_json_path.empty()) {
            std::ofstream sjs(summary_json_path);
            sjs << summary_json(summary) << '\n';
        }
        if (!json_path.empty()) {
            std::ofstream jos(json_path);
            nlohmann::json arr = nlohmann::json::array();
            for (const RunReport& r : reports)
                arr.push_back(nlohmann::json::parse(report_json(r)));
            jos << arr.dump(2) << '\n';
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid task planning with pluggable feasibility checks"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve one instance");
    std::string instance_path;
    CommonOpts solve_opts;
    std::string report_path = env_or("HYBPLAN_REPORT", "");
    std::string plans_path, plans_json_path;
    solve->add_option("--instance", instance_path, "instance file")->required();
    add_common(solve, solve_opts);
    solve->add_option("--report", report_path, "write a JSON run report");
    solve->add_option("--plans", plans_path, "write plan text");
    solve->add_option("--plans-json", plans_json_path, "write plans as JSON");

    // validate
    auto* validate = app.add_subcommand("validate", "parse and validate");
    std::string validate_path;
    validate->add_option("--instance", validate_path, "instance file")
        ->required();

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance suite");
    std::string gen_domain = "locomotion", gen_out = "suite";
    int gen_count = 1;
    unsigned gen_seed = 1;
    double gen_budget = 5.0;
    gen->add_option("--domain", gen_domain, "locomotion or manipulation")
        ->check(CLI::IsMember({"locomotion", "manipulation"}));
    gen->add_option("--count", gen_count, "instances to generate")->required();
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--budget", gen_budget,
                    "solvability filter budget per instance (seconds)");

    // precompute
    auto* pre = app.add_subcommand("precompute", "evaluate a whole input space");
    std::string pre_instance, pre_module, pre_out;
    bool pre_parallel = false;
    pre->add_option("--instance", pre_instance, "instance file")->required();
    pre->add_option("--module", pre_module, "check module id")->required();
    pre->add_option("--out", pre_out, "output table path")->required();
    pre->add_flag("--parallel", pre_parallel, "use all cores");

    // bench
    auto* bench = app.add_subcommand("bench", "run a suite cross product");
    std::string bench_dir;
    std::string bench_report = env_or("HYBPLAN_REPORT", "bench.csv");
    std::string bench_summary, bench_summary_json, bench_json;
    std::string bench_strategies = "int";
    std::string bench_modes = "first";
    CommonOpts bench_opts;
    bench->add_option("--suite", bench_dir, "suite directory")->required();
    bench->add_option("--strategies", bench_strategies,
                      "comma list of strategy strings");
    bench->add_option("--modes", bench_modes, "comma list of first/all");
    bench->add_option("--report", bench_report, "rows CSV (resumable)");
    bench->add_option("--summary", bench_summary, "summary CSV");
    bench->add_option("--summary-json", bench_summary_json, "summary JSON");
    bench->add_option("--json", bench_json, "full reports as JSON");
    add_common(bench, bench_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    auto split_csv = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                out.push_back(item);
        return out;
    };

    try {
        if (solve->parsed())
            return cmd_solve(instance_path, solve_opts, report_path, plans_path,
                             plans_json_path);
        if (validate->parsed())
            return cmd_validate(validate_path);
        if (gen->parsed())
            return cmd_gen(gen_domain, gen_count, gen_seed, gen_out, gen_budget);
        if (pre->parsed())
            return cmd_precompute(pre_instance, pre_module, pre_out,
                                  pre_parallel);
        if (bench->parsed())
            return cmd_bench(bench_dir, split_csv(bench_strategies),
                             split_csv(bench_modes), bench_opts, bench_report,
                             bench_summary, bench_summary_json, bench_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 3;
}
