#include "hybplan/core.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace hybplan {

Fluent make_fluent(int pred, std::initializer_list<int> args) {
    Fluent f;
    f.pred = static_cast<std::int16_t>(pred);
    f.arity = static_cast<std::int8_t>(args.size());
    assert(args.size() <= f.args.size());
    std::size_t i = 0;
    for (int a : args)
        f.args[i++] = static_cast<std::int16_t>(a);
    return f;
}

ActionInstance make_action(int schema, std::initializer_list<int> args) {
    ActionInstance a;
    a.schema = static_cast<std::int16_t>(schema);
    a.arity = static_cast<std::int8_t>(args.size());
    assert(args.size() <= a.args.size());
    std::size_t i = 0;
    for (int v : args)
        a.args[i++] = static_cast<std::int16_t>(v);
    return a;
}

void State::normalize() {
    std::sort(fluents.begin(), fluents.end());
    fluents.erase(std::unique(fluents.begin(), fluents.end()), fluents.end());
}

bool State::contains(const Fluent& f) const {
    return std::binary_search(fluents.begin(), fluents.end(), f);
}

bool State::contains_all(const std::vector<Fluent>& fs) const {
    for (const Fluent& f : fs)
        if (!contains(f))
            return false;
    return true;
}

void State::insert(const Fluent& f) {
    auto it = std::lower_bound(fluents.begin(), fluents.end(), f);
    if (it == fluents.end() || *it != f)
        fluents.insert(it, f);
}

void State::erase(const Fluent& f) {
    auto it = std::lower_bound(fluents.begin(), fluents.end(), f);
    if (it != fluents.end() && *it == f)
        fluents.erase(it);
}

std::size_t FluentHash::operator()(const Fluent& f) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint16_t>(f.pred));
    mix(static_cast<std::uint8_t>(f.arity));
    for (int i = 0; i < 4; ++i)
        mix(static_cast<std::uint16_t>(f.args[i]));
    return static_cast<std::size_t>(h);
}

std::size_t ActionInstanceHash::operator()(const ActionInstance& a) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint16_t>(a.schema));
    mix(static_cast<std::uint8_t>(a.arity));
    for (int i = 0; i < a.arity; ++i)
        mix(static_cast<std::uint16_t>(a.args[i]));
    return static_cast<std::size_t>(h);
}

std::size_t StateHash::operator()(const State& s) const {
    // FNV-1a over the packed fluent fields
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    for (const Fluent& f : s.fluents) {
        std::uint64_t packed = static_cast<std::uint16_t>(f.pred);
        for (int i = 0; i < 4; ++i)
            packed = packed << 12 ^ static_cast<std::uint16_t>(f.args[i]);
        mix(packed);
    }
    return static_cast<std::size_t>(h);
}

std::string PlanningProblem::fluent_str(const Fluent& f) const {
    std::ostringstream os;
    if (f.pred >= 0 && static_cast<std::size_t>(f.pred) < pred_names.size())
        os << pred_names[f.pred];
    else
        os << "p" << f.pred;
    if (f.arity > 0) {
        os << '(';
        for (int i = 0; i < f.arity; ++i)
            os << (i ? "," : "") << f.args[i];
        os << ')';
    }
    return os.str();
}

std::string PlanningProblem::action_str(const ActionInstance& a) const {
    std::ostringstream os;
    if (a.schema >= 0 && static_cast<std::size_t>(a.schema) < schemas.size())
        os << schemas[a.schema].name;
    else
        os << "a" << a.schema;
    os << '(';
    for (int i = 0; i < a.arity; ++i)
        os << (i ? "," : "") << a.args[i];
    os << ')';
    return os.str();
}

std::string PlanningProblem::state_str(const State& s) const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const Fluent& f : s.fluents) {
        os << (first ? "" : ", ") << fluent_str(f);
        first = false;
    }
    os << '}';
    return os.str();
}

std::string plan_signature(const PlanningProblem& problem, const PlanHistory& h) {
    std::ostringstream os;
    for (std::size_t i = 0; i < h.steps.size(); ++i) {
        os << "step " << i << ": {";
        for (std::size_t j = 0; j < h.steps[i].size(); ++j)
            os << (j ? ", " : "") << problem.action_str(h.steps[i][j]);
        os << "}\n";
    }
    return os.str();
}

State apply(const State& state, const std::vector<ActionInstance>& actions,
            const PlanningProblem& problem) {
    for (const ActionInstance& a : actions) {
        const ActionSchema& schema = problem.schemas.at(a.schema);
        if (!schema.precondition(state, a))
            throw PreconditionViolated(problem.action_str(a));
    }
    for (std::size_t i = 0; i < actions.size(); ++i)
        for (std::size_t j = i + 1; j < actions.size(); ++j)
            if (problem.conflicts(actions[i], actions[j]))
                throw ConflictingPair(problem.action_str(actions[i]),
                                      problem.action_str(actions[j]));

    std::vector<Fluent> adds, dels;
    std::vector<std::pair<Fluent, std::size_t>> add_by, del_by;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        std::vector<Fluent> add, del;
        problem.schemas.at(actions[i].schema).effect(state, actions[i], add, del);
        for (const Fluent& f : add) {
            adds.push_back(f);
            add_by.emplace_back(f, i);
        }
        for (const Fluent& f : del) {
            dels.push_back(f);
            del_by.emplace_back(f, i);
        }
    }
    // cross-action add/delete clash: must have been ruled out as a conflict
    for (const auto& [fa, ia] : add_by)
        for (const auto& [fd, id] : del_by)
            if (fa == fd && ia != id)
                throw ConflictingPair(problem.action_str(actions[ia]),
                                      problem.action_str(actions[id]));

    State result = state;
    for (const Fluent& f : dels)
        result.erase(f);
    for (const Fluent& f : adds)
        result.insert(f);
    return result;
}

bool validate_history(const PlanningProblem& problem, const PlanHistory& h,
                      std::string* diagnostic) {
    auto fail = [&](const std::string& why) {
        if (diagnostic)
            *diagnostic = why;
        return false;
    };
    if (h.states.size() != h.steps.size() + 1)
        return fail("states/steps length mismatch");
    if (h.states.empty())
        return fail("empty history");
    if (h.states.front() != problem.initial)
        return fail("history does not start at the initial state");
    for (std::size_t i = 0; i < h.steps.size(); ++i) {
        const State& s = h.states[i];
        for (const ActionInstance& a : h.steps[i])
            if (!problem.schemas.at(a.schema).precondition(s, a))
                return fail("precondition fails at step " + std::to_string(i) +
                            ": " + problem.action_str(a));
        for (std::size_t x = 0; x < h.steps[i].size(); ++x)
            for (std::size_t y = x + 1; y < h.steps[i].size(); ++y)
                if (problem.conflicts(h.steps[i][x], h.steps[i][y]))
                    return fail("conflicting pair at step " + std::to_string(i));
        State next;
        try {
            next = apply(s, h.steps[i], problem);
        } catch (const Error& e) {
            return fail(e.what());
        }
        if (next != h.states[i + 1])
            return fail("transition mismatch at step " + std::to_string(i));
        for (const Constraint& c : problem.constraints) {
            bool in_step = std::find(h.steps[i].begin(), h.steps[i].end(),
                                     c.forbidden) != h.steps[i].end();
            if (in_step && s.contains_all(c.context))
                return fail("constraint violated at step " + std::to_string(i) +
                            ": " + problem.action_str(c.forbidden));
        }
    }
    if (!problem.goal(h.states.back()))
        return fail("final state does not satisfy the goal");
    return true;
}

PlanningProblem add_constraints(const PlanningProblem& problem,
                                const std::vector<Constraint>& extra) {
    PlanningProblem out = problem;
    std::set<Constraint> seen(problem.constraints.begin(),
                              problem.constraints.end());
    for (const Constraint& c : extra) {
        if (seen.insert(c).second)
            out.constraints.push_back(c);
    }
    return out;
}

} // namespace hybplan
