#pragma once

#include "hybplan/errors.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hybplan {

// A ground atom: predicate id plus up to four small integer arguments.
// Predicate ids and arg meanings are assigned by the domain builder.
struct Fluent {
    std::int16_t pred = 0;
    std::array<std::int16_t, 4> args{};
    std::int8_t arity = 0;

    auto operator<=>(const Fluent&) const = default;
};

Fluent make_fluent(int pred, std::initializer_list<int> args);

// Finite set of fluents, kept sorted and unique.
struct State {
    std::vector<Fluent> fluents;

    void normalize();
    bool contains(const Fluent& f) const;
    bool contains_all(const std::vector<Fluent>& fs) const;
    void insert(const Fluent& f);
    void erase(const Fluent& f);

    auto operator<=>(const State&) const = default;
};

struct StateHash {
    std::size_t operator()(const State& s) const;
};

// A grounded action: schema id plus up to six integer arguments.
struct ActionInstance {
    std::int16_t schema = 0;
    std::array<std::int16_t, 6> args{};
    std::int8_t arity = 0;

    auto operator<=>(const ActionInstance&) const = default;
};

ActionInstance make_action(int schema, std::initializer_list<int> args);

struct ActionInstanceHash {
    std::size_t operator()(const ActionInstance& a) const;
};

struct FluentHash {
    std::size_t operator()(const Fluent& f) const;
};

struct ActionSchema {
    int id = 0;
    std::string name;
    // Appends every instance applicable in the given state, sorted by args.
    std::function<void(const State&, std::vector<ActionInstance>&)> instances;
    std::function<bool(const State&, const ActionInstance&)> precondition;
    // Deterministic add/delete effect on a state satisfying the precondition.
    std::function<void(const State&, const ActionInstance&,
                       std::vector<Fluent>& add, std::vector<Fluent>& del)>
        effect;
};

// Forbids `forbidden` in any state containing all of `context`.
struct Constraint {
    std::vector<Fluent> context; // sorted
    ActionInstance forbidden;

    auto operator<=>(const Constraint&) const = default;
};

struct PlanningProblem {
    State initial;
    std::function<bool(const State&)> goal;
    std::vector<ActionSchema> schemas; // index == schema id
    // true = the pair may not co-occur in one step
    std::function<bool(const ActionInstance&, const ActionInstance&)> conflicts;
    std::vector<Constraint> constraints;
    int horizon_max = 30;

    // printing tables, filled by the domain builder
    std::vector<std::string> pred_names;

    std::string fluent_str(const Fluent&) const;
    std::string action_str(const ActionInstance&) const;
    std::string state_str(const State&) const;
};

// Alternating state/step sequence: states.size() == steps.size() + 1.
struct PlanHistory {
    std::vector<State> states;
    std::vector<std::vector<ActionInstance>> steps;

    std::size_t length() const { return steps.size(); }
};

// Canonical text form of the step sequence; the identity of a plan.
std::string plan_signature(const PlanningProblem&, const PlanHistory&);

// Joint successor state. Throws PreconditionViolated / ConflictingPair.
// Concurrent effects combine as union of adds minus union of deletes;
// an add/delete clash between two actions is reported as a conflict.
State apply(const State& state, const std::vector<ActionInstance>& actions,
            const PlanningProblem& problem);

// True iff every history invariant holds and no constraint fires.
// Optional diagnostic describes the first violation found.
bool validate_history(const PlanningProblem&, const PlanHistory&,
                      std::string* diagnostic = nullptr);

// Returns a copy of the problem with the new constraints appended,
// duplicates (both incoming and already-present) dropped.
PlanningProblem add_constraints(const PlanningProblem&,
                                const std::vector<Constraint>&);

} // namespace hybplan
