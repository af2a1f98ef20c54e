#pragma once

// Small shared fixtures for the unit and acceptance suites.

#include "hybplan/domains.hpp"

#include <random>

namespace hybplan::test {

// 3x3 grid, legs on the corners, goal one cell to the right; generous reach
// makes the single move_cm(2,1) a complete plan.
inline LocomotionInstance loco_easy() {
    LocomotionInstance inst;
    inst.id = "loco_easy";
    inst.grid = 3;
    inst.legs = {LegState{{0, 0}, true}, LegState{{0, 2}, true},
                 LegState{{2, 0}, true}, LegState{{2, 2}, true}};
    inst.cm = {1, 1};
    inst.goal = {2, 1};
    inst.reach = 2.5;
    inst.horizon_max = 4;
    return inst;
}

// Tight reach: the far corner goal (2,2) is out of reach of the leg at
// (0,0), so that leg must be re-planted before the last cm move. Minimal
// plans take three steps, e.g. {detach(0), move_cm(1,2)}, {place(0,1,1)},
// {move_cm(2,2)}.
inline LocomotionInstance loco_tight() {
    LocomotionInstance inst = loco_easy();
    inst.id = "loco_tight";
    inst.reach = 2.3;
    inst.goal = {2, 2};
    inst.horizon_max = 4;
    return inst;
}

// Both neighbors of the goal cell are occupied: no plan at any horizon.
inline LocomotionInstance loco_walled() {
    LocomotionInstance inst = loco_easy();
    inst.id = "loco_walled";
    inst.occupied = {{1, 2}, {2, 1}};
    inst.goal = {2, 2};
    inst.horizon_max = 4;
    return inst;
}

// Straight carry two cells up on a small grid, no obstacles. Bases sit on
// the bottom row so the elbow-up arms reach over the workspace.
inline ManipulationInstance man_corridor(int grid = 5) {
    ManipulationInstance inst;
    inst.id = "man_corridor";
    inst.grid = grid;
    inst.bases = {Cell{0, 0}, Cell{grid - 1, 0}};
    inst.payloads = {{{1, 1}, {2, 1}}};
    inst.goals = {{{1, 3}, {2, 3}}};
    inst.link_len = 2.5;
    inst.horizon_max = 6;
    return inst;
}

// An obstacle cell blocks the straight-line carry path; the goal sits one
// row higher so that neither end pose touches the closed obstacle square.
// Unsolvable within horizon 5 (the straight path length); a long detour
// around the right side exists within horizon 10.
inline ManipulationInstance man_blocked(int horizon = 5) {
    ManipulationInstance inst = man_corridor();
    inst.id = "man_blocked";
    inst.obstacles = {{1, 2}};
    inst.goals = {{{1, 4}, {2, 4}}};
    inst.horizon_max = horizon;
    return inst;
}

// Desk-scale randomized instances for cross-strategy equivalence: tiny
// grids, dense occupancy, short horizons, so the brute-force oracle stays
// cheap. Some are unsolvable; set equality still must hold.
inline LocomotionInstance loco_random(std::mt19937& rng, int idx) {
    for (;;) {
        LocomotionInstance inst;
        inst.id = "eq_loc_" + std::to_string(idx);
        inst.grid = 3;
        inst.seed = rng();
        std::mt19937 local(inst.seed);
        inst.legs = {LegState{{0, 0}, true}, LegState{{0, 2}, true},
                     LegState{{2, 0}, true}, LegState{{2, 2}, true}};
        inst.cm = {1, 1};
        std::uniform_int_distribution<int> coord(0, 2);
        const Cell goals[4] = {{0, 1}, {1, 0}, {1, 2}, {2, 1}};
        inst.goal = goals[local() % 4];
        inst.reach = (local() % 2) ? 2.5 : 1.6;
        // a couple of occupied cells away from the initial stance
        const Cell options[4] = {{1, 0}, {0, 1}, {1, 2}, {2, 1}};
        for (int k = 0; k < 2; ++k) {
            const Cell c = options[local() % 4];
            if (!(c == inst.goal))
                inst.occupied.push_back(c);
        }
        std::sort(inst.occupied.begin(), inst.occupied.end());
        inst.occupied.erase(
            std::unique(inst.occupied.begin(), inst.occupied.end()),
            inst.occupied.end());
        inst.horizon_max = 3;
        try {
            validate_instance(inst);
            return inst;
        } catch (const InvalidInstance&) {
            continue;
        }
    }
}

inline ManipulationInstance man_random(std::mt19937& rng, int idx) {
    for (;;) {
        ManipulationInstance inst;
        inst.id = "eq_man_" + std::to_string(idx);
        inst.grid = 4;
        inst.seed = rng();
        std::mt19937 local(inst.seed);
        inst.bases = {Cell{0, 0}, Cell{3, 0}};
        // the short arms cannot grip the upper corners: reach failures
        inst.link_len = (local() % 2) ? 2.5 : 1.6;
        std::uniform_int_distribution<int> coord(0, 3);
        std::uniform_int_distribution<int> coord1(1, 2);
        PayloadPose p{{coord1(local), coord1(local)}, {}};
        p.e2 = {p.e1.x + 1, p.e1.y}; // length 1, axis aligned
        inst.payloads = {p};
        PayloadPose g{{coord(local), coord(local)}, {}};
        g.e2 = {g.e1.x + 1, g.e1.y};
        if (!payload_pose_valid(g, inst.grid))
            continue;
        inst.goals = {g};
        if (local() % 2)
            inst.obstacles = {{coord(local), coord(local)}};
        inst.horizon_max = 4;
        try {
            validate_instance(inst);
            return inst;
        } catch (const InvalidInstance&) {
            continue;
        }
    }
}

} // namespace hybplan::test
