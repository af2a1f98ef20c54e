#pragma once

#include "hybplan/checks.hpp"
#include "hybplan/core.hpp"

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hybplan {

// ---- locomotion: a four-legged robot on a grid ----

// predicates
inline constexpr int LOC_LEG_AT = 0;   // leg_at(i, x, y)
inline constexpr int LOC_ATTACHED = 1; // attached(i)
inline constexpr int LOC_DETACHED = 2; // detached(i)
inline constexpr int LOC_CM_AT = 3;    // cm_at(x, y)
// schemas (alphabetical; ids define the canonical action order)
inline constexpr int LOC_DETACH = 0;  // detach(i)
inline constexpr int LOC_MOVE_CM = 1; // move_cm(x, y)
inline constexpr int LOC_PLACE = 2;   // place(i, x, y)

struct LegState {
    Cell pos;
    bool attached = true;
};

struct LocomotionInstance {
    std::string id = "loc";
    int grid = 10;
    unsigned seed = 0;
    std::vector<Cell> occupied; // sorted unique
    std::array<LegState, 4> legs{};
    Cell cm;
    Cell goal;
    double reach = 2.5;
    int horizon_max = 30;
};

// ---- manipulation: two arms carrying elongated payloads ----

// predicates
inline constexpr int MAN_ENDPOINT_AT = 0; // endpoint_at(obj, k, x, y)
inline constexpr int MAN_CARRIED = 1;     // carried(obj)
inline constexpr int MAN_FREE = 2;        // free()
// schemas
inline constexpr int MAN_MOVE_PAYLOAD = 0; // move_payload(obj, e1x,e1y,e2x,e2y)
inline constexpr int MAN_PICKUP = 1;       // pickup(obj)
inline constexpr int MAN_PUTDOWN = 2;      // putdown(obj)

struct ManipulationInstance {
    std::string id = "man";
    int grid = 11;
    unsigned seed = 0;
    std::vector<Cell> obstacles; // sorted unique
    std::array<Cell, 2> bases{};
    std::vector<PayloadPose> payloads;
    std::vector<PayloadPose> goals; // same order as payloads
    double link_len = 6.0;
    int sweep_samples = 8;
    int horizon_max = 40;
};

using Instance = std::variant<LocomotionInstance, ManipulationInstance>;

const std::string& instance_id(const Instance&);
std::string instance_domain(const Instance&);

// A pose is a lattice segment aligned to one of the eight king directions;
// its length is the Chebyshev extent.
bool payload_pose_valid(const PayloadPose&, int grid);
int payload_pose_length(const PayloadPose&);
std::vector<Cell> payload_cells(const PayloadPose&);

struct DomainBundle {
    std::string domain; // "locomotion" | "manipulation"
    PlanningProblem problem;
    std::vector<std::shared_ptr<CheckModule>> modules;

    const CheckModule* module(const std::string& id) const;
};

void validate_instance(const LocomotionInstance&);   // throws InvalidInstance
void validate_instance(const ManipulationInstance&); // throws InvalidInstance
void validate_instance(const Instance&);

DomainBundle build_locomotion(const LocomotionInstance&);
DomainBundle build_manipulation(const ManipulationInstance&);
DomainBundle build_bundle(const Instance&);

// ---- suite generation ----

struct SuiteEntry {
    Instance instance;
    // difficulty proxies
    int grid = 0;
    int n_obstacles = 0;
    int goal_distance = 0;
};

struct GenOptions {
    double solve_timeout_s = 5.0; // per-instance solvability budget (Int, first)
    int max_attempts_per_instance = 60;
    bool filter_solvable = true;
};

// Deterministic per seed; every entry passes its validator and (by default)
// is solvable by interleaved checking within the budget.
std::vector<SuiteEntry> generate_suite(const std::string& domain, int count,
                                       unsigned seed, const GenOptions& = {});

} // namespace hybplan
