#pragma once

#include "hybplan/core.hpp"
#include "hybplan/geometry.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hybplan {

struct Cell {
    int x = 0;
    int y = 0;
    auto operator<=>(const Cell&) const = default;
};

struct PayloadPose {
    Cell e1, e2;
    auto operator<=>(const PayloadPose&) const = default;
};

// ---- pure feasibility operations ----

// Center of mass inside the support polygon of the grounded legs
// (boundary-inclusive, degenerate hulls included).
bool statically_balanced(std::span<const geom::Point> legs, geom::Point cm);

bool within_reach(geom::Point leg, geom::Point cm, double reach);

// Linearly interpolated sweep of the payload segment from one pose to the
// other, sampled at the end poses plus `samples` intermediate poses; clear
// iff no sampled segment touches an obstacle cell.
bool payload_sweep_clear(const PayloadPose& from, const PayloadPose& to,
                         std::span<const Cell> obstacles, int samples = 8);

// Elbow-up two-link inverse kinematics; empty when the grip is out of reach.
std::optional<geom::Point> two_link_elbow(geom::Point base, geom::Point grip,
                                          double link_len);

// Both arms reach their grips and no link of one arm crosses a link of the
// other.
bool arms_clear(geom::Point grip1, geom::Point grip2, geom::Point base1,
                geom::Point base2, double link_len);

// ---- check keys, modules, cache ----

// Canonical encoding of exactly the inputs a check reads.
struct CheckKey {
    std::int16_t module = 0;
    std::array<std::int16_t, 10> v{};
    std::int8_t len = 0;

    auto operator<=>(const CheckKey&) const = default;
    std::string str() const;
};

struct CheckKeyHash {
    std::size_t operator()(const CheckKey& k) const;
};

// One check occurrence inside a transition: the cache key, the action that
// triggered it, and the pre-state fluents the check read. (context,trigger)
// is the constraint that excludes exactly the transitions re-deriving key.
struct ExtractedCheck {
    CheckKey key;
    ActionInstance trigger;
    std::vector<Fluent> context;
};

class CheckModule {
public:
    CheckModule(int module_id, std::string id)
        : module_id_(module_id), id_(std::move(id)) {}
    virtual ~CheckModule() = default;

    int module_id() const { return module_id_; }
    const std::string& id() const { return id_; }

    // Checks triggered by one action of a step, read against the pre-state.
    virtual void extract(const State& from, const ActionInstance& action,
                         std::vector<ExtractedCheck>& out) const = 0;

    void extract_step(const State& from,
                      const std::vector<ActionInstance>& step,
                      std::vector<ExtractedCheck>& out) const;

    // Pure verdict; a function of the key alone.
    virtual bool evaluate(const CheckKey& key) const = 0;

    virtual bool has_input_space() const { return false; }

    // Every key this module can ever produce. Throws
    // PrecomputationUnsupported when the space is not enumerable.
    virtual std::vector<CheckKey> input_space() const;

    // Full constraint family of a failed key: every (context, action) pair
    // from which the key can be re-derived.
    virtual std::vector<Constraint> constraints_for_key(const CheckKey&) const = 0;

protected:
    int module_id_;
    std::string id_;
};

struct CheckCounters {
    long total_queries = 0;
    long distinct_evaluations = 0;
    double time_s = 0.0;

    CheckCounters& operator+=(const CheckCounters& o);
    CheckCounters operator-(const CheckCounters& o) const;
};

// Verdict store with query counters. distinct_evaluations counts keys
// evaluated by this cache; preloaded entries hit without evaluating.
class CheckCache {
public:
    explicit CheckCache(bool enabled = true) : enabled_(enabled) {}

    bool query(const CheckModule& module, const CheckKey& key);

    void preload(const CheckKey& key, bool verdict);
    // Store an externally evaluated verdict, counted as an evaluation.
    void insert_evaluated(const CheckModule& module, const CheckKey& key,
                          bool verdict, double seconds);

    bool enabled() const { return enabled_; }
    std::size_t size() const;
    CheckCounters totals() const;
    std::map<std::string, CheckCounters> per_module() const;

    // Sorted (key, verdict) snapshot of one module's stored entries.
    std::vector<std::pair<CheckKey, bool>> snapshot(int module_id) const;

private:
    bool enabled_;
    mutable std::mutex mu_;
    std::unordered_map<CheckKey, bool, CheckKeyHash> table_;
    std::map<int, std::pair<std::string, CheckCounters>> counters_;

    CheckCounters& slot(const CheckModule& m);
};

} // namespace hybplan
