#include "hybplan/domains.hpp"

#include "hybplan/planner.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <sstream>

namespace hybplan {

namespace {

int chebyshev(const Cell& a, const Cell& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

int manhattan(const Cell& a, const Cell& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

geom::Point to_point(const Cell& c) {
    return {static_cast<double>(c.x), static_cast<double>(c.y)};
}

bool in_grid(const Cell& c, int g) {
    return c.x >= 0 && c.x < g && c.y >= 0 && c.y < g;
}

std::vector<Cell> normalized(std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

bool contains_cell(const std::vector<Cell>& sorted, const Cell& c) {
    return std::binary_search(sorted.begin(), sorted.end(), c);
}

} // namespace

const std::string& instance_id(const Instance& inst) {
    return std::visit([](const auto& i) -> const std::string& { return i.id; },
                      inst);
}

std::string instance_domain(const Instance& inst) {
    return std::holds_alternative<LocomotionInstance>(inst) ? "locomotion"
                                                            : "manipulation";
}

bool payload_pose_valid(const PayloadPose& p, int grid) {
    if (!in_grid(p.e1, grid) || !in_grid(p.e2, grid))
        return false;
    const int dx = p.e2.x - p.e1.x, dy = p.e2.y - p.e1.y;
    if (dx == 0 && dy == 0)
        return false;
    return dx == 0 || dy == 0 || std::abs(dx) == std::abs(dy);
}

int payload_pose_length(const PayloadPose& p) {
    return chebyshev(p.e1, p.e2);
}

std::vector<Cell> payload_cells(const PayloadPose& p) {
    const int len = payload_pose_length(p);
    const int sx = (p.e2.x > p.e1.x) - (p.e2.x < p.e1.x);
    const int sy = (p.e2.y > p.e1.y) - (p.e2.y < p.e1.y);
    std::vector<Cell> cells;
    cells.reserve(len + 1);
    for (int k = 0; k <= len; ++k)
        cells.push_back({p.e1.x + k * sx, p.e1.y + k * sy});
    return cells;
}

const CheckModule* DomainBundle::module(const std::string& id) const {
    for (const auto& m : modules)
        if (m->id() == id)
            return m.get();
    return nullptr;
}

// ===================== locomotion =====================

namespace {

struct LocoView {
    std::array<Cell, 4> leg{};
    std::array<bool, 4> attached{};
    Cell cm;
    int n_attached = 0;
};

LocoView decode_loco(const State& s) {
    LocoView v;
    for (const Fluent& f : s.fluents) {
        switch (f.pred) {
        case LOC_LEG_AT:
            v.leg[f.args[0]] = {f.args[1], f.args[2]};
            break;
        case LOC_ATTACHED:
            v.attached[f.args[0]] = true;
            break;
        case LOC_CM_AT:
            v.cm = {f.args[0], f.args[1]};
            break;
        default:
            break;
        }
    }
    for (bool a : v.attached)
        if (a)
            v.n_attached++;
    return v;
}

// support configuration after performing a single action
struct BalanceConfig {
    std::vector<Cell> legs; // attached positions, sorted
    Cell cm;
};

BalanceConfig post_config(const LocoView& v, const ActionInstance& a) {
    std::array<Cell, 4> leg = v.leg;
    std::array<bool, 4> attached = v.attached;
    Cell cm = v.cm;
    switch (a.schema) {
    case LOC_DETACH:
        attached[a.args[0]] = false;
        break;
    case LOC_MOVE_CM:
        cm = {a.args[0], a.args[1]};
        break;
    case LOC_PLACE:
        attached[a.args[0]] = true;
        leg[a.args[0]] = {a.args[1], a.args[2]};
        break;
    }
    BalanceConfig cfg;
    cfg.cm = cm;
    for (int i = 0; i < 4; ++i)
        if (attached[i])
            cfg.legs.push_back(leg[i]);
    std::sort(cfg.legs.begin(), cfg.legs.end());
    return cfg;
}

class BalanceModule final : public CheckModule {
public:
    BalanceModule() : CheckModule(0, "balance") {}

    void extract(const State& from, const ActionInstance& a,
                 std::vector<ExtractedCheck>& out) const override {
        const LocoView v = decode_loco(from);
        const BalanceConfig cfg = post_config(v, a);

        ExtractedCheck ec;
        ec.key.module = module_id_;
        for (const Cell& c : cfg.legs) {
            ec.key.v[ec.key.len++] = static_cast<std::int16_t>(c.x);
            ec.key.v[ec.key.len++] = static_cast<std::int16_t>(c.y);
        }
        ec.key.v[ec.key.len++] = static_cast<std::int16_t>(cfg.cm.x);
        ec.key.v[ec.key.len++] = static_cast<std::int16_t>(cfg.cm.y);
        ec.trigger = a;

        // the read set: attachment mask of every leg, positions of attached
        // legs that persist into the configuration, cm unless a moves it
        for (int j = 0; j < 4; ++j) {
            if (v.attached[j]) {
                ec.context.push_back(make_fluent(LOC_ATTACHED, {j}));
                if (!(a.schema == LOC_DETACH && a.args[0] == j))
                    ec.context.push_back(make_fluent(
                        LOC_LEG_AT, {j, v.leg[j].x, v.leg[j].y}));
            } else {
                ec.context.push_back(make_fluent(LOC_DETACHED, {j}));
            }
        }
        if (a.schema != LOC_MOVE_CM)
            ec.context.push_back(make_fluent(LOC_CM_AT, {v.cm.x, v.cm.y}));
        std::sort(ec.context.begin(), ec.context.end());
        out.push_back(std::move(ec));
    }

    bool evaluate(const CheckKey& key) const override {
        const int n = (key.len - 2) / 2;
        std::vector<geom::Point> legs;
        legs.reserve(n);
        for (int i = 0; i < n; ++i)
            legs.push_back({static_cast<double>(key.v[2 * i]),
                            static_cast<double>(key.v[2 * i + 1])});
        const geom::Point cm{static_cast<double>(key.v[2 * n]),
                             static_cast<double>(key.v[2 * n + 1])};
        return statically_balanced(legs, cm);
    }

    std::vector<Constraint> constraints_for_key(const CheckKey& key) const override {
        const int n = (key.len - 2) / 2;
        std::vector<Cell> pos(n);
        for (int i = 0; i < n; ++i)
            pos[i] = {key.v[2 * i], key.v[2 * i + 1]};
        const Cell cm{key.v[2 * n], key.v[2 * n + 1]};

        std::set<Constraint> family;

        // every injective assignment of `slots` positions to legs in `pool`
        auto assignments = [](const std::vector<Cell>& slots,
                              const std::vector<int>& pool) {
            std::vector<std::vector<int>> result;
            std::vector<int> cur;
            std::vector<bool> used(4, false);
            auto rec = [&](auto&& self, std::size_t s) -> void {
                if (s == slots.size()) {
                    result.push_back(cur);
                    return;
                }
                for (int leg : pool) {
                    if (used[leg])
                        continue;
                    used[leg] = true;
                    cur.push_back(leg);
                    self(self, s + 1);
                    cur.pop_back();
                    used[leg] = false;
                }
            };
            rec(rec, 0);
            return result;
        };

        auto base_context = [&](const std::vector<Cell>& slots,
                                const std::vector<int>& assign) {
            std::vector<Fluent> ctx;
            std::vector<bool> is_attached(4, false);
            for (std::size_t s = 0; s < slots.size(); ++s) {
                is_attached[assign[s]] = true;
                ctx.push_back(make_fluent(LOC_ATTACHED, {assign[s]}));
                ctx.push_back(make_fluent(
                    LOC_LEG_AT, {assign[s], slots[s].x, slots[s].y}));
            }
            return std::pair(ctx, is_attached);
        };

        const std::vector<int> all_legs{0, 1, 2, 3};

        // producer: move_cm(cm) with the legs already in place
        for (const auto& assign : assignments(pos, all_legs)) {
            auto [ctx, att] = base_context(pos, assign);
            for (int k = 0; k < 4; ++k)
                if (!att[k])
                    ctx.push_back(make_fluent(LOC_DETACHED, {k}));
            std::sort(ctx.begin(), ctx.end());
            family.insert({std::move(ctx), make_action(LOC_MOVE_CM, {cm.x, cm.y})});
        }

        // producer: detach(i) dropping the fourth leg (any position)
        if (n >= 2) {
            for (int i = 0; i < 4; ++i) {
                std::vector<int> pool;
                for (int k = 0; k < 4; ++k)
                    if (k != i)
                        pool.push_back(k);
                for (const auto& assign : assignments(pos, pool)) {
                    auto [ctx, att] = base_context(pos, assign);
                    ctx.push_back(make_fluent(LOC_ATTACHED, {i}));
                    att[i] = true;
                    for (int k = 0; k < 4; ++k)
                        if (!att[k])
                            ctx.push_back(make_fluent(LOC_DETACHED, {k}));
                    ctx.push_back(make_fluent(LOC_CM_AT, {cm.x, cm.y}));
                    std::sort(ctx.begin(), ctx.end());
                    family.insert({std::move(ctx), make_action(LOC_DETACH, {i})});
                }
            }
        }

        // producer: place(i, p) landing on one of the configuration cells
        std::vector<Cell> values(pos);
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (const Cell& p : values) {
            std::vector<Cell> rest = pos;
            rest.erase(std::find(rest.begin(), rest.end(), p));
            for (int i = 0; i < 4; ++i) {
                std::vector<int> pool;
                for (int k = 0; k < 4; ++k)
                    if (k != i)
                        pool.push_back(k);
                for (const auto& assign : assignments(rest, pool)) {
                    auto [ctx, att] = base_context(rest, assign);
                    ctx.push_back(make_fluent(LOC_DETACHED, {i}));
                    for (int k = 0; k < 4; ++k)
                        if (!att[k] && k != i)
                            ctx.push_back(make_fluent(LOC_DETACHED, {k}));
                    ctx.push_back(make_fluent(LOC_CM_AT, {cm.x, cm.y}));
                    std::sort(ctx.begin(), ctx.end());
                    family.insert(
                        {std::move(ctx), make_action(LOC_PLACE, {i, p.x, p.y})});
                }
            }
        }

        return {family.begin(), family.end()};
    }
};

class ReachModule final : public CheckModule {
public:
    ReachModule(int grid, double reach)
        : CheckModule(1, "reach"), grid_(grid), reach_(reach) {}

    void extract(const State& from, const ActionInstance& a,
                 std::vector<ExtractedCheck>& out) const override {
        if (a.schema == LOC_PLACE) {
            const LocoView v = decode_loco(from);
            ExtractedCheck ec;
            ec.key = make_key(a.args[1], a.args[2], v.cm.x, v.cm.y);
            ec.trigger = a;
            ec.context = {make_fluent(LOC_CM_AT, {v.cm.x, v.cm.y})};
            out.push_back(std::move(ec));
        } else if (a.schema == LOC_MOVE_CM) {
            const LocoView v = decode_loco(from);
            for (int j = 0; j < 4; ++j) {
                if (!v.attached[j])
                    continue;
                ExtractedCheck ec;
                ec.key = make_key(v.leg[j].x, v.leg[j].y, a.args[0], a.args[1]);
                ec.trigger = a;
                ec.context = {make_fluent(LOC_LEG_AT, {j, v.leg[j].x, v.leg[j].y}),
                              make_fluent(LOC_ATTACHED, {j})};
                std::sort(ec.context.begin(), ec.context.end());
                out.push_back(std::move(ec));
            }
        }
    }

    bool evaluate(const CheckKey& key) const override {
        return within_reach({static_cast<double>(key.v[0]),
                             static_cast<double>(key.v[1])},
                            {static_cast<double>(key.v[2]),
                             static_cast<double>(key.v[3])},
                            reach_);
    }

    bool has_input_space() const override { return true; }

    std::vector<CheckKey> input_space() const override {
        std::vector<CheckKey> keys;
        keys.reserve(static_cast<std::size_t>(grid_) * grid_ * grid_ * grid_);
        for (int lx = 0; lx < grid_; ++lx)
            for (int ly = 0; ly < grid_; ++ly)
                for (int cx = 0; cx < grid_; ++cx)
                    for (int cy = 0; cy < grid_; ++cy)
                        keys.push_back(make_key(lx, ly, cx, cy));
        return keys;
    }

    std::vector<Constraint> constraints_for_key(const CheckKey& key) const override {
        const int lx = key.v[0], ly = key.v[1], cx = key.v[2], cy = key.v[3];
        std::vector<Constraint> family;
        for (int i = 0; i < 4; ++i)
            family.push_back({{make_fluent(LOC_CM_AT, {cx, cy})},
                              make_action(LOC_PLACE, {i, lx, ly})});
        for (int j = 0; j < 4; ++j) {
            std::vector<Fluent> ctx{make_fluent(LOC_LEG_AT, {j, lx, ly}),
                                    make_fluent(LOC_ATTACHED, {j})};
            std::sort(ctx.begin(), ctx.end());
            family.push_back({std::move(ctx), make_action(LOC_MOVE_CM, {cx, cy})});
        }
        return family;
    }

private:
    CheckKey make_key(int lx, int ly, int cx, int cy) const {
        CheckKey k;
        k.module = static_cast<std::int16_t>(module_id_);
        k.v[0] = static_cast<std::int16_t>(lx);
        k.v[1] = static_cast<std::int16_t>(ly);
        k.v[2] = static_cast<std::int16_t>(cx);
        k.v[3] = static_cast<std::int16_t>(cy);
        k.len = 4;
        return k;
    }

    int grid_;
    double reach_;
};

} // namespace

void validate_instance(const LocomotionInstance& inst) {
    if (inst.grid < 2)
        throw InvalidInstance("grid must be at least 2");
    const auto occ = normalized(inst.occupied);
    for (const Cell& c : occ)
        if (!in_grid(c, inst.grid))
            throw InvalidInstance("occupied cell out of bounds");
    if (!in_grid(inst.cm, inst.grid))
        throw InvalidInstance("cm out of bounds");
    if (!in_grid(inst.goal, inst.grid))
        throw InvalidInstance("goal out of bounds");
    if (contains_cell(occ, inst.goal))
        throw InvalidInstance("goal cell is occupied");
    if (contains_cell(occ, inst.cm))
        throw InvalidInstance("cm on an occupied cell");
    if (inst.reach <= 0)
        throw InvalidInstance("reach must be positive");

    std::vector<geom::Point> attached;
    for (int i = 0; i < 4; ++i) {
        const LegState& leg = inst.legs[i];
        if (!in_grid(leg.pos, inst.grid))
            throw InvalidInstance("leg " + std::to_string(i) + " out of bounds");
        if (!leg.attached)
            continue;
        if (contains_cell(occ, leg.pos))
            throw InvalidInstance("leg " + std::to_string(i) +
                                  " on an occupied cell");
        if (!within_reach(to_point(leg.pos), to_point(inst.cm), inst.reach))
            throw InvalidInstance("leg " + std::to_string(i) +
                                  " beyond reach of cm");
        attached.push_back(to_point(leg.pos));
    }
    if (attached.size() < 2)
        throw InvalidInstance("need at least two attached legs");
    if (!statically_balanced(attached, to_point(inst.cm)))
        throw InvalidInstance("initial configuration is not balanced");
}

DomainBundle build_locomotion(const LocomotionInstance& inst) {
    validate_instance(inst);

    const int g = inst.grid;
    const auto occupied = std::make_shared<std::vector<Cell>>(normalized(inst.occupied));
    const Cell goal = inst.goal;
    const double reach = inst.reach;

    PlanningProblem p;
    p.horizon_max = inst.horizon_max;
    p.pred_names = {"leg_at", "attached", "detached", "cm_at"};

    for (int i = 0; i < 4; ++i) {
        p.initial.insert(make_fluent(LOC_LEG_AT,
                                     {i, inst.legs[i].pos.x, inst.legs[i].pos.y}));
        p.initial.insert(make_fluent(
            inst.legs[i].attached ? LOC_ATTACHED : LOC_DETACHED, {i}));
    }
    p.initial.insert(make_fluent(LOC_CM_AT, {inst.cm.x, inst.cm.y}));

    p.goal = [goal, reach](const State& s) {
        const LocoView v = decode_loco(s);
        if (v.cm != goal || v.n_attached != 4)
            return false;
        for (int i = 0; i < 4; ++i)
            if (!within_reach(to_point(v.leg[i]), to_point(goal), reach))
                return false;
        return true;
    };

    ActionSchema detach;
    detach.id = LOC_DETACH;
    detach.name = "detach";
    detach.instances = [](const State& s, std::vector<ActionInstance>& out) {
        const LocoView v = decode_loco(s);
        if (v.n_attached < 3)
            return;
        for (int i = 0; i < 4; ++i)
            if (v.attached[i])
                out.push_back(make_action(LOC_DETACH, {i}));
    };
    detach.precondition = [](const State& s, const ActionInstance& a) {
        const LocoView v = decode_loco(s);
        return v.attached[a.args[0]] && v.n_attached >= 3;
    };
    detach.effect = [](const State&, const ActionInstance& a,
                       std::vector<Fluent>& add, std::vector<Fluent>& del) {
        del.push_back(make_fluent(LOC_ATTACHED, {a.args[0]}));
        add.push_back(make_fluent(LOC_DETACHED, {a.args[0]}));
    };

    ActionSchema move_cm;
    move_cm.id = LOC_MOVE_CM;
    move_cm.name = "move_cm";
    move_cm.instances = [g, occupied](const State& s,
                                      std::vector<ActionInstance>& out) {
        const LocoView v = decode_loco(s);
        static constexpr int dx[4] = {-1, 0, 0, 1};
        static constexpr int dy[4] = {0, -1, 1, 0};
        std::vector<ActionInstance> cand;
        for (int k = 0; k < 4; ++k) {
            const Cell c{v.cm.x + dx[k], v.cm.y + dy[k]};
            if (in_grid(c, g) && !contains_cell(*occupied, c))
                cand.push_back(make_action(LOC_MOVE_CM, {c.x, c.y}));
        }
        std::sort(cand.begin(), cand.end());
        out.insert(out.end(), cand.begin(), cand.end());
    };
    move_cm.precondition = [g, occupied](const State& s, const ActionInstance& a) {
        const LocoView v = decode_loco(s);
        const Cell c{a.args[0], a.args[1]};
        return in_grid(c, g) && !contains_cell(*occupied, c) &&
               manhattan(v.cm, c) == 1;
    };
    move_cm.effect = [](const State& s, const ActionInstance& a,
                        std::vector<Fluent>& add, std::vector<Fluent>& del) {
        const LocoView v = decode_loco(s);
        del.push_back(make_fluent(LOC_CM_AT, {v.cm.x, v.cm.y}));
        add.push_back(make_fluent(LOC_CM_AT, {a.args[0], a.args[1]}));
    };

    ActionSchema place;
    place.id = LOC_PLACE;
    place.name = "place";
    place.instances = [g, occupied](const State& s,
                                    std::vector<ActionInstance>& out) {
        const LocoView v = decode_loco(s);
        for (int i = 0; i < 4; ++i) {
            if (v.attached[i])
                continue;
            for (int x = 0; x < g; ++x)
                for (int y = 0; y < g; ++y)
                    if (!contains_cell(*occupied, {x, y}))
                        out.push_back(make_action(LOC_PLACE, {i, x, y}));
        }
    };
    place.precondition = [g, occupied](const State& s, const ActionInstance& a) {
        const LocoView v = decode_loco(s);
        const Cell c{a.args[1], a.args[2]};
        return !v.attached[a.args[0]] && in_grid(c, g) &&
               !contains_cell(*occupied, c);
    };
    place.effect = [](const State& s, const ActionInstance& a,
                      std::vector<Fluent>& add, std::vector<Fluent>& del) {
        const LocoView v = decode_loco(s);
        const int i = a.args[0];
        del.push_back(make_fluent(LOC_DETACHED, {i}));
        del.push_back(make_fluent(LOC_LEG_AT, {i, v.leg[i].x, v.leg[i].y}));
        add.push_back(make_fluent(LOC_ATTACHED, {i}));
        add.push_back(make_fluent(LOC_LEG_AT, {i, a.args[1], a.args[2]}));
    };

    p.schemas = {detach, move_cm, place};

    p.conflicts = [](const ActionInstance& a, const ActionInstance& b) {
        if (a.schema == LOC_MOVE_CM && b.schema == LOC_MOVE_CM)
            return true;
        // one leg leaves the ground at a time; per-action preconditions
        // then keep at least two legs attached through any step
        if (a.schema == LOC_DETACH && b.schema == LOC_DETACH)
            return true;
        // leg placement is relative to a stationary cm
        if ((a.schema == LOC_PLACE && b.schema == LOC_MOVE_CM) ||
            (a.schema == LOC_MOVE_CM && b.schema == LOC_PLACE))
            return true;
        const bool a_leg = a.schema == LOC_DETACH || a.schema == LOC_PLACE;
        const bool b_leg = b.schema == LOC_DETACH || b.schema == LOC_PLACE;
        if (a_leg && b_leg && a.args[0] == b.args[0])
            return true;
        return false;
    };

    DomainBundle bundle;
    bundle.domain = "locomotion";
    bundle.problem = std::move(p);
    bundle.modules = {std::make_shared<BalanceModule>(),
                      std::make_shared<ReachModule>(g, reach)};
    return bundle;
}

// ===================== manipulation =====================

namespace {

struct ManView {
    std::vector<PayloadPose> poses;
    int carried = -1; // object id or -1
    bool free = false;
};

ManView decode_man(const State& s, int n_objects) {
    ManView v;
    v.poses.resize(n_objects);
    for (const Fluent& f : s.fluents) {
        switch (f.pred) {
        case MAN_ENDPOINT_AT:
            if (f.args[1] == 0)
                v.poses[f.args[0]].e1 = {f.args[2], f.args[3]};
            else
                v.poses[f.args[0]].e2 = {f.args[2], f.args[3]};
            break;
        case MAN_CARRIED:
            v.carried = f.args[0];
            break;
        case MAN_FREE:
            v.free = true;
            break;
        default:
            break;
        }
    }
    return v;
}

// cells of every object except `skip` (pass -1 to keep all)
std::vector<Cell> other_object_cells(const ManView& v, int skip) {
    std::vector<Cell> cells;
    for (std::size_t o = 0; o < v.poses.size(); ++o) {
        if (static_cast<int>(o) == skip)
            continue;
        auto oc = payload_cells(v.poses[o]);
        cells.insert(cells.end(), oc.begin(), oc.end());
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

bool cells_disjoint(const std::vector<Cell>& sorted_a,
                    const std::vector<Cell>& b) {
    for (const Cell& c : b)
        if (contains_cell(sorted_a, c))
            return false;
    return true;
}

CheckKey pose_key(int module_id, const PayloadPose& pose) {
    CheckKey k;
    k.module = static_cast<std::int16_t>(module_id);
    k.v[0] = static_cast<std::int16_t>(pose.e1.x);
    k.v[1] = static_cast<std::int16_t>(pose.e1.y);
    k.v[2] = static_cast<std::int16_t>(pose.e2.x);
    k.v[3] = static_cast<std::int16_t>(pose.e2.y);
    k.len = 4;
    return k;
}

PayloadPose key_pose(const CheckKey& k) {
    return {{k.v[0], k.v[1]}, {k.v[2], k.v[3]}};
}

// shared extraction/constraint scheme of the two pose-keyed modules:
// move_payload carries the pose in its arguments, pickup reads it from
// the current endpoint fluents
class PoseCheckModule : public CheckModule {
public:
    PoseCheckModule(int module_id, std::string id, int grid, int n_objects)
        : CheckModule(module_id, std::move(id)), grid_(grid),
          n_objects_(n_objects) {}

    void extract(const State& from, const ActionInstance& a,
                 std::vector<ExtractedCheck>& out) const override {
        if (a.schema == MAN_MOVE_PAYLOAD) {
            ExtractedCheck ec;
            ec.key = pose_key(module_id_,
                              {{a.args[1], a.args[2]}, {a.args[3], a.args[4]}});
            ec.trigger = a;
            out.push_back(std::move(ec));
        } else if (a.schema == MAN_PICKUP) {
            const ManView v = decode_man(from, n_objects_);
            const PayloadPose& pose = v.poses[a.args[0]];
            ExtractedCheck ec;
            ec.key = pose_key(module_id_, pose);
            ec.trigger = a;
            ec.context = {
                make_fluent(MAN_ENDPOINT_AT, {a.args[0], 0, pose.e1.x, pose.e1.y}),
                make_fluent(MAN_ENDPOINT_AT, {a.args[0], 1, pose.e2.x, pose.e2.y})};
            std::sort(ec.context.begin(), ec.context.end());
            out.push_back(std::move(ec));
        }
    }

    bool has_input_space() const override { return true; }

    std::vector<CheckKey> input_space() const override {
        std::vector<CheckKey> keys;
        keys.reserve(static_cast<std::size_t>(grid_) * grid_ * grid_ * grid_);
        for (int a = 0; a < grid_; ++a)
            for (int b = 0; b < grid_; ++b)
                for (int c = 0; c < grid_; ++c)
                    for (int d = 0; d < grid_; ++d)
                        keys.push_back(pose_key(module_id_, {{a, b}, {c, d}}));
        return keys;
    }

    std::vector<Constraint> constraints_for_key(const CheckKey& key) const override {
        const PayloadPose pose = key_pose(key);
        std::vector<Constraint> family;
        for (int o = 0; o < n_objects_; ++o) {
            family.push_back({{},
                              make_action(MAN_MOVE_PAYLOAD,
                                          {o, pose.e1.x, pose.e1.y, pose.e2.x,
                                           pose.e2.y})});
            std::vector<Fluent> ctx{
                make_fluent(MAN_ENDPOINT_AT, {o, 0, pose.e1.x, pose.e1.y}),
                make_fluent(MAN_ENDPOINT_AT, {o, 1, pose.e2.x, pose.e2.y})};
            std::sort(ctx.begin(), ctx.end());
            family.push_back({std::move(ctx), make_action(MAN_PICKUP, {o})});
        }
        return family;
    }

protected:
    int grid_;
    int n_objects_;
};

class PayloadModule final : public PoseCheckModule {
public:
    PayloadModule(int grid, int n_objects, std::vector<Cell> obstacles,
                  int samples)
        : PoseCheckModule(2, "payload", grid, n_objects),
          obstacles_(std::move(obstacles)), samples_(samples) {}

    bool evaluate(const CheckKey& key) const override {
        const PayloadPose pose = key_pose(key);
        return payload_sweep_clear(pose, pose, obstacles_, samples_);
    }

private:
    std::vector<Cell> obstacles_;
    int samples_;
};

class ArmsModule final : public PoseCheckModule {
public:
    ArmsModule(int grid, int n_objects, std::array<Cell, 2> bases,
               double link_len)
        : PoseCheckModule(3, "arms", grid, n_objects), bases_(bases),
          link_len_(link_len) {}

    bool evaluate(const CheckKey& key) const override {
        const PayloadPose pose = key_pose(key);
        return arms_clear(to_point(pose.e1), to_point(pose.e2),
                          to_point(bases_[0]), to_point(bases_[1]), link_len_);
    }

private:
    std::array<Cell, 2> bases_;
    double link_len_;
};

} // namespace

void validate_instance(const ManipulationInstance& inst) {
    if (inst.grid < 2)
        throw InvalidInstance("grid must be at least 2");
    if (inst.payloads.empty())
        throw InvalidInstance("no payloads");
    if (inst.goals.size() != inst.payloads.size())
        throw InvalidInstance("goal count differs from payload count");
    const auto obs = normalized(inst.obstacles);
    for (const Cell& c : obs)
        if (!in_grid(c, inst.grid))
            throw InvalidInstance("obstacle out of bounds");
    for (const Cell& b : inst.bases)
        if (!in_grid(b, inst.grid))
            throw InvalidInstance("base out of bounds");
    if (inst.bases[0] == inst.bases[1])
        throw InvalidInstance("bases coincide");
    if (inst.link_len <= 0)
        throw InvalidInstance("link_len must be positive");

    auto check_config = [&](const std::vector<PayloadPose>& poses,
                            const char* which) {
        std::vector<Cell> seen;
        for (std::size_t o = 0; o < poses.size(); ++o) {
            const PayloadPose& p = poses[o];
            if (!payload_pose_valid(p, inst.grid))
                throw InvalidInstance(std::string(which) + " pose of object " +
                                      std::to_string(o) + " invalid");
            for (const Cell& c : payload_cells(p)) {
                if (contains_cell(seen, c))
                    throw InvalidInstance(std::string(which) +
                                          " poses overlap at cell " +
                                          std::to_string(c.x) + "," +
                                          std::to_string(c.y));
            }
            auto cells = payload_cells(p);
            seen.insert(seen.end(), cells.begin(), cells.end());
            std::sort(seen.begin(), seen.end());
            if (!payload_sweep_clear(p, p, obs, inst.sweep_samples))
                throw InvalidInstance(std::string(which) + " pose of object " +
                                      std::to_string(o) + " collides");
            if (!arms_clear(to_point(p.e1), to_point(p.e2),
                            to_point(inst.bases[0]), to_point(inst.bases[1]),
                            inst.link_len))
                throw InvalidInstance(std::string(which) + " pose of object " +
                                      std::to_string(o) + " not grippable");
        }
    };
    check_config(inst.payloads, "initial");
    check_config(inst.goals, "goal");
    for (std::size_t o = 0; o < inst.payloads.size(); ++o)
        if (payload_pose_length(inst.payloads[o]) !=
            payload_pose_length(inst.goals[o]))
            throw InvalidInstance("object " + std::to_string(o) +
                                  " changes length between start and goal");
}

DomainBundle build_manipulation(const ManipulationInstance& inst) {
    validate_instance(inst);

    const int g = inst.grid;
    const int n = static_cast<int>(inst.payloads.size());
    const auto goals = std::make_shared<std::vector<PayloadPose>>(inst.goals);

    PlanningProblem p;
    p.horizon_max = inst.horizon_max;
    p.pred_names = {"endpoint_at", "carried", "free"};

    for (int o = 0; o < n; ++o) {
        p.initial.insert(make_fluent(
            MAN_ENDPOINT_AT, {o, 0, inst.payloads[o].e1.x, inst.payloads[o].e1.y}));
        p.initial.insert(make_fluent(
            MAN_ENDPOINT_AT, {o, 1, inst.payloads[o].e2.x, inst.payloads[o].e2.y}));
    }
    p.initial.insert(make_fluent(MAN_FREE, {}));

    p.goal = [n, goals](const State& s) {
        const ManView v = decode_man(s, n);
        if (!v.free)
            return false;
        for (int o = 0; o < n; ++o)
            if (v.poses[o] != (*goals)[o])
                return false;
        return true;
    };

    ActionSchema move;
    move.id = MAN_MOVE_PAYLOAD;
    move.name = "move_payload";
    move.instances = [g, n](const State& s, std::vector<ActionInstance>& out) {
        const ManView v = decode_man(s, n);
        if (v.carried < 0)
            return;
        const int o = v.carried;
        const PayloadPose cur = v.poses[o];
        const int len = payload_pose_length(cur);
        const auto others = other_object_cells(v, o);
        std::vector<ActionInstance> cand;
        for (int d1x = -1; d1x <= 1; ++d1x)
            for (int d1y = -1; d1y <= 1; ++d1y)
                for (int d2x = -1; d2x <= 1; ++d2x)
                    for (int d2y = -1; d2y <= 1; ++d2y) {
                        if (!d1x && !d1y && !d2x && !d2y)
                            continue;
                        const PayloadPose next{{cur.e1.x + d1x, cur.e1.y + d1y},
                                               {cur.e2.x + d2x, cur.e2.y + d2y}};
                        if (!payload_pose_valid(next, g) ||
                            payload_pose_length(next) != len)
                            continue;
                        if (!cells_disjoint(others, payload_cells(next)))
                            continue;
                        cand.push_back(make_action(
                            MAN_MOVE_PAYLOAD, {o, next.e1.x, next.e1.y,
                                               next.e2.x, next.e2.y}));
                    }
        std::sort(cand.begin(), cand.end());
        out.insert(out.end(), cand.begin(), cand.end());
    };
    move.precondition = [g, n](const State& s, const ActionInstance& a) {
        const ManView v = decode_man(s, n);
        const int o = a.args[0];
        if (v.carried != o)
            return false;
        const PayloadPose cur = v.poses[o];
        const PayloadPose next{{a.args[1], a.args[2]}, {a.args[3], a.args[4]}};
        if (next == cur)
            return false;
        if (chebyshev(cur.e1, next.e1) > 1 || chebyshev(cur.e2, next.e2) > 1)
            return false;
        if (!payload_pose_valid(next, g) ||
            payload_pose_length(next) != payload_pose_length(cur))
            return false;
        return cells_disjoint(other_object_cells(v, o), payload_cells(next));
    };
    move.effect = [n](const State& s, const ActionInstance& a,
                      std::vector<Fluent>& add, std::vector<Fluent>& del) {
        const ManView v = decode_man(s, n);
        const int o = a.args[0];
        const PayloadPose cur = v.poses[o];
        del.push_back(make_fluent(MAN_ENDPOINT_AT, {o, 0, cur.e1.x, cur.e1.y}));
        del.push_back(make_fluent(MAN_ENDPOINT_AT, {o, 1, cur.e2.x, cur.e2.y}));
        add.push_back(make_fluent(MAN_ENDPOINT_AT, {o, 0, a.args[1], a.args[2]}));
        add.push_back(make_fluent(MAN_ENDPOINT_AT, {o, 1, a.args[3], a.args[4]}));
    };

    ActionSchema pickup;
    pickup.id = MAN_PICKUP;
    pickup.name = "pickup";
    pickup.instances = [n](const State& s, std::vector<ActionInstance>& out) {
        const ManView v = decode_man(s, n);
        if (!v.free)
            return;
        for (int o = 0; o < n; ++o)
            out.push_back(make_action(MAN_PICKUP, {o}));
    };
    pickup.precondition = [n](const State& s, const ActionInstance&) {
        return decode_man(s, n).free;
    };
    pickup.effect = [](const State&, const ActionInstance& a,
                       std::vector<Fluent>& add, std::vector<Fluent>& del) {
        del.push_back(make_fluent(MAN_FREE, {}));
        add.push_back(make_fluent(MAN_CARRIED, {a.args[0]}));
    };

    ActionSchema putdown;
    putdown.id = MAN_PUTDOWN;
    putdown.name = "putdown";
    putdown.instances = [n](const State& s, std::vector<ActionInstance>& out) {
        const ManView v = decode_man(s, n);
        if (v.carried >= 0)
            out.push_back(make_action(MAN_PUTDOWN, {v.carried}));
    };
    putdown.precondition = [n](const State& s, const ActionInstance& a) {
        return decode_man(s, n).carried == a.args[0];
    };
    putdown.effect = [](const State&, const ActionInstance& a,
                        std::vector<Fluent>& add, std::vector<Fluent>& del) {
        del.push_back(make_fluent(MAN_CARRIED, {a.args[0]}));
        add.push_back(make_fluent(MAN_FREE, {}));
    };

    p.schemas = {move, pickup, putdown};

    // both robots participate in every action: steps are singletons
    p.conflicts = [](const ActionInstance&, const ActionInstance&) {
        return true;
    };

    DomainBundle bundle;
    bundle.domain = "manipulation";
    bundle.problem = std::move(p);
    bundle.modules = {
        std::make_shared<PayloadModule>(g, n, normalized(inst.obstacles),
                                        inst.sweep_samples),
        std::make_shared<ArmsModule>(g, n, inst.bases, inst.link_len)};
    return bundle;
}

void validate_instance(const Instance& inst) {
    std::visit([](const auto& i) { validate_instance(i); }, inst);
}

DomainBundle build_bundle(const Instance& inst) {
    if (const auto* loc = std::get_if<LocomotionInstance>(&inst))
        return build_locomotion(*loc);
    return build_manipulation(std::get<ManipulationInstance>(inst));
}

// ===================== suite generation =====================

namespace {

bool solvable_within_budget(const DomainBundle& bundle, double timeout_s) {
    CheckCache cache;
    CheckHook hook = make_check_hook(bundle.modules, cache);
    EnumerationConfig cfg;
    cfg.horizon_max = bundle.problem.horizon_max;
    cfg.mode = Mode::First;
    cfg.timeout_s = timeout_s;
    long found = 0;
    enumerate_plans(bundle.problem, cfg, &hook,
                    [&found](const PlanHistory&) {
                        ++found;
                        return false;
                    });
    return found > 0;
}

std::string numbered_id(const std::string& prefix, int idx) {
    std::ostringstream os;
    os << prefix << '_';
    if (idx < 100)
        os << (idx < 10 ? "00" : "0");
    os << idx;
    return os.str();
}

SuiteEntry generate_locomotion_entry(int idx, std::mt19937& rng,
                                     const GenOptions& opts) {
    for (int attempt = 0; attempt < opts.max_attempts_per_instance; ++attempt) {
        LocomotionInstance inst;
        inst.id = numbered_id("loc", idx);
        inst.grid = 10;
        inst.seed = rng();

        std::mt19937 local(inst.seed);
        std::uniform_int_distribution<int> coord(0, inst.grid - 1);
        std::uniform_int_distribution<int> n_obst(4, 12);
        std::uniform_int_distribution<int> dist_pick(1, 3);

        inst.cm = {std::uniform_int_distribution<int>(2, inst.grid - 3)(local),
                   std::uniform_int_distribution<int>(2, inst.grid - 3)(local)};
        static constexpr int off[4][2] = {{-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
        for (int i = 0; i < 4; ++i)
            inst.legs[i] = {{inst.cm.x + off[i][0], inst.cm.y + off[i][1]}, true};

        const int want = n_obst(local);
        std::set<Cell> occ;
        while (static_cast<int>(occ.size()) < want) {
            Cell c{coord(local), coord(local)};
            bool clash = c == inst.cm;
            for (const LegState& l : inst.legs)
                clash = clash || c == l.pos;
            if (!clash)
                occ.insert(c);
        }
        inst.occupied.assign(occ.begin(), occ.end());

        const int dist = dist_pick(local);
        std::vector<Cell> goal_options;
        for (int x = 0; x < inst.grid; ++x)
            for (int y = 0; y < inst.grid; ++y) {
                const Cell c{x, y};
                if (manhattan(c, inst.cm) != dist || occ.count(c))
                    continue;
                // enough free cells around the goal to re-plant all legs
                int free_nearby = 0;
                for (int gx = 0; gx < inst.grid; ++gx)
                    for (int gy = 0; gy < inst.grid; ++gy)
                        if (within_reach(to_point({gx, gy}), to_point(c),
                                         inst.reach) &&
                            !occ.count({gx, gy}))
                            free_nearby++;
                if (free_nearby >= 8)
                    goal_options.push_back(c);
            }
        if (goal_options.empty())
            continue;
        inst.goal = goal_options[std::uniform_int_distribution<std::size_t>(
            0, goal_options.size() - 1)(local)];
        inst.horizon_max = 2 + 4 * dist;

        try {
            validate_instance(inst);
        } catch (const InvalidInstance&) {
            continue;
        }
        if (opts.filter_solvable &&
            !solvable_within_budget(build_locomotion(inst), opts.solve_timeout_s))
            continue;

        SuiteEntry entry;
        entry.instance = inst;
        entry.grid = inst.grid;
        entry.n_obstacles = static_cast<int>(inst.occupied.size());
        entry.goal_distance = dist;
        return entry;
    }
    throw GenerationExhausted("could not generate locomotion instance " +
                              std::to_string(idx));
}

SuiteEntry generate_manipulation_entry(int idx, std::mt19937& rng,
                                       const GenOptions& opts) {
    for (int attempt = 0; attempt < opts.max_attempts_per_instance; ++attempt) {
        ManipulationInstance inst;
        inst.id = numbered_id("man", idx);
        inst.grid = 11;
        inst.seed = rng();

        std::mt19937 local(inst.seed);
        std::uniform_int_distribution<int> coord(1, inst.grid - 2);
        std::uniform_int_distribution<int> n_objects(1, 2);
        std::uniform_int_distribution<int> n_obst(2, 6);
        std::uniform_int_distribution<int> len_pick(2, 3);
        std::uniform_int_distribution<int> dir_pick(0, 3);

        // arms reach over the workspace from the bottom row
        inst.bases = {Cell{1, 0}, Cell{inst.grid - 2, 0}};

        static constexpr int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
        const int objects = n_objects(local);
        auto random_pose = [&](int len) {
            const auto& d = dirs[dir_pick(local)];
            const Cell e1{coord(local), coord(local)};
            return PayloadPose{e1, {e1.x + d[0] * len, e1.y + d[1] * len}};
        };

        bool ok = true;
        std::vector<Cell> used;
        for (int o = 0; o < objects && ok; ++o) {
            const int len = len_pick(local);
            PayloadPose start, goal;
            bool placed = false;
            for (int tries = 0; tries < 40 && !placed; ++tries) {
                start = random_pose(len);
                if (!payload_pose_valid(start, inst.grid))
                    continue;
                if (!cells_disjoint(used, payload_cells(start)))
                    continue;
                placed = true;
            }
            ok = ok && placed;
            if (!ok)
                break;
            auto sc = payload_cells(start);
            used.insert(used.end(), sc.begin(), sc.end());
            std::sort(used.begin(), used.end());
            inst.payloads.push_back(start);

            placed = false;
            for (int tries = 0; tries < 40 && !placed; ++tries) {
                goal = random_pose(len);
                if (!payload_pose_valid(goal, inst.grid))
                    continue;
                const int d = std::max(chebyshev(start.e1, goal.e1),
                                       chebyshev(start.e2, goal.e2));
                if (d < 2 || d > 5)
                    continue;
                bool clear = true;
                for (std::size_t other = 0; other < inst.goals.size(); ++other)
                    clear = clear &&
                            cells_disjoint(payload_cells(inst.goals[other]),
                                           payload_cells(goal));
                if (clear)
                    placed = true;
            }
            ok = ok && placed;
            if (ok)
                inst.goals.push_back(goal);
        }
        if (!ok)
            continue;

        const int want = n_obst(local);
        std::set<Cell> avoid;
        auto shield = [&avoid](const PayloadPose& p) {
            for (const Cell& c : payload_cells(p))
                for (int dx = -1; dx <= 1; ++dx)
                    for (int dy = -1; dy <= 1; ++dy)
                        avoid.insert({c.x + dx, c.y + dy});
        };
        for (const PayloadPose& p : inst.payloads)
            shield(p);
        for (const PayloadPose& p : inst.goals)
            shield(p);
        std::set<Cell> obs;
        for (int tries = 0; tries < 200 && static_cast<int>(obs.size()) < want;
             ++tries) {
            Cell c{std::uniform_int_distribution<int>(0, inst.grid - 2)(local),
                   std::uniform_int_distribution<int>(0, inst.grid - 2)(local)};
            if (!avoid.count(c) && !avoid.count({c.x + 1, c.y}) &&
                !avoid.count({c.x, c.y + 1}) && !avoid.count({c.x + 1, c.y + 1}))
                obs.insert(c);
        }
        inst.obstacles.assign(obs.begin(), obs.end());

        int max_d = 0;
        for (std::size_t o = 0; o < inst.payloads.size(); ++o)
            max_d = std::max(max_d,
                             std::max(chebyshev(inst.payloads[o].e1,
                                                inst.goals[o].e1),
                                      chebyshev(inst.payloads[o].e2,
                                                inst.goals[o].e2)));
        inst.horizon_max = objects * 2 + max_d + 6;

        try {
            validate_instance(inst);
        } catch (const InvalidInstance&) {
            continue;
        }
        if (opts.filter_solvable &&
            !solvable_within_budget(build_manipulation(inst),
                                    opts.solve_timeout_s))
            continue;

        SuiteEntry entry;
        entry.instance = inst;
        entry.grid = inst.grid;
        entry.n_obstacles = static_cast<int>(inst.obstacles.size());
        entry.goal_distance = max_d;
        return entry;
    }
    throw GenerationExhausted("could not generate manipulation instance " +
                              std::to_string(idx));
}

} // namespace

std::vector<SuiteEntry> generate_suite(const std::string& domain, int count,
                                       unsigned seed, const GenOptions& opts) {
    if (count < 1)
        throw Error("suite count must be >= 1");
    std::mt19937 rng(seed);
    std::vector<SuiteEntry> suite;
    suite.reserve(count);
    for (int i = 0; i < count; ++i) {
        if (domain == "locomotion")
            suite.push_back(generate_locomotion_entry(i, rng, opts));
        else if (domain == "manipulation")
            suite.push_back(generate_manipulation_entry(i, rng, opts));
        else
            throw Error("unknown domain: " + domain);
    }
    return suite;
}

} // namespace hybplan
