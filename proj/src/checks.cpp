#include "hybplan/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hybplan {

bool statically_balanced(std::span<const geom::Point> legs, geom::Point cm) {
    geom::Polygon support = geom::convex_hull(legs);
    return geom::point_in_hull(cm, support);
}

bool within_reach(geom::Point leg, geom::Point cm, double reach) {
    return geom::distance(leg, cm) <= reach;
}

namespace {

geom::Point cell_point(const Cell& c) {
    return {static_cast<double>(c.x), static_cast<double>(c.y)};
}

bool segment_clear(const geom::Point& a, const geom::Point& b,
                   std::span<const Cell> obstacles) {
    for (const Cell& c : obstacles)
        if (geom::segment_intersects_cell(a, b, c.x, c.y))
            return false;
    return true;
}

} // namespace

bool payload_sweep_clear(const PayloadPose& from, const PayloadPose& to,
                         std::span<const Cell> obstacles, int samples) {
    const geom::Point f1 = cell_point(from.e1), f2 = cell_point(from.e2);
    const geom::Point t1 = cell_point(to.e1), t2 = cell_point(to.e2);
    const int steps = samples + 1;
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const geom::Point a{f1.x + (t1.x - f1.x) * t, f1.y + (t1.y - f1.y) * t};
        const geom::Point b{f2.x + (t2.x - f2.x) * t, f2.y + (t2.y - f2.y) * t};
        if (!segment_clear(a, b, obstacles))
            return false;
    }
    return true;
}

std::optional<geom::Point> two_link_elbow(geom::Point base, geom::Point grip,
                                          double link_len) {
    const double d = geom::distance(base, grip);
    if (d > 2.0 * link_len)
        return std::nullopt;
    if (d == 0.0) {
        // grip on the base: fold the arm straight up
        return geom::Point{base.x, base.y + link_len};
    }
    const double half = d / 2.0;
    double h2 = link_len * link_len - half * half;
    if (h2 < 0.0)
        h2 = 0.0;
    const double h = std::sqrt(h2);
    const double ux = (grip.x - base.x) / d, uy = (grip.y - base.y) / d;
    // elbow-up: of the two isoceles solutions take the higher one
    // (larger x breaks ties), independent of the base->grip direction
    const geom::Point a{base.x + ux * half - uy * h, base.y + uy * half + ux * h};
    const geom::Point b{base.x + ux * half + uy * h, base.y + uy * half - ux * h};
    if (a.y != b.y)
        return a.y > b.y ? a : b;
    return a.x > b.x ? a : b;
}

bool arms_clear(geom::Point grip1, geom::Point grip2, geom::Point base1,
                geom::Point base2, double link_len) {
    auto elbow1 = two_link_elbow(base1, grip1, link_len);
    auto elbow2 = two_link_elbow(base2, grip2, link_len);
    if (!elbow1 || !elbow2)
        return false;
    const geom::Point a[2][2] = {{base1, *elbow1}, {*elbow1, grip1}};
    const geom::Point b[2][2] = {{base2, *elbow2}, {*elbow2, grip2}};
    for (const auto& la : a)
        for (const auto& lb : b)
            if (geom::segments_intersect(la[0], la[1], lb[0], lb[1]))
                return false;
    return true;
}

std::string CheckKey::str() const {
    std::ostringstream os;
    os << static_cast<int>(module);
    for (int i = 0; i < len; ++i)
        os << ',' << v[i];
    return os.str();
}

std::size_t CheckKeyHash::operator()(const CheckKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint16_t>(k.module));
    mix(static_cast<std::uint8_t>(k.len));
    for (int i = 0; i < k.len; ++i)
        mix(static_cast<std::uint16_t>(k.v[i]));
    return static_cast<std::size_t>(h);
}

void CheckModule::extract_step(const State& from,
                               const std::vector<ActionInstance>& step,
                               std::vector<ExtractedCheck>& out) const {
    for (const ActionInstance& a : step)
        extract(from, a, out);
}

std::vector<CheckKey> CheckModule::input_space() const {
    throw PrecomputationUnsupported(id_);
}

CheckCounters& CheckCounters::operator+=(const CheckCounters& o) {
    total_queries += o.total_queries;
    distinct_evaluations += o.distinct_evaluations;
    time_s += o.time_s;
    return *this;
}

CheckCounters CheckCounters::operator-(const CheckCounters& o) const {
    return {total_queries - o.total_queries,
            distinct_evaluations - o.distinct_evaluations, time_s - o.time_s};
}

CheckCounters& CheckCache::slot(const CheckModule& m) {
    auto& entry = counters_[m.module_id()];
    if (entry.first.empty())
        entry.first = m.id();
    return entry.second;
}

bool CheckCache::query(const CheckModule& module, const CheckKey& key) {
    {
        std::lock_guard lock(mu_);
        slot(module).total_queries++;
        if (enabled_) {
            auto it = table_.find(key);
            if (it != table_.end())
                return it->second;
        }
    }
    bool verdict = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        verdict = module.evaluate(key);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw CheckUnavailable(module.id() + ": " + e.what());
    }
    const double dt = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    {
        std::lock_guard lock(mu_);
        auto& c = slot(module);
        c.time_s += dt;
        if (enabled_) {
            if (table_.emplace(key, verdict).second)
                c.distinct_evaluations++;
        } else {
            c.distinct_evaluations++;
        }
    }
    return verdict;
}

void CheckCache::preload(const CheckKey& key, bool verdict) {
    std::lock_guard lock(mu_);
    table_.emplace(key, verdict);
}

void CheckCache::insert_evaluated(const CheckModule& module,
                                  const CheckKey& key, bool verdict,
                                  double seconds) {
    std::lock_guard lock(mu_);
    auto& c = slot(module);
    c.time_s += seconds;
    if (!enabled_ || table_.emplace(key, verdict).second)
        c.distinct_evaluations++;
}

std::size_t CheckCache::size() const {
    std::lock_guard lock(mu_);
    return table_.size();
}

CheckCounters CheckCache::totals() const {
    std::lock_guard lock(mu_);
    CheckCounters sum;
    for (const auto& [id, entry] : counters_)
        sum += entry.second;
    return sum;
}

std::map<std::string, CheckCounters> CheckCache::per_module() const {
    std::lock_guard lock(mu_);
    std::map<std::string, CheckCounters> out;
    for (const auto& [id, entry] : counters_)
        out[entry.first] = entry.second;
    return out;
}

std::vector<std::pair<CheckKey, bool>> CheckCache::snapshot(int module_id) const {
    std::lock_guard lock(mu_);
    std::vector<std::pair<CheckKey, bool>> out;
    for (const auto& [key, verdict] : table_)
        if (key.module == module_id)
            out.emplace_back(key, verdict);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace hybplan
