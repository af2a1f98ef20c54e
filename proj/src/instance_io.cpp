#include "hybplan/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hybplan {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        return std::to_string(v);
    return std::string(buf, end);
}

namespace {

std::string cell_str(const Cell& c) {
    return std::to_string(c.x) + "," + std::to_string(c.y);
}

std::string pose_str(const PayloadPose& p) {
    std::ostringstream os;
    os << p.e1.x << ',' << p.e1.y << ',' << p.e2.x << ',' << p.e2.y;
    return os.str();
}

struct LineReader {
    std::istream& is;
    int line_no = 0;

    bool next(std::string& out) {
        if (!std::getline(is, out))
            return false;
        ++line_no;
        return true;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(line_no == 0 ? 1 : line_no, why);
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty())
            out.push_back(item);
    return out;
}

int parse_int(const std::string& s, LineReader& r) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size())
            r.fail("not an integer: " + s);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        r.fail("not an integer: " + s);
    }
}

double parse_dbl(const std::string& s, LineReader& r) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            r.fail("not a number: " + s);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        r.fail("not a number: " + s);
    }
}

// "name: a b c" -> items, enforcing the section name
std::vector<std::string> section(LineReader& r, const std::string& name) {
    std::string line;
    if (!r.next(line))
        r.fail("expected section '" + name + ":'");
    const std::string prefix = name + ":";
    if (line.rfind(prefix, 0) != 0)
        r.fail("expected section '" + name + ":', got '" + line + "'");
    return split(line.substr(prefix.size()), ' ');
}

Cell parse_cell(const std::string& item, LineReader& r) {
    const auto parts = split(item, ',');
    if (parts.size() != 2)
        r.fail("expected x,y pair: " + item);
    return {parse_int(parts[0], r), parse_int(parts[1], r)};
}

PayloadPose parse_pose(const std::string& item, LineReader& r) {
    const auto parts = split(item, ',');
    if (parts.size() != 4)
        r.fail("expected e1x,e1y,e2x,e2y: " + item);
    return {{parse_int(parts[0], r), parse_int(parts[1], r)},
            {parse_int(parts[2], r), parse_int(parts[3], r)}};
}

std::map<std::string, std::string> parse_params(LineReader& r) {
    std::map<std::string, std::string> out;
    for (const std::string& item : section(r, "params")) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            r.fail("expected key=value: " + item);
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

} // namespace

std::string print_instance(const Instance& inst) {
    std::ostringstream os;
    if (const auto* loc = std::get_if<LocomotionInstance>(&inst)) {
        os << "locomotion " << loc->grid << ' ' << loc->seed << '\n';
        os << "occupied:";
        for (const Cell& c : loc->occupied)
            os << ' ' << cell_str(c);
        os << '\n';
        os << "legs:";
        for (const LegState& l : loc->legs)
            os << ' ' << cell_str(l.pos) << ',' << (l.attached ? 1 : 0);
        os << '\n';
        os << "cm: " << cell_str(loc->cm) << '\n';
        os << "goal: " << cell_str(loc->goal) << '\n';
        os << "params: reach=" << format_double(loc->reach)
           << " horizon=" << loc->horizon_max << '\n';
    } else {
        const auto& man = std::get<ManipulationInstance>(inst);
        os << "manipulation " << man.grid << ' ' << man.seed << '\n';
        os << "occupied:";
        for (const Cell& c : man.obstacles)
            os << ' ' << cell_str(c);
        os << '\n';
        os << "bases: " << cell_str(man.bases[0]) << ' '
           << cell_str(man.bases[1]) << '\n';
        os << "payloads:";
        for (const PayloadPose& p : man.payloads)
            os << ' ' << pose_str(p);
        os << '\n';
        os << "goal:";
        for (const PayloadPose& p : man.goals)
            os << ' ' << pose_str(p);
        os << '\n';
        os << "params: link_len=" << format_double(man.link_len)
           << " sweep=" << man.sweep_samples << " horizon=" << man.horizon_max
           << '\n';
    }
    return os.str();
}

Instance parse_instance(std::istream& is) {
    LineReader r{is};
    std::string header;
    if (!r.next(header))
        r.fail("empty instance file");
    const auto head = split(header, ' ');
    if (head.size() != 3)
        r.fail("expected '<domain> <grid> <seed>'");
    const std::string domain = head[0];
    const int grid = parse_int(head[1], r);
    const unsigned seed = static_cast<unsigned>(std::stoul(head[2]));

    if (domain == "locomotion") {
        LocomotionInstance inst;
        inst.grid = grid;
        inst.seed = seed;
        for (const std::string& item : section(r, "occupied"))
            inst.occupied.push_back(parse_cell(item, r));
        const auto legs = section(r, "legs");
        if (legs.size() != 4)
            r.fail("expected four legs");
        for (int i = 0; i < 4; ++i) {
            const auto parts = split(legs[i], ',');
            if (parts.size() != 3)
                r.fail("expected x,y,attached: " + legs[i]);
            inst.legs[i].pos = {parse_int(parts[0], r), parse_int(parts[1], r)};
            inst.legs[i].attached = parse_int(parts[2], r) != 0;
        }
        const auto cm = section(r, "cm");
        if (cm.size() != 1)
            r.fail("expected one cm cell");
        inst.cm = parse_cell(cm[0], r);
        const auto goal = section(r, "goal");
        if (goal.size() != 1)
            r.fail("expected one goal cell");
        inst.goal = parse_cell(goal[0], r);
        const auto params = parse_params(r);
        if (auto it = params.find("reach"); it != params.end())
            inst.reach = parse_dbl(it->second, r);
        if (auto it = params.find("horizon"); it != params.end())
            inst.horizon_max = parse_int(it->second, r);
        return inst;
    }
    if (domain == "manipulation") {
        ManipulationInstance inst;
        inst.grid = grid;
        inst.seed = seed;
        for (const std::string& item : section(r, "occupied"))
            inst.obstacles.push_back(parse_cell(item, r));
        const auto bases = section(r, "bases");
        if (bases.size() != 2)
            r.fail("expected two bases");
        inst.bases = {parse_cell(bases[0], r), parse_cell(bases[1], r)};
        for (const std::string& item : section(r, "payloads"))
            inst.payloads.push_back(parse_pose(item, r));
        for (const std::string& item : section(r, "goal"))
            inst.goals.push_back(parse_pose(item, r));
        const auto params = parse_params(r);
        if (auto it = params.find("link_len"); it != params.end())
            inst.link_len = parse_dbl(it->second, r);
        if (auto it = params.find("sweep"); it != params.end())
            inst.sweep_samples = parse_int(it->second, r);
        if (auto it = params.find("horizon"); it != params.end())
            inst.horizon_max = parse_int(it->second, r);
        return inst;
    }
    r.fail("unknown domain: " + domain);
}

Instance parse_instance_text(const std::string& text) {
    std::istringstream is(text);
    return parse_instance(is);
}

Instance load_instance_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw Error("cannot open instance file: " + path);
    Instance inst = parse_instance(is);
    // keep the id tied to the file name
    std::string name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
        name = name.substr(0, dot);
    std::visit([&name](auto& i) { i.id = name; }, inst);
    return inst;
}

void save_instance_file(const std::string& path, const Instance& inst) {
    std::ofstream os(path);
    if (!os)
        throw Error("cannot write instance file: " + path);
    os << print_instance(inst);
}

} // namespace hybplan
