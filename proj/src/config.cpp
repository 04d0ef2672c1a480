#include "fieldlink/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace fieldlink {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& v, int line) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value '" + v + "'", line);
    }
}

} // namespace

ScenarioSpec parse_scenario_text(const std::string& text) {
    ScenarioSpec spec;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    bool have_t_start = false, have_t_end = false;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = trim(s.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("malformed section header", line);
            section = s.substr(1, s.size() - 2);
            if (section != "detector1" && section != "detector2" && section != "switching" &&
                section != "quadrature")
                throw ConfigError("unknown section [" + section + "]", line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));

        if (section.empty()) {
            if (key == "mass")
                spec.field.mass = parse_number(val, line);
            else if (key == "energy_gap")
                spec.energy_gap = parse_number(val, line);
            else
                throw ConfigError("unknown key '" + key + "'", line);
        } else if (section == "detector1" || section == "detector2") {
            DetectorSpec& d = section == "detector1" ? spec.detector1 : spec.detector2;
            if (key == "position") {
                std::istringstream ps(val);
                std::vector<double> comps;
                std::string tok;
                while (ps >> tok) comps.push_back(parse_number(tok, line));
                if (comps.size() == 1)
                    d.position = {0.0, 0.0, comps[0]};
                else if (comps.size() == 3)
                    d.position = {comps[0], comps[1], comps[2]};
                else
                    throw ConfigError("position needs 1 (z) or 3 components", line);
            }
            else if (key == "coupling")
                d.coupling = parse_number(val, line);
            else if (key == "smearing_width")
                d.smearing_width = parse_number(val, line);
            else
                throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
        } else if (section == "switching") {
            if (key == "kind") {
                if (val == "bump")
                    spec.switching.kind = SwitchingKind::SmoothBump;
                else if (val == "gaussian")
                    spec.switching.kind = SwitchingKind::Gaussian;
                else if (val == "tophat")
                    spec.switching.kind = SwitchingKind::SmoothedTophat;
                else
                    throw ConfigError("unknown switching kind '" + val + "'", line);
            } else if (key == "t_start") {
                spec.switching.t_start = parse_number(val, line);
                have_t_start = true;
            } else if (key == "t_end") {
                spec.switching.t_end = parse_number(val, line);
                have_t_end = true;
            } else if (key == "width") {
                spec.switching.width = parse_number(val, line);
            } else {
                throw ConfigError("unknown key '" + key + "' in [switching]", line);
            }
        } else { // quadrature
            QuadraturePolicy& q = spec.quadrature;
            if (key == "rel_tol")
                q.rel_tol = parse_number(val, line);
            else if (key == "abs_floor")
                q.abs_floor = parse_number(val, line);
            else if (key == "max_subdivisions")
                q.max_subdivisions = static_cast<int>(parse_number(val, line));
            else if (key == "osc_points_per_period")
                q.osc_points_per_period = static_cast<int>(parse_number(val, line));
            else if (key == "eps_start")
                q.eps_start = parse_number(val, line);
            else if (key == "eps_rungs")
                q.eps_rungs = static_cast<int>(parse_number(val, line));
            else
                throw ConfigError("unknown key '" + key + "' in [quadrature]", line);
        }
    }
    if (!have_t_start || !have_t_end)
        throw ConfigError("[switching] must set t_start and t_end");
    try {
        spec.validate();
    } catch (const ScenarioError& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
    return spec;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

} // namespace fieldlink
