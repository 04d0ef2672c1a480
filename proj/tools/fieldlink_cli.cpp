#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fieldlink/capacity.hpp"
#include "fieldlink/channel_algebra.hpp"
#include "fieldlink/channel_params.hpp"
#include "fieldlink/config.hpp"
#include "fieldlink/vacuum.hpp"

using json = nlohmann::json;
using namespace fieldlink;

namespace {

constexpr const char* kSchemaVersion = "1";

struct Row {
    std::vector<std::pair<std::string, std::string>> cells;
    void add(const std::string& k, double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        cells.emplace_back(k, buf);
    }
    void add(const std::string& k, const std::string& v) { cells.emplace_back(k, v); }
};

void emit(const std::vector<Row>& rows, const std::string& fmt, const std::string& title) {
    if (rows.empty()) return;
    if (fmt == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json o;
            o["schema_version"] = kSchemaVersion;
            for (const auto& [k, v] : r.cells) {
                char* end = nullptr;
                const double d = std::strtod(v.c_str(), &end);
                if (end && *end == '\0' && !v.empty())
                    o[k] = d;
                else
                    o[k] = v;
            }
            arr.push_back(o);
        }
        std::cout << arr.dump(2) << "\n";
        return;
    }
    std::cout << "# " << title << " (schema v" << kSchemaVersion << ", natural units)\n#";
    for (const auto& [k, v] : rows.front().cells) std::cout << " " << k;
    std::cout << "\n";
    for (const auto& r : rows) {
        bool first = true;
        for (const auto& [k, v] : r.cells) {
            if (!first) std::cout << "\t";
            std::cout << v;
            first = false;
        }
        std::cout << "\n";
    }
}

// evaluate scan points in parallel, assemble in sweep order
std::vector<Row> run_scan(int n, int jobs, const std::function<Row(int)>& work) {
    std::vector<Row> rows(static_cast<size_t>(n));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) rows[static_cast<size_t>(i)] = work(i);
        return rows;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                rows[static_cast<size_t>(i)] = work(i);
        });
    for (auto& th : pool) th.join();
    return rows;
}

int classify_exit(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const PhysicsError*>(&e) || dynamic_cast<const ScenarioError*>(&e)) return 3;
    if (dynamic_cast<const QuadratureError*>(&e)) return 4;
    return 3;
}

void print_matrix(const char* name, const Matrix2& m) {
    std::printf("%s = [[%.9g%+.9gi, %.9g%+.9gi], [%.9g%+.9gi, %.9g%+.9gi]]\n", name,
                m[0][0].real(), m[0][0].imag(), m[0][1].real(), m[0][1].imag(), m[1][0].real(),
                m[1][0].imag(), m[1][1].real(), m[1][1].imag());
}

int cmd_channel(const ScenarioSpec& spec, const std::string& fmt) {
    const ChannelParams p = compute_params(spec);
    const CapacityResult cap = classical_capacity(
        p, spec.switching.t_end - spec.switching.t_start);
    const int rank = choi_rank(p);

    if (fmt == "json") {
        json o;
        o["schema_version"] = kSchemaVersion;
        o["separation_class"] = to_string(classify_separation(spec));
        o["P_e"] = p.excitation_noise;
        o["A"] = p.gain_excited;
        o["B"] = p.gain_ground;
        o["C_re"] = p.coherence_direct.real();
        o["C_im"] = p.coherence_direct.imag();
        o["D_re"] = p.coherence_counter.real();
        o["D_im"] = p.coherence_counter.imag();
        o["error_estimate"] = p.convergence.error_estimate;
        o["ladder_residual"] = p.convergence.ladder_residual;
        o["weak_coupling_warning"] = p.convergence.weak_coupling_warning;
        o["choi_rank"] = rank;
        o["capacity_bits"] = cap.capacity_bits;
        o["capacity_nats"] = cap.capacity_nats;
        o["optimal_prior"] = cap.optimal_prior;
        o["rate_bits_per_time"] = cap.rate_bits_per_time;
        std::cout << o.dump(2) << "\n";
        return 0;
    }
    std::printf("separation class: %s\n", to_string(classify_separation(spec)));
    std::printf("P_e = %.12g\nA   = %.12g\nB   = %.12g\n", p.excitation_noise, p.gain_excited,
                p.gain_ground);
    std::printf("C   = %.12g %+.12gi\nD   = %.12g %+.12gi\n", p.coherence_direct.real(),
                p.coherence_direct.imag(), p.coherence_counter.real(),
                p.coherence_counter.imag());
    std::printf("error estimate %.3g, ladder residual %.3g\n", p.convergence.error_estimate,
                p.convergence.ladder_residual);
    if (p.convergence.weak_coupling_warning)
        std::printf("warning: coupling above 0.3; perturbative treatment strained\n");
    try {
        const auto ks = kraus_set(p);
        const char* names[] = {"E1", "E2", "E3", "E4"};
        for (size_t i = 0; i < ks.size(); ++i) print_matrix(names[i], ks[i]);
    } catch (const PhysicsError& e) {
        std::printf("kraus set unavailable: %s\n", e.what());
    }
    std::printf("choi rank = %d\n", rank);
    std::printf("capacity = %.12g bits (%.12g nats), prior p1 = %.9g, rate = %.12g bits/time\n",
                cap.capacity_bits, cap.capacity_nats, cap.optimal_prior, cap.rate_bits_per_time);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-detector relativistic channel toolkit"};
    app.require_subcommand(1);

    std::string config, fmt = "tsv";
    double opt_L = 1.0, opt_dE = 1.0, opt_alpha = 0.01, opt_mass = 0.0, opt_dX = 1e-3;
    double wmin = 0.25, wmax = 4.0, lmin = 1e-3, lmax = 1e-1;
    int steps = 16, jobs = 1;
    unsigned seed = 20260826;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* o = sub->add_option("--config", config, "scenario config file");
        if (need_config) o->required();
        sub->add_option("--out", fmt, "tsv|json")->check(CLI::IsMember({"tsv", "json"}));
        sub->add_option("--jobs", jobs, "parallel scan evaluations");
        sub->add_option("--seed", seed, "optimizer seed");
    };

    auto add_physics = [&](CLI::App* sub) {
        sub->add_option("--L", opt_L, "detector separation");
        sub->add_option("--dE", opt_dE, "detector gap");
        sub->add_option("--alpha", opt_alpha, "coupling of both detectors");
        sub->add_option("--mass", opt_mass, "field mass");
    };
    // overrides beat config-file values only when given on the command line
    auto apply_overrides = [&](CLI::App* sub, ScenarioSpec& s, bool had_config) {
        if (!had_config || sub->count("--L")) {
            s.detector1.position = {0.0, 0.0, 0.0};
            s.detector2.position = {0.0, 0.0, opt_L};
        }
        if (!had_config || sub->count("--dE")) s.energy_gap = opt_dE;
        if (!had_config || sub->count("--alpha"))
            s.detector1.coupling = s.detector2.coupling = opt_alpha;
        if (sub->count("--mass")) s.field.mass = opt_mass;
        s.validate();
    };

    auto* ch = app.add_subcommand("channel", "full channel characterization for one scenario");
    add_common(ch, true);
    add_physics(ch);

    auto* cs = app.add_subcommand("capacity-scan", "capacity rate vs window length");
    add_common(cs, false);
    add_physics(cs);
    cs->add_option("--window-min", wmin);
    cs->add_option("--window-max", wmax);
    cs->add_option("--window-steps", steps);

    auto* ns = app.add_subcommand("negativity-scan", "vacuum negativity vs separation");
    add_common(ns, false);
    ns->add_option("--dE", opt_dE);
    ns->add_option("--dX", opt_dX, "detector smearing width");
    ns->add_option("--mass", opt_mass);
    ns->add_option("--alpha", opt_alpha);
    ns->add_option("--L-min", lmin);
    ns->add_option("--L-max", lmax);
    ns->add_option("--L-steps", steps);

    auto* cas = app.add_subcommand("casimir-scan", "interaction energy vs separation");
    add_common(cas, false);
    cas->add_option("--dE", opt_dE);
    cas->add_option("--alpha", opt_alpha);
    cas->add_option("--L-min", lmin);
    cas->add_option("--L-max", lmax);
    cas->add_option("--L-steps", steps);

    auto* fm = app.add_subcommand("fermi", "emission-then-absorption probability");
    add_common(fm, true);
    add_physics(fm);
    auto* gl = app.add_subcommand("glauber", "non-causal apparent-leakage amplitude");
    add_common(gl, true);
    add_physics(gl);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ch->parsed()) {
            ScenarioSpec spec = parse_scenario_file(config);
            apply_overrides(ch, spec, true);
            return cmd_channel(spec, fmt);
        }

        if (cs->parsed()) {
            if (steps < 2) throw ConfigError("window-steps must be >= 2");
            ScenarioSpec base;
            const bool had_config = !config.empty();
            if (had_config) base = parse_scenario_file(config);
            base.switching.kind = SwitchingKind::SmoothBump;
            base.switching.t_start = 0.0;
            base.switching.t_end = wmax;
            apply_overrides(cs, base, had_config);
            auto rows = run_scan(steps, jobs, [&](int i) {
                const double w = wmin + (wmax - wmin) * i / (steps - 1);
                ScenarioSpec s = base;
                s.switching.t_start = 0.0;
                s.switching.t_end = w;
                Row r;
                r.add("window", w);
                r.add("class", std::string(to_string(classify_separation(s))));
                try {
                    const ChannelParams p = compute_params(s);
                    const CapacityResult c = classical_capacity(p, w);
                    r.add("rate_bits_per_time", c.rate_bits_per_time);
                    r.add("capacity_bits", c.capacity_bits);
                    r.add("P_e", p.excitation_noise);
                    r.add("A", p.gain_excited);
                    r.add("B", p.gain_ground);
                    r.add("error_estimate", p.convergence.error_estimate);
                    r.add("status", "ok");
                } catch (const std::exception& e) {
                    r.add("rate_bits_per_time", std::string("nan"));
                    r.add("status", std::string("failed: ") + e.what());
                }
                return r;
            });
            emit(rows, fmt, "capacity scan");
            return 0;
        }

        if (ns->parsed()) {
            if (!config.empty()) {
                const ScenarioSpec s = parse_scenario_file(config);
                if (!ns->count("--dE")) opt_dE = s.energy_gap;
                if (!ns->count("--alpha")) opt_alpha = s.detector2.coupling;
                if (!ns->count("--mass")) opt_mass = s.field.mass;
                if (!ns->count("--dX") && s.detector2.smearing_width)
                    opt_dX = *s.detector2.smearing_width;
            }
            auto rows = run_scan(steps, jobs, [&](int i) {
                const double L =
                    lmin * std::pow(lmax / lmin, steps > 1 ? double(i) / (steps - 1) : 0.0);
                Row r;
                r.add("L", L);
                try {
                    const VacuumIntegrals vi = vacuum_integrals(opt_dE, L, opt_dX, opt_mass);
                    const Matrix4 rho = ground_state_reduced(opt_alpha, vi);
                    const double n = negativity(rho);
                    r.add("R", vi.r);
                    r.add("S", vi.s);
                    r.add("T", vi.t);
                    r.add("negativity", n);
                    r.add("negativity_asymptotic",
                          opt_alpha * opt_alpha *
                              negativity_asymptotic(opt_dE, L, opt_dX, opt_mass,
                                                    opt_mass > opt_dE
                                                        ? AsymptoticRegime::MassDominated
                                                        : AsymptoticRegime::GapDominated));
                    r.add("error_estimate", vi.error_estimate);
                    r.add("status", "ok");
                } catch (const std::exception& e) {
                    r.add("status", std::string("failed: ") + e.what());
                }
                return r;
            });
            emit(rows, fmt, "negativity scan");
            return 0;
        }

        if (cas->parsed()) {
            if (!config.empty()) {
                const ScenarioSpec s = parse_scenario_file(config);
                if (!cas->count("--dE")) opt_dE = s.energy_gap;
                if (!cas->count("--alpha")) opt_alpha = s.detector2.coupling;
            }
            auto rows = run_scan(steps, jobs, [&](int i) {
                const double L =
                    lmin * std::pow(lmax / lmin, steps > 1 ? double(i) / (steps - 1) : 0.0);
                Row r;
                r.add("L", L);
                try {
                    const double e = casimir_energy(opt_dE, L, opt_alpha);
                    r.add("energy", e);
                    r.add("status", "ok");
                } catch (const std::exception& ex) {
                    r.add("status", std::string("failed: ") + ex.what());
                }
                return r;
            });
            emit(rows, fmt, "casimir scan");
            return 0;
        }

        if (fm->parsed()) {
            ScenarioSpec spec = parse_scenario_file(config);
            apply_overrides(fm, spec, true);
            std::printf("fermi_probability = %.12g\n", fermi_probability(spec));
            return 0;
        }
        if (gl->parsed()) {
            ScenarioSpec spec = parse_scenario_file(config);
            apply_overrides(gl, spec, true);
            const Complex g = glauber_leakage(spec);
            std::printf("glauber_leakage = %.12g %+.12gi (|.| = %.12g)\n", g.real(), g.imag(),
                        std::abs(g));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_exit(e);
    }
    return 0;
}
