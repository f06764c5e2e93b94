#include "sbmtcl/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>

#include <json.hpp>

namespace sbmtcl::cli {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json bloch_json(const BlochVector& v) {
    return json{{"v0", v.v0}, {"v1", v.v1}, {"v2", v.v2}, {"v3", v.v3}};
}

json correction_json(const BlochCorrection& c) {
    return json{{"v1", c.v1}, {"v2", c.v2}, {"v3", c.v3}};
}

json config_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& [section, body] : cfg.resolved) {
        json s = json::object();
        for (const auto& [key, value] : body) s[key] = value;
        j[section] = s;
    }
    return j;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("output: cannot open '" + path + "' for writing");
    return out;
}

bool resonance_flag(const RunConfig& cfg) {
    if (!cfg.has("bath", "model") || cfg.get("bath", "model") != "drude") return false;
    return drude_matsubara_resonant(cfg.get_double("bath", "beta"),
                                    cfg.get_double("bath", "lambda_cut"));
}

json steady_report_json(const RunConfig& cfg, double wall_seconds) {
    const auto quad_cfg = cfg.numerics();
    const auto p = cfg.system();
    const auto sd = cfg.density();
    const SteadyStateReport rep = assemble_report(p, *sd, quad_cfg);

    json j;
    j["schema"] = "sbm-tcl/steady-report/v1";
    j["provenance"] = {{"library_version", kVersion},
                       {"rel_tol", quad_cfg.rel_tol},
                       {"abs_tol", quad_cfg.abs_tol},
                       {"wall_time_s", wall_seconds}};
    j["config"] = config_json(cfg);
    j["flags"] = {{"matsubara_resonance", resonance_flag(cfg)}};
    j["gibbs"] = bloch_json(rep.gibbs);
    j["tcl_correction"] = correction_json(rep.tcl_correction);
    j["mfgs_correction"] = correction_json(rep.mfgs_correction);
    j["assembled"] = bloch_json(rep.assembled);
    j["route_discrepancy"] = correction_json(rep.route_discrepancy);
    j["tcl2_only_ss"] = bloch_json(rep.tcl2_only_ss);
    j["generator_entries"] = rep.generator_entries;
    return j;
}

struct SweepRow {
    double value = 0.0;
    bool failed = false;
    std::string error;
    bool resonance = false;
    double v1_tcl = 0, v1_mfgs = 0, v3_tcl = 0, v3_mfgs = 0;
};

SweepRow sweep_point(RunConfig cfg, const std::string& section, const std::string& key,
                     double value) {
    SweepRow row;
    row.value = value;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    cfg.set(section, key, buf);
    try {
        row.resonance = resonance_flag(cfg);
        const auto quad_cfg = cfg.numerics();
        const auto p = cfg.system();
        const auto sd = cfg.density();
        row.v1_tcl = coherence_correction_tcl(p, *sd, quad_cfg);
        row.v1_mfgs = coherence_correction_mfgs(p, *sd, quad_cfg);
        row.v3_tcl = population_correction_tcl(p, *sd, quad_cfg);
        row.v3_mfgs = population_correction_mfgs(p, *sd, quad_cfg);
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

} // namespace

int cmd_steady(const RunConfig& cfg, const std::string& out_path) {
    const auto start = std::chrono::steady_clock::now();
    json j = steady_report_json(cfg, 0.0);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["provenance"]["wall_time_s"] = wall;
    auto out = open_out(out_path);
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_dynamics(const RunConfig& cfg, const std::string& out_path) {
    const auto quad_cfg = cfg.numerics();
    const auto p = cfg.system();
    const auto sd = cfg.density();
    const Trajectory traj = evolve(p, *sd, cfg.v_init(), cfg.t_max(), cfg.dt_out(), quad_cfg);

    auto out = open_out(out_path);
    out << "t,v1,v2,v3\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& s = traj.states[i];
        out << fmt12(traj.times[i]) << "," << fmt12(s.v1) << "," << fmt12(s.v2) << ","
            << fmt12(s.v3) << "\n";
    }

    json diag;
    diag["config"] = config_json(cfg);
    diag["library_version"] = kVersion;
    diag["samples"] = traj.times.size();
    diag["diagnostics_window"] = traj.diagnostics_window;
    diag["last_window_drift"] = {{"v0", traj.last_window_drift[0]},
                                 {"v1", traj.last_window_drift[1]},
                                 {"v2", traj.last_window_drift[2]},
                                 {"v3", traj.last_window_drift[3]}};
    diag["final_state"] = bloch_json(traj.states.back());
    auto diag_out = open_out(out_path + ".diag.json");
    diag_out << diag.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_path) {
    const std::string param = cfg.sweep_parameter();
    const auto dot = param.find('.');
    if (dot == std::string::npos)
        throw ValidationError("sweep.parameter: expected 'section.key', got '" + param + "'");
    const std::string section = param.substr(0, dot);
    const std::string key = param.substr(dot + 1);
    if (!cfg.has(section, key) && section != "system")
        throw ValidationError("sweep.parameter: '" + param + "' is not present in the config");
    const auto grid = cfg.sweep_grid();
    if (grid.empty()) throw ValidationError("sweep.grid: empty grid");

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(grid.size());
    for (double value : grid)
        futures.push_back(
            std::async(std::launch::async, sweep_point, cfg, section, key, value));

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (auto& f : futures) rows.push_back(f.get());

    auto out = open_out(out_path);
    out << "index,value,v1_tcl,v1_mfgs,v3_tcl,v3_mfgs,disc_v1,disc_v3,flag,error\n";
    std::size_t ok = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << i << "," << fmt12(r.value) << ",";
        if (r.failed) {
            std::string msg = r.error;
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            out << ",,,,,," << (r.resonance ? "matsubara_resonance" : "") << "," << msg << "\n";
        } else {
            ++ok;
            out << fmt12(r.v1_tcl) << "," << fmt12(r.v1_mfgs) << "," << fmt12(r.v3_tcl) << ","
                << fmt12(r.v3_mfgs) << "," << fmt12(std::abs(r.v1_tcl - r.v1_mfgs)) << ","
                << fmt12(std::abs(r.v3_tcl - r.v3_mfgs)) << ","
                << (r.resonance ? "matsubara_resonance" : "") << ",\n";
        }
    }
    if (ok == 0) throw NumericalError("sweep: every grid point failed");
    return 0;
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_override, std::optional<double> rel_tol_override) {
    try {
        RunConfig cfg = parse_config_file(config_path);
        if (rel_tol_override) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", *rel_tol_override);
            cfg.set("numerics", "rel_tol", buf);
        }
        std::string fallback = command == "steady" ? "steady_report.json" : command + "_out.csv";
        std::string out = out_override.empty() ? cfg.out_path(fallback) : out_override;
        if (command == "steady") return cmd_steady(cfg, out);
        if (command == "dynamics") return cmd_dynamics(cfg, out);
        if (command == "sweep") return cmd_sweep(cfg, out);
        throw ValidationError("unknown command '" + command + "'");
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace sbmtcl::cli
