// run_config.hpp — Flat-section key/value run configuration: parsing,
// validation, and construction of the model objects a run needs.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sbmtcl/dynamics.hpp"
#include "sbmtcl/generator.hpp"

namespace sbmtcl {

// Sections and keys exactly as written in the file (after defaults are
// applied); this map is echoed into reports so a run can be reproduced from
// its own output.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

struct RunConfig {
    ConfigMap resolved;

    SystemParams system() const;
    std::unique_ptr<SpectralDensity> density() const;
    quad::QuadConfig numerics() const;

    // dynamics block
    double t_max() const;
    double dt_out() const;
    BlochVector v_init() const;

    // output block
    std::string out_path(const std::string& fallback) const;

    // sweep block
    std::string sweep_parameter() const;
    std::vector<double> sweep_grid() const;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double dflt) const;

    void set(const std::string& section, const std::string& key, const std::string& value);
};

// INI-style text: [section] headers, key = value lines, # and ; full-line
// comments. A leading '{' switches to report-JSON mode and reads the embedded
// "config" object instead.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace sbmtcl
