#include "sbmtcl/run_config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sbmtcl {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& section, const std::string& key, const std::string& raw) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        while (pos < raw.size() && std::isspace(static_cast<unsigned char>(raw[pos]))) ++pos;
        if (pos != raw.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(section + "." + key + ": cannot parse '" + raw + "' as a number");
    }
}

std::vector<double> parse_double_list(const std::string& section, const std::string& key,
                                      const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(section, key, item));
    }
    return out;
}

} // namespace

bool RunConfig::has(const std::string& section, const std::string& key) const {
    auto s = resolved.find(section);
    return s != resolved.end() && s->second.count(key) > 0;
}

std::string RunConfig::get(const std::string& section, const std::string& key) const {
    auto s = resolved.find(section);
    if (s == resolved.end() || !s->second.count(key))
        throw ValidationError(section + "." + key + ": missing required key");
    return s->second.at(key);
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
    return parse_double(section, key, get(section, key));
}

double RunConfig::get_double_or(const std::string& section, const std::string& key,
                                double dflt) const {
    return has(section, key) ? get_double(section, key) : dflt;
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
    resolved[section][key] = value;
}

SystemParams RunConfig::system() const {
    const bool generic = has("system", "omega") || has("system", "a1") || has("system", "a3");
    const bool dqd = has("system", "epsilon") || has("system", "t_c");
    if (generic == dqd)
        throw ValidationError(
            "system: exactly one parameterization required (omega/a1/a3 or epsilon/t_c)");
    const double beta = get_double("bath", "beta");
    const double coupling_sq = get_double("coupling", "coupling_sq");
    if (dqd)
        return SystemParams::dqd(get_double("system", "epsilon"), get_double("system", "t_c"),
                                 beta, coupling_sq);
    SystemParams p;
    p.omega = get_double("system", "omega");
    p.a1 = get_double("system", "a1");
    p.a3 = get_double("system", "a3");
    p.beta = beta;
    p.coupling_sq = coupling_sq;
    p.validate();
    return p;
}

std::unique_ptr<SpectralDensity> RunConfig::density() const {
    const std::string model = get("bath", "model");
    if (model == "drude") {
        DrudeParams dp;
        dp.gamma = get_double("bath", "gamma");
        dp.lambda_cut = get_double("bath", "lambda_cut");
        return std::make_unique<DrudeSpectralDensity>(dp);
    }
    if (model == "dqd_sinc") {
        DqdSincParams dp;
        dp.gamma = get_double("bath", "gamma");
        dp.omega_c = get_double("bath", "omega_c");
        dp.omega_max = get_double("bath", "omega_max");
        return std::make_unique<DqdSincSpectralDensity>(dp);
    }
    throw ValidationError("bath.model: unknown model '" + model + "'");
}

quad::QuadConfig RunConfig::numerics() const {
    quad::QuadConfig q;
    q.rel_tol = get_double_or("numerics", "rel_tol", q.rel_tol);
    q.abs_tol = get_double_or("numerics", "abs_tol", q.abs_tol);
    if (has("numerics", "max_subdivisions"))
        q.max_subdivisions = static_cast<int>(get_double("numerics", "max_subdivisions"));
    if (!(q.rel_tol > 0) || !(q.abs_tol > 0))
        throw ValidationError("numerics: tolerances must be positive");
    return q;
}

double RunConfig::t_max() const { return get_double("dynamics", "t_max"); }
double RunConfig::dt_out() const { return get_double("dynamics", "dt_out"); }

BlochVector RunConfig::v_init() const {
    const auto vals = parse_double_list("dynamics", "v_init", get("dynamics", "v_init"));
    if (vals.size() != 4)
        throw ValidationError("dynamics.v_init: expected four comma-separated components");
    return BlochVector{vals[0], vals[1], vals[2], vals[3]};
}

std::string RunConfig::out_path(const std::string& fallback) const {
    if (has("output", "path")) return get("output", "path");
    return fallback;
}

std::string RunConfig::sweep_parameter() const { return get("sweep", "parameter"); }

std::vector<double> RunConfig::sweep_grid() const {
    return parse_double_list("sweep", "grid", get("sweep", "grid"));
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        // report JSON with an embedded resolved config
        nlohmann::json j = nlohmann::json::parse(text);
        if (!j.contains("config"))
            throw ValidationError("config: JSON input has no embedded 'config' object");
        for (auto& [section, body] : j.at("config").items()) {
            for (auto& [key, value] : body.items()) {
                if (value.is_string())
                    cfg.resolved[section][key] = value.get<std::string>();
                else
                    cfg.resolved[section][key] = value.dump();
            }
        }
        return cfg;
    }

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ValidationError("config line " + std::to_string(lineno) + ": empty section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
        if (section.empty())
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        cfg.resolved[section][key] = value;
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace sbmtcl
