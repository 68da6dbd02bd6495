#include "cascade/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cascade/csv.hpp"

namespace cascade {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("invalid number for key '" + key + "': " + value);
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value)
{
    std::istringstream ss(value);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok)
        out.push_back(parse_double(key, tok));
    if (out.empty())
        throw std::invalid_argument("empty list for key '" + key + "'");
    return out;
}

std::vector<std::string> parse_words(const std::string& value)
{
    std::istringstream ss(value);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok)
        out.push_back(tok);
    return out;
}

} // namespace

Emitter parse_emitter(const std::string& name)
{
    if (name == "source")
        return Emitter::source;
    if (name == "target")
        return Emitter::target;
    if (name == "flux")
        return Emitter::flux;
    throw std::invalid_argument("unknown emitter: " + name);
}

void apply_config_line(RunConfig& cfg, const std::string& section,
                       const std::string& key, const std::string& value)
{
    const std::string full = section + "." + key;
    if (section == "system") {
        if (key == "omega_sigma") cfg.system.omega_sigma = parse_double(full, value);
        else if (key == "omega_xi") cfg.system.omega_xi = parse_double(full, value);
        else if (key == "omega_laser") cfg.system.omega_laser = parse_double(full, value);
        else if (key == "gamma_sigma") cfg.system.gamma_sigma = parse_double(full, value);
        else if (key == "gamma_xi") cfg.system.gamma_xi = parse_double(full, value);
        else if (key == "chi1") cfg.system.chi1 = parse_double(full, value);
        else if (key == "chi2") cfg.system.chi2 = parse_double(full, value);
        else throw std::invalid_argument("unknown config key: " + full);
    } else if (section == "pulse") {
        if (key == "area") cfg.pulse.area = parse_double(full, value);
        else if (key == "center") cfg.pulse.center = parse_double(full, value);
        else if (key == "fwhm") {
            cfg.pulse.fwhm = parse_double(full, value);
            cfg.pulse_fwhm_set = true;
        }
        else throw std::invalid_argument("unknown config key: " + full);
    } else if (section == "grid") {
        if (key == "traj_dt") cfg.grid.traj_dt = parse_double(full, value);
        else if (key == "map_dt") cfg.grid.map_dt = parse_double(full, value);
        else if (key == "map_t_end") cfg.grid.map_t_end = parse_double(full, value);
        else if (key == "spectrum_t_end") cfg.grid.spectrum_t_end = parse_double(full, value);
        else if (key == "tol") cfg.grid.tol = parse_double(full, value);
        else if (key == "traj_tol") cfg.grid.traj_tol = parse_double(full, value);
        else throw std::invalid_argument("unknown config key: " + full);
    } else if (section == "output") {
        if (key == "dir") cfg.out_dir = value;
        else if (key == "jobs") cfg.jobs = static_cast<int>(parse_double(full, value));
        else throw std::invalid_argument("unknown config key: " + full);
    } else if (section == "scan") {
        if (key == "area_min") cfg.area_min = parse_double(full, value);
        else if (key == "area_max") cfg.area_max = parse_double(full, value);
        else if (key == "area_step") cfg.area_step = parse_double(full, value);
        else if (key == "lengths") cfg.lengths = parse_list(full, value);
        else if (key == "spectrum_areas") cfg.spectrum_areas = parse_list(full, value);
        else if (key == "chi2_values") cfg.chi2_values = parse_list(full, value);
        else if (key == "outputs") cfg.sweep_outputs = parse_words(value);
        else throw std::invalid_argument("unknown config key: " + full);
    } else if (section == "spectrum") {
        if (key == "omega_min") cfg.omega_min = parse_double(full, value);
        else if (key == "omega_max") cfg.omega_max = parse_double(full, value);
        else if (key == "n_omega") cfg.n_omega = static_cast<int>(parse_double(full, value));
        else throw std::invalid_argument("unknown config key: " + full);
    } else {
        throw std::invalid_argument("unknown config section: [" + section + "]");
    }
}

RunConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);

    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("malformed section header at line "
                                            + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected 'key = value' at line "
                                        + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("key outside any section at line "
                                        + std::to_string(lineno));
        apply_config_line(cfg, section, key, value);
    }
    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg)
{
    validate(cfg.system);
    validate(cfg.pulse);
    if (!(cfg.grid.traj_dt > 0.0) || !(cfg.grid.map_dt > 0.0))
        throw std::invalid_argument("grid steps must be > 0");
    if (!(cfg.grid.tol >= 1e-12 && cfg.grid.tol <= 1e-4)
        || !(cfg.grid.traj_tol >= 1e-12 && cfg.grid.traj_tol <= 1e-4))
        throw std::invalid_argument("tolerances must lie in [1e-12, 1e-4]");
    if (!(cfg.area_min >= 0.0) || !(cfg.area_max > cfg.area_min)
        || !(cfg.area_step > 0.0))
        throw std::invalid_argument("invalid area scan range");
    if (cfg.n_omega < 2 || !(cfg.omega_max > cfg.omega_min))
        throw std::invalid_argument("invalid omega grid");
    for (double w : cfg.lengths)
        if (!(w > 0.0))
            throw std::invalid_argument("pulse lengths must be > 0");
    for (double c : cfg.chi2_values)
        if (c < 0.0 || c > 1.0)
            throw std::invalid_argument("chi2 values must lie in [0, 1]");
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg)
{
    std::vector<std::pair<std::string, std::string>> e;
    auto num = [](double v) { return csv_num(v); };
    e.emplace_back("system.omega_sigma", num(cfg.system.omega_sigma));
    e.emplace_back("system.omega_xi", num(cfg.system.omega_xi));
    e.emplace_back("system.omega_laser", num(cfg.system.omega_laser));
    e.emplace_back("system.gamma_sigma", num(cfg.system.gamma_sigma));
    e.emplace_back("system.gamma_xi", num(cfg.system.gamma_xi));
    e.emplace_back("system.chi1", num(cfg.system.chi1));
    e.emplace_back("system.chi2", num(cfg.system.chi2));
    e.emplace_back("pulse.area", num(cfg.pulse.area));
    e.emplace_back("pulse.center", num(cfg.pulse.center));
    e.emplace_back("pulse.fwhm", num(cfg.pulse.fwhm));
    e.emplace_back("grid.traj_dt", num(cfg.grid.traj_dt));
    e.emplace_back("grid.map_dt", num(cfg.grid.map_dt));
    e.emplace_back("grid.map_t_end", num(cfg.grid.map_t_end));
    e.emplace_back("grid.spectrum_t_end", num(cfg.grid.spectrum_t_end));
    e.emplace_back("grid.tol", num(cfg.grid.tol));
    e.emplace_back("grid.traj_tol", num(cfg.grid.traj_tol));
    e.emplace_back("output.dir", cfg.out_dir);
    e.emplace_back("output.jobs", std::to_string(cfg.jobs));
    e.emplace_back("scan.area_min", num(cfg.area_min));
    e.emplace_back("scan.area_max", num(cfg.area_max));
    e.emplace_back("scan.area_step", num(cfg.area_step));
    auto list = [&](const std::vector<double>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i)
            s += (i ? " " : "") + num(v[i]);
        return s;
    };
    e.emplace_back("scan.lengths", list(cfg.lengths));
    e.emplace_back("scan.spectrum_areas", list(cfg.spectrum_areas));
    e.emplace_back("scan.chi2_values", list(cfg.chi2_values));
    std::string outs;
    for (size_t i = 0; i < cfg.sweep_outputs.size(); ++i)
        outs += (i ? " " : "") + cfg.sweep_outputs[i];
    e.emplace_back("scan.outputs", outs);
    e.emplace_back("spectrum.omega_min", num(cfg.omega_min));
    e.emplace_back("spectrum.omega_max", num(cfg.omega_max));
    e.emplace_back("spectrum.n_omega", std::to_string(cfg.n_omega));
    if (cfg.emitter_filter)
        e.emplace_back("emitter", emitter_name(*cfg.emitter_filter));
    return e;
}

std::vector<double> area_grid(const RunConfig& cfg)
{
    std::vector<double> areas;
    for (double a = cfg.area_min; a <= cfg.area_max + 1e-12 * cfg.area_max;
         a += cfg.area_step)
        areas.push_back(a);
    return areas;
}

} // namespace cascade
