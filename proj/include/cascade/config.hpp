#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cascade/liouvillian.hpp"
#include "cascade/pulse.hpp"

namespace cascade {

struct GridConfig {
    double traj_dt = 0.02;      // trajectory sampling step
    double map_dt = 0.06;       // two-time map sampling step
    double map_t_end = 12.0;    // map extent past the pulse maximum
    double spectrum_t_end = 25.0;
    double tol = 1e-8;          // map/regression integrator tolerance
    double traj_tol = 1e-10;    // plain trajectory tolerance
};

// Resolved configuration of one CLI run: defaults, then config file keys,
// then command-line flag overrides.
struct RunConfig {
    SystemParams system;
    PulseParams pulse;
    bool pulse_fwhm_set = false;
    GridConfig grid;
    std::string out_dir = "out";
    int jobs = 0;

    // area scans (g2 / hom / sweep)
    double area_min = M_PI / 4.0;
    double area_max = 4.0 * M_PI;
    double area_step = M_PI / 8.0;
    // pulse lengths for the rabi visibility scan
    std::vector<double> lengths = {0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 2.0};
    // pulse areas for the spectrum command
    std::vector<double> spectrum_areas = {M_PI, 2.0 * M_PI, 3.0 * M_PI, 4.0 * M_PI};
    double omega_min = -30.0;
    double omega_max = 30.0;
    int n_omega = 6001;
    // sweep command
    std::vector<double> chi2_values = {0.5};
    std::vector<std::string> sweep_outputs = {"intensity"};

    std::optional<Emitter> emitter_filter;
};

// Flat sectioned key-value text with '#' comments:
//   [system]
//   chi2 = 0.5
// Unknown sections or keys are rejected.
RunConfig parse_config_file(const std::string& path);
void apply_config_line(RunConfig& cfg, const std::string& section,
                       const std::string& key, const std::string& value);
void validate(const RunConfig& cfg);

// Full resolved configuration as (key, value) pairs, echoed into every
// output file header.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

Emitter parse_emitter(const std::string& name);

std::vector<double> area_grid(const RunConfig& cfg);

} // namespace cascade
