#pragma once

#include <limits>
#include <set>
#include <string>

#include "cascade/observables.hpp"

namespace cascade {

enum class SweepOutput { intensity, visibility, g2zero, hom, occupation, spectrum, g2map };

const char* sweep_output_name(SweepOutput o);
SweepOutput parse_sweep_output(const std::string& name); // throws on unknown

// Grid over (pulse area, pulse length, chi2). The base parameters supply
// everything that is not swept; pulses are centered at t = 0.
struct SweepSpec {
    SystemParams base;
    std::vector<double> areas;
    std::vector<double> lengths;
    std::vector<double> chi2_values;
    std::set<SweepOutput> outputs;
    double tol = 1e-8;
    double traj_dt = 0.03;
    double map_dt = 0.06;
    double map_t_end = 12.0; // relative to the pulse center
};

void validate(const SweepSpec& spec);

// One record per (grid point, emitter, observable). Scalar observables
// carry `value`; heavy ones (occupation, spectrum, g2map) are written to
// per-point files and referenced by `handle`. Per-point failures land in
// `error` instead of aborting the sweep. Visibility is a per-(length, chi2)
// quantity and is recorded with the area field left empty (NaN).
struct SweepRecord {
    double area;
    double length;
    double chi2;
    Emitter emitter;
    SweepOutput observable;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string handle;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    std::string engine_version;
};

extern const char* const kEngineVersion;

// Evaluates every grid point, in parallel over the flattened grid when
// workers != 1, with deterministic index-ordered aggregation. artifact_dir
// is required when heavy outputs are requested.
SweepResult run_sweep(const SweepSpec& spec, int workers,
                      const std::string& artifact_dir = "");

} // namespace cascade
