#pragma once

#include <optional>

#include "cascade/propagator.hpp"

namespace cascade {

enum class CorrKind { g1, g2 };

// Two-time correlation grid. values(i, j) holds the correlator at
// (t1, t2) = (grid.time(i), grid.time(j)); entries with t2 < t1 are filled
// by conjugate symmetry (g1) or exchange symmetry (g2).
struct CorrelationMap {
    TimeGrid grid;
    CorrKind kind;
    Emitter emitter;
    Eigen::MatrixXcd values;
};

struct MapOptions {
    double tol = 1e-8;
    double max_step = 0.05;
    // Joint ground state unless overridden.
    std::optional<Mat4> initial_state;
};

// G1(t1, t2) = Tr[c Phi(t2, t1)[rho(t1) c']] for t2 >= t1, by the quantum
// regression theorem. Rows (fixed t1) are computed in parallel.
CorrelationMap g1_map(const LiouvillianParts& parts, const PulseParams& pulse,
                      const TimeGrid& grid, Emitter e, const MapOptions& opts = {});

// G2(t1, t2) = Tr[c'c Phi(t2, t1)[c rho(t1) c']] for t2 >= t1. The diagonal
// reduces to the exact same-time expectation <c'c'cc>(t).
CorrelationMap g2_map(const LiouvillianParts& parts, const PulseParams& pulse,
                      const TimeGrid& grid, Emitter e, const MapOptions& opts = {});

// Plain-loop reference implementations; bitwise identical to the parallel
// drivers, kept for testing and benchmarking.
CorrelationMap g1_map_serial(const LiouvillianParts& parts, const PulseParams& pulse,
                             const TimeGrid& grid, Emitter e, const MapOptions& opts = {});
CorrelationMap g2_map_serial(const LiouvillianParts& parts, const PulseParams& pulse,
                             const TimeGrid& grid, Emitter e, const MapOptions& opts = {});

struct SameTimeG2 {
    TimeGrid grid;
    std::vector<double> values;
};

// t -> G2_flux(t, t) = 4 chi1 chi2 gamma_sigma gamma_xi <n_sigma n_xi>(t),
// evaluated as the closed-form expectation along a single propagation.
SameTimeG2 same_time_g2_trace(const LiouvillianParts& parts, const PulseParams& pulse,
                              const TimeGrid& grid, const MapOptions& opts = {});

// Decay rate of the exponential tail, by least squares on the log values at
// t >= fit_start. Throws when fewer than 10 samples sit above the 1e-12
// noise floor.
double tail_decay_rate(const SameTimeG2& trace, double fit_start);

struct NormalizedG2 {
    TimeGrid grid;
    std::vector<double> values;
    std::vector<bool> defined; // false where the intensity is below floor
};

// G2_flux(t, t) / <J_flux' J_flux>(t)^2; points with denominator < 1e-12
// squared-intensity are flagged undefined.
NormalizedG2 normalized_g2_tt(const LiouvillianParts& parts, const PulseParams& pulse,
                              const TimeGrid& grid, const MapOptions& opts = {});

} // namespace cascade
