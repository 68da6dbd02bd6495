#include "cascade/correlations.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cascade {

namespace {

CorrelationMap map_impl(const LiouvillianParts& parts, const PulseParams& pulse,
                        const TimeGrid& grid, Emitter e, CorrKind kind,
                        const MapOptions& opts, bool parallel)
{
    validate(grid);
    const int n = grid.n_points;
    const std::vector<double> times = grid.times();
    const Mat4 c = emitter_operator(e, parts);
    const Mat4 cd = c.adjoint();
    const Mat4 cdc = cd * c;

    IntegratorOptions traj_opts;
    traj_opts.tol = opts.tol;
    const Mat4 rho0 = opts.initial_state.value_or(ground_state());
    const Trajectory traj = evolve(rho0, parts, pulse, grid, traj_opts);

    const IntegratorOptions row_opts = options_for_pulse(pulse, opts.tol, opts.max_step);
    auto drive = [&pulse](double t) { return envelope(t, pulse); };

    CorrelationMap map;
    map.grid = grid;
    map.kind = kind;
    map.emitter = e;
    map.values.resize(n, n);

    auto row = [&](int i) {
        const Mat4& rho = traj.states[i];
        const Mat4 x0 = kind == CorrKind::g1 ? Mat4(rho * cd) : Mat4(c * rho * cd);
        const std::span<const double> samples(times.data() + i, times.size() - i);
        const std::vector<Vec16> prop =
            integrate_sampled(parts.l_static, parts.l_drive, drive, vectorize(x0),
                              times[i], samples, row_opts);
        for (int j = i; j < n; ++j) {
            const Mat4 x = devectorize(prop[j - i]);
            if (kind == CorrKind::g1)
                map.values(i, j) = (c * x).trace();
            else
                map.values(i, j) = complexd(std::real((cdc * x).trace()), 0.0);
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i)
            row(i);
    } else {
        for (int i = 0; i < n; ++i)
            row(i);
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            map.values(i, j) = kind == CorrKind::g1 ? std::conj(map.values(j, i))
                                                    : map.values(j, i);
    return map;
}

} // namespace

CorrelationMap g1_map(const LiouvillianParts& parts, const PulseParams& pulse,
                      const TimeGrid& grid, Emitter e, const MapOptions& opts)
{
    return map_impl(parts, pulse, grid, e, CorrKind::g1, opts, true);
}

CorrelationMap g2_map(const LiouvillianParts& parts, const PulseParams& pulse,
                      const TimeGrid& grid, Emitter e, const MapOptions& opts)
{
    return map_impl(parts, pulse, grid, e, CorrKind::g2, opts, true);
}

CorrelationMap g1_map_serial(const LiouvillianParts& parts, const PulseParams& pulse,
                             const TimeGrid& grid, Emitter e, const MapOptions& opts)
{
    return map_impl(parts, pulse, grid, e, CorrKind::g1, opts, false);
}

CorrelationMap g2_map_serial(const LiouvillianParts& parts, const PulseParams& pulse,
                             const TimeGrid& grid, Emitter e, const MapOptions& opts)
{
    return map_impl(parts, pulse, grid, e, CorrKind::g2, opts, false);
}

SameTimeG2 same_time_g2_trace(const LiouvillianParts& parts, const PulseParams& pulse,
                              const TimeGrid& grid, const MapOptions& opts)
{
    IntegratorOptions traj_opts;
    traj_opts.tol = opts.tol;
    const Mat4 rho0 = opts.initial_state.value_or(ground_state());
    const Trajectory traj = evolve(rho0, parts, pulse, grid, traj_opts);

    const Mat4 cc = parts.jump_flux * parts.jump_flux;
    const Mat4 pair_op = cc.adjoint() * cc; // 4 chi1 chi2 g_s g_x n_sigma n_xi

    SameTimeG2 out;
    out.grid = grid;
    out.values.resize(traj.states.size());
    for (size_t i = 0; i < traj.states.size(); ++i)
        out.values[i] = std::real((traj.states[i] * pair_op).trace());
    return out;
}

double tail_decay_rate(const SameTimeG2& trace, double fit_start)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < trace.values.size(); ++i) {
        const double t = trace.grid.time(static_cast<int>(i));
        if (t < fit_start || trace.values[i] <= 1e-12)
            continue;
        const double y = std::log(trace.values[i]);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++m;
    }
    if (m < 10)
        throw std::runtime_error("tail fit needs at least 10 samples above the noise floor");
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

NormalizedG2 normalized_g2_tt(const LiouvillianParts& parts, const PulseParams& pulse,
                              const TimeGrid& grid, const MapOptions& opts)
{
    IntegratorOptions traj_opts;
    traj_opts.tol = opts.tol;
    const Mat4 rho0 = opts.initial_state.value_or(ground_state());
    const Trajectory traj = evolve(rho0, parts, pulse, grid, traj_opts);

    const Mat4 cc = parts.jump_flux * parts.jump_flux;
    const Mat4 pair_op = cc.adjoint() * cc;

    NormalizedG2 out;
    out.grid = grid;
    out.values.resize(traj.states.size());
    out.defined.resize(traj.states.size());
    for (size_t i = 0; i < traj.states.size(); ++i) {
        const double num = std::real((traj.states[i] * pair_op).trace());
        const double flux = effective_photon_flux_population(traj.states[i], parts);
        const double denom = flux * flux;
        if (denom < 1e-12) {
            out.values[i] = std::numeric_limits<double>::quiet_NaN();
            out.defined[i] = false;
        } else {
            out.values[i] = num / denom;
            out.defined[i] = true;
        }
    }
    return out;
}

} // namespace cascade
