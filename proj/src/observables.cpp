#include "cascade/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cascade {

std::vector<RabiPoint> rabi_curves(const SystemParams& sp, double fwhm,
                                   std::span<const double> areas,
                                   const RabiOptions& opts)
{
    const LiouvillianParts parts = build_cascaded(sp);
    std::vector<RabiPoint> points(areas.size());
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < static_cast<int>(areas.size()); ++k) {
        try {
            PulseParams pulse{areas[k], 0.0, fwhm};
            const TimeGrid grid = default_grid(parts, sp, pulse, opts.grid_dt);
            IntegratorOptions iopts;
            iopts.tol = opts.tol;
            const Trajectory traj = evolve(ground_state(), parts, pulse, grid, iopts);
            // near-destructive areas leave some channels with a tiny peak
            // that the grid heuristic cannot see, so loosen the tail check
            points[k] = {areas[k],
                         integrate_intensity(traj, emitter_operator(Emitter::source, parts), 1e-4),
                         integrate_intensity(traj, emitter_operator(Emitter::target, parts), 1e-4),
                         integrate_intensity(traj, emitter_operator(Emitter::flux, parts), 1e-4)};
        } catch (...) {
#pragma omp critical
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return points;
}

Curve rabi_curve(const SystemParams& sp, double fwhm, std::span<const double> areas,
                 Emitter e, const RabiOptions& opts)
{
    const std::vector<RabiPoint> points = rabi_curves(sp, fwhm, areas, opts);
    Curve curve;
    curve.x.reserve(points.size());
    curve.y.reserve(points.size());
    for (const RabiPoint& p : points) {
        curve.x.push_back(p.area);
        curve.y.push_back(e == Emitter::source ? p.i_source
                          : e == Emitter::target ? p.i_target
                                                 : p.i_flux);
    }
    return curve;
}

namespace {

// Value of the parabola through (x[i-1..i+1], y[i-1..i+1]) at its vertex.
double refined_extremum(const std::vector<double>& y, int i)
{
    const double denom = y[i - 1] + y[i + 1] - 2.0 * y[i];
    if (denom == 0.0)
        return y[i];
    const double d = y[i + 1] - y[i - 1];
    return y[i] - d * d / (8.0 * denom);
}

} // namespace

double visibility(const Curve& curve)
{
    const int n = static_cast<int>(curve.y.size());
    if (n < 3)
        return 0.0;

    int best_max = -1, best_min = -1;
    for (int i = 1; i + 1 < n; ++i) {
        const bool is_max = curve.y[i] >= curve.y[i - 1] && curve.y[i] >= curve.y[i + 1];
        const bool is_min = curve.y[i] <= curve.y[i - 1] && curve.y[i] <= curve.y[i + 1];
        if (is_max && (best_max < 0
                       || std::abs(curve.x[i] - M_PI) < std::abs(curve.x[best_max] - M_PI)))
            best_max = i;
        if (is_min && (best_min < 0
                       || std::abs(curve.x[i] - 2 * M_PI)
                              < std::abs(curve.x[best_min] - 2 * M_PI)))
            best_min = i;
    }
    if (best_max < 0 || best_min < 0)
        return 0.0;

    const double big = refined_extremum(curve.y, best_max);
    const double small = refined_extremum(curve.y, best_min);
    if (big + small <= 0.0)
        return 0.0;
    return (big - small) / (big + small);
}

ExtinctionFit extinction_fit(std::span<const double> lengths,
                             std::span<const double> visibilities)
{
    if (lengths.size() != visibilities.size())
        throw std::invalid_argument("extinction_fit: length/visibility size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> used;
    for (size_t i = 0; i < lengths.size(); ++i) {
        if (visibilities[i] <= 1e-4)
            continue;
        const double y = std::log(visibilities[i]);
        used.emplace_back(lengths[i], y);
        sx += lengths[i];
        sy += y;
        sxx += lengths[i] * lengths[i];
        sxy += lengths[i] * y;
    }
    const int m = static_cast<int>(used.size());
    if (m < 2)
        throw std::runtime_error("extinction_fit: all visibility points below floor");
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;
    double ss = 0;
    for (const auto& [w, y] : used) {
        const double r = y - (intercept + slope * w);
        ss += r * r;
    }
    ExtinctionFit fit;
    fit.beta = -slope;
    fit.log_intercept = intercept;
    fit.residual = std::sqrt(ss / m);
    fit.n_used = m;
    return fit;
}

Spectrum spectrum(const CorrelationMap& g1, const SpectrumOptions& opts)
{
    if (g1.kind != CorrKind::g1)
        throw std::invalid_argument("spectrum requires a g1 map");
    const int n = g1.grid.n_points;
    const double dt = g1.grid.dt();
    if (std::max(std::abs(opts.omega_min), std::abs(opts.omega_max)) > M_PI / dt)
        throw std::invalid_argument("frequency window exceeds the Nyquist limit "
                                    "of the correlation grid");

    // s(tau_k) = int G1(t, t + tau_k) dt over the available t range.
    std::vector<complexd> s(n);
    for (int k = 0; k < n; ++k) {
        complexd acc = 0.0;
        const int m = n - k;
        for (int i = 0; i < m; ++i) {
            const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
            acc += w * g1.values(i, i + k);
        }
        s[k] = acc * dt;
    }

    Spectrum out;
    out.intensity = std::real(s[0]);
    out.tail_warning = std::abs(s[n - 1]) > 1e-6 * std::abs(s[0]);
    out.omega.resize(opts.n_omega);
    out.values.resize(opts.n_omega);

    const double dw = (opts.omega_max - opts.omega_min) / (opts.n_omega - 1);
    for (int m = 0; m < opts.n_omega; ++m) {
        const double w = opts.omega_min + m * dw;
        const complexd rot = std::exp(complexd(0.0, -w * dt));
        complexd phase = 1.0;
        complexd acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const double wk = (k == 0 || k == n - 1) ? 0.5 : 1.0;
            acc += wk * s[k] * phase;
            phase *= rot;
        }
        out.omega[m] = w;
        out.values[m] = 2.0 * std::real(acc * dt);
    }

    const double peak = *std::max_element(out.values.begin(), out.values.end());
    for (double& v : out.values) {
        if (v < 0.0 && v >= -1e-8 * peak) {
            v = 0.0;
            out.clipped = true;
        }
    }
    return out;
}

double spectrum_integral(const Spectrum& s)
{
    const double dw = s.omega[1] - s.omega[0];
    double acc = 0.5 * (s.values.front() + s.values.back());
    for (size_t i = 1; i + 1 < s.values.size(); ++i)
        acc += s.values[i];
    return acc * dw / (2.0 * M_PI);
}

double linewidth_fwhm(const Spectrum& s)
{
    const auto peak_it = std::max_element(s.values.begin(), s.values.end());
    const int m = static_cast<int>(peak_it - s.values.begin());
    const double half = *peak_it / 2.0;

    int above = 0;
    for (double v : s.values)
        if (v > half)
            ++above;
    if (above < 20)
        throw std::runtime_error("linewidth_fwhm: peak not resolved by the omega grid");

    // outermost half-maximum crossings: for a split line (interference dip at
    // the center) the full width spans all lobes above half maximum
    const int n = static_cast<int>(s.values.size());
    int lo = 0;
    while (lo < m && !(s.values[lo] > half))
        ++lo;
    int hi = n - 1;
    while (hi > m && !(s.values[hi] > half))
        --hi;
    if (lo == 0 || hi + 1 == n)
        throw std::runtime_error("linewidth_fwhm: peak not contained in the omega range");

    const double wl = s.omega[lo - 1]
                    + (s.omega[lo] - s.omega[lo - 1]) * (half - s.values[lo - 1])
                          / (s.values[lo] - s.values[lo - 1]);
    const double wr = s.omega[hi]
                    + (s.omega[hi + 1] - s.omega[hi]) * (s.values[hi] - half)
                          / (s.values[hi] - s.values[hi + 1]);
    return wr - wl;
}

namespace {

void check_compatible(const TimeGrid& a, const TimeGrid& b)
{
    if (a.t_start != b.t_start || a.t_end != b.t_end || a.n_points != b.n_points)
        throw std::invalid_argument("map and trajectory grids differ");
}

double double_integral(const Eigen::MatrixXcd& values, double dt, bool squared_abs)
{
    const int n = static_cast<int>(values.rows());
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        for (int j = 0; j < n; ++j) {
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            const double v = squared_abs ? std::norm(values(i, j))
                                         : std::real(values(i, j));
            acc += wi * wj * v;
        }
    }
    return acc * dt * dt;
}

} // namespace

double pulsed_g2_zero(const CorrelationMap& g2, const Trajectory& traj, const Mat4& c)
{
    if (g2.kind != CorrKind::g2)
        throw std::invalid_argument("pulsed_g2_zero requires a g2 map");
    check_compatible(g2.grid, traj.grid);
    // normalization only: a small truncated tail biases the ratio by O(tail)
    const double intensity = integrate_intensity(traj, c, 1e-2);
    if (intensity <= 0.0)
        throw std::runtime_error("pulsed_g2_zero: zero integrated intensity");
    return double_integral(g2.values, g2.grid.dt(), false) / (intensity * intensity);
}

HomResult hom_indistinguishability(const CorrelationMap& g1, const Trajectory& traj,
                                   const Mat4& c)
{
    if (g1.kind != CorrKind::g1)
        throw std::invalid_argument("hom_indistinguishability requires a g1 map");
    check_compatible(g1.grid, traj.grid);
    const double intensity = integrate_intensity(traj, c, 1e-2);
    if (intensity <= 0.0)
        throw std::runtime_error("hom_indistinguishability: zero integrated intensity");
    const double overlap =
        double_integral(g1.values, g1.grid.dt(), true) / (intensity * intensity);
    HomResult res{overlap, false};
    if (overlap < 0.0 || overlap > 1.0) {
        res.value = std::clamp(overlap, 0.0, 1.0);
        res.clipped = true;
    }
    return res;
}

} // namespace cascade
