#include "cascade/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cascade {

std::vector<double> TimeGrid::times() const
{
    std::vector<double> t(n_points);
    for (int i = 0; i < n_points; ++i)
        t[i] = time(i);
    return t;
}

void validate(const TimeGrid& g)
{
    if (!(g.t_start < g.t_end) || g.n_points < 2)
        throw std::invalid_argument("time grid requires t_start < t_end and n_points >= 2");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th- and 4th-order solutions.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace

std::vector<Vec16> integrate_sampled(const Mat16& l_static, const Mat16& l_drive,
                                     const DriveFn& drive, const Vec16& v0,
                                     double t_from, std::span<const double> sample_times,
                                     const IntegratorOptions& opts)
{
    if (!(opts.tol >= 1e-12 && opts.tol <= 1e-4))
        throw std::invalid_argument("tol must lie in [1e-12, 1e-4]");
    for (size_t i = 0; i < sample_times.size(); ++i) {
        const double prev = i == 0 ? t_from : sample_times[i - 1];
        if (sample_times[i] < prev)
            throw std::invalid_argument("sample times must be ascending and >= t_from");
    }

    auto rhs = [&](double t, const Vec16& v) -> Vec16 {
        return l_static * v + drive(t) * (l_drive * v);
    };
    auto cap_at = [&](double t) {
        return (t >= opts.fine_from && t <= opts.fine_to)
                   ? std::min(opts.max_step, opts.fine_max_step)
                   : opts.max_step;
    };

    std::vector<Vec16> out;
    out.reserve(sample_times.size());
    size_t next = 0;
    while (next < sample_times.size() && sample_times[next] <= t_from) {
        out.push_back(v0);
        ++next;
    }
    if (next == sample_times.size())
        return out;

    const double t_final = sample_times.back();
    double t = t_from;
    Vec16 y = v0;
    Vec16 k1 = rhs(t, y);
    double h = std::min(cap_at(t), 1e-3 * std::max(1.0, t_final - t_from));

    while (t < t_final) {
        h = std::min(h, cap_at(t));
        // Do not leap from outside the fine window across its start.
        if (opts.fine_from <= opts.fine_to && t < opts.fine_from - 1e-12
            && t + h > opts.fine_from)
            h = opts.fine_from - t;
        h = std::min(h, t_final - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("integrator step size underflow (stiff failure)");

        const Vec16 k2 = rhs(t + c2 * h, Vec16(y + h * (a21 * k1)));
        const Vec16 k3 = rhs(t + c3 * h, Vec16(y + h * (a31 * k1 + a32 * k2)));
        const Vec16 k4 = rhs(t + c4 * h, Vec16(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vec16 k5 = rhs(t + c5 * h,
                             Vec16(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vec16 k6 = rhs(t + h,
                             Vec16(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4
                                            + a65 * k5)));
        const Vec16 y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec16 k7 = rhs(t + h, y1); // FSAL
        const Vec16 err_vec =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (int i = 0; i < 16; ++i) {
            const double scale =
                opts.tol + opts.tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += std::norm(err_vec[i] / scale);
        }
        err = std::sqrt(err / 16.0);

        if (err <= 1.0) {
            // Accepted; emit samples inside (t, t+h] by cubic Hermite
            // interpolation on (y, k1) -- (y1, k7).
            while (next < sample_times.size() && sample_times[next] <= t + h) {
                const double th = (sample_times[next] - t) / h;
                const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
                const double h10 = th * (1 - th) * (1 - th);
                const double h01 = th * th * (3 - 2 * th);
                const double h11 = th * th * (th - 1);
                out.push_back(h00 * y + (h10 * h) * k1 + h01 * y1 + (h11 * h) * k7);
                ++next;
            }
            t += h;
            y = y1;
            k1 = k7;
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
    }
    return out;
}

IntegratorOptions options_for_pulse(const PulseParams& pulse, double tol, double max_step)
{
    IntegratorOptions opts;
    opts.tol = tol;
    opts.max_step = max_step;
    const double nu = pulse.stddev();
    if (nu < max_step) {
        opts.fine_from = pulse.center - 6.0 * nu;
        opts.fine_to = pulse.center + 6.0 * nu;
        opts.fine_max_step = nu;
    }
    return opts;
}

Mat4 ground_state()
{
    Mat4 rho = Mat4::Zero();
    rho(0, 0) = 1.0;
    return rho;
}

Trajectory evolve(const Mat4& rho0, const LiouvillianParts& parts,
                  const PulseParams& pulse, const TimeGrid& grid,
                  const IntegratorOptions& opts)
{
    validate(grid);
    validate(pulse);
    if (std::abs(std::real(rho0.trace()) - 1.0) > 1e-9
        || std::abs(std::imag(rho0.trace())) > 1e-12
        || (rho0 - Mat4(rho0.adjoint())).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("initial state must be Hermitian with unit trace");

    IntegratorOptions eff = options_for_pulse(pulse, opts.tol, opts.max_step);
    auto drive = [&pulse](double t) { return envelope(t, pulse); };
    const std::vector<double> times = grid.times();
    const std::vector<Vec16> samples =
        integrate_sampled(parts.l_static, parts.l_drive, drive, vectorize(rho0),
                          grid.t_start, times, eff);

    Trajectory traj;
    traj.grid = grid;
    traj.states.reserve(samples.size());
    for (const Vec16& v : samples) {
        Mat4 rho = devectorize(v);
        const double trace_drift = std::abs(rho.trace() - complexd(1.0, 0.0));
        const double herm_drift = (rho - Mat4(rho.adjoint())).cwiseAbs().maxCoeff();
        if (trace_drift > 1e-6 || herm_drift > 1e-6)
            throw std::runtime_error("propagation invariant violation beyond 1e-6");
        traj.states.push_back(rho);
    }
    return traj;
}

Mat4 propagate_operator(const Mat4& x0, const LiouvillianParts& parts,
                        const PulseParams& pulse, double t_from, double t_to,
                        const IntegratorOptions& opts)
{
    validate(pulse);
    if (t_from > t_to)
        throw std::invalid_argument("propagate_operator requires t_from <= t_to");
    if (t_from == t_to)
        return x0;
    IntegratorOptions eff = options_for_pulse(pulse, opts.tol, opts.max_step);
    auto drive = [&pulse](double t) { return envelope(t, pulse); };
    const double sample[] = {t_to};
    const std::vector<Vec16> res =
        integrate_sampled(parts.l_static, parts.l_drive, drive, vectorize(x0),
                          t_from, sample, eff);
    return devectorize(res[0]);
}

std::vector<double> population_series(const Trajectory& traj, const Mat4& c)
{
    const Mat4 num = c.adjoint() * c;
    std::vector<double> n(traj.states.size());
    for (size_t i = 0; i < traj.states.size(); ++i)
        n[i] = std::real((traj.states[i] * num).trace());
    return n;
}

double integrate_intensity(const Trajectory& traj, const Mat4& c, double tail_tol)
{
    const std::vector<double> n = population_series(traj, c);
    const double peak = *std::max_element(n.begin(), n.end());
    if (peak > 0.0 && n.back() > tail_tol * peak)
        throw std::runtime_error("trajectory truncated before the emission decayed");
    const double dt = traj.grid.dt();
    double acc = 0.5 * (n.front() + n.back());
    for (size_t i = 1; i + 1 < n.size(); ++i)
        acc += n[i];
    return acc * dt;
}

TimeGrid default_grid(const LiouvillianParts& parts, const SystemParams& sp,
                      const PulseParams& pulse, double dt)
{
    validate(pulse);
    const double gamma_min = std::min(sp.gamma_sigma, sp.gamma_xi);
    const double t_start = pulse.center - 5.0 * pulse.stddev();
    const double cap = pulse.center + 30.0 / gamma_min;

    // Coarse probe run to locate the end of the emission.
    TimeGrid probe{t_start, cap, static_cast<int>((cap - t_start) / 0.2) + 2};
    IntegratorOptions probe_opts;
    probe_opts.tol = 1e-8;
    probe_opts.max_step = 0.1;
    const Trajectory traj = evolve(ground_state(), parts, pulse, probe, probe_opts);

    const Mat4 s = sigma_source(), x = xi_target();
    const Mat4 total = Mat4(s.adjoint() * s) + Mat4(x.adjoint() * x);
    std::vector<double> n(traj.states.size());
    for (size_t i = 0; i < n.size(); ++i)
        n[i] = std::real((traj.states[i] * total).trace());

    const auto peak_it = std::max_element(n.begin(), n.end());
    double t_end = cap;
    if (*peak_it > 0.0) {
        for (size_t i = peak_it - n.begin(); i < n.size(); ++i) {
            if (n[i] <= 1e-9 * *peak_it) {
                t_end = probe.time(static_cast<int>(i));
                break;
            }
        }
    } else {
        t_end = pulse.center + 10.0 / gamma_min;
    }

    TimeGrid grid;
    grid.t_start = t_start;
    grid.t_end = t_end;
    grid.n_points = static_cast<int>(std::ceil((t_end - t_start) / dt)) + 1;
    return grid;
}

} // namespace cascade
