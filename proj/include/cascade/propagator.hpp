#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cascade/algebra.hpp"
#include "cascade/liouvillian.hpp"
#include "cascade/pulse.hpp"

namespace cascade {

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    int n_points = 2;

    double dt() const { return (t_end - t_start) / (n_points - 1); }
    double time(int i) const { return t_start + i * dt(); }
    std::vector<double> times() const;
};

void validate(const TimeGrid& g);

struct Trajectory {
    TimeGrid grid;
    std::vector<Mat4> states;
};

struct IntegratorOptions {
    double tol = 1e-10;
    double max_step = 0.025;
    // Step-size cap applied inside [fine_from, fine_to]; used to keep the
    // integrator from stepping over very short pulses.
    double fine_from = 1.0;
    double fine_to = -1.0;
    double fine_max_step = 0.025;
};

using DriveFn = std::function<double(double)>;

// Integrates v' = (l_static + drive(t) l_drive) v from t_from with an
// embedded Dormand-Prince 5(4) pair, returning the solution at each of the
// (ascending) sample times via cubic Hermite interpolation between accepted
// steps. sample_times.front() may equal t_from.
std::vector<Vec16> integrate_sampled(const Mat16& l_static, const Mat16& l_drive,
                                     const DriveFn& drive, const Vec16& v0,
                                     double t_from, std::span<const double> sample_times,
                                     const IntegratorOptions& opts);

IntegratorOptions options_for_pulse(const PulseParams& pulse, double tol, double max_step);

Mat4 ground_state();

// Density-matrix propagation sampled on `grid`. Trace and hermiticity are
// monitored (never repaired); drift beyond 1e-6 aborts with an exception.
Trajectory evolve(const Mat4& rho0, const LiouvillianParts& parts,
                  const PulseParams& pulse, const TimeGrid& grid,
                  const IntegratorOptions& opts = {});

// Time-ordered propagator applied to an arbitrary operator:
// Phi(t_to, t_from)[x0], linear in x0.
Mat4 propagate_operator(const Mat4& x0, const LiouvillianParts& parts,
                        const PulseParams& pulse, double t_from, double t_to,
                        const IntegratorOptions& opts = {});

// Re Tr[rho(t) c'c] at each grid sample.
std::vector<double> population_series(const Trajectory& traj, const Mat4& c);

// I_c = integral of <c'c>(t) over the trajectory (trapezoid). Throws when
// the final sample still carries more than tail_tol of the peak intensity.
double integrate_intensity(const Trajectory& traj, const Mat4& c,
                           double tail_tol = 1e-8);

// Grid from t0 - 5 nu up to the time where the total emission has decayed
// to 1e-8 of its peak, capped at t0 + 30 / min(gamma); spacing ~dt.
TimeGrid default_grid(const LiouvillianParts& parts, const SystemParams& sp,
                      const PulseParams& pulse, double dt = 0.03);

} // namespace cascade
