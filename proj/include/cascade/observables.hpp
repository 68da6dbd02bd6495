#pragma once

#include <span>
#include <vector>

#include "cascade/correlations.hpp"

namespace cascade {

struct Curve {
    std::vector<double> x;
    std::vector<double> y;
};

struct RabiPoint {
    double area;
    double i_source;
    double i_target;
    double i_flux;
};

struct RabiOptions {
    double tol = 1e-9;
    double grid_dt = 0.02;
};

// Integrated intensity of all three channels as a function of the pulse
// area, one propagation per area. Areas are computed in parallel; results
// are ordered by grid index.
std::vector<RabiPoint> rabi_curves(const SystemParams& sp, double fwhm,
                                   std::span<const double> areas,
                                   const RabiOptions& opts = {});

Curve rabi_curve(const SystemParams& sp, double fwhm, std::span<const double> areas,
                 Emitter e, const RabiOptions& opts = {});

// (M_pi - m_2pi) / (M_pi + m_2pi), where M_pi is the interior local maximum
// nearest area pi and m_2pi the interior local minimum nearest 2 pi, both
// refined by a parabola through three points. Returns 0 when the curve has
// no interior extrema.
double visibility(const Curve& curve);

struct ExtinctionFit {
    double beta;
    double log_intercept;
    double residual; // rms of the log-linear fit residuals
    int n_used;
};

// Least-squares slope of ln V against W; points with V <= 1e-4 are dropped.
ExtinctionFit extinction_fit(std::span<const double> lengths,
                             std::span<const double> visibilities);

struct Spectrum {
    std::vector<double> omega; // relative to the laser frequency
    std::vector<double> values;
    double intensity = 0.0; // I_c carried along for the sum-rule check
    bool clipped = false;   // negative ringing below the floor was zeroed
    bool tail_warning = false;
};

struct SpectrumOptions {
    double omega_min = -30.0;
    double omega_max = 30.0;
    int n_omega = 6001;
};

// S(omega) = 2 Re int_0^inf s(tau) e^{-i omega tau} dtau with
// s(tau) = int G1(t, t + tau) dt, both by trapezoid quadrature on the map
// grid. Small negative ringing (beyond -1e-8 of the maximum) is clipped and
// flagged.
Spectrum spectrum(const CorrelationMap& g1, const SpectrumOptions& opts = {});

// int S(omega) d omega / (2 pi).
double spectrum_integral(const Spectrum& s);

// Full width at half maximum by linear interpolation at the outermost
// half-maximum crossings (a split line spans all of its lobes).
// Throws when fewer than 20 grid points sit above half maximum.
double linewidth_fwhm(const Spectrum& s);

// Pulsed g2(0): same-pulse coincidence area over the uncorrelated
// different-pulse area, [int int G2 dt1 dt2] / [int <c'c> dt]^2.
double pulsed_g2_zero(const CorrelationMap& g2, const Trajectory& traj, const Mat4& c);

struct HomResult {
    double value;
    bool clipped;
};

// Mean wavepacket overlap [int int |G1|^2 dt1 dt2] / [int <c'c> dt]^2,
// clipped to [0, 1] with the clipping flagged.
HomResult hom_indistinguishability(const CorrelationMap& g1, const Trajectory& traj,
                                   const Mat4& c);

} // namespace cascade
