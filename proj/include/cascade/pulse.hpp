#pragma once

#include <utility>

namespace cascade {

// Gaussian drive envelope. The user-facing width is the FWHM `fwhm`; the
// internal Gaussian standard deviation is fwhm / (2 sqrt(2 ln 2)). Times
// are in units of 1/gamma_sigma, the area in radians.
struct PulseParams {
    double area = 3.14159265358979323846;
    double center = 0.0;
    double fwhm = 1.0;

    double stddev() const;
};

// Throws std::invalid_argument on area < 0 or fwhm <= 0.
void validate(const PulseParams& p);

// Omega(t) = area / sqrt(2 pi nu^2) * exp(-(t - center)^2 / (2 nu^2)).
double envelope(double t, const PulseParams& p);

// Interval outside which the envelope is below tail_tol * peak.
// Requires 0 < tail_tol <= 1; tail_tol -> 1 degenerates to {center, center}.
std::pair<double, double> support_window(const PulseParams& p, double tail_tol);

} // namespace cascade
