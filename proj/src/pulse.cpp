#include "cascade/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace cascade {

double PulseParams::stddev() const
{
    return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

void validate(const PulseParams& p)
{
    if (!(p.area >= 0.0))
        throw std::invalid_argument("pulse area must be >= 0");
    if (!(p.fwhm > 0.0))
        throw std::invalid_argument("pulse fwhm must be > 0");
}

double envelope(double t, const PulseParams& p)
{
    const double nu = p.stddev();
    const double x = (t - p.center) / nu;
    return p.area / std::sqrt(2.0 * M_PI * nu * nu) * std::exp(-0.5 * x * x);
}

std::pair<double, double> support_window(const PulseParams& p, double tail_tol)
{
    if (!(tail_tol > 0.0) || !(tail_tol <= 1.0))
        throw std::invalid_argument("tail_tol must be in (0, 1]");
    const double half = p.stddev() * std::sqrt(2.0 * std::log(1.0 / tail_tol));
    return {p.center - half, p.center + half};
}

} // namespace cascade
