#pragma once

#include "cascade/algebra.hpp"

namespace cascade {

// Physical constants of the cascaded pair. gamma_sigma = 1 fixes the unit
// system: all frequencies and rates are in units of gamma_sigma, all times
// in 1/gamma_sigma. Frequencies are relative to the rotating frame of the
// laser (only differences enter the generator).
struct SystemParams {
    double omega_sigma = 0.0;
    double omega_xi = 0.0;
    double omega_laser = 0.0;
    double gamma_sigma = 1.0;
    double gamma_xi = 1.0;
    double chi1 = 1.0;
    double chi2 = 0.5;
};

void validate(const SystemParams& sp);

// The generator split as L(t) = l_static + Omega(t) * l_drive, plus the
// jump operators of its Lindblad-form rearrangement:
//   J_sigma = sqrt((1-chi1) gamma_sigma) sigma
//   J_xi    = sqrt((1-chi2) gamma_xi) xi
//   J_flux  = sqrt(chi1 gamma_sigma) sigma + sqrt(chi2 gamma_xi) xi
struct LiouvillianParts {
    Mat16 l_static;
    Mat16 l_drive;
    Mat4 jump_source;
    Mat4 jump_target;
    Mat4 jump_flux;
};

// Generator of the laser-driven source alone (target factor idle).
LiouvillianParts build_source_only(const SystemParams& sp);

// Full cascaded generator. The assembled drift is checked against its
// Lindblad-form rearrangement on construction and a mismatch beyond 1e-12
// throws std::logic_error.
LiouvillianParts build_cascaded(const SystemParams& sp);

// Drift assembled the other way round: coherent part (including the
// effective cascade Hamiltonian) plus the dissipators of the three jump
// operators. Equal to build_cascaded(sp).l_static up to roundoff.
Mat16 lindblad_form_static(const SystemParams& sp);

// Tr[rho J_flux' J_flux].
double effective_photon_flux_population(const Mat4& rho, const LiouvillianParts& parts);

enum class Emitter { source, target, flux };

// Operator whose number expectation is the emission intensity of the
// channel: bare sigma, bare xi, or the photon-flux jump operator.
Mat4 emitter_operator(Emitter e, const LiouvillianParts& parts);

const char* emitter_name(Emitter e);

} // namespace cascade
