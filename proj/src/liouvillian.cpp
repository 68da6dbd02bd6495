#include "cascade/liouvillian.hpp"

#include <cmath>
#include <stdexcept>

namespace cascade {

void validate(const SystemParams& sp)
{
    if (!(sp.gamma_sigma > 0.0) || !(sp.gamma_xi > 0.0))
        throw std::invalid_argument("decay rates must be > 0");
    if (sp.chi1 < 0.0 || sp.chi1 > 1.0 || sp.chi2 < 0.0 || sp.chi2 > 1.0)
        throw std::invalid_argument("chi1 and chi2 must lie in [0, 1]");
}

namespace {

Mat4 drive_hamiltonian()
{
    const Mat4 s = sigma_source();
    return 0.5 * (s + Mat4(s.adjoint()));
}

Mat4 jump_source_op(const SystemParams& sp)
{
    return std::sqrt((1.0 - sp.chi1) * sp.gamma_sigma) * sigma_source();
}

Mat4 jump_target_op(const SystemParams& sp)
{
    return std::sqrt((1.0 - sp.chi2) * sp.gamma_xi) * xi_target();
}

Mat4 jump_flux_op(const SystemParams& sp)
{
    return std::sqrt(sp.chi1 * sp.gamma_sigma) * sigma_source()
         + std::sqrt(sp.chi2 * sp.gamma_xi) * xi_target();
}

} // namespace

LiouvillianParts build_source_only(const SystemParams& sp)
{
    validate(sp);
    const Mat4 s = sigma_source();
    const Mat4 h0 = (sp.omega_sigma - sp.omega_laser) * Mat4(s.adjoint() * s);

    LiouvillianParts parts;
    parts.l_static = hamiltonian_superop(h0) + sp.gamma_sigma * dissipator(s);
    parts.l_drive = hamiltonian_superop(drive_hamiltonian());
    parts.jump_source = jump_source_op(sp);
    parts.jump_target = Mat4::Zero();
    parts.jump_flux = Mat4::Zero();
    return parts;
}

LiouvillianParts build_cascaded(const SystemParams& sp)
{
    validate(sp);
    const Mat4 s = sigma_source();
    const Mat4 x = xi_target();
    const Mat4 sd = s.adjoint();
    const Mat4 xd = x.adjoint();

    const Mat4 h0 = (sp.omega_sigma - sp.omega_laser) * Mat4(sd * s)
                  + (sp.omega_xi - sp.omega_laser) * Mat4(xd * x);

    const double g = std::sqrt(sp.chi1 * sp.chi2 * sp.gamma_sigma * sp.gamma_xi);

    // -g { [xi', sigma rho] + [rho sigma', xi] }
    //   = -g ( xi' sigma rho - sigma rho xi' + rho sigma' xi - xi rho sigma' )
    const Mat16 cascade_term =
        -g * (left_mult(Mat4(xd * s)) - sandwich(s, xd)
              + right_mult(Mat4(sd * x)) - sandwich(x, sd));

    LiouvillianParts parts;
    parts.l_static = hamiltonian_superop(h0)
                   + sp.gamma_sigma * dissipator(s)
                   + sp.gamma_xi * dissipator(x)
                   + cascade_term;
    parts.l_drive = hamiltonian_superop(drive_hamiltonian());
    parts.jump_source = jump_source_op(sp);
    parts.jump_target = jump_target_op(sp);
    parts.jump_flux = jump_flux_op(sp);

    const double mismatch =
        (parts.l_static - lindblad_form_static(sp)).cwiseAbs().maxCoeff();
    if (mismatch > 1e-12)
        throw std::logic_error("cascaded generator does not match its Lindblad form");
    return parts;
}

Mat16 lindblad_form_static(const SystemParams& sp)
{
    validate(sp);
    const Mat4 s = sigma_source();
    const Mat4 x = xi_target();

    const Mat4 h0 = (sp.omega_sigma - sp.omega_laser) * Mat4(s.adjoint() * s)
                  + (sp.omega_xi - sp.omega_laser) * Mat4(x.adjoint() * x);

    // Effective Hamiltonian of the unidirectional coupling,
    // (i g / 2)(sigma' xi - xi' sigma).
    const double g = std::sqrt(sp.chi1 * sp.chi2 * sp.gamma_sigma * sp.gamma_xi);
    const complexd i(0.0, 1.0);
    const Mat4 h_casc = 0.5 * i * g * Mat4(s.adjoint() * x - x.adjoint() * s);

    return hamiltonian_superop(h0 + h_casc)
         + dissipator(jump_source_op(sp))
         + dissipator(jump_target_op(sp))
         + dissipator(jump_flux_op(sp));
}

double effective_photon_flux_population(const Mat4& rho, const LiouvillianParts& parts)
{
    const Mat4& j = parts.jump_flux;
    return std::real((rho * (j.adjoint() * j)).trace());
}

Mat4 emitter_operator(Emitter e, const LiouvillianParts& parts)
{
    switch (e) {
    case Emitter::source: return sigma_source();
    case Emitter::target: return xi_target();
    case Emitter::flux: return parts.jump_flux;
    }
    throw std::invalid_argument("unknown emitter");
}

const char* emitter_name(Emitter e)
{
    switch (e) {
    case Emitter::source: return "source";
    case Emitter::target: return "target";
    case Emitter::flux: return "flux";
    }
    return "?";
}

} // namespace cascade
