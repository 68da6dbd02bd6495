#include <doctest.h>

#include <random>

#include "cascade/liouvillian.hpp"
#include "cascade/propagator.hpp"

using namespace cascade;

namespace {

std::mt19937 rng(777);

Mat4 random_hermitian()
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = complexd(dist(rng), dist(rng));
    return 0.5 * (m + Mat4(m.adjoint()));
}

Mat4 random_density()
{
    Mat4 h = random_hermitian();
    Mat4 rho = h * h.adjoint();
    rho /= rho.trace();
    return rho;
}

Mat4 apply(const Mat16& l, const Mat4& x)
{
    return devectorize(l * vectorize(x));
}

// trace over the target factor; source index varies slowest
Mat2 partial_trace_target(const Mat4& rho)
{
    Mat2 out = Mat2::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                out(i, j) += rho(2 * i + k, 2 * j + k);
    return out;
}

Mat4 excited_source()
{
    Mat4 rho = Mat4::Zero();
    rho(2, 2) = 1.0; // |e_s g_t>
    return rho;
}

} // namespace

TEST_CASE("parameter validation")
{
    SystemParams sp;
    sp.chi2 = 1.5;
    CHECK_THROWS(build_cascaded(sp));
    sp.chi2 = -0.1;
    CHECK_THROWS(build_cascaded(sp));
    sp = SystemParams{};
    sp.gamma_xi = 0.0;
    CHECK_THROWS(build_cascaded(sp));
}

TEST_CASE("L(t) preserves trace and hermiticity")
{
    SystemParams sp;
    sp.omega_sigma = 0.3;
    sp.omega_xi = -0.2;
    sp.chi2 = 0.7;
    const LiouvillianParts parts = build_cascaded(sp);
    for (double omega : {0.0, 0.5, 3.0, 20.0}) {
        const Mat16 l = parts.l_static + omega * parts.l_drive;
        for (int k = 0; k < 5; ++k) {
            const Mat4 rho = random_hermitian();
            const Mat4 lrho = apply(l, rho);
            CHECK(std::abs(lrho.trace()) < 1e-12);
            CHECK((lrho - Mat4(lrho.adjoint())).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("Lindblad-form decomposition over 20 random parameter draws")
{
    std::uniform_real_distribution<double> chi(0.0, 1.0);
    std::uniform_real_distribution<double> rate(0.2, 3.0);
    for (int k = 0; k < 20; ++k) {
        SystemParams sp;
        sp.chi1 = chi(rng);
        sp.chi2 = chi(rng);
        sp.gamma_xi = rate(rng);
        const LiouvillianParts parts = build_cascaded(sp);
        const double dev = (parts.l_static - lindblad_form_static(sp)).cwiseAbs().maxCoeff();
        CHECK(dev <= 1e-12);
    }
}

TEST_CASE("chi = 0 decouples the emitters")
{
    for (const bool zero_chi1 : {true, false}) {
        SystemParams sp;
        if (zero_chi1)
            sp.chi1 = 0.0;
        else
            sp.chi2 = 0.0;
        const LiouvillianParts parts = build_cascaded(sp);
        const Mat16 independent =
            sp.gamma_sigma * dissipator(sigma_source())
            + sp.gamma_xi * dissipator(xi_target());
        CHECK((parts.l_static - independent).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("no back-action: reduced source dynamics unaffected by the coupling")
{
    SystemParams sp;
    PulseParams pulse{M_PI, 0.0, 0.5};
    TimeGrid grid{-2.0, 8.0, 201};

    const Trajectory with = evolve(ground_state(), build_cascaded(sp), pulse, grid);

    SystemParams decoupled = sp;
    decoupled.chi2 = 0.0;
    const Trajectory without =
        evolve(ground_state(), build_cascaded(decoupled), pulse, grid);

    for (int i = 0; i < grid.n_points; ++i) {
        const Mat2 a = partial_trace_target(with.states[i]);
        const Mat2 b = partial_trace_target(without.states[i]);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("source-only generator: spontaneous decay and ground steady state")
{
    SystemParams sp;
    const LiouvillianParts parts = build_source_only(sp);
    PulseParams off{0.0, 0.0, 1.0};
    TimeGrid grid{0.0, 8.0, 161};
    const Trajectory traj = evolve(excited_source(), parts, off, grid);

    const Mat4 n = sigma_source().adjoint() * sigma_source();
    for (int i = 0; i < grid.n_points; ++i) {
        const double expect = std::exp(-sp.gamma_sigma * grid.time(i));
        CHECK(std::real((traj.states[i] * n).trace())
              == doctest::Approx(expect).epsilon(1e-7));
    }
    // t = 8 lifetimes: essentially the ground state
    CHECK((traj.states.back() - ground_state()).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("cw limit reproduces the resonance-fluorescence steady state")
{
    // constant Omega = gamma_sigma: steady <s's> = 1/3
    SystemParams sp;
    const LiouvillianParts parts = build_source_only(sp);
    IntegratorOptions opts;
    opts.max_step = 0.05;
    const double samples[] = {40.0};
    const std::vector<Vec16> res =
        integrate_sampled(parts.l_static, parts.l_drive, [](double) { return 1.0; },
                          vectorize(ground_state()), 0.0, samples, opts);
    const Mat4 rho = devectorize(res[0]);
    const Mat4 n = sigma_source().adjoint() * sigma_source();
    CHECK(std::real((rho * n).trace()) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("photon-flux population")
{
    SystemParams sp; // chi1 = 1, chi2 = 1/2
    const LiouvillianParts parts = build_cascaded(sp);

    CHECK(effective_photon_flux_population(ground_state(), parts) == 0.0);
    CHECK(effective_photon_flux_population(excited_source(), parts)
          == doctest::Approx(sp.gamma_sigma).epsilon(1e-14));

    // cross term 2 sqrt(chi1 chi2 g_s g_x) Re<s'x> against direct evaluation
    const Mat4 s = sigma_source(), x = xi_target();
    for (int k = 0; k < 10; ++k) {
        const Mat4 rho = random_density();
        const double direct = effective_photon_flux_population(rho, parts);
        const double expanded =
            sp.chi1 * sp.gamma_sigma * std::real((rho * (s.adjoint() * s)).trace())
            + sp.chi2 * sp.gamma_xi * std::real((rho * (x.adjoint() * x)).trace())
            + 2.0 * std::sqrt(sp.chi1 * sp.chi2 * sp.gamma_sigma * sp.gamma_xi)
                  * std::real((rho * (s.adjoint() * x)).trace());
        CHECK(direct == doctest::Approx(expanded).epsilon(1e-12));
    }
}

TEST_CASE("intensity bookkeeping of the source jump operator")
{
    SystemParams sp;
    sp.chi1 = 0.3;
    const LiouvillianParts parts = build_cascaded(sp);
    const Mat4 s = sigma_source();
    for (int k = 0; k < 5; ++k) {
        const Mat4 rho = random_density();
        const double jj = std::real(
            (rho * (parts.jump_source.adjoint() * parts.jump_source)).trace());
        const double n = std::real((rho * (s.adjoint() * s)).trace());
        // <J_s'J_s> + chi1 g_s <s's> = g_s <s's>
        CHECK(jj + sp.chi1 * sp.gamma_sigma * n
              == doctest::Approx(sp.gamma_sigma * n).epsilon(1e-12));
    }
}
