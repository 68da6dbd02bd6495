#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "cascade/liouvillian.hpp"
#include "cascade/propagator.hpp"
#include "cascade/pulse.hpp"

using namespace cascade;

namespace {

std::mt19937 rng(4242);

Mat4 random_mat4()
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = complexd(dist(rng), dist(rng));
    return m;
}

Mat4 excited_source()
{
    Mat4 rho = Mat4::Zero();
    rho(2, 2) = 1.0;
    return rho;
}

// classical fixed-step RK4, fully independent of the adaptive integrator
Vec16 rk4_reference(const Mat16& l0, const Mat16& ld, const PulseParams& p,
                    const Vec16& v0, double t0, double t1, int n_steps)
{
    const double h = (t1 - t0) / n_steps;
    auto f = [&](double t, const Vec16& v) -> Vec16 {
        return l0 * v + envelope(t, p) * (ld * v);
    };
    Vec16 y = v0;
    double t = t0;
    for (int i = 0; i < n_steps; ++i) {
        const Vec16 k1 = f(t, y);
        const Vec16 k2 = f(t + h / 2, Vec16(y + (h / 2) * k1));
        const Vec16 k3 = f(t + h / 2, Vec16(y + (h / 2) * k2));
        const Vec16 k4 = f(t + h, Vec16(y + h * k3));
        y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t = t0 + (i + 1) * h;
    }
    return y;
}

} // namespace

TEST_CASE("grid validation")
{
    CHECK_THROWS(validate(TimeGrid{0.0, 1.0, 1}));
    CHECK_THROWS(validate(TimeGrid{1.0, 0.0, 10}));
    TimeGrid g{-1.0, 3.0, 5};
    CHECK(g.dt() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.times().size() == 5);
    CHECK(g.times()[3] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("evolve rejects a malformed initial state")
{
    SystemParams sp;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams pulse{M_PI, 0.0, 0.5};
    TimeGrid grid{-2.0, 2.0, 11};

    Mat4 unnormalized = Mat4::Identity();
    CHECK_THROWS(evolve(unnormalized, parts, pulse, grid));

    Mat4 skew = ground_state();
    skew(0, 1) = complexd(0.2, 0.0);
    CHECK_THROWS(evolve(skew, parts, pulse, grid));
}

TEST_CASE("adaptive integrator matches a step-halved RK4 oracle")
{
    SystemParams sp;
    sp.chi2 = 0.8;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams pulse{2.0 * M_PI, 0.0, 0.4};
    const Vec16 v0 = vectorize(ground_state());

    const Vec16 coarse = rk4_reference(parts.l_static, parts.l_drive, pulse,
                                       v0, -2.0, 2.0, 20000);
    const Vec16 fine = rk4_reference(parts.l_static, parts.l_drive, pulse,
                                     v0, -2.0, 2.0, 40000);
    // oracle has converged to well below the comparison tolerance
    REQUIRE((coarse - fine).cwiseAbs().maxCoeff() < 1e-11);

    IntegratorOptions opts = options_for_pulse(pulse, 1e-10, 0.025);
    const double samples[] = {2.0};
    const auto res = integrate_sampled(parts.l_static, parts.l_drive,
                                       [&](double t) { return envelope(t, pulse); },
                                       v0, -2.0, samples, opts);
    CHECK((res[0] - fine).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("dense output: mid-interval samples agree with the oracle")
{
    SystemParams sp;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams pulse{M_PI, 0.0, 0.5};
    const Vec16 v0 = vectorize(ground_state());

    IntegratorOptions opts = options_for_pulse(pulse, 1e-10, 0.025);
    const double samples[] = {-0.737, 0.211, 1.113};
    const auto res = integrate_sampled(parts.l_static, parts.l_drive,
                                       [&](double t) { return envelope(t, pulse); },
                                       v0, -2.0, samples, opts);
    for (int i = 0; i < 3; ++i) {
        const Vec16 ref = rk4_reference(parts.l_static, parts.l_drive, pulse,
                                        v0, -2.0, samples[i], 30000);
        // interpolation between accepted steps dominates: ~h^4 of max_step
        CHECK((res[i] - ref).cwiseAbs().maxCoeff() < 5e-7);
    }
}

TEST_CASE("free decay of the excited source")
{
    SystemParams sp;
    const LiouvillianParts parts = build_source_only(sp);
    PulseParams off{0.0, 0.0, 1.0};
    TimeGrid grid{0.0, 25.0, 501};
    IntegratorOptions opts;
    opts.tol = 1e-11;
    const Trajectory traj = evolve(excited_source(), parts, off, grid, opts);

    const auto pop = population_series(traj, sigma_source());
    for (int i = 0; i < grid.n_points; ++i)
        CHECK(std::abs(pop[i] - std::exp(-grid.time(i))) < 1e-8);

    // total emitted intensity integrates to gamma_sigma * 1 photon
    // (trapezoid quadrature on dt = 0.05 limits the accuracy)
    CHECK(integrate_intensity(traj, sigma_source())
          == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("area theorem in the short-pulse limit")
{
    SystemParams sp;
    const LiouvillianParts parts = build_source_only(sp);
    PulseParams pulse{M_PI, 0.0, 1e-3};
    IntegratorOptions opts = options_for_pulse(pulse, 1e-10, 0.025);
    TimeGrid grid{-0.01, 0.01, 41};
    const Trajectory traj = evolve(ground_state(), parts, pulse, grid, opts);
    const auto pop = population_series(traj, sigma_source());
    const double peak = *std::max_element(pop.begin(), pop.end());
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("2 pi pulse of finite length leaves a small residual population")
{
    SystemParams sp;
    const LiouvillianParts parts = build_source_only(sp);
    PulseParams pulse{2.0 * M_PI, 0.0, 0.1};
    IntegratorOptions opts = options_for_pulse(pulse, 1e-10, 0.025);
    TimeGrid grid{-0.5, 0.5, 101};
    const Trajectory traj = evolve(ground_state(), parts, pulse, grid, opts);
    const double end_pop = population_series(traj, sigma_source()).back();
    CHECK(end_pop > 1e-5);   // decay during the pulse spoils the exact return
    CHECK(end_pop < 0.05);
}

TEST_CASE("propagate_operator is the identity at zero delay and linear")
{
    SystemParams sp;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams pulse{M_PI, 0.0, 0.5};

    const Mat4 x = random_mat4();
    const Mat4 same = propagate_operator(x, parts, pulse, 1.3, 1.3);
    CHECK((same - x).cwiseAbs().maxCoeff() == 0.0);

    const Mat4 y = random_mat4();
    const complexd alpha(0.7, -0.4);
    const Mat4 fx = propagate_operator(x, parts, pulse, 0.0, 2.0);
    const Mat4 fy = propagate_operator(y, parts, pulse, 0.0, 2.0);
    const Mat4 fxy = propagate_operator(Mat4(alpha * x + y), parts, pulse, 0.0, 2.0);
    CHECK((fxy - (alpha * fx + fy)).cwiseAbs().maxCoeff() < 1e-9);

    // trace is conserved for any operator, not only densities
    CHECK(std::abs(fx.trace() - x.trace()) < 1e-9);
}

TEST_CASE("trajectory stays positive semidefinite to solver accuracy")
{
    SystemParams sp;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams pulse{M_PI, 0.0, 0.5};
    IntegratorOptions opts = options_for_pulse(pulse, 1e-10, 0.025);
    TimeGrid grid{-2.0, 10.0, 121};
    const Trajectory traj = evolve(ground_state(), parts, pulse, grid, opts);
    for (const Mat4& rho : traj.states) {
        Eigen::SelfAdjointEigenSolver<Mat4> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-6);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
    }
}

TEST_CASE("tolerance convergence and determinism")
{
    SystemParams sp;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams pulse{3.0 * M_PI, 0.0, 0.3};
    TimeGrid grid{-1.5, 6.0, 76};

    IntegratorOptions loose = options_for_pulse(pulse, 1e-8, 0.025);
    IntegratorOptions tight = options_for_pulse(pulse, 1e-11, 0.025);
    const Trajectory a = evolve(ground_state(), parts, pulse, grid, loose);
    const Trajectory b = evolve(ground_state(), parts, pulse, grid, tight);
    CHECK((a.states.back() - b.states.back()).cwiseAbs().maxCoeff() < 1e-6);

    const Trajectory c = evolve(ground_state(), parts, pulse, grid, tight);
    for (int i = 0; i < grid.n_points; ++i)
        CHECK((b.states[i] - c.states[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jump-operator intensity scales with 1 - chi1")
{
    SystemParams sp;
    sp.chi1 = 0.25;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams off{0.0, 0.0, 1.0};
    TimeGrid grid{0.0, 25.0, 501};
    const Trajectory traj = evolve(excited_source(), parts, off, grid);
    CHECK(integrate_intensity(traj, parts.jump_source)
          == doctest::Approx(1.0 - sp.chi1).epsilon(1e-3));
}

TEST_CASE("integrate_intensity rejects a truncated trajectory")
{
    SystemParams sp;
    const LiouvillianParts parts = build_source_only(sp);
    PulseParams off{0.0, 0.0, 1.0};
    TimeGrid grid{0.0, 3.0, 61}; // e^{-3} of the emission still pending
    const Trajectory traj = evolve(excited_source(), parts, off, grid);
    CHECK_THROWS(integrate_intensity(traj, sigma_source()));
}

TEST_CASE("default grid covers the pulse and the emission tail")
{
    SystemParams sp;
    PulseParams pulse{M_PI, 0.0, 0.5};
    const LiouvillianParts parts = build_cascaded(sp);
    const TimeGrid grid = default_grid(parts, sp, pulse);

    CHECK(grid.t_start == doctest::Approx(-5.0 * pulse.stddev()).epsilon(1e-12));
    CHECK(grid.t_end > 5.0);

    IntegratorOptions opts = options_for_pulse(pulse, 1e-10, 0.025);
    const Trajectory traj = evolve(ground_state(), parts, pulse, grid, opts);
    // intensity integration must accept the grid as long enough; decay during
    // the finite pulse allows re-excitation, so slightly more than one photon
    const double i_sigma = integrate_intensity(traj, sigma_source());
    CHECK(i_sigma > 0.95);
    CHECK(i_sigma < 1.2);
    CHECK(integrate_intensity(traj, xi_target()) > 0.1);
}
