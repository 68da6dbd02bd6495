#include "cascade/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cascade/csv.hpp"
#include "cascade/sweeps.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cascade {

namespace {

constexpr Emitter kEmitters[] = {Emitter::source, Emitter::target, Emitter::flux};

std::vector<Emitter> selected_emitters(const RunConfig& cfg)
{
    if (cfg.emitter_filter)
        return {*cfg.emitter_filter};
    return {Emitter::source, Emitter::target, Emitter::flux};
}

CsvFile open_csv(const RunConfig& cfg, const std::string& name)
{
    std::filesystem::create_directories(cfg.out_dir);
    CsvFile f(cfg.out_dir + "/" + name);
    f.comment("engine = " + std::string(kEngineVersion));
    for (const auto& [k, v] : config_echo(cfg))
        f.comment(k + " = " + v);
    return f;
}

void write_readme(const RunConfig& cfg,
                  const std::vector<std::pair<std::string, std::string>>& files)
{
    std::ofstream out(cfg.out_dir + "/README.txt", std::ios::trunc);
    out << "Output files\n============\n\n"
        << "Every CSV starts with '#' comment lines echoing the resolved\n"
        << "configuration, followed by a single header row. Times are in units\n"
        << "of 1/gamma_sigma with t = 0 at the maximum of the classical pulse;\n"
        << "frequencies are in units of gamma_sigma relative to the laser.\n\n";
    for (const auto& [name, desc] : files)
        out << name << "\n  " << desc << "\n\n";
}

TimeGrid map_time_grid(const PulseParams& pulse, double t_end, double dt)
{
    TimeGrid grid;
    grid.t_start = pulse.center - 5.0 * pulse.stddev();
    grid.t_end = pulse.center + t_end;
    grid.n_points = static_cast<int>(std::ceil((grid.t_end - grid.t_start) / dt)) + 1;
    return grid;
}

std::string fmt_g(double v)
{
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

// Rabi scans resolve extrema on a fixed dense area grid around pi and 2 pi.
std::vector<double> rabi_area_grid()
{
    std::vector<double> areas;
    for (double a = 0.4 * M_PI; a <= 2.6 * M_PI + 1e-9; a += 0.05 * M_PI)
        areas.push_back(a);
    return areas;
}

double pick(const RabiPoint& p, Emitter e)
{
    return e == Emitter::source ? p.i_source
         : e == Emitter::target ? p.i_target
                                : p.i_flux;
}

} // namespace

void cmd_rabi(const RunConfig& cfg)
{
    const std::vector<double> areas = rabi_area_grid();
    const std::vector<Emitter> emitters = selected_emitters(cfg);
    RabiOptions ropts;
    ropts.tol = cfg.grid.traj_tol;
    ropts.grid_dt = cfg.grid.traj_dt;

    CsvFile vis = open_csv(cfg, "visibility.csv");
    vis.header({"length", "emitter", "visibility"});

    std::vector<std::vector<double>> vis_by_emitter(emitters.size());
    for (double w : cfg.lengths) {
        const std::vector<RabiPoint> points = rabi_curves(cfg.system, w, areas, ropts);

        CsvFile f = open_csv(cfg, "rabi_intensity_W" + fmt_g(w) + ".csv");
        f.header({"area", "emitter", "intensity"});
        for (const RabiPoint& p : points)
            for (Emitter e : emitters)
                f.row({csv_num(p.area), emitter_name(e), csv_num(pick(p, e))});

        for (size_t k = 0; k < emitters.size(); ++k) {
            Curve curve;
            for (const RabiPoint& p : points) {
                curve.x.push_back(p.area);
                curve.y.push_back(pick(p, emitters[k]));
            }
            const double v = visibility(curve);
            vis_by_emitter[k].push_back(v);
            vis.row({csv_num(w), emitter_name(emitters[k]), csv_num(v)});
        }
    }

    CsvFile ext = open_csv(cfg, "extinction.csv");
    ext.header({"emitter", "beta", "log_intercept", "residual", "n_points"});
    for (size_t k = 0; k < emitters.size(); ++k) {
        try {
            const ExtinctionFit fit = extinction_fit(cfg.lengths, vis_by_emitter[k]);
            ext.row({emitter_name(emitters[k]), csv_num(fit.beta),
                     csv_num(fit.log_intercept), csv_num(fit.residual),
                     std::to_string(fit.n_used)});
        } catch (const std::exception&) {
            ext.row({emitter_name(emitters[k]), "", "", "", "0"});
        }
    }

    write_readme(cfg, {
        {"rabi_intensity_W<length>.csv",
         "area, emitter, intensity: integrated emission intensity vs pulse area"},
        {"visibility.csv",
         "length, emitter, visibility: Rabi visibility (M_pi - m_2pi)/(M_pi + m_2pi)"},
        {"extinction.csv",
         "emitter, beta, log_intercept, residual, n_points: fit of ln V = c - beta W"},
    });
}

void cmd_spectrum(const RunConfig& cfg)
{
    const LiouvillianParts parts = build_cascaded(cfg.system);
    const std::vector<Emitter> emitters = selected_emitters(cfg);
    SpectrumOptions sopts;
    sopts.omega_min = cfg.omega_min;
    sopts.omega_max = cfg.omega_max;
    sopts.n_omega = cfg.n_omega;
    MapOptions mopts;
    mopts.tol = cfg.grid.tol;

    CsvFile spec_file = open_csv(cfg, "spectrum.csv");
    spec_file.header({"omega", "emitter", "area", "intensity"});
    CsvFile lw = open_csv(cfg, "linewidths.csv");
    lw.header({"emitter", "area", "fwhm", "sum_rule", "intensity"});

    for (double area : cfg.spectrum_areas) {
        PulseParams pulse{area, cfg.pulse.center, cfg.pulse.fwhm};
        const TimeGrid grid = map_time_grid(pulse, cfg.grid.spectrum_t_end,
                                            cfg.grid.map_dt);
        for (Emitter e : emitters) {
            const CorrelationMap map = g1_map(parts, pulse, grid, e, mopts);
            const Spectrum s = spectrum(map, sopts);
            for (size_t i = 0; i < s.omega.size(); ++i)
                spec_file.row({csv_num(s.omega[i]), emitter_name(e), csv_num(area),
                               csv_num(s.values[i])});
            double fwhm = std::numeric_limits<double>::quiet_NaN();
            try {
                fwhm = linewidth_fwhm(s);
            } catch (const std::exception&) {
            }
            lw.row({emitter_name(e), csv_num(area), csv_num(fwhm),
                    csv_num(spectrum_integral(s) / s.intensity), csv_num(s.intensity)});
        }
    }

    write_readme(cfg, {
        {"spectrum.csv",
         "omega, emitter, area, intensity: time-integrated emission spectrum"},
        {"linewidths.csv",
         "emitter, area, fwhm, sum_rule, intensity: FWHM of the dominant line and "
         "the ratio of the spectral integral to the integrated intensity"},
    });
}

void cmd_occupation(const RunConfig& cfg)
{
    const LiouvillianParts parts = build_cascaded(cfg.system);
    const TimeGrid grid = default_grid(parts, cfg.system, cfg.pulse, cfg.grid.traj_dt);
    IntegratorOptions iopts;
    iopts.tol = cfg.grid.traj_tol;
    const Trajectory traj = evolve(ground_state(), parts, cfg.pulse, grid, iopts);

    const auto ns = population_series(traj, emitter_operator(Emitter::source, parts));
    const auto nt = population_series(traj, emitter_operator(Emitter::target, parts));
    const auto nf = population_series(traj, emitter_operator(Emitter::flux, parts));

    CsvFile f = open_csv(cfg, "occupation.csv");
    f.header({"t", "n_source", "n_target", "n_flux"});
    for (int i = 0; i < grid.n_points; ++i)
        f.row({csv_num(grid.time(i) - cfg.pulse.center), csv_num(ns[i]), csv_num(nt[i]),
               csv_num(nf[i])});

    write_readme(cfg, {
        {"occupation.csv",
         "t, n_source, n_target, n_flux: time-dependent occupations <s's>, <x'x> "
         "and <J'J> of the photon flux; t = 0 at the pulse maximum"},
    });
}

namespace {

void area_scan_command(const RunConfig& cfg, CorrKind kind, const std::string& file,
                       const std::string& column)
{
    const LiouvillianParts parts = build_cascaded(cfg.system);
    const std::vector<Emitter> emitters = selected_emitters(cfg);
    const std::vector<double> areas = area_grid(cfg);
    const double fwhm = cfg.pulse_fwhm_set ? cfg.pulse.fwhm : 0.25;
    MapOptions mopts;
    mopts.tol = cfg.grid.tol;

    CsvFile f = open_csv(cfg, file);
    f.header({"area", "emitter", column});

    for (double area : areas) {
        PulseParams pulse{area, cfg.pulse.center, fwhm};
        const TimeGrid grid = map_time_grid(pulse, cfg.grid.map_t_end, cfg.grid.map_dt);
        IntegratorOptions iopts;
        iopts.tol = cfg.grid.tol;
        const Trajectory traj = evolve(ground_state(), parts, pulse, grid, iopts);
        for (Emitter e : emitters) {
            const Mat4 c = emitter_operator(e, parts);
            double value;
            if (kind == CorrKind::g2) {
                const CorrelationMap map = g2_map(parts, pulse, grid, e, mopts);
                value = pulsed_g2_zero(map, traj, c);
            } else {
                const CorrelationMap map = g1_map(parts, pulse, grid, e, mopts);
                value = hom_indistinguishability(map, traj, c).value;
            }
            f.row({csv_num(area), emitter_name(e), csv_num(value)});
        }
    }
}

} // namespace

void cmd_g2(const RunConfig& cfg)
{
    area_scan_command(cfg, CorrKind::g2, "g2.csv", "g2_zero");
    write_readme(cfg, {
        {"g2.csv",
         "area, emitter, g2_zero: pulsed g2(0), same-pulse coincidence area over "
         "the uncorrelated different-pulse area"},
    });
}

void cmd_hom(const RunConfig& cfg)
{
    area_scan_command(cfg, CorrKind::g1, "hom.csv", "indistinguishability");
    write_readme(cfg, {
        {"hom.csv",
         "area, emitter, indistinguishability: mean wavepacket overlap (HOM dip "
         "visibility)"},
    });
}

void cmd_g2map(const RunConfig& cfg)
{
    const LiouvillianParts parts = build_cascaded(cfg.system);
    const TimeGrid grid = map_time_grid(cfg.pulse, cfg.grid.map_t_end, cfg.grid.map_dt);
    MapOptions mopts;
    mopts.tol = cfg.grid.tol;

    for (Emitter e : selected_emitters(cfg)) {
        const CorrelationMap map = g2_map(parts, cfg.pulse, grid, e, mopts);
        CsvFile f = open_csv(cfg, std::string("g2map_") + emitter_name(e) + ".csv");
        f.header({"t1", "t2", "value"});
        for (int i = 0; i < grid.n_points; ++i)
            for (int j = 0; j < grid.n_points; ++j)
                f.row({csv_num(grid.time(i) - cfg.pulse.center),
                       csv_num(grid.time(j) - cfg.pulse.center),
                       csv_num(std::real(map.values(i, j)))});
    }

    const SameTimeG2 trace = same_time_g2_trace(parts, cfg.pulse, grid, mopts);
    const NormalizedG2 norm = normalized_g2_tt(parts, cfg.pulse, grid, mopts);
    CsvFile diag = open_csv(cfg, "g2_diag.csv");
    diag.header({"t", "g2_tt", "normalized"});
    for (int i = 0; i < grid.n_points; ++i)
        diag.row({csv_num(grid.time(i) - cfg.pulse.center), csv_num(trace.values[i]),
                  csv_num(norm.values[i])});

    write_readme(cfg, {
        {"g2map_<emitter>.csv",
         "t1, t2, value: two-time correlation G2(t1, t2); t = 0 at the pulse maximum"},
        {"g2_diag.csv",
         "t, g2_tt, normalized: same-time flux correlation G2(t, t) and its "
         "normalized version (empty where the intensity is below floor)"},
    });
}

void cmd_sweep(const RunConfig& cfg)
{
    SweepSpec spec;
    spec.base = cfg.system;
    spec.areas = area_grid(cfg);
    spec.lengths = cfg.lengths;
    spec.chi2_values = cfg.chi2_values;
    for (const std::string& o : cfg.sweep_outputs)
        spec.outputs.insert(parse_sweep_output(o));
    spec.tol = cfg.grid.tol;
    spec.traj_dt = cfg.grid.traj_dt;
    spec.map_dt = cfg.grid.map_dt;
    spec.map_t_end = cfg.grid.map_t_end;

    std::filesystem::create_directories(cfg.out_dir);
    const SweepResult result = run_sweep(spec, cfg.jobs, cfg.out_dir);

    CsvFile f = open_csv(cfg, "sweep.csv");
    f.header({"area", "length", "chi2", "emitter", "observable", "value", "handle",
              "error"});
    for (const SweepRecord& r : result.records)
        f.row({csv_num(r.area), csv_num(r.length), csv_num(r.chi2),
               emitter_name(r.emitter), sweep_output_name(r.observable),
               csv_num(r.value), r.handle, r.error});

    write_readme(cfg, {
        {"sweep.csv",
         "area, length, chi2, emitter, observable, value, handle, error: one row "
         "per requested (grid point, emitter, observable); heavy artifacts are in "
         "the files named by `handle`"},
    });
}

int run_cli(int argc, char** argv)
{
    CLI::App app{"Pulsed excitation of a two-level system cascaded into a second "
                 "two-level system: intensities, spectra, occupations and photon "
                 "correlations"};
    app.require_subcommand(1);

    struct Flags {
        std::string config, out, emitter;
        int jobs = -1;
        double tol = -1.0, length = -1.0, area = -1.0;
    } flags;

    std::vector<std::pair<CLI::App*, void (*)(const RunConfig&)>> commands;
    auto add = [&](const std::string& name, const std::string& desc,
                   void (*fn)(const RunConfig&)) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", flags.config, "configuration file");
        sub->add_option("--out", flags.out, "output directory");
        sub->add_option("--jobs", flags.jobs, "worker count (0 = all cores)");
        sub->add_option("--tol", flags.tol, "integrator tolerance for maps");
        sub->add_option("--emitter", flags.emitter, "source | target | flux");
        sub->add_option("--length", flags.length, "pulse FWHM in 1/gamma_sigma");
        sub->add_option("--area", flags.area, "pulse area in radians");
        commands.emplace_back(sub, fn);
    };
    add("rabi", "intensity vs pulse area, visibility and extinction fits", cmd_rabi);
    add("spectrum", "time-integrated emission spectra and linewidths", cmd_spectrum);
    add("occupation", "time-dependent occupations of the three channels",
        cmd_occupation);
    add("g2", "pulsed g2(0) vs pulse area", cmd_g2);
    add("hom", "HOM indistinguishability vs pulse area", cmd_hom);
    add("g2map", "two-time correlation maps and the same-time flux trace", cmd_g2map);
    add("sweep", "grid over (area, length, chi2) with requested outputs", cmd_sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg;
        if (!flags.config.empty())
            cfg = parse_config_file(flags.config);
        if (!flags.out.empty())
            cfg.out_dir = flags.out;
        if (flags.jobs >= 0)
            cfg.jobs = flags.jobs;
        if (flags.tol > 0.0)
            cfg.grid.tol = flags.tol;
        if (!flags.emitter.empty())
            cfg.emitter_filter = parse_emitter(flags.emitter);
        if (flags.length > 0.0) {
            cfg.pulse.fwhm = flags.length;
            cfg.pulse_fwhm_set = true;
        }
        if (flags.area >= 0.0)
            cfg.pulse.area = flags.area;
        validate(cfg);

#ifdef _OPENMP
        if (cfg.jobs > 0)
            omp_set_num_threads(cfg.jobs);
#endif
        for (const auto& [sub, fn] : commands) {
            if (sub->parsed()) {
                fn(cfg);
                return 0;
            }
        }
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cascade
